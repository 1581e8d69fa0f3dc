#include "jetadv/jetupdate.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "jetadv/parallel.hpp"

namespace jetadv {

namespace {

// Value, gradient and Hessian of the advected function at one point.
template <int Dim>
struct TotalJet {
  double phi = 0.0;
  Point<Dim> grad{};
  Mat<Dim> hess{};
};

// Derivative multi-indices of total order <= 2: 0, e_i, e_i + e_j (i <= j).
template <int Dim>
constexpr int derivative_count(int order) {
  int n = 1;
  if (order >= 1) n += Dim;
  if (order >= 2) n += Dim * (Dim + 1) / 2;
  return n;
}

template <int Dim>
constexpr std::array<MultiIndex<Dim>, derivative_count<Dim>(2)> derivative_list() {
  std::array<MultiIndex<Dim>, derivative_count<Dim>(2)> list{};
  int n = 1;
  for (int i = 0; i < Dim; ++i) list[n++][i] = 1;
  for (int i = 0; i < Dim; ++i)
    for (int j = i; j < Dim; ++j) {
      list[n][i] += 1;
      list[n][j] += 1;
      ++n;
    }
  return list;
}

// phi(x) = H(x_f(x)) differentiated through the foot map:
//   d_j phi      = sum_i J_ij DH_i
//   d_j d_l phi  = sum_i Hf_ijl DH_i + sum_im J_ij D2H_im J_ml
template <int Dim>
TotalJet<Dim> advect_total(const JetField<Dim>& field, const MultiIndex<Dim>* cell,
                           const Point<Dim>& x, double t_new, double dt,
                           const VelocityModel<Dim>& vel, Stepper stepper,
                           int order, MultiIndex<Dim>* owner_out = nullptr) {
  const auto foot = trace_foot(x, t_new, dt, vel, stepper, order);
  const MultiIndex<Dim> owner =
      cell ? *cell : locate_cell(field.grid(), foot.foot).cell;
  if (owner_out) *owner_out = owner;

  static constexpr auto kDerivs = derivative_list<Dim>();
  std::array<double, kDerivs.size()> h{};
  const std::size_t count = static_cast<std::size_t>(derivative_count<Dim>(order));
  eval_in_cell<Dim>(field, owner, foot.foot,
                    std::span<const MultiIndex<Dim>>(kDerivs.data(), count),
                    std::span<double>(h.data(), count));

  TotalJet<Dim> out;
  out.phi = h[0];
  if (order < 1) return out;
  Point<Dim> dh{};
  for (int i = 0; i < Dim; ++i) dh[i] = h[1 + i];
  const auto& jac = *foot.grad_foot;
  for (int j = 0; j < Dim; ++j) {
    double acc = 0.0;
    for (int i = 0; i < Dim; ++i) acc += jac[i][j] * dh[i];
    out.grad[j] = acc;
  }
  if (order < 2) return out;
  Mat<Dim> d2h{};
  int n = 1 + Dim;
  for (int i = 0; i < Dim; ++i)
    for (int j = i; j < Dim; ++j) {
      d2h[i][j] = d2h[j][i] = h[n];
      ++n;
    }
  const auto& hf = *foot.hess_foot;
  for (int j = 0; j < Dim; ++j)
    for (int l = j; l < Dim; ++l) {
      double acc = 0.0;
      for (int i = 0; i < Dim; ++i) {
        acc += hf[i][j][l] * dh[i];
        for (int m = 0; m < Dim; ++m) acc += jac[i][j] * d2h[i][m] * jac[m][l];
      }
      out.hess[j][l] = out.hess[l][j] = acc;
    }
  return out;
}

// The jet entry alpha (|alpha| <= 2) read off a total jet.
template <int Dim>
double total_entry(const TotalJet<Dim>& t, const MultiIndex<Dim>& alpha) {
  int first = -1, second = -1;
  for (int i = 0; i < Dim; ++i)
    for (int r = 0; r < alpha[i]; ++r) (first < 0 ? first : second) = i;
  if (first < 0) return t.phi;
  if (second < 0) return t.grad[first];
  return t.hess[first][second];
}

// Writes every entry with |alpha| <= max_total into out; others untouched.
template <int Dim>
void fill_total(const TotalJet<Dim>& t, int k, int max_total, std::span<double> out) {
  for (std::size_t j = 0; j < out.size(); ++j) {
    const auto alpha = hermite::jet_alpha<Dim>(static_cast<int>(j), k);
    if (total_order<Dim>(alpha) <= max_total) out[j] = total_entry(t, alpha);
  }
}

// (0,0)-vertex quintic cross formulas on a square cell of size h.
CrossQuintic quintic_origin(const CellVertexJets& v, double h) {
  const VertexJet& a = v[0];  // (0,0)
  const VertexJet& b = v[2];  // (1,0)
  const VertexJet& c = v[1];  // (0,1)
  const VertexJet& d = v[3];  // (1,1)
  const double h2 = h * h, h3 = h2 * h;
  CrossQuintic r;
  r.phi_xxy = (-a.phi_x + b.phi_x + c.phi_x - d.phi_x) / h2 +
              6.0 * (-a.phi_y + b.phi_y) / h2 +
              (-a.phi_xx - b.phi_xx + c.phi_xx + d.phi_xx) / (2.0 * h) +
              (-4.0 * a.phi_xy - 2.0 * b.phi_xy) / h;
  r.phi_xyy = 6.0 * (-a.phi_x + c.phi_x) / h2 +
              (-a.phi_y + b.phi_y + c.phi_y - d.phi_y) / h2 +
              (-4.0 * a.phi_xy - 2.0 * c.phi_xy) / h +
              (-a.phi_yy + b.phi_yy - c.phi_yy + d.phi_yy) / (2.0 * h);
  r.phi_xxyy = 6.0 * (a.phi_x - b.phi_x - c.phi_x + d.phi_x) / h3 +
               6.0 * (a.phi_y - b.phi_y - c.phi_y + d.phi_y) / h3 +
               (7.0 * a.phi_xy - b.phi_xy - c.phi_xy - 5.0 * d.phi_xy) / h2;
  return r;
}

// Quintic cross derivatives at vertex q: map q to the origin by reflecting
// x -> h - x and/or y -> h - y, which flips the sign of every entry with an
// odd number of derivatives along a reflected axis.
CrossQuintic quintic_at(const CellVertexJets& v, double h, const MultiIndex<2>& q) {
  const double sx = q[0] ? -1.0 : 1.0;
  const double sy = q[1] ? -1.0 : 1.0;
  CellVertexJets w{};
  for (int idx = 0; idx < 4; ++idx) {
    const auto r = hermite::vertex_q<2>(idx);
    const VertexJet& src = v[hermite::vertex_index<2>({r[0] ^ q[0], r[1] ^ q[1]})];
    w[idx] = {src.phi,         sx * src.phi_x,       sy * src.phi_y,
              src.phi_xx,      sx * sy * src.phi_xy, src.phi_yy};
  }
  CrossQuintic r = quintic_origin(w, h);
  r.phi_xxy *= sy;
  r.phi_xyy *= sx;
  return r;
}

// phi_xy at vertex q: the two edges meeting at q weigh 3/4, the opposite two
// edges -1/4.
double cubic_at(const CellVertexJets& v, double hx, double hy, const MultiIndex<2>& q) {
  auto vertical = [&](int ex) {  // edge x = ex, midpoint derivative in y of phi_x
    return (v[hermite::vertex_index<2>({ex, 1})].phi_x -
            v[hermite::vertex_index<2>({ex, 0})].phi_x) / hy;
  };
  auto horizontal = [&](int ey) {  // edge y = ey, derivative in x of phi_y
    return (v[hermite::vertex_index<2>({1, ey})].phi_y -
            v[hermite::vertex_index<2>({0, ey})].phi_y) / hx;
  };
  return 0.75 * (vertical(q[0]) + horizontal(q[1])) -
         0.25 * (vertical(1 - q[0]) + horizontal(1 - q[1]));
}

VertexJet vertex_jet(const JetField<2>& field, int flat) {
  const int k = field.k();
  VertexJet j;
  j.phi = field.at(flat, {0, 0});
  j.phi_x = field.at(flat, {1, 0});
  j.phi_y = field.at(flat, {0, 1});
  if (k >= 2) {
    j.phi_xx = field.at(flat, {2, 0});
    j.phi_xy = field.at(flat, {1, 1});
    j.phi_yy = field.at(flat, {0, 2});
  }
  return j;
}

// Fills the cross entries of every node from its owning cell, in which the
// node is vertex (0,0).
void grid_fd_pass(JetField<2>& out) {
  const auto& grid = out.grid();
  const double hx = grid.spacing(0), hy = grid.spacing(1);
  parallel_for(grid.node_count(), [&](int begin, int end) {
    for (int n = begin; n < end; ++n) {
      const auto m = grid.multi_index(n);
      CellVertexJets v{};
      for (int idx = 0; idx < 4; ++idx) {
        const auto q = hermite::vertex_q<2>(idx);
        v[idx] = vertex_jet(out, grid.flat_index(grid.wrap({m[0] + q[0], m[1] + q[1]})));
      }
      if (out.k() == 1) {
        out.at(n, {1, 1}) = cubic_at(v, hx, hy, {0, 0});
      } else {
        const CrossQuintic r = quintic_at(v, hx, {0, 0});
        out.at(n, {2, 1}) = r.phi_xxy;
        out.at(n, {1, 2}) = r.phi_xyy;
        out.at(n, {2, 2}) = r.phi_xxyy;
      }
    }
  });
}

template <int Dim>
void update_node_grid_fd_total(const JetField<Dim>& field, const Point<Dim>& x,
                               double t_new, double dt,
                               const VelocityModel<Dim>& vel,
                               const SchemeConfig& cfg, std::span<double> out) {
  const auto t = advect_total<Dim>(field, nullptr, x, t_new, dt, vel, cfg.stepper, cfg.k);
  fill_total(t, cfg.k, cfg.k, out);
}

}  // namespace

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::analytic:
      return "analytic";
    case Strategy::epsilon_fd:
      return "epsilon_fd";
    case Strategy::grid_fd:
      return "grid_fd";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "analytic") return Strategy::analytic;
  if (name == "epsilon_fd") return Strategy::epsilon_fd;
  if (name == "grid_fd") return Strategy::grid_fd;
  throw std::invalid_argument("unknown strategy: " + std::string(name));
}

SchemeConfig SchemeConfig::make(int k, Strategy strategy) {
  SchemeConfig cfg;
  cfg.k = k;
  cfg.strategy = strategy;
  cfg.stepper = default_stepper(k);
  return cfg;
}

template <int Dim>
void validate_config(const SchemeConfig& cfg, const GridSpec<Dim>& grid,
                     const VelocityModel<Dim>& vel) {
  if (cfg.k < 0 || cfg.k > hermite::kMaxOrder)
    throw std::invalid_argument("jet order k must be 0, 1 or 2");
  int needed = 0;
  switch (cfg.strategy) {
    case Strategy::analytic:
      needed = cfg.k * Dim;
      if (needed > 2)
        throw std::invalid_argument(
            "analytic strategy needs |alpha| <= 2 for every partial-jet entry");
      break;
    case Strategy::epsilon_fd:
      if (Dim != 2) throw std::invalid_argument("epsilon_fd strategy is 2-D only");
      if (!(cfg.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
      needed = cfg.k == 2 ? 2 : 0;
      break;
    case Strategy::grid_fd:
      if (Dim != 2) throw std::invalid_argument("grid_fd strategy is 2-D only");
      if (cfg.k < 1) throw std::invalid_argument("grid_fd strategy needs k >= 1");
      if (cfg.k == 2 && std::abs(grid.spacing(0) - grid.spacing(1)) >
                            1e-12 * grid.spacing(0))
        throw std::invalid_argument("quintic grid_fd needs square cells");
      needed = cfg.k;
      break;
  }
  if (needed > vel.max_order())
    throw std::invalid_argument("velocity model lacks derivatives of order " +
                                std::to_string(needed));
}

template <int Dim>
void update_node_analytic(const JetField<Dim>& field, const Point<Dim>& x_node,
                          double t_new, double dt, const VelocityModel<Dim>& vel,
                          const SchemeConfig& cfg, std::span<double> out) {
  const int order = cfg.k * Dim;
  if (order > 2)
    throw std::invalid_argument("analytic update needs |alpha| <= 2 for every entry");
  const auto t = advect_total<Dim>(field, nullptr, x_node, t_new, dt, vel, cfg.stepper, order);
  fill_total(t, cfg.k, order, out);
}

void update_node_epsilon_fd(const JetField<2>& field, const Point<2>& x,
                            double t_new, double dt, const VelocityModel<2>& vel,
                            const SchemeConfig& cfg, std::span<double> out) {
  const double eps = cfg.epsilon;
  const auto& grid = field.grid();
  if (cfg.k == 0) {
    const auto foot = trace_foot(x, t_new, dt, vel, cfg.stepper, 0);
    out[0] = eval_global(field, foot.foot, {0, 0});
    return;
  }
  if (cfg.k == 1) {
    const auto centre = trace_foot(x, t_new, dt, vel, cfg.stepper, 0);
    const auto cell = locate_cell(grid, centre.foot).cell;
    auto f = [&](double sx, double sy) {
      const auto foot = trace_foot<2>({x[0] + sx * eps, x[1] + sy * eps}, t_new, dt,
                                      vel, cfg.stepper, 0);
      return eval_in_cell(field, cell, foot.foot, MultiIndex<2>{0, 0});
    };
    const double fpp = f(1, 1), fmp = f(-1, 1), fpm = f(1, -1), fmm = f(-1, -1);
    out[hermite::jet_index<2>({0, 0}, 1)] = 0.25 * (fpp + fmp + fpm + fmm);
    out[hermite::jet_index<2>({1, 0}, 1)] = (fpp - fmp + fpm - fmm) / (4.0 * eps);
    out[hermite::jet_index<2>({0, 1}, 1)] = (fpp + fmp - fpm - fmm) / (4.0 * eps);
    out[hermite::jet_index<2>({1, 1}, 1)] = (fpp - fmp - fpm + fmm) / (4.0 * eps * eps);
    return;
  }
  MultiIndex<2> cell{};
  const auto c = advect_total<2>(field, nullptr, x, t_new, dt, vel, cfg.stepper, 2, &cell);
  const auto p = advect_total<2>(field, &cell, {x[0] + eps, x[1]}, t_new, dt, vel,
                                 cfg.stepper, 2);
  const auto m = advect_total<2>(field, &cell, {x[0] - eps, x[1]}, t_new, dt, vel,
                                 cfg.stepper, 2);
  fill_total(c, 2, 2, out);
  out[hermite::jet_index<2>({2, 1}, 2)] = (p.hess[0][1] - m.hess[0][1]) / (2.0 * eps);
  out[hermite::jet_index<2>({1, 2}, 2)] = (p.hess[1][1] - m.hess[1][1]) / (2.0 * eps);
  out[hermite::jet_index<2>({2, 2}, 2)] =
      (p.hess[1][1] - 2.0 * c.hess[1][1] + m.hess[1][1]) / (eps * eps);
}

std::array<double, 4> reconstruct_cross_cubic(const CellVertexJets& v, double hx,
                                              double hy) {
  if (!(hx > 0.0) || !(hy > 0.0)) throw std::invalid_argument("cell size must be positive");
  std::array<double, 4> out{};
  for (int idx = 0; idx < 4; ++idx) out[idx] = cubic_at(v, hx, hy, hermite::vertex_q<2>(idx));
  return out;
}

std::array<CrossQuintic, 4> reconstruct_cross_quintic(const CellVertexJets& v,
                                                      double h) {
  if (!(h > 0.0)) throw std::invalid_argument("cell size must be positive");
  std::array<CrossQuintic, 4> out{};
  for (int idx = 0; idx < 4; ++idx) out[idx] = quintic_at(v, h, hermite::vertex_q<2>(idx));
  return out;
}

template <int Dim>
JetField<Dim> step(const JetField<Dim>& field, double dt,
                   const VelocityModel<Dim>& vel, const SchemeConfig& cfg) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (cfg.k != field.k()) throw std::invalid_argument("config k does not match the field");
  validate_config(cfg, field.grid(), vel);
  const auto& grid = field.grid();
  const double t_new = field.time() + dt;
  JetField<Dim> out(grid, field.k(), t_new);
  parallel_for(grid.node_count(), [&](int begin, int end) {
    for (int n = begin; n < end; ++n) {
      const auto x = grid.node_position(grid.multi_index(n));
      auto jet = out.jet(n);
      switch (cfg.strategy) {
        case Strategy::analytic:
          update_node_analytic(field, x, t_new, dt, vel, cfg, jet);
          break;
        case Strategy::epsilon_fd:
          if constexpr (Dim == 2) update_node_epsilon_fd(field, x, t_new, dt, vel, cfg, jet);
          break;
        case Strategy::grid_fd:
          update_node_grid_fd_total(field, x, t_new, dt, vel, cfg, jet);
          break;
      }
    }
  });
  if constexpr (Dim == 2) {
    if (cfg.strategy == Strategy::grid_fd) grid_fd_pass(out);
  }
  return out;
}

int step_count(double t0, double t1, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(t1 >= t0)) throw std::invalid_argument("final time precedes start time");
  const double r = (t1 - t0) / dt;
  const double nearest = std::round(r);
  if (std::abs(r - nearest) <= 1e-9 * std::max(1.0, r)) return static_cast<int>(nearest);
  return static_cast<int>(std::ceil(r));
}

template <int Dim>
JetField<Dim> advance(JetField<Dim> field, double t_final, double dt,
                      const VelocityModel<Dim>& vel, const SchemeConfig& cfg) {
  const double t0 = field.time();
  const int n = step_count(t0, t_final, dt);
  for (int s = 0; s < n; ++s) {
    const double target = (s + 1 == n) ? t_final : t0 + (s + 1) * dt;
    field = step(field, target - field.time(), vel, cfg);
    field.set_time(target);
  }
  return field;
}

template <int Dim>
double upwind_max_dt(const GridSpec<Dim>& grid, double t,
                     const VelocityModel<Dim>& vel) {
  double vmax = 0.0;
  for (int n = 0; n < grid.node_count(); ++n) {
    const auto v = vel.eval(grid.node_position(grid.multi_index(n)), t);
    double s = 0.0;
    for (int i = 0; i < Dim; ++i) s += v[i] * v[i];
    vmax = std::max(vmax, std::sqrt(s));
  }
  if (vmax == 0.0) return std::numeric_limits<double>::infinity();
  double h = grid.spacing(0);
  for (int i = 1; i < Dim; ++i) h = std::min(h, grid.spacing(i));
  return h / (std::sqrt(static_cast<double>(Dim)) * vmax);
}

template <int Dim>
std::vector<double> upwind_step(const GridSpec<Dim>& grid,
                                std::span<const double> values, double t,
                                double dt, const VelocityModel<Dim>& vel) {
  if (values.size() != static_cast<std::size_t>(grid.node_count()))
    throw std::invalid_argument("value count does not match the grid");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (dt > upwind_max_dt(grid, t, vel) * (1.0 + 1e-12))
    throw std::invalid_argument("upwind CFL condition violated");
  std::vector<double> out(values.size());
  parallel_for(grid.node_count(), [&](int begin, int end) {
    for (int n = begin; n < end; ++n) {
      const auto m = grid.multi_index(n);
      const auto v = vel.eval(grid.node_position(m), t);
      double rate = 0.0;
      for (int i = 0; i < Dim; ++i) {
        auto nb = m;
        nb[i] += v[i] > 0.0 ? -1 : 1;
        const double diff = values[n] - values[grid.flat_index(grid.wrap(nb))];
        // v > 0: backward difference; v <= 0: forward difference.
        rate += (v[i] > 0.0 ? v[i] : -v[i]) * diff / grid.spacing(i);
      }
      out[n] = values[n] - dt * rate;
    }
  });
  return out;
}

template <int Dim>
std::vector<double> upwind_advance(const GridSpec<Dim>& grid,
                                   std::vector<double> values, double t0,
                                   double t_final, double dt,
                                   const VelocityModel<Dim>& vel) {
  const int n = step_count(t0, t_final, dt);
  double t = t0;
  for (int s = 0; s < n; ++s) {
    const double target = (s + 1 == n) ? t_final : t0 + (s + 1) * dt;
    values = upwind_step<Dim>(grid, values, t, target - t, vel);
    t = target;
  }
  return values;
}

#define JETADV_INSTANTIATE(D)                                                   \
  template void validate_config(const SchemeConfig&, const GridSpec<D>&,        \
                                const VelocityModel<D>&);                       \
  template void update_node_analytic(const JetField<D>&, const Point<D>&,       \
                                     double, double, const VelocityModel<D>&,   \
                                     const SchemeConfig&, std::span<double>);   \
  template JetField<D> step(const JetField<D>&, double, const VelocityModel<D>&, \
                            const SchemeConfig&);                               \
  template JetField<D> advance(JetField<D>, double, double,                     \
                               const VelocityModel<D>&, const SchemeConfig&);   \
  template double upwind_max_dt(const GridSpec<D>&, double,                     \
                                const VelocityModel<D>&);                       \
  template std::vector<double> upwind_step(const GridSpec<D>&,                  \
                                           std::span<const double>, double,     \
                                           double, const VelocityModel<D>&);    \
  template std::vector<double> upwind_advance(const GridSpec<D>&,               \
                                              std::vector<double>, double,      \
                                              double, double,                   \
                                              const VelocityModel<D>&);

JETADV_INSTANTIATE(1)
JETADV_INSTANTIATE(2)

#undef JETADV_INSTANTIATE

}  // namespace jetadv
