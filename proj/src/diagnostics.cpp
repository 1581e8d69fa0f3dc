#include "jetadv/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "jetadv/jetupdate.hpp"

namespace jetadv {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double binomial(int n, int r) { return factorial(n) / (factorial(r) * factorial(n - r)); }

void check_quadrature(const QuadratureSpec& quad) {
  if (quad.points_per_axis < 2) throw std::invalid_argument("quadrature needs >= 2 points");
}

// Sums w * f(x) over the tensor Gauss points of every grid cell; f receives
// the cell index, the local coordinates and the physical point.
template <int Dim, typename F>
double integrate_cells(const GridSpec<Dim>& grid, const GaussRule& rule, F&& f) {
  const int m = static_cast<int>(rule.nodes.size());
  double volume = 1.0;
  for (int i = 0; i < Dim; ++i) volume *= grid.spacing(i);
  const int points = ipow(m, Dim);
  double total = 0.0;
  for (int n = 0; n < grid.node_count(); ++n) {
    const auto cell = grid.multi_index(n);
    const auto origin = grid.cell_origin(cell);
    double cell_sum = 0.0;
    for (int p = 0; p < points; ++p) {
      int rest = p;
      double w = 1.0;
      Point<Dim> xi{}, x{};
      for (int i = Dim - 1; i >= 0; --i) {
        const int g = rest % m;
        rest /= m;
        xi[i] = rule.nodes[g];
        w *= rule.weights[g];
        x[i] = origin[i] + xi[i] * grid.spacing(i);
      }
      cell_sum += w * f(cell, xi, x);
    }
    total += cell_sum * volume;
  }
  return total;
}

template <int Dim>
MultiIndex<Dim> beta_index(int k) {
  MultiIndex<Dim> beta{};
  beta.fill(k + 1);
  return beta;
}

}  // namespace

GaussRule gauss_legendre(int m) {
  if (m < 1) throw std::invalid_argument("Gauss-Legendre order must be >= 1");
  // P_m(z) and P_m'(z) by the three-term recurrence.
  auto legendre = [m](double z, double& p, double& dp) {
    double p0 = 1.0, p1 = z;
    for (int n = 2; n <= m; ++n) {
      const double p2 = ((2.0 * n - 1.0) * z * p1 - (n - 1.0) * p0) / n;
      p0 = p1;
      p1 = p2;
    }
    p = p1;
    dp = m * (z * p1 - p0) / (z * z - 1.0);
  };
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(m));
  rule.weights.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double p = 0.0, dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      legendre(z, p, dp);
      const double dz = p / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    legendre(z, p, dp);
    // Roots come in descending z, so 1 - z gives ascending nodes on [0,1].
    rule.nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 - z);
    rule.weights[static_cast<std::size_t>(i)] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
  return rule;
}

template <int Dim>
double stability_functional(const JetField<Dim>& field, int k,
                            const QuadratureSpec& quad) {
  check_quadrature(quad);
  if (k < 0) throw std::invalid_argument("functional order must be >= 0");
  const auto rule = gauss_legendre(quad.points_per_axis);
  const auto beta = beta_index<Dim>(k);
  return integrate_cells(field.grid(), rule,
                         [&](const MultiIndex<Dim>& cell, const Point<Dim>&,
                             const Point<Dim>& x) {
                           const double d = eval_in_cell(field, cell, x, beta);
                           return d * d;
                         });
}

template <int Dim>
double stability_functional(const JetFunction<Dim>& phi, const GridSpec<Dim>& grid,
                            int k, const QuadratureSpec& quad) {
  check_quadrature(quad);
  if (k < 0) throw std::invalid_argument("functional order must be >= 0");
  const auto rule = gauss_legendre(quad.points_per_axis);
  const auto beta = beta_index<Dim>(k);
  return integrate_cells(grid, rule,
                         [&](const MultiIndex<Dim>&, const Point<Dim>&,
                             const Point<Dim>& x) {
                           const double d = phi(x, beta);
                           return d * d;
                         });
}

double r_k(double x, int k, int order) {
  if (k < 0 || k > 2) throw std::invalid_argument("k must be 0, 1 or 2");
  if (order < 0) throw std::invalid_argument("negative derivative order");
  // x^{k+1} (1-x)^{k+1} = sum_j C(k+1, j) (-1)^j x^{k+1+j}
  const int n = 2 * k + 1;
  double sum = 0.0;
  for (int j = 0; j <= k + 1; ++j) {
    const int power = k + 1 + j;
    if (power < order) continue;
    double falling = 1.0;
    for (int m = 0; m < order; ++m) falling *= power - m;
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    sum += sign * binomial(k + 1, j) * falling * std::pow(x, power - order);
  }
  return sum / factorial(n + 1);
}

double mu_k(double x, int k) { return r_k(x, k, k + 1); }

double e_k(double z, int k) { return mu_k(z - std::floor(z), k); }

double e_k_square_integral(int k) {
  const int n = 2 * k + 1;
  const double c = factorial(k + 1) / factorial(n + 1);
  return c * c / (n + 2);
}

double average_identity_residual(const JetFunction<1>& phi, const GridSpec<1>& grid,
                                 int k, const QuadratureSpec& quad) {
  check_quadrature(quad);
  const auto field = sample_from_function(grid, k, phi);
  const auto rule = gauss_legendre(quad.points_per_axis);
  const double h = grid.spacing(0);
  const double lhs = integrate_cells(
      grid, rule, [&](const MultiIndex<1>& cell, const Point<1>&, const Point<1>& x) {
        return eval_in_cell(field, cell, x, MultiIndex<1>{0});
      });
  const double mean = integrate_cells(
      grid, rule, [&](const MultiIndex<1>&, const Point<1>&, const Point<1>& x) {
        return phi(x, {0});
      });
  const double correction = integrate_cells(
      grid, rule, [&](const MultiIndex<1>&, const Point<1>& xi, const Point<1>& x) {
        return mu_k(xi[0], k) * phi(x, {k + 1});
      });
  return std::abs(lhs - (mean - std::pow(h, k + 1) * correction));
}

std::vector<double> constant_advection_functional(const JetFunction<1>& phi0, int n,
                                                  int k, double v, double dt,
                                                  int steps,
                                                  const QuadratureSpec& quad) {
  const auto grid = GridSpec<1>::unit(n);
  const ConstantVelocity<1> vel({v});
  const auto cfg = SchemeConfig::make(k, Strategy::analytic);
  auto field = sample_from_function(grid, k, phi0);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(stability_functional(field, k, quad));
  for (int s = 0; s < steps; ++s) {
    field = step(field, dt, vel, cfg);
    out.push_back(stability_functional(field, k, quad));
  }
  return out;
}

std::vector<Polyline> extract_contour(const JetField<2>& field, double level,
                                      int refine) {
  if (refine < 1) throw std::invalid_argument("refine must be >= 1");
  const auto& grid = field.grid();
  const int mx = grid.nodes[0] * refine, my = grid.nodes[1] * refine;
  const double dx = grid.spacing(0) / refine, dy = grid.spacing(1) / refine;
  const int stride = my + 1;
  auto point = [&](int i, int j) {
    return Point<2>{grid.lower[0] + i * dx, grid.lower[1] + j * dy};
  };

  std::vector<double> values(static_cast<std::size_t>((mx + 1) * stride));
  for (int i = 0; i <= mx; ++i)
    for (int j = 0; j <= my; ++j)
      values[static_cast<std::size_t>(i * stride + j)] =
          eval_global(field, point(i, j), {0, 0}) - level;
  auto value = [&](int i, int j) { return values[static_cast<std::size_t>(i * stride + j)]; };

  // Edge ids: horizontal (i,j)-(i+1,j) -> 2 (i stride + j), vertical
  // (i,j)-(i,j+1) -> 2 (i stride + j) + 1.
  std::unordered_map<long long, Point<2>> crossing;
  auto edge = [&](int i0, int j0, int i1, int j1) {
    const long long id = 2LL * (i0 * stride + j0) + (i1 == i0 ? 1 : 0);
    if (!crossing.count(id)) {
      const double a = value(i0, j0), b = value(i1, j1);
      const double t = a / (a - b);
      const auto p0 = point(i0, j0), p1 = point(i1, j1);
      crossing[id] = {p0[0] + t * (p1[0] - p0[0]), p0[1] + t * (p1[1] - p0[1])};
    }
    return id;
  };

  std::vector<std::array<long long, 2>> segments;
  for (int i = 0; i < mx; ++i) {
    for (int j = 0; j < my; ++j) {
      const bool b0 = value(i, j) >= 0.0, b1 = value(i + 1, j) >= 0.0;
      const bool b2 = value(i + 1, j + 1) >= 0.0, b3 = value(i, j + 1) >= 0.0;
      std::array<long long, 4> e{};
      std::array<bool, 4> cut{b0 != b1, b1 != b2, b3 != b2, b0 != b3};
      if (cut[0]) e[0] = edge(i, j, i + 1, j);          // bottom
      if (cut[1]) e[1] = edge(i + 1, j, i + 1, j + 1);  // right
      if (cut[2]) e[2] = edge(i, j + 1, i + 1, j + 1);  // top
      if (cut[3]) e[3] = edge(i, j, i, j + 1);          // left
      const int n_cut = cut[0] + cut[1] + cut[2] + cut[3];
      if (n_cut == 2) {
        std::array<long long, 2> s{};
        int c = 0;
        for (int q = 0; q < 4; ++q)
          if (cut[q]) s[c++] = e[q];
        segments.push_back(s);
      } else if (n_cut == 4) {
        const Point<2> centre{grid.lower[0] + (i + 0.5) * dx, grid.lower[1] + (j + 0.5) * dy};
        const bool bc = eval_global(field, centre, {0, 0}) - level >= 0.0;
        if (bc == b0) {  // corners 0 and 2 joined through the centre
          segments.push_back({e[0], e[1]});
          segments.push_back({e[2], e[3]});
        } else {
          segments.push_back({e[3], e[0]});
          segments.push_back({e[1], e[2]});
        }
      }
    }
  }

  std::unordered_map<long long, std::vector<int>> incident;
  for (int s = 0; s < static_cast<int>(segments.size()); ++s)
    for (long long id : segments[static_cast<std::size_t>(s)])
      incident[id].push_back(s);

  std::vector<bool> used(segments.size(), false);
  std::vector<Polyline> lines;
  auto walk = [&](int s, long long start) {
    Polyline line;
    line.points.push_back(crossing.at(start));
    long long at = start;
    while (s >= 0 && !used[static_cast<std::size_t>(s)]) {
      used[static_cast<std::size_t>(s)] = true;
      const auto& seg = segments[static_cast<std::size_t>(s)];
      at = seg[0] == at ? seg[1] : seg[0];
      if (at == start) {
        line.closed = true;
        break;
      }
      line.points.push_back(crossing.at(at));
      int next = -1;
      for (int t : incident[at])
        if (!used[static_cast<std::size_t>(t)]) next = t;
      s = next;
    }
    if (line.points.size() >= 2) lines.push_back(std::move(line));
  };
  // Open chains start at edges touched by one segment, then closed loops.
  for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
    if (used[static_cast<std::size_t>(s)]) continue;
    for (long long id : segments[static_cast<std::size_t>(s)])
      if (incident[id].size() == 1 && !used[static_cast<std::size_t>(s)]) walk(s, id);
  }
  for (int s = 0; s < static_cast<int>(segments.size()); ++s)
    if (!used[static_cast<std::size_t>(s)]) walk(s, segments[static_cast<std::size_t>(s)][0]);
  return lines;
}

Polyline marker_oracle(const Polyline& initial, const VelocityModel<2>& vel,
                       double t_final, double dt_markers, double t0) {
  if (dt_markers <= 0.0) dt_markers = t_final / 1e4;
  Polyline out = initial;
  if (t_final == 0.0) return out;
  const int n = std::max(1, static_cast<int>(std::ceil(std::abs(t_final) / dt_markers - 1e-9)));
  for (auto& p : out.points)
    p = integrate_forward(p, t0, t0 + t_final, n, vel, Stepper::rk5_cash_karp);
  return out;
}

double hausdorff_distance(const Polyline& a, const Polyline& b) {
  if (a.points.empty() || b.points.empty())
    throw std::invalid_argument("Hausdorff distance needs non-empty polylines");
  auto directed = [](const Polyline& from, const Polyline& to) {
    double worst = 0.0;
    for (const auto& p : from.points) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to.points) {
        const double dx = p[0] - q[0], dy = p[1] - q[1];
        best = std::min(best, dx * dx + dy * dy);
      }
      worst = std::max(worst, best);
    }
    return std::sqrt(worst);
  };
  return std::max(directed(a, b), directed(b, a));
}

Polyline merge_polylines(const std::vector<Polyline>& lines) {
  Polyline out;
  for (const auto& l : lines) out.points.insert(out.points.end(), l.points.begin(), l.points.end());
  return out;
}

Polyline circle_polyline(const Point<2>& centre, double radius, int n) {
  if (n < 3) throw std::invalid_argument("circle needs >= 3 vertices");
  Polyline c;
  c.closed = true;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * i / n;
    c.points.push_back({centre[0] + radius * std::cos(a), centre[1] + radius * std::sin(a)});
  }
  return c;
}

void write_polylines_csv(std::ostream& os, const std::vector<Polyline>& lines) {
  os << "polyline_id,vertex_id,x,y\n";
  char buf[64];
  for (std::size_t l = 0; l < lines.size(); ++l)
    for (std::size_t v = 0; v < lines[l].points.size(); ++v) {
      const auto& p = lines[l].points[v];
      std::snprintf(buf, sizeof buf, "%.17g,%.17g", p[0], p[1]);
      os << l << ',' << v << ',' << buf << '\n';
    }
}

template double stability_functional(const JetField<1>&, int, const QuadratureSpec&);
template double stability_functional(const JetField<2>&, int, const QuadratureSpec&);
template double stability_functional(const JetFunction<1>&, const GridSpec<1>&, int,
                                     const QuadratureSpec&);
template double stability_functional(const JetFunction<2>&, const GridSpec<2>&, int,
                                     const QuadratureSpec&);

}  // namespace jetadv
