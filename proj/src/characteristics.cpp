#include "jetadv/characteristics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace jetadv {

namespace {

constexpr double kPi = std::numbers::pi;

// Position of one stage point together with its derivatives in x.
template <int Dim>
struct StageJet {
  Point<Dim> y{};
  Mat<Dim> grad{};
  Tensor3<Dim> hess{};
};

// k = v(Y): value and, by the chain rule, derivatives with respect to x.
template <int Dim>
StageJet<Dim> compose(const VelocityJet<Dim>& vj, const StageJet<Dim>& s,
                      int order) {
  StageJet<Dim> k;
  k.y = vj.v;
  if (order < 1) return k;
  for (int m = 0; m < Dim; ++m)
    for (int j = 0; j < Dim; ++j) {
      double acc = 0.0;
      for (int a = 0; a < Dim; ++a) acc += vj.grad[m][a] * s.grad[a][j];
      k.grad[m][j] = acc;
    }
  if (order < 2) return k;
  for (int m = 0; m < Dim; ++m)
    for (int j = 0; j < Dim; ++j)
      for (int l = j; l < Dim; ++l) {
        double acc = 0.0;
        for (int a = 0; a < Dim; ++a) {
          acc += vj.grad[m][a] * s.hess[a][j][l];
          for (int b = 0; b < Dim; ++b)
            acc += vj.hess[m][a][b] * s.grad[a][j] * s.grad[b][l];
        }
        k.hess[m][j][l] = acc;
        k.hess[m][l][j] = acc;
      }
  return k;
}

// out += w * in, over the derivative orders in use.
template <int Dim>
void axpy(double w, const StageJet<Dim>& in, StageJet<Dim>& out, int order) {
  for (int i = 0; i < Dim; ++i) {
    out.y[i] += w * in.y[i];
    if (order < 1) continue;
    for (int j = 0; j < Dim; ++j) {
      out.grad[i][j] += w * in.grad[i][j];
      if (order < 2) continue;
      for (int l = 0; l < Dim; ++l) out.hess[i][j][l] += w * in.hess[i][j][l];
    }
  }
}

template <int Dim>
StageJet<Dim> identity_stage(const Point<Dim>& x) {
  StageJet<Dim> s;
  s.y = x;
  s.grad = identity_matrix<Dim>();
  return s;
}

template <int Dim>
void check_order(const VelocityModel<Dim>& vel, int deriv_order, double dt) {
  if (deriv_order < 0 || deriv_order > 2)
    throw std::invalid_argument("deriv_order must be 0, 1 or 2");
  if (deriv_order > vel.max_order())
    throw std::invalid_argument("velocity model does not supply derivatives of order " +
                                std::to_string(deriv_order));
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
}

template <int Dim>
FootResult<Dim> to_result(const StageJet<Dim>& s, int order) {
  FootResult<Dim> r;
  r.foot = s.y;
  if (order >= 1) r.grad_foot = s.grad;
  if (order >= 2) r.hess_foot = s.hess;
  return r;
}

// Shu-Osher SSP-RK3, backward in time:
//   x1  = x - dt v(x, t+dt)
//   x2  = 3/4 x + 1/4 x1 - 1/4 dt v(x1, t)
//   x_f = 1/3 x + 2/3 x2 - 2/3 dt v(x2, t + dt/2)
// Stages are carried as displacements d_i = x_i - x, so that v = 0 returns x
// exactly.
template <int Dim>
FootResult<Dim> trace_ssprk3(const Point<Dim>& x, double t_new, double dt,
                             const VelocityModel<Dim>& vel, int order) {
  const auto x0 = identity_stage<Dim>(x);
  const double t = t_new - dt;
  auto at = [&](const StageJet<Dim>& d) {
    StageJet<Dim> s = x0;
    axpy(1.0, d, s, order);
    return s;
  };

  StageJet<Dim> d1{};
  axpy(-dt, compose(vel.jet(x0.y, t_new, order), x0, order), d1, order);
  const auto x1 = at(d1);

  StageJet<Dim> d2{};
  axpy(0.25, d1, d2, order);
  axpy(-0.25 * dt, compose(vel.jet(x1.y, t, order), x1, order), d2, order);
  const auto x2 = at(d2);

  StageJet<Dim> d3{};
  axpy(2.0 / 3.0, d2, d3, order);
  axpy(-2.0 / 3.0 * dt, compose(vel.jet(x2.y, t + 0.5 * dt, order), x2, order),
       d3, order);
  return to_result(at(d3), order);
}

ButcherTableau make_euler() {
  ButcherTableau t;
  t.stages = 1;
  t.b[0] = 1.0;
  return t;
}

ButcherTableau make_ssprk3() {
  ButcherTableau t;
  t.stages = 3;
  t.c = {0.0, 1.0, 0.5};
  t.a[1][0] = 1.0;
  t.a[2][0] = 0.25;
  t.a[2][1] = 0.25;
  t.b = {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0};
  return t;
}

ButcherTableau make_cash_karp() {
  ButcherTableau t;
  t.stages = 6;
  t.c = {0.0, 1.0 / 5.0, 3.0 / 10.0, 3.0 / 5.0, 1.0, 7.0 / 8.0};
  t.a[1][0] = 1.0 / 5.0;
  t.a[2][0] = 3.0 / 40.0;
  t.a[2][1] = 9.0 / 40.0;
  t.a[3][0] = 3.0 / 10.0;
  t.a[3][1] = -9.0 / 10.0;
  t.a[3][2] = 6.0 / 5.0;
  t.a[4][0] = -11.0 / 54.0;
  t.a[4][1] = 5.0 / 2.0;
  t.a[4][2] = -70.0 / 27.0;
  t.a[4][3] = 35.0 / 27.0;
  t.a[5][0] = 1631.0 / 55296.0;
  t.a[5][1] = 175.0 / 512.0;
  t.a[5][2] = 575.0 / 13824.0;
  t.a[5][3] = 44275.0 / 110592.0;
  t.a[5][4] = 253.0 / 4096.0;
  t.b = {37.0 / 378.0, 0.0, 250.0 / 621.0, 125.0 / 594.0, 0.0, 512.0 / 1771.0};
  return t;
}

}  // namespace

template <int Dim>
Mat<Dim> VelocityModel<Dim>::grad(const Point<Dim>& x, double t) const {
  if (max_order() < 1) throw std::invalid_argument("velocity model has no gradient");
  return jet(x, t, 1).grad;
}

template <int Dim>
Tensor3<Dim> VelocityModel<Dim>::hess(const Point<Dim>& x, double t) const {
  if (max_order() < 2) throw std::invalid_argument("velocity model has no Hessian");
  return jet(x, t, 2).hess;
}

VelocityJet<2> RigidRotation::jet(const Point<2>& x, double, int order) const {
  VelocityJet<2> j;
  j.v = {-x[1], x[0]};
  if (order >= 1) j.grad = {{{0.0, -1.0}, {1.0, 0.0}}};
  return j;
}

SwirlVelocity::SwirlVelocity(double period) : period_(period) {
  if (!(period > 0.0)) throw std::invalid_argument("swirl period T must be positive");
}

VelocityJet<2> SwirlVelocity::jet(const Point<2>& p, double t, int order) const {
  const double c = std::cos(kPi * t / period_);
  const double sx = std::sin(kPi * p[0]), cx = std::cos(kPi * p[0]);
  const double sy = std::sin(kPi * p[1]), cy = std::cos(kPi * p[1]);
  const double s2x = 2.0 * sx * cx, c2x = cx * cx - sx * sx;
  const double s2y = 2.0 * sy * cy, c2y = cy * cy - sy * sy;
  const double sx2 = sx * sx, sy2 = sy * sy;

  VelocityJet<2> j;
  j.v = {c * sx2 * s2y, -c * s2x * sy2};
  if (order < 1) return j;
  const double pc = kPi * c;
  j.grad[0][0] = pc * s2x * s2y;
  j.grad[0][1] = 2.0 * pc * sx2 * c2y;
  j.grad[1][0] = -2.0 * pc * c2x * sy2;
  j.grad[1][1] = -pc * s2x * s2y;
  if (order < 2) return j;
  const double ppc = kPi * kPi * c;
  j.hess[0][0][0] = 2.0 * ppc * c2x * s2y;
  j.hess[0][0][1] = j.hess[0][1][0] = 2.0 * ppc * s2x * c2y;
  j.hess[0][1][1] = -4.0 * ppc * sx2 * s2y;
  j.hess[1][0][0] = 4.0 * ppc * s2x * sy2;
  j.hess[1][0][1] = j.hess[1][1][0] = -2.0 * ppc * c2x * s2y;
  j.hess[1][1][1] = -2.0 * ppc * s2x * c2y;
  return j;
}

Point<2> swirl_velocity(double x, double y, double t, double period) {
  return SwirlVelocity(period).jet({x, y}, t, 0).v;
}

Mat<2> swirl_gradient(double x, double y, double t, double period) {
  return SwirlVelocity(period).jet({x, y}, t, 1).grad;
}

Tensor3<2> swirl_hessian(double x, double y, double t, double period) {
  return SwirlVelocity(period).jet({x, y}, t, 2).hess;
}

std::string_view stepper_name(Stepper s) {
  switch (s) {
    case Stepper::euler:
      return "euler";
    case Stepper::ssprk3:
      return "ssprk3";
    case Stepper::rk5_cash_karp:
      return "rk5_cash_karp";
  }
  return "unknown";
}

Stepper parse_stepper(std::string_view name) {
  if (name == "euler") return Stepper::euler;
  if (name == "ssprk3") return Stepper::ssprk3;
  if (name == "rk5_cash_karp") return Stepper::rk5_cash_karp;
  throw std::invalid_argument("unknown stepper: " + std::string(name));
}

Stepper default_stepper(int k) {
  switch (k) {
    case 0:
      return Stepper::euler;
    case 1:
      return Stepper::ssprk3;
    case 2:
      return Stepper::rk5_cash_karp;
  }
  throw std::invalid_argument("jet order out of range");
}

const ButcherTableau& butcher_tableau(Stepper s) {
  static const ButcherTableau euler = make_euler();
  static const ButcherTableau ssp = make_ssprk3();
  static const ButcherTableau ck = make_cash_karp();
  switch (s) {
    case Stepper::euler:
      return euler;
    case Stepper::ssprk3:
      return ssp;
    case Stepper::rk5_cash_karp:
      return ck;
  }
  throw std::invalid_argument("unknown stepper");
}

template <int Dim>
FootResult<Dim> trace_foot(const Point<Dim>& x, double t_new, double dt,
                           const VelocityModel<Dim>& vel,
                           const ButcherTableau& tab, int order) {
  check_order(vel, order, dt);
  std::array<StageJet<Dim>, ButcherTableau::kMaxStages> k{};
  const auto x0 = identity_stage<Dim>(x);
  for (int i = 0; i < tab.stages; ++i) {
    StageJet<Dim> y = x0;
    for (int j = 0; j < i; ++j)
      if (tab.a[i][j] != 0.0) axpy(-dt * tab.a[i][j], k[j], y, order);
    k[i] = compose(vel.jet(y.y, t_new - tab.c[i] * dt, order), y, order);
  }
  StageJet<Dim> xf = x0;
  for (int i = 0; i < tab.stages; ++i)
    if (tab.b[i] != 0.0) axpy(-dt * tab.b[i], k[i], xf, order);
  return to_result(xf, order);
}

template <int Dim>
FootResult<Dim> trace_foot(const Point<Dim>& x, double t_new, double dt,
                           const VelocityModel<Dim>& vel, Stepper stepper,
                           int order) {
  if (stepper == Stepper::ssprk3) {
    check_order(vel, order, dt);
    return trace_ssprk3(x, t_new, dt, vel, order);
  }
  return trace_foot(x, t_new, dt, vel, butcher_tableau(stepper), order);
}

template <int Dim>
Point<Dim> integrate_forward(const Point<Dim>& x0, double t0, double t1,
                             int n_steps, const VelocityModel<Dim>& vel,
                             Stepper stepper) {
  if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  const auto& tab = butcher_tableau(stepper);
  const double dt = (t1 - t0) / n_steps;
  Point<Dim> x = x0;
  std::array<Point<Dim>, ButcherTableau::kMaxStages> k{};
  for (int s = 0; s < n_steps; ++s) {
    const double t = t0 + s * dt;
    for (int i = 0; i < tab.stages; ++i) {
      Point<Dim> y = x;
      for (int j = 0; j < i; ++j)
        for (int d = 0; d < Dim; ++d) y[d] += dt * tab.a[i][j] * k[j][d];
      k[i] = vel.eval(y, t + tab.c[i] * dt);
    }
    for (int i = 0; i < tab.stages; ++i)
      for (int d = 0; d < Dim; ++d) x[d] += dt * tab.b[i] * k[i][d];
  }
  return x;
}

template class VelocityModel<1>;
template class VelocityModel<2>;

#define JETADV_INSTANTIATE(D)                                                   \
  template FootResult<D> trace_foot(const Point<D>&, double, double,            \
                                    const VelocityModel<D>&, Stepper, int);     \
  template FootResult<D> trace_foot(const Point<D>&, double, double,            \
                                    const VelocityModel<D>&,                    \
                                    const ButcherTableau&, int);                \
  template Point<D> integrate_forward(const Point<D>&, double, double, int,     \
                                      const VelocityModel<D>&, Stepper);

JETADV_INSTANTIATE(1)
JETADV_INSTANTIATE(2)

#undef JETADV_INSTANTIATE

}  // namespace jetadv
