#pragma once

// Velocity models and backward characteristic tracing with propagation of the
// first and second spatial derivatives of the foot map.

#include <array>
#include <optional>
#include <string_view>

#include "jetadv/types.hpp"

namespace jetadv {

/// Velocity and its spatial derivatives at one point.
/// grad[i][j] = dv_i/dx_j, hess[i][j][l] = d^2 v_i / dx_j dx_l.
template <int Dim>
struct VelocityJet {
  Point<Dim> v{};
  Mat<Dim> grad{};
  Tensor3<Dim> hess{};
};

template <int Dim>
class VelocityModel {
 public:
  virtual ~VelocityModel() = default;

  /// Highest spatial derivative order the model supplies (0, 1 or 2).
  virtual int max_order() const = 0;

  /// Fills v, and grad / hess when order >= 1 / 2.
  virtual VelocityJet<Dim> jet(const Point<Dim>& x, double t, int order) const = 0;

  Point<Dim> eval(const Point<Dim>& x, double t) const { return jet(x, t, 0).v; }
  Mat<Dim> grad(const Point<Dim>& x, double t) const;
  Tensor3<Dim> hess(const Point<Dim>& x, double t) const;
};

template <int Dim>
class ConstantVelocity final : public VelocityModel<Dim> {
 public:
  explicit ConstantVelocity(const Point<Dim>& v) : v_(v) {}
  int max_order() const override { return 2; }
  VelocityJet<Dim> jet(const Point<Dim>&, double, int) const override {
    VelocityJet<Dim> j;
    j.v = v_;
    return j;
  }

 private:
  Point<Dim> v_;
};

/// v = (-y, x): rotation about the origin with unit angular speed.
class RigidRotation final : public VelocityModel<2> {
 public:
  int max_order() const override { return 2; }
  VelocityJet<2> jet(const Point<2>& x, double t, int order) const override;
};

/// Periodic "vortex in a box" flow on [0,1]^2, reversing at t = T/2:
///   v = cos(pi t/T) (sin^2(pi x) sin(2 pi y), -sin(2 pi x) sin^2(pi y)).
class SwirlVelocity final : public VelocityModel<2> {
 public:
  explicit SwirlVelocity(double period);
  double period() const { return period_; }
  int max_order() const override { return 2; }
  VelocityJet<2> jet(const Point<2>& x, double t, int order) const override;

 private:
  double period_;
};

Point<2> swirl_velocity(double x, double y, double t, double period);
Mat<2> swirl_gradient(double x, double y, double t, double period);
Tensor3<2> swirl_hessian(double x, double y, double t, double period);

enum class Stepper { euler, ssprk3, rk5_cash_karp };

std::string_view stepper_name(Stepper s);
/// Parses "euler", "ssprk3", "rk5_cash_karp"; throws std::invalid_argument.
Stepper parse_stepper(std::string_view name);

/// Stepper suited to jet order k: euler (0), ssprk3 (1), rk5_cash_karp (2).
Stepper default_stepper(int k);

/// Explicit Runge-Kutta coefficients in Butcher form.
struct ButcherTableau {
  static constexpr int kMaxStages = 6;
  int stages = 0;
  std::array<double, kMaxStages> c{};
  std::array<double, kMaxStages> b{};
  std::array<std::array<double, kMaxStages>, kMaxStages> a{};
};

/// Butcher form of the stepper (ssprk3: its Shu-Osher form rewritten).
const ButcherTableau& butcher_tableau(Stepper s);

template <int Dim>
struct FootResult {
  Point<Dim> foot{};
  std::optional<Mat<Dim>> grad_foot;      // [i][j] = d foot_i / d x_j
  std::optional<Tensor3<Dim>> hess_foot;  // [i][j][l] = d^2 foot_i / dx_j dx_l
};

/// One backward step from t_new to t_new - dt of the chosen method, with the
/// foot-map derivatives propagated through every stage when deriv_order >= 1.
/// The ssprk3 stepper runs in Shu-Osher form.
template <int Dim>
FootResult<Dim> trace_foot(const Point<Dim>& x, double t_new, double dt,
                           const VelocityModel<Dim>& vel, Stepper stepper,
                           int deriv_order);

/// As trace_foot, for an arbitrary explicit tableau.
template <int Dim>
FootResult<Dim> trace_foot(const Point<Dim>& x, double t_new, double dt,
                           const VelocityModel<Dim>& vel,
                           const ButcherTableau& tableau, int deriv_order);

/// Forward integration of dx/dt = v from t0 to t1 with n_steps fixed steps.
template <int Dim>
Point<Dim> integrate_forward(const Point<Dim>& x0, double t0, double t1,
                             int n_steps, const VelocityModel<Dim>& vel,
                             Stepper stepper);

}  // namespace jetadv
