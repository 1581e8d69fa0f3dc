#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "jetadv/characteristics.hpp"
#include "test_support.hpp"

using namespace jetadv;

namespace {

constexpr double kPi = std::numbers::pi;

constexpr Stepper kSteppers[] = {Stepper::euler, Stepper::ssprk3, Stepper::rk5_cash_karp};

std::vector<Point<2>> random_points(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point<2>> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng)};
  return pts;
}

}  // namespace

TEST_CASE("swirl velocity documented values") {
  const auto v = swirl_velocity(0.25, 0.25, 0.0, 1.0);
  CHECK(v[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(v[1] == doctest::Approx(-0.5).epsilon(1e-15));
  for (double t : {0.0, 0.3, 2.7}) {
    const auto c = swirl_velocity(0.5, 0.5, t, 1.5);
    CHECK(std::abs(c[0]) < 1e-15);
    CHECK(std::abs(c[1]) < 1e-15);
  }
  for (const auto& p : random_points(20, 1)) {
    const auto h = swirl_velocity(p[0], p[1], 1.5, 3.0);
    CHECK(std::abs(h[0]) < 1e-15);
    CHECK(std::abs(h[1]) < 1e-15);
  }
}

TEST_CASE("swirl speed never exceeds one") {
  double vmax = 0.0;
  for (int i = 0; i <= 200; ++i)
    for (int j = 0; j <= 200; ++j) {
      const auto v = swirl_velocity(i / 200.0, j / 200.0, 0.0, 1.0);
      vmax = std::max(vmax, std::hypot(v[0], v[1]));
    }
  CHECK(vmax <= 1.0 + 1e-12);
  CHECK(vmax >= 0.99);
}

TEST_CASE("swirl gradient and Hessian match finite differences") {
  const double e = 1e-6;
  const double period = 1.0;
  for (const auto& p : random_points(100, 2)) {
    const double t = 0.3 * p[0];
    const auto g = swirl_gradient(p[0], p[1], t, period);
    const auto hs = swirl_hessian(p[0], p[1], t, period);
    for (int j = 0; j < 2; ++j) {
      Point<2> xp = p, xm = p;
      xp[j] += e;
      xm[j] -= e;
      const auto vp = swirl_velocity(xp[0], xp[1], t, period);
      const auto vm = swirl_velocity(xm[0], xm[1], t, period);
      const auto gp = swirl_gradient(xp[0], xp[1], t, period);
      const auto gm = swirl_gradient(xm[0], xm[1], t, period);
      for (int i = 0; i < 2; ++i) {
        CHECK(std::abs((vp[i] - vm[i]) / (2 * e) - g[i][j]) <= 1e-8);
        for (int l = 0; l < 2; ++l)
          CHECK(std::abs((gp[i][l] - gm[i][l]) / (2 * e) - hs[i][l][j]) <= 1e-7 * (1 + std::abs(hs[i][l][j])));
      }
    }
  }
  SUBCASE("documented gradient values") {
    CHECK(std::abs(swirl_gradient(0.5, 0.5, 0.0, 1.0)[0][0]) < 1e-15);
    const auto z = swirl_gradient(0.3, 0.8, 0.5, 1.0);
    for (const auto& row : z)
      for (double v : row) CHECK(std::abs(v) < 1e-15);
  }
}

TEST_CASE("velocity models expose consistent jets") {
  const SwirlVelocity swirl(2.0);
  const auto jet = swirl.jet({0.3, 0.6}, 0.4, 2);
  const auto v = swirl_velocity(0.3, 0.6, 0.4, 2.0);
  CHECK(jet.v == v);
  const auto g = swirl.grad({0.3, 0.6}, 0.4);
  CHECK(g == swirl_gradient(0.3, 0.6, 0.4, 2.0));
  CHECK(swirl.hess({0.3, 0.6}, 0.4) == swirl_hessian(0.3, 0.6, 0.4, 2.0));
  const RigidRotation rot;
  CHECK(rot.eval({1.0, 2.0}, 0.0) == Point<2>{-2.0, 1.0});
  CHECK(rot.grad({1.0, 2.0}, 0.0) == Mat<2>{{{0.0, -1.0}, {1.0, 0.0}}});
  CHECK_THROWS(SwirlVelocity(0.0));
}

TEST_CASE("stepper names round-trip") {
  for (auto s : kSteppers) CHECK(parse_stepper(stepper_name(s)) == s);
  CHECK_THROWS(parse_stepper("rk4"));
  CHECK(default_stepper(0) == Stepper::euler);
  CHECK(default_stepper(1) == Stepper::ssprk3);
  CHECK(default_stepper(2) == Stepper::rk5_cash_karp);
}

TEST_CASE("Butcher tableaux are consistent") {
  for (auto s : kSteppers) {
    const auto& t = butcher_tableau(s);
    double bsum = 0.0;
    for (int i = 0; i < t.stages; ++i) {
      bsum += t.b[i];
      double row = 0.0;
      for (int j = 0; j < i; ++j) row += t.a[i][j];
      CHECK(row == doctest::Approx(t.c[i]).epsilon(1e-14));
    }
    CHECK(bsum == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("trace_foot with constant velocity") {
  const ConstantVelocity<2> vel({1.0, 0.0});
  for (auto s : kSteppers) {
    const auto r = trace_foot<2>({0.5, 0.5}, 1.0, 0.1, vel, s, 2);
    CHECK(r.foot[0] == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(r.foot[1] == doctest::Approx(0.5).epsilon(1e-14));
    REQUIRE(r.grad_foot);
    REQUIRE(r.hess_foot);
    CHECK(*r.grad_foot == identity_matrix<2>());
    for (const auto& m : *r.hess_foot)
      for (const auto& row : m)
        for (double v : row) CHECK(v == 0.0);
  }
}

TEST_CASE("derivative outputs follow the requested order") {
  const SwirlVelocity vel(1.0);
  const auto r0 = trace_foot<2>({0.3, 0.3}, 0.5, 0.01, vel, Stepper::ssprk3, 0);
  CHECK_FALSE(r0.grad_foot);
  CHECK_FALSE(r0.hess_foot);
  const auto r1 = trace_foot<2>({0.3, 0.3}, 0.5, 0.01, vel, Stepper::ssprk3, 1);
  CHECK(r1.grad_foot);
  CHECK_FALSE(r1.hess_foot);
  CHECK(r1.foot == r0.foot);
}

TEST_CASE("rigid rotation, one ssprk3 step") {
  const RigidRotation vel;
  const double dt = 0.1;
  const auto r = trace_foot<2>({1.0, 0.0}, 0.0, dt, vel, Stepper::ssprk3, 1);
  CHECK(std::abs(r.foot[0] - std::cos(-dt)) <= 1e-4);
  CHECK(std::abs(r.foot[1] - std::sin(-dt)) <= 1e-4);
  const Mat<2> rot{{{std::cos(-dt), -std::sin(-dt)}, {std::sin(-dt), std::cos(-dt)}}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(std::abs((*r.grad_foot)[i][j] - rot[i][j]) <= 1e-4);
  // Hand-applied stage formulas of the third-order Shu-Osher scheme. For
  // this linear field every stage is a polynomial in dt A, A the generator.
  const double a = dt;
  const double c3 = 1.0 - a * a / 2.0;  // I + (-aA) + (aA)^2/2 - (aA)^3/6 on e_x
  const double s3 = -a + a * a * a / 6.0;
  CHECK(r.foot[0] == doctest::Approx(c3).epsilon(1e-14));
  CHECK(r.foot[1] == doctest::Approx(s3).epsilon(1e-14));
}

TEST_CASE("small dt limit is linear in dt") {
  const SwirlVelocity vel(1.0);
  const Point<2> x{0.3, 0.6};
  const double t = 0.2;
  const auto v = vel.eval(x, t);
  const auto g = vel.grad(x, t);
  for (auto s : kSteppers) {
    const double dt = 1e-7;
    const auto r = trace_foot<2>(x, t, dt, vel, s, 1);
    for (int i = 0; i < 2; ++i) {
      CHECK((r.foot[i] - x[i]) / dt == doctest::Approx(-v[i]).epsilon(1e-5));
      for (int j = 0; j < 2; ++j)
        CHECK(((*r.grad_foot)[i][j] - (i == j ? 1.0 : 0.0)) / dt ==
              doctest::Approx(-g[i][j]).epsilon(1e-5).scale(1.0));
    }
  }
}

TEST_CASE("stepper local error orders on the swirl field") {
  const SwirlVelocity vel(1.0);
  const Point<2> x{0.37, 0.61};
  const double t_new = 0.3;
  const int expected[] = {2, 4, 6};
  for (int si = 0; si < 3; ++si) {
    std::vector<double> dts, errs;
    for (int e = 4; e <= 8; ++e) {
      const double dt = std::ldexp(1.0, -e);
      const auto r = trace_foot<2>(x, t_new, dt, vel, kSteppers[si], 0);
      const auto ref =
          integrate_forward<2>(x, t_new, t_new - dt, 1000, vel, Stepper::rk5_cash_karp);
      const double err = std::hypot(r.foot[0] - ref[0], r.foot[1] - ref[1]);
      if (err > 1e-14) {
        dts.push_back(dt);
        errs.push_back(err);
      }
    }
    CAPTURE(si);
    REQUIRE(dts.size() >= 3);
    CHECK(std::abs(testing::log_slope(dts, errs) - expected[si]) <= 0.3);
  }
}

TEST_CASE("foot-map derivatives match finite differences") {
  const SwirlVelocity vel(1.0);
  const double e = 1e-6;
  for (auto s : kSteppers) {
    for (const auto& x : random_points(25, 4)) {
      const double t_new = 0.25, dt = 0.05;
      const auto r = trace_foot<2>(x, t_new, dt, vel, s, 2);
      for (int j = 0; j < 2; ++j) {
        Point<2> xp = x, xm = x;
        xp[j] += e;
        xm[j] -= e;
        const auto rp = trace_foot<2>(xp, t_new, dt, vel, s, 1);
        const auto rm = trace_foot<2>(xm, t_new, dt, vel, s, 1);
        for (int i = 0; i < 2; ++i) {
          CHECK(std::abs((rp.foot[i] - rm.foot[i]) / (2 * e) - (*r.grad_foot)[i][j]) <= 1e-8);
          for (int l = 0; l < 2; ++l)
            CHECK(std::abs(((*rp.grad_foot)[i][l] - (*rm.grad_foot)[i][l]) / (2 * e) -
                           (*r.hess_foot)[i][l][j]) <= 1e-8);
        }
      }
    }
  }
}

TEST_CASE("foot Hessian is symmetric") {
  const SwirlVelocity vel(1.0);
  const auto r = trace_foot<2>({0.2, 0.7}, 0.1, 0.05, vel, Stepper::rk5_cash_karp, 2);
  for (int i = 0; i < 2; ++i)
    CHECK((*r.hess_foot)[i][0][1] == doctest::Approx((*r.hess_foot)[i][1][0]).epsilon(1e-13));
}

TEST_CASE("Shu-Osher form equals the equivalent Butcher tableau") {
  const SwirlVelocity vel(1.0);
  const auto& tab = butcher_tableau(Stepper::ssprk3);
  for (const auto& x : random_points(20, 6)) {
    const auto a = trace_foot<2>(x, 0.7, 0.02, vel, Stepper::ssprk3, 2);
    const auto b = trace_foot<2>(x, 0.7, 0.02, vel, tab, 2);
    for (int i = 0; i < 2; ++i) {
      CHECK(a.foot[i] == doctest::Approx(b.foot[i]).epsilon(1e-14));
      for (int j = 0; j < 2; ++j) {
        CHECK((*a.grad_foot)[i][j] == doctest::Approx((*b.grad_foot)[i][j]).epsilon(1e-13));
        for (int l = 0; l < 2; ++l)
          CHECK((*a.hess_foot)[i][j][l] ==
                doctest::Approx((*b.hess_foot)[i][j][l]).epsilon(1e-12).scale(1.0));
      }
    }
  }
}

TEST_CASE("foot map nearly preserves area for the swirl field") {
  const SwirlVelocity vel(1.0);
  const Point<2> x{0.3, 0.4};
  const int order[] = {2, 4, 6};
  for (int si = 0; si < 3; ++si) {
    std::vector<double> dts, errs;
    for (int e = 3; e <= 6; ++e) {
      const double dt = std::ldexp(1.0, -e);
      const auto g = *trace_foot<2>(x, 0.2, dt, vel, kSteppers[si], 1).grad_foot;
      const double det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
      if (std::abs(det - 1.0) > 1e-13) {
        dts.push_back(dt);
        errs.push_back(std::abs(det - 1.0));
      }
    }
    CAPTURE(si);
    REQUIRE(dts.size() >= 2);
    CHECK(testing::log_slope(dts, errs) >= order[si] - 0.5);
  }
}

TEST_CASE("forward integration over a full period returns to the start") {
  const SwirlVelocity vel(1.0);
  for (const auto& x : random_points(10, 8)) {
    const auto y = integrate_forward<2>(x, 0.0, 1.0, 2000, vel, Stepper::rk5_cash_karp);
    CHECK(std::hypot(y[0] - x[0], y[1] - x[1]) <= 1e-10);
  }
}

TEST_CASE("1-D tracing") {
  const ConstantVelocity<1> vel({0.25});
  const auto r = trace_foot<1>({0.5}, 1.0, 0.2, vel, Stepper::rk5_cash_karp, 2);
  CHECK(r.foot[0] == doctest::Approx(0.45));
  CHECK((*r.grad_foot)[0][0] == 1.0);
}

TEST_CASE("requesting unsupported derivative orders throws") {
  struct Order0 final : VelocityModel<2> {
    int max_order() const override { return 0; }
    VelocityJet<2> jet(const Point<2>&, double, int) const override { return {}; }
  } vel;
  CHECK_THROWS(trace_foot<2>({0.1, 0.1}, 1.0, 0.1, vel, Stepper::euler, 1));
  CHECK_NOTHROW(trace_foot<2>({0.1, 0.1}, 1.0, 0.1, vel, Stepper::euler, 0));
  CHECK_THROWS(trace_foot<2>({0.1, 0.1}, 1.0, -0.1, vel, Stepper::euler, 0));
  (void)kPi;
}
