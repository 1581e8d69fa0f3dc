// Acceptance report: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Set JETADV_EXTENDED=1 to include the long instability run.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "jetadv/characteristics.hpp"
#include "jetadv/diagnostics.hpp"
#include "jetadv/functions.hpp"
#include "jetadv/harness.hpp"
#include "jetadv/hermite.hpp"
#include "jetadv/jetupdate.hpp"
#include "test_support.hpp"

using namespace jetadv;

namespace {

int g_failures = 0;

void verdict(bool pass, const std::string& name, const std::string& detail) {
  if (!pass) ++g_failures;
  std::printf("%s  %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
}

void info(const std::string& detail) {
  std::printf("INFO  %s\n", detail.c_str());
  std::fflush(stdout);
}

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

RunReport swirl(SchemeId scheme, double h, double period = 1.0, double t_final = 1.0) {
  SwirlRun run;
  run.scheme = scheme;
  run.h = h;
  run.period = period;
  run.t_final = t_final;
  return run_swirl(run).report;
}

// Published swirl errors at h = 1/150, T = t_final = 1.
void swirl_accuracy() {
  struct Row {
    SchemeId scheme;
    double reference;
    double factor;
    double cap;
  };
  const Row rows[] = {
      {SchemeId::bilinear, 1.69e-1, 2.0, 0.0},
      {SchemeId::upwind, 1.92e-1, 2.0, 0.0},
      {SchemeId::bicubic, 1.35e-4, 3.0, 0.0},
      {SchemeId::bicubic_gridfd, 2.31e-4, 3.0, 0.0},
      {SchemeId::biquintic, 8.23e-8, 5.0, 5e-7},
  };
  std::vector<std::pair<std::string, double>> cost;
  for (const auto& r : rows) {
    const auto rep = swirl(r.scheme, 1.0 / 150.0);
    const bool within =
        rep.linf_error <= r.reference * r.factor && rep.linf_error >= r.reference / r.factor;
    const bool capped = r.cap == 0.0 || rep.linf_error <= r.cap;
    std::string detail = format("h=1/150 Linf=%.3e, reference %.3e within x%g", rep.linf_error,
                                r.reference, r.factor);
    if (r.cap > 0.0) detail += format(", cap %.1e", r.cap);
    detail += format(" (%.1f s, %d steps)", rep.seconds, rep.steps);
    verdict(within && capped, "swirl accuracy " + rep.scheme, detail);
    cost.emplace_back(rep.scheme, rep.seconds / rep.steps);
  }
  std::string line = "seconds per step at h=1/150:";
  for (const auto& [name, s] : cost) line += format(" %s=%.2e", name.c_str(), s);
  info(line);
}

void convergence_slopes() {
  struct Row {
    SchemeId scheme;
    double order;
    double tol;
  };
  const Row rows[] = {
      {SchemeId::bilinear, 1.0, 0.3},
      {SchemeId::bicubic, 3.0, 0.3},
      {SchemeId::bicubic_gridfd, 3.0, 0.3},
      {SchemeId::biquintic, 5.0, 0.5},
  };
  const std::vector<double> hs{1.0 / 25, 1.0 / 50, 1.0 / 100};
  for (const auto& r : rows) {
    std::vector<double> errs;
    std::string detail = "h=1/25,1/50,1/100 Linf=";
    for (double h : hs) {
      errs.push_back(swirl(r.scheme, h).linf_error);
      detail += format("%s%.3e", errs.size() > 1 ? "," : "", errs.back());
    }
    const double slope = fitted_slope(hs, errs);
    detail += format(" slope=%.3f, expected %g +- %g", slope, r.order, r.tol);
    verdict(std::abs(slope - r.order) <= r.tol,
            "convergence " + std::string(scheme_info(r.scheme).name), detail);
  }
  std::vector<double> up, eps;
  for (double h : hs) {
    up.push_back(swirl(SchemeId::upwind, h).linf_error);
    eps.push_back(swirl(SchemeId::bicubic_epsfd, h).linf_error);
  }
  info(format("upwind slope %.3f; bicubic-epsfd slope %.3f (not asserted)",
              fitted_slope(hs, up), fitted_slope(hs, eps)));
}

void stability() {
  const auto rep = swirl(SchemeId::bicubic_gridfd, 1.0 / 50, 1.0, 20.0);
  verdict(std::isfinite(rep.linf_error) && rep.linf_error < 1.0, "stability bicubic-gridfd",
          format("h=1/50 T=1 t_final=20 Linf=%.3e, bound 1", rep.linf_error));
  const char* env = std::getenv("JETADV_EXTENDED");
  if (env == nullptr || std::string(env) != "1") {
    info("stability biquintic-gridfd 1/64 vs 1/128 skipped (set JETADV_EXTENDED=1)");
    return;
  }
  const auto coarse = swirl(SchemeId::biquintic_gridfd, 1.0 / 64, 1.0, 20.0);
  const auto fine = swirl(SchemeId::biquintic_gridfd, 1.0 / 128, 1.0, 20.0);
  verdict(!(fine.linf_error <= coarse.linf_error), "instability biquintic-gridfd",
          format("t_final=20 Linf h=1/64 %.3e, h=1/128 %.3e, expected growth",
                 coarse.linf_error, fine.linf_error));
}

template <int Dim>
double reproduction_worst(int k, int trials) {
  const int n = 2 * k + 1;
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const auto p = testing::TensorPolynomial<Dim>::random(n, 1000 + 17 * trial + k);
    Point<Dim> origin{}, edges{};
    for (int i = 0; i < Dim; ++i) {
      origin[i] = 0.3 - 0.2 * i;
      edges[i] = 0.2 + 0.05 * i;
    }
    const auto cell = testing::cell_from<Dim>(p.as_function(), origin, edges, k);
    for (int s = 0; s < 7; ++s) {
      Point<Dim> x{};
      for (int i = 0; i < Dim; ++i) x[i] = origin[i] + edges[i] * (0.1 + 0.13 * s + 0.02 * i);
      const int combos = ipow(n + 1, Dim);
      for (int c = 0; c < combos; ++c) {
        MultiIndex<Dim> d{};
        int rest = c;
        for (int i = 0; i < Dim; ++i) {
          d[i] = rest % (n + 1);
          rest /= n + 1;
        }
        const double ref = testing::expansion_magnitude<Dim>(cell, x, d);
        const double err = std::abs(hermite::cell_eval<Dim>(cell, x, d) - p(x, d));
        if (ref > 0.0) worst = std::max(worst, err / ref);
      }
    }
  }
  return worst;
}

void polynomial_reproduction() {
  double worst = 0.0;
  for (int k = 0; k <= 2; ++k)
    worst = std::max({worst, reproduction_worst<1>(k, 100), reproduction_worst<2>(k, 100)});
  verdict(worst <= 1e-12, "polynomial reproduction",
          format("100 random p-n polynomials, k=0..2, p=1,2, all partials: worst error %.2e "
                 "relative to the expansion magnitude, bound 1e-12",
                 worst));
}

void interpolation_slopes() {
  const JetFunction<2> phi = [](const Point<2>& x, const MultiIndex<2>& a) {
    return testing::sin_exp_jet(x[0], x[1], a[0], a[1]);
  };
  double worst_axis = 0.0, worst_mixed = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 2; ++k) {
    const int n = 2 * k + 1;
    for (int ax = 0; ax <= n; ++ax)
      for (int ay = 0; ay <= n; ++ay) {
        const int order = n + 1 - ax - ay;
        if (order < 1) continue;
        const bool mixed = ax > 0 && ay > 0;
        std::vector<double> hs, errs;
        for (int e = mixed ? 1 : 3; e <= 7; ++e) {
          const double h = std::ldexp(1.0, -e);
          const auto cell = testing::cell_from<2>(phi, {0.3, 0.2}, {h, h}, k);
          double err = 0.0, floor = 0.0;
          for (int i = 1; i < 8; ++i)
            for (int j = 1; j < 8; ++j) {
              const Point<2> x{0.3 + h * i / 8.0, 0.2 + h * j / 8.0};
              err = std::max(err, std::abs(hermite::cell_eval<2>(cell, x, {ax, ay}) -
                                           phi(x, {ax, ay})));
              floor = std::max(floor, testing::expansion_magnitude<2>(cell, x, {ax, ay}));
            }
          if (err > 10.0 * std::numeric_limits<double>::epsilon() * floor) {
            hs.push_back(h);
            errs.push_back(err);
          }
        }
        if (hs.size() < 3) {
          worst_axis = std::numeric_limits<double>::infinity();
          continue;
        }
        const double slope = testing::log_slope(hs, errs);
        if (mixed) {
          worst_mixed = std::min(worst_mixed, slope - order);
        } else {
          worst_axis = std::max(worst_axis, std::abs(slope - order));
        }
      }
  }
  verdict(worst_axis <= 0.2, "interpolation order (single-axis alpha)",
          format("sin(x)e^y, h=2^-3..2^-7, max |slope - (n+1-|alpha|)| = %.3f, bound 0.2",
                 worst_axis));
  verdict(worst_mixed >= -0.2, "interpolation order (mixed alpha)",
          format("min slope - (n+1-|alpha|) = %.3f, bound >= -0.2 (mixed partials "
                 "superconverge)",
                 worst_mixed));
}

void minimizer_inequality() {
  const QuadratureSpec exact{12};
  int passed = 0, total = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 1; ++k)
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto p1 = TrigPolynomial<1>::random(seed, 4, 3).as_function();
      const auto g1 = GridSpec<1>::unit(16);
      const double a1 = stability_functional(sample_from_function(g1, k, p1), k);
      const double b1 = stability_functional(p1, g1, k, exact);
      const auto p2 = TrigPolynomial<2>::random(seed, 4, 3).as_function();
      const auto g2 = GridSpec<2>::unit(16);
      const double a2 = stability_functional(sample_from_function(g2, k, p2), k);
      const double b2 = stability_functional(p2, g2, k, exact);
      for (auto [a, b] : {std::pair{a1, b1}, std::pair{a2, b2}}) {
        ++total;
        if (a <= b * (1.0 + 1e-10)) ++passed;
        worst = std::max(worst, a / b);
      }
    }
  verdict(passed == total, "minimizer inequality",
          format("20 trig polynomials, k=0,1, p=1,2: %d/%d with F[H] <= F[phi], max ratio %.6f",
                 passed, total, worst));
}

JetFunction<1> sine() {
  return [](const Point<1>& x, const MultiIndex<1>& a) {
    return cos_derivative(2.0 * std::numbers::pi, -0.5 * std::numbers::pi, a[0], x[0]);
  };
}

void functional_monotonicity() {
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 1; ++k) {
    const auto seq = constant_advection_functional(sine(), 32, k, 0.37, 1.0 / 32, 200);
    for (std::size_t i = 1; i < seq.size(); ++i) worst = std::max(worst, seq[i] - seq[i - 1]);
  }
  verdict(worst <= 1e-9, "1-D functional monotonicity",
          format("sin(2 pi x), v=0.37, N=32, 200 steps, k=0,1: max increase %.2e, bound 1e-9",
                 worst));
}

void average_identity() {
  double worst = 0.0;
  for (int k = 0; k <= 1; ++k)
    worst = std::max(worst, average_identity_residual(sine(), GridSpec<1>::unit(16), k));
  verdict(worst <= 1e-10, "average identity",
          format("sin(2 pi x), N=16, k=0,1: residual %.2e, bound 1e-10", worst));
  const auto rule = gauss_legendre(12);
  double integral = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q)
    integral += rule.weights[q] * std::pow(e_k(rule.nodes[q], 0), 2);
  const double closed = e_k_square_integral(0);
  verdict(std::abs(integral - 1.0 / 12.0) <= 1e-12 && std::abs(closed - 1.0 / 12.0) <= 1e-12,
          "integral of E_0^2",
          format("quadrature %.15f, closed form %.15f, 1/12 to 1e-12", integral, closed));
}

double epsilon_fd_difference(double epsilon, double* scaled = nullptr) {
  const auto g = GridSpec<2>::unit(50);
  const double h = g.spacing(0);
  const SwirlVelocity vel(1.0);
  const auto f = sample_from_function(g, 1, cosine_product(1, 2));
  const auto an = SchemeConfig::make(1, Strategy::analytic);
  auto fd = SchemeConfig::make(1, Strategy::epsilon_fd);
  fd.epsilon = epsilon;
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> node(0, g.node_count() - 1);
  std::vector<double> a(4), b(4);
  double worst = 0.0, worst_scaled = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = g.node_position(g.multi_index(node(rng)));
    update_node_analytic<2>(f, x, 0.3, h, vel, an, a);
    update_node_epsilon_fd(f, x, 0.3, h, vel, fd, b);
    for (int j = 0; j < 4; ++j) {
      const auto al = hermite::jet_alpha<2>(j, 1);
      const double d = std::abs(a[j] - b[j]);
      worst = std::max(worst, d);
      worst_scaled = std::max(worst_scaled, d * std::pow(h, al[0] + al[1]));
    }
  }
  if (scaled) *scaled = worst_scaled;
  return worst;
}

void analytic_vs_epsilon_fd() {
  const double eps = SchemeConfig::make(1, Strategy::epsilon_fd).epsilon;
  double scaled = 0.0;
  const double worst = epsilon_fd_difference(eps, &scaled);
  verdict(worst <= 1e-7, "analytic vs epsilon-FD update",
          format("cos(2 pi x)cos(4 pi y), swirl, h=1/50, 100 nodes, eps=%.2e: max entry "
                 "difference %.2e, bound 1e-7",
                 eps, worst));
  double best = std::numeric_limits<double>::infinity(), best_eps = 0.0;
  for (int e = 0; e <= 24; ++e) {
    const double trial = std::pow(10.0, -2.0 - e * 0.25);
    const double d = epsilon_fd_difference(trial);
    if (d < best) {
      best = d;
      best_eps = trial;
    }
  }
  info(format("epsilon-FD: grid-scaled max h^|alpha| difference %.2e; best raw difference "
              "over eps in [1e-8, 1e-2] is %.2e at eps=%.1e",
              scaled, best, best_eps));
}

void foot_derivatives() {
  const SwirlVelocity vel(1.0);
  const double e = 1e-6;
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (auto s : {Stepper::euler, Stepper::ssprk3, Stepper::rk5_cash_karp}) {
    for (int trial = 0; trial < 100; ++trial) {
      const Point<2> x{u(rng), u(rng)};
      const double t_new = 0.25, dt = 0.05;
      const auto r = trace_foot<2>(x, t_new, dt, vel, s, 2);
      for (int j = 0; j < 2; ++j) {
        Point<2> xp = x, xm = x;
        xp[j] += e;
        xm[j] -= e;
        const auto rp = trace_foot<2>(xp, t_new, dt, vel, s, 1);
        const auto rm = trace_foot<2>(xm, t_new, dt, vel, s, 1);
        for (int i = 0; i < 2; ++i) {
          worst = std::max(worst,
                           std::abs((rp.foot[i] - rm.foot[i]) / (2 * e) - (*r.grad_foot)[i][j]));
          for (int l = 0; l < 2; ++l)
            worst = std::max(worst, std::abs(((*rp.grad_foot)[i][l] - (*rm.grad_foot)[i][l]) /
                                                 (2 * e) -
                                             (*r.hess_foot)[i][l][j]));
        }
      }
    }
  }
  verdict(worst <= 1e-8, "foot-map derivatives",
          format("swirl, 3 steppers, 100 points, gradient and Hessian vs central differences "
                 "(e=1e-6): max deviation %.2e, bound 1e-8",
                 worst));
}

void contour_benchmark() {
  SwirlRun run;
  run.scheme = SchemeId::biquintic;
  run.h = 1.0 / 100;
  run.period = 10.0;
  run.t_final = 10.0;
  run.ic = InitialCondition::hump;
  const auto result = run_swirl(run);
  const auto circle = circle_polyline({kHumpCentreX, kHumpCentreY}, kHumpRadius, 1000);
  const auto contour = merge_polylines(extract_contour(result.field, hump_level(), 4));
  const double d = contour.points.empty() ? std::numeric_limits<double>::infinity()
                                          : hausdorff_distance(contour, circle);
  verdict(d < 5e-3, "contour biquintic",
          format("h=1/100 T=t_final=10: Hausdorff to the initial circle %.3e, bound 5e-3 "
                 "(%zu vertices, %.1f s)",
                 d, contour.points.size(), result.report.seconds));

  const SwirlVelocity vel(10.0);
  const auto back = marker_oracle(circle, vel, 10.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < circle.points.size(); ++i)
    worst = std::max(worst, std::hypot(back.points[i][0] - circle.points[i][0],
                                       back.points[i][1] - circle.points[i][1]));
  verdict(worst <= 1e-6, "marker round trip",
          format("1000 markers, T=t_final=10: max displacement %.2e, bound 1e-6", worst));

  SwirlRun half = run;
  half.t_final = 5.0;
  const auto mid = run_swirl(half);
  const auto mid_contour = merge_polylines(extract_contour(mid.field, hump_level(), 4));
  const auto mid_markers = marker_oracle(circle, vel, 5.0);
  if (!mid_contour.points.empty())
    info(format("contour at t=T/2: Hausdorff jet vs markers %.3e (not asserted)",
                hausdorff_distance(mid_contour, mid_markers)));
}

}  // namespace

int main() {
  std::printf("jetadv acceptance report\n");
  polynomial_reproduction();
  interpolation_slopes();
  minimizer_inequality();
  functional_monotonicity();
  average_identity();
  analytic_vs_epsilon_fd();
  foot_derivatives();
  swirl_accuracy();
  convergence_slopes();
  stability();
  contour_benchmark();
  std::printf("%d criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
