#include "jetadv/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "jetadv/functions.hpp"

namespace jetadv {

namespace {

std::unique_ptr<VelocityModel<2>> make_velocity(VelocityKind kind, double period) {
  if (kind == VelocityKind::zero) return std::make_unique<ConstantVelocity<2>>(Point<2>{0.0, 0.0});
  return std::make_unique<SwirlVelocity>(period);
}

// The wrapped field at a fixed time.
class FrozenVelocity final : public VelocityModel<2> {
 public:
  FrozenVelocity(std::shared_ptr<const VelocityModel<2>> base, double t)
      : base_(std::move(base)), t_(t) {}
  int max_order() const override { return base_->max_order(); }
  VelocityJet<2> jet(const Point<2>& x, double, int order) const override {
    return base_->jet(x, t_, order);
  }

 private:
  std::shared_ptr<const VelocityModel<2>> base_;
  double t_;
};

}  // namespace

const std::vector<SchemeInfo>& scheme_table() {
  static const std::vector<SchemeInfo> table = {
      {SchemeId::bilinear, "bilinear", 0, Strategy::analytic, false},
      {SchemeId::bicubic, "bicubic", 1, Strategy::analytic, false},
      {SchemeId::bicubic_gridfd, "bicubic-gridfd", 1, Strategy::grid_fd, false},
      {SchemeId::bicubic_epsfd, "bicubic-epsfd", 1, Strategy::epsilon_fd, false},
      {SchemeId::biquintic, "biquintic", 2, Strategy::epsilon_fd, false},
      {SchemeId::biquintic_gridfd, "biquintic-gridfd", 2, Strategy::grid_fd, true},
      {SchemeId::upwind, "upwind", 0, Strategy::analytic, false},
  };
  return table;
}

const SchemeInfo& scheme_info(SchemeId id) {
  for (const auto& s : scheme_table())
    if (s.id == id) return s;
  throw std::invalid_argument("unknown scheme id");
}

SchemeId parse_scheme(std::string_view name) {
  for (const auto& s : scheme_table())
    if (s.name == name) return s.id;
  throw std::invalid_argument("unknown scheme: " + std::string(name));
}

InitialCondition parse_initial_condition(std::string_view name) {
  if (name == "cosine") return InitialCondition::cosine;
  if (name == "hump") return InitialCondition::hump;
  throw std::invalid_argument("unknown initial condition: " + std::string(name));
}

VelocityKind parse_velocity(std::string_view name) {
  if (name == "swirl") return VelocityKind::swirl;
  if (name == "zero") return VelocityKind::zero;
  throw std::invalid_argument("unknown velocity: " + std::string(name));
}

double hump_level() { return std::exp(-10.0 * kHumpRadius * kHumpRadius); }

JetFunction<2> initial_condition(InitialCondition ic) {
  if (ic == InitialCondition::hump) return periodic_gaussian_hump(kHumpCentreX, kHumpCentreY);
  return cosine_product(1, 2);
}

int nodes_for_resolution(double h) {
  if (!(h > 0.0) || h > 0.5) throw std::invalid_argument("h must lie in (0, 1/2]");
  const double n = 1.0 / h;
  const double r = std::round(n);
  if (std::abs(n - r) > 1e-9 * n) throw std::invalid_argument("1/h must be an integer");
  return static_cast<int>(r);
}

double nominal_dt(SchemeId scheme, double h) {
  return scheme == SchemeId::upwind ? h / std::sqrt(2.0) : h;
}

ScalarFunction<2> exact_solution(InitialCondition ic, VelocityKind velocity,
                                 double period, double t) {
  const auto phi0 = initial_condition(ic);
  const double pseudo = velocity == VelocityKind::zero
                            ? 0.0
                            : period / std::numbers::pi * std::sin(std::numbers::pi * t / period);
  if (std::abs(pseudo) < 1e-14 * std::max(1.0, period))
    return [phi0](const Point<2>& x) { return phi0(x, {0, 0}); };
  // Back-trace with the frozen t = 0 field over pseudo-time `pseudo`.
  const auto frozen =
      std::make_shared<FrozenVelocity>(std::make_shared<SwirlVelocity>(period), 0.0);
  const int n = std::max(200, static_cast<int>(std::ceil(std::abs(pseudo) * 2000.0)));
  return [phi0, frozen, pseudo, n](const Point<2>& x) {
    const auto x0 = integrate_forward<2>(x, 0.0, -pseudo, n, *frozen, Stepper::rk5_cash_karp);
    return phi0(x0, {0, 0});
  };
}

RunResult run_swirl(const SwirlRun& run) {
  const auto& info = scheme_info(run.scheme);
  const int n = nodes_for_resolution(run.h);
  if (!(run.period > 0.0)) throw std::invalid_argument("T must be positive");
  if (!(run.t_final >= 0.0)) throw std::invalid_argument("t_final must be non-negative");
  const auto grid = GridSpec<2>::unit(n);
  const double h = grid.spacing(0);
  const auto vel = make_velocity(run.velocity, run.period);
  const auto phi0 = initial_condition(run.ic);
  const double dt = nominal_dt(run.scheme, h);

  RunResult result;
  auto& rep = result.report;
  rep.scheme = std::string(info.name);
  rep.k = info.k;
  rep.strategy = run.scheme == SchemeId::upwind ? "upwind" : std::string(strategy_name(info.strategy));
  rep.h = h;
  rep.dt = dt;
  rep.t_final = run.t_final;
  rep.period = run.period;
  rep.steps = run.t_final > 0.0 ? step_count(0.0, run.t_final, dt) : 0;

  const auto start = std::chrono::steady_clock::now();
  if (run.scheme == SchemeId::upwind) {
    auto field = sample_from_function(grid, 0, phi0);
    if (run.t_final > 0.0)
      field.data() = upwind_advance<2>(grid, field.data(), 0.0, run.t_final, dt, *vel);
    field.set_time(run.t_final);
    result.field = std::move(field);
  } else {
    const auto cfg = SchemeConfig::make(info.k, info.strategy);
    auto field = sample_from_function(grid, info.k, phi0);
    if (run.t_final > 0.0) field = advance(std::move(field), run.t_final, dt, *vel, cfg);
    result.field = std::move(field);
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  rep.linf_error = linf_node_error(result.field,
                                   exact_solution(run.ic, run.velocity, run.period, run.t_final));
  return result;
}

double observed_order(double h_prev, double e_prev, double h, double e) {
  return std::log(e_prev / e) / std::log(h_prev / h);
}

double fitted_slope(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size() || h.size() < 2)
    throw std::invalid_argument("slope fit needs >= 2 matching samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace jetadv
