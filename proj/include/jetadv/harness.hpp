#pragma once

// Swirl benchmark runs shared by the command-line tool and the acceptance
// suite.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jetadv/diagnostics.hpp"
#include "jetadv/jetupdate.hpp"

namespace jetadv {

enum class SchemeId {
  bilinear,
  bicubic,
  bicubic_gridfd,
  bicubic_epsfd,
  biquintic,
  biquintic_gridfd,
  upwind,
};

struct SchemeInfo {
  SchemeId id;
  std::string_view name;
  int k;
  Strategy strategy;
  bool experimental;
};

const std::vector<SchemeInfo>& scheme_table();
const SchemeInfo& scheme_info(SchemeId id);
/// Throws std::invalid_argument for an unknown name.
SchemeId parse_scheme(std::string_view name);

enum class InitialCondition { cosine, hump };
InitialCondition parse_initial_condition(std::string_view name);

enum class VelocityKind { swirl, zero };
VelocityKind parse_velocity(std::string_view name);

inline constexpr double kHumpCentreX = 0.5;
inline constexpr double kHumpCentreY = 0.75;
inline constexpr double kHumpRadius = 0.15;
/// exp(-10 r^2): the level whose initial contour is the circle of radius r.
double hump_level();

JetFunction<2> initial_condition(InitialCondition ic);

struct SwirlRun {
  SchemeId scheme = SchemeId::bicubic;
  double h = 1.0 / 50.0;
  double period = 1.0;  // T
  double t_final = 1.0;
  InitialCondition ic = InitialCondition::cosine;
  VelocityKind velocity = VelocityKind::swirl;
};

struct RunReport {
  std::string scheme;
  int k = 0;
  std::string strategy;
  double h = 0.0;
  double dt = 0.0;
  double t_final = 0.0;
  double period = 0.0;
  double linf_error = 0.0;
  double seconds = 0.0;
  int steps = 0;
};

struct RunResult {
  RunReport report;
  JetField<2> field;  // final state; upwind stores its values as a k = 0 field
};

/// Node count per axis for resolution h; throws unless 1/h is an integer.
int nodes_for_resolution(double h);

/// Nominal time step: h for jet schemes, h / sqrt(2) for upwind.
double nominal_dt(SchemeId scheme, double h);

/// Exact solution at time t. The swirl flow map over [0, t] equals the
/// autonomous flow of the t = 0 field for pseudo-time (T/pi) sin(pi t/T), so
/// it is the identity whenever t is a multiple of T.
ScalarFunction<2> exact_solution(InitialCondition ic, VelocityKind velocity,
                                 double period, double t);

RunResult run_swirl(const SwirlRun& run);

/// log(e_prev / e) / log(h_prev / h); equals log2 of the error ratio when h
/// halves.
double observed_order(double h_prev, double e_prev, double h, double e);

/// Least-squares slope of log(err) against log(h).
double fitted_slope(const std::vector<double>& h, const std::vector<double>& err);

}  // namespace jetadv
