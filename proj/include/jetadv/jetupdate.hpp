#pragma once

// Jet-update strategies (analytic differentiation, epsilon finite differences,
// grid-based reconstruction), the advect-and-project step, and the
// first-order upwind reference scheme.

#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "jetadv/characteristics.hpp"
#include "jetadv/jetfield.hpp"

namespace jetadv {

enum class Strategy { analytic, epsilon_fd, grid_fd };

std::string_view strategy_name(Strategy s);
Strategy parse_strategy(std::string_view name);

/// machine_epsilon^{1/4}.
inline double default_epsilon() {
  return std::sqrt(std::sqrt(std::numeric_limits<double>::epsilon()));
}

struct SchemeConfig {
  int k = 1;
  Strategy strategy = Strategy::analytic;
  Stepper stepper = Stepper::ssprk3;
  double epsilon = default_epsilon();

  /// Config with the stepper matched to k.
  static SchemeConfig make(int k, Strategy strategy);
};

/// Throws std::invalid_argument if the config cannot run on a Dim-dimensional
/// field with the given velocity model.
///   analytic:   every partial-jet entry must have |alpha| <= 2
///               (k <= 1 in 2-D, k <= 2 in 1-D)
///   epsilon_fd: 2-D only, epsilon > 0
///   grid_fd:    2-D only, k in {1, 2}, square cells for k = 2
template <int Dim>
void validate_config(const SchemeConfig& cfg, const GridSpec<Dim>& grid,
                     const VelocityModel<Dim>& vel);

/// Partial k-jet at x_node at time t_new, by tracing the foot with
/// derivative propagation and applying the chain rule to the interpolant of
/// the owning cell of the foot. `out` has (k+1)^Dim entries.
template <int Dim>
void update_node_analytic(const JetField<Dim>& field, const Point<Dim>& x_node,
                          double t_new, double dt, const VelocityModel<Dim>& vel,
                          const SchemeConfig& cfg, std::span<double> out);

/// Partial k-jet from epsilon-offset characteristics, all evaluated in the
/// owning cell of the central foot. k = 1: four diagonal feet. k = 2: analytic
/// total 2-jets at x and x +- eps e_x, then centered x-differences.
void update_node_epsilon_fd(const JetField<2>& field, const Point<2>& x_node,
                            double t_new, double dt, const VelocityModel<2>& vel,
                            const SchemeConfig& cfg, std::span<double> out);

/// Total 2-jet data at one cell vertex.
struct VertexJet {
  double phi = 0.0;
  double phi_x = 0.0;
  double phi_y = 0.0;
  double phi_xx = 0.0;
  double phi_xy = 0.0;
  double phi_yy = 0.0;
};

/// Vertex data indexed by hermite::vertex_index(q): (0,0), (0,1), (1,0), (1,1).
using CellVertexJets = std::array<VertexJet, 4>;

/// phi_xy at the four vertices from the total 1-jet: centered differences at
/// the edge midpoints, then bilinear extrapolation in the rotated frame.
std::array<double, 4> reconstruct_cross_cubic(const CellVertexJets& v, double hx,
                                              double hy);

struct CrossQuintic {
  double phi_xxy = 0.0;
  double phi_xyy = 0.0;
  double phi_xxyy = 0.0;
};

/// (phi_xxy, phi_xyy, phi_xxyy) at the four vertices of a square cell from the
/// total 2-jet. Vertices other than (0,0) use the (0,0) formulas on the
/// reflected cell.
std::array<CrossQuintic, 4> reconstruct_cross_quintic(const CellVertexJets& v,
                                                      double h);

/// One advect-and-project step from field.time() to field.time() + dt. Reads
/// only the old field; returns a fresh one.
template <int Dim>
JetField<Dim> step(const JetField<Dim>& field, double dt,
                   const VelocityModel<Dim>& vel, const SchemeConfig& cfg);

/// Number of steps taken by advance(): full steps of dt plus one shorter
/// final step when dt does not divide the interval.
int step_count(double t0, double t1, double dt);

/// Steps field to t_final with nominal step dt.
template <int Dim>
JetField<Dim> advance(JetField<Dim> field, double t_final, double dt,
                      const VelocityModel<Dim>& vel, const SchemeConfig& cfg);

/// Largest stable upwind step h / (sqrt(Dim) max|v|) over the nodes at time t.
template <int Dim>
double upwind_max_dt(const GridSpec<Dim>& grid, double t,
                     const VelocityModel<Dim>& vel);

/// Dimension-by-dimension first-order upwind with forward Euler from t to
/// t + dt. Throws std::invalid_argument if dt exceeds upwind_max_dt.
template <int Dim>
std::vector<double> upwind_step(const GridSpec<Dim>& grid,
                                std::span<const double> values, double t,
                                double dt, const VelocityModel<Dim>& vel);

template <int Dim>
std::vector<double> upwind_advance(const GridSpec<Dim>& grid,
                                   std::vector<double> values, double t0,
                                   double t_final, double dt,
                                   const VelocityModel<Dim>& vel);

}  // namespace jetadv
