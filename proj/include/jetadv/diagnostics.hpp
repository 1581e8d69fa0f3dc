#pragma once

// Stability functional, the 1-D stability identities (r_k, mu_k, E_k and the
// average identity), contour extraction, and the Lagrangian marker oracle.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "jetadv/characteristics.hpp"
#include "jetadv/jetfield.hpp"

namespace jetadv {

struct QuadratureSpec {
  int points_per_axis = 6;  // Gauss-Legendre points per cell and axis, >= 2
};

/// Gauss-Legendre nodes and weights on [0,1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int m);

/// F[H] = integral of (d^beta H)^2, beta = (k+1, ..., k+1), by per-cell
/// quadrature of the field's piecewise polynomial interpolant. k is the
/// functional order and may differ from field.k().
template <int Dim>
double stability_functional(const JetField<Dim>& field, int k,
                            const QuadratureSpec& quad = {});

/// F[phi] for an analytic function, integrated cell by cell over the grid.
template <int Dim>
double stability_functional(const JetFunction<Dim>& phi, const GridSpec<Dim>& grid,
                            int k, const QuadratureSpec& quad = {});

/// r_k(x) = x^{k+1} (1-x)^{k+1} / (n+1)!, n = 2k+1; derivative of given order.
double r_k(double x, int k, int order = 0);
/// mu_k = r_k^{(k+1)}.
double mu_k(double x, int k);
/// E_k(z) = mu_k(z mod 1).
double e_k(double z, int k);
/// Closed form of the integral of E_k^2 over one period:
/// ((k+1)! / (n+1)!)^2 / (n+2).
double e_k_square_integral(int k);

/// |LHS - RHS| of the average identity on a periodic 1-D grid:
///   int H = int phi - h^{k+1} int E_k((x-a)/h) phi^{(k+1)},
/// where H is the Hermite interpolant of phi's k-jet.
double average_identity_residual(const JetFunction<1>& phi, const GridSpec<1>& grid,
                                 int k, const QuadratureSpec& quad = {});

/// F[phi_n] after each of `steps` jet-scheme steps of 1-D constant advection
/// with velocity v and step dt (entry 0 is the initial projection).
std::vector<double> constant_advection_functional(const JetFunction<1>& phi0, int n,
                                                  int k, double v, double dt,
                                                  int steps,
                                                  const QuadratureSpec& quad = {});

struct Polyline {
  std::vector<Point<2>> points;
  bool closed = false;
};

/// Marching squares on the closed box, sampled on a lattice refine times finer
/// than the grid. Saddles are resolved by the interpolant at the square
/// centre. Lattice squares are not joined across the periodic boundary.
std::vector<Polyline> extract_contour(const JetField<2>& field, double level,
                                      int refine = 4);

/// Advects every vertex forward from t0 to t0 + t_final with rk5_cash_karp
/// steps of at most dt_markers (default t_final / 1e4).
Polyline marker_oracle(const Polyline& initial, const VelocityModel<2>& vel,
                       double t_final, double dt_markers = 0.0, double t0 = 0.0);

/// Symmetric discrete Hausdorff distance over the vertices.
double hausdorff_distance(const Polyline& a, const Polyline& b);

/// All vertices of several polylines joined, for set-to-set distances.
Polyline merge_polylines(const std::vector<Polyline>& lines);

/// Closed circle sampled at n vertices.
Polyline circle_polyline(const Point<2>& centre, double radius, int n);

/// CSV dump `polyline_id,vertex_id,x,y`, 17 significant digits.
void write_polylines_csv(std::ostream& os, const std::vector<Polyline>& lines);

}  // namespace jetadv
