#pragma once

// Analytic functions with closed-form partial derivatives of every order, for
// initial conditions and test oracles.

#include <cstdint>
#include <vector>

#include "jetadv/jetfield.hpp"

namespace jetadv {

/// d^m/dx^m cos(omega x + phase).
double cos_derivative(double omega, double phase, int m, double x);

/// cos(2 pi fx x) cos(2 pi fy y); the default is the swirl accuracy test IC.
JetFunction<2> cosine_product(int fx = 1, int fy = 2);

/// sin(x) exp(y) (not periodic).
JetFunction<2> sin_exp();

/// d^m/du^m exp(-a u^2).
double gaussian_derivative(double a, int m, double u);

/// sum_{i,j} exp(-a ((x-i-x0)^2 + (y-j-y0)^2)) over the periodic images
/// |i|, |j| <= images.
JetFunction<2> periodic_gaussian_hump(double x0, double y0, double a = 10.0,
                                      int images = 3);

/// Sum of separable terms amp * prod_i cos(2 pi f_i x_i + theta_i), periodic
/// on the unit box.
template <int Dim>
struct TrigPolynomial {
  struct Term {
    double amplitude = 0.0;
    MultiIndex<Dim> frequency{};
    Point<Dim> phase{};
  };
  std::vector<Term> terms;

  double operator()(const Point<Dim>& x, const MultiIndex<Dim>& alpha) const;
  JetFunction<Dim> as_function() const;

  /// n_terms random terms, frequencies in [0, max_freq], amplitudes in
  /// [-1, 1], phases in [0, 2 pi); deterministic in seed.
  static TrigPolynomial random(std::uint64_t seed, int n_terms, int max_freq);
};

}  // namespace jetadv
