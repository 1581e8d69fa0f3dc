#include "jetadv/functions.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace jetadv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Physicists' Hermite polynomial H_m(z).
double hermite_poly(int m, double z) {
  double h0 = 1.0, h1 = 2.0 * z;
  if (m == 0) return h0;
  for (int n = 1; n < m; ++n) {
    const double h2 = 2.0 * z * h1 - 2.0 * n * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

double periodic_gaussian_1d(double a, double centre, int images, int m, double x) {
  double s = 0.0;
  for (int i = -images; i <= images; ++i) s += gaussian_derivative(a, m, x - i - centre);
  return s;
}

}  // namespace

double cos_derivative(double omega, double phase, int m, double x) {
  return std::pow(omega, m) * std::cos(omega * x + phase + m * 0.5 * std::numbers::pi);
}

JetFunction<2> cosine_product(int fx, int fy) {
  const double wx = kTwoPi * fx, wy = kTwoPi * fy;
  return [wx, wy](const Point<2>& x, const MultiIndex<2>& a) {
    return cos_derivative(wx, 0.0, a[0], x[0]) * cos_derivative(wy, 0.0, a[1], x[1]);
  };
}

JetFunction<2> sin_exp() {
  return [](const Point<2>& x, const MultiIndex<2>& a) {
    return cos_derivative(1.0, -0.5 * std::numbers::pi, a[0], x[0]) * std::exp(x[1]);
  };
}

// d^m/du^m exp(-a u^2) = (-sqrt a)^m H_m(sqrt(a) u) exp(-a u^2).
double gaussian_derivative(double a, int m, double u) {
  const double s = std::sqrt(a);
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  return sign * std::pow(s, m) * hermite_poly(m, s * u) * std::exp(-a * u * u);
}

JetFunction<2> periodic_gaussian_hump(double x0, double y0, double a, int images) {
  return [=](const Point<2>& x, const MultiIndex<2>& alpha) {
    return periodic_gaussian_1d(a, x0, images, alpha[0], x[0]) *
           periodic_gaussian_1d(a, y0, images, alpha[1], x[1]);
  };
}

template <int Dim>
double TrigPolynomial<Dim>::operator()(const Point<Dim>& x,
                                       const MultiIndex<Dim>& alpha) const {
  double sum = 0.0;
  for (const auto& t : terms) {
    double v = t.amplitude;
    for (int i = 0; i < Dim; ++i)
      v *= cos_derivative(kTwoPi * t.frequency[i], t.phase[i], alpha[i], x[i]);
    sum += v;
  }
  return sum;
}

template <int Dim>
JetFunction<Dim> TrigPolynomial<Dim>::as_function() const {
  return [poly = *this](const Point<Dim>& x, const MultiIndex<Dim>& a) { return poly(x, a); };
}

template <int Dim>
TrigPolynomial<Dim> TrigPolynomial<Dim>::random(std::uint64_t seed, int n_terms,
                                                int max_freq) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  std::uniform_int_distribution<int> freq(0, max_freq);
  TrigPolynomial poly;
  poly.terms.resize(static_cast<std::size_t>(n_terms));
  for (auto& t : poly.terms) {
    t.amplitude = amp(rng);
    for (int i = 0; i < Dim; ++i) {
      t.frequency[i] = freq(rng);
      t.phase[i] = phase(rng);
    }
  }
  return poly;
}

template struct TrigPolynomial<1>;
template struct TrigPolynomial<2>;

}  // namespace jetadv
