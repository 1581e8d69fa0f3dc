#pragma once

// One-dimensional Hermite basis polynomials and the tensor-product p-n cell
// interpolant on a p-rectangle.
//
// The univariate basis w_{n,alpha}^q (n = 2k+1 odd, 0 <= alpha <= k,
// q in {0,1}) satisfies d^a/dx^a w_{n,alpha}^q (q') = delta(alpha,a)
// delta(q,q') for a <= k. The cell interpolant is
//
//   H(x) = sum_q sum_alpha phi_alpha^q prod_i (dx_i)^{alpha_i}
//          w_{n,alpha_i}^{q_i}((x_i - a_i) / dx_i),
//
// with phi_alpha^q stored in physical derivative units.

#include <span>
#include <vector>

#include "jetadv/types.hpp"

namespace jetadv::hermite {

/// Maximum supported jet order; the basis is hard-coded for n in {1,3,5}.
inline constexpr int kMaxOrder = 2;

struct BasisId {
  int degree = 1;    // n, odd
  int alpha = 0;     // derivative slot, 0..(n-1)/2
  int endpoint = 1;  // q, 0 or 1
};

/// Throws std::invalid_argument for an unsupported (n, alpha, q).
void validate(const BasisId& id);

double basis_value(const BasisId& id, double x);

/// Exact derivative of the given order; zero for order > n.
double basis_derivative(const BasisId& id, double x, int order);

template <int Dim>
struct CellData {
  Point<Dim> origin{};
  Point<Dim> edge_lengths{};
  int k = 0;
  /// Index: vertex_index(q) * jet_size + jet_index(alpha).
  std::vector<double> values;

  CellData() = default;
  CellData(const Point<Dim>& origin, const Point<Dim>& edges, int k);

  int jet_size() const { return ipow(k + 1, Dim); }
  static constexpr int vertex_count() { return 1 << Dim; }

  double& at(const MultiIndex<Dim>& q, const MultiIndex<Dim>& alpha);
  double at(const MultiIndex<Dim>& q, const MultiIndex<Dim>& alpha) const;
};

/// Lexicographic index of alpha in {0..k}^Dim, first axis most significant.
template <int Dim>
constexpr int jet_index(const MultiIndex<Dim>& alpha, int k) {
  int idx = 0;
  for (int i = 0; i < Dim; ++i) idx = idx * (k + 1) + alpha[i];
  return idx;
}

template <int Dim>
constexpr MultiIndex<Dim> jet_alpha(int index, int k) {
  MultiIndex<Dim> alpha{};
  for (int i = Dim - 1; i >= 0; --i) {
    alpha[i] = index % (k + 1);
    index /= (k + 1);
  }
  return alpha;
}

template <int Dim>
constexpr int vertex_index(const MultiIndex<Dim>& q) {
  int idx = 0;
  for (int i = 0; i < Dim; ++i) idx = idx * 2 + q[i];
  return idx;
}

template <int Dim>
constexpr MultiIndex<Dim> vertex_q(int index) {
  MultiIndex<Dim> q{};
  for (int i = Dim - 1; i >= 0; --i) {
    q[i] = index & 1;
    index >>= 1;
  }
  return q;
}

/// Precomputed per-axis basis tables for one evaluation point, so that many
/// partial derivatives of the same cell polynomial can be taken cheaply.
template <int Dim>
class CellEvaluator {
 public:
  static constexpr int kMaxDeriv = 2 * kMaxOrder + 2;

  /// `xi` are relative coordinates (may lie outside [0,1]); derivatives up
  /// to `max_deriv` per axis are tabulated.
  CellEvaluator(int k, const Point<Dim>& edge_lengths, const Point<Dim>& xi,
                int max_deriv);

  /// d^deriv of the interpolant defined by `values` (CellData layout).
  double eval(std::span<const double> values,
              const MultiIndex<Dim>& deriv) const;

  int k() const { return k_; }

 private:
  int k_;
  int max_deriv_;
  // table_[axis][d][q][alpha] = dx^{alpha-d} * d^d/dxi^d w^q_alpha(xi)
  std::array<std::array<std::array<std::array<double, kMaxOrder + 1>, 2>,
                        kMaxDeriv + 1>,
             Dim>
      table_{};
};

template <int Dim>
Point<Dim> relative_coordinates(const CellData<Dim>& cell, const Point<Dim>& x);

template <int Dim>
double cell_eval(const CellData<Dim>& cell, const Point<Dim>& x,
                 const MultiIndex<Dim>& deriv);

}  // namespace jetadv::hermite
