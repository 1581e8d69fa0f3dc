#include "jetadv/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace jetadv::hermite {

namespace {

// Ascending-power coefficients of w_{n,alpha}^1, indexed [k][alpha].
constexpr double kCoeffs[3][3][6] = {
    {{0, 1, 0, 0, 0, 0}},
    {{0, 0, 3, -2, 0, 0}, {0, 0, -1, 1, 0, 0}},
    {{0, 0, 0, 10, -15, 6}, {0, 0, 0, -4, 7, -3}, {0, 0, 0, 0.5, -1, 0.5}},
};

// d^order/dx^order of sum_j c[j] x^j, degree <= n, by Horner.
double poly_derivative(const double* c, int n, double x, int order) {
  if (order > n) return 0.0;
  double acc = 0.0;
  for (int j = n; j >= order; --j) {
    double falling = 1.0;
    for (int m = 0; m < order; ++m) falling *= static_cast<double>(j - m);
    acc = acc * x + c[j] * falling;
  }
  return acc;
}

double basis_derivative_unchecked(int degree, int alpha, int endpoint, double x,
                                  int order) {
  const int k = (degree - 1) / 2;
  const double* c = kCoeffs[k][alpha];
  if (endpoint == 1) return poly_derivative(c, degree, x, order);
  // w^0_alpha(x) = (-1)^alpha w^1_alpha(1-x); each derivative adds a sign.
  const double v = poly_derivative(c, degree, 1.0 - x, order);
  return ((alpha + order) % 2 == 0) ? v : -v;
}

}  // namespace

void validate(const BasisId& id) {
  const bool ok = (id.degree == 1 || id.degree == 3 || id.degree == 5) &&
                  id.alpha >= 0 && id.alpha <= (id.degree - 1) / 2 &&
                  (id.endpoint == 0 || id.endpoint == 1);
  if (!ok) {
    throw std::invalid_argument(
        "invalid Hermite basis (n=" + std::to_string(id.degree) +
        ", alpha=" + std::to_string(id.alpha) +
        ", q=" + std::to_string(id.endpoint) + ")");
  }
}

double basis_value(const BasisId& id, double x) {
  return basis_derivative(id, x, 0);
}

double basis_derivative(const BasisId& id, double x, int order) {
  validate(id);
  if (order < 0) throw std::invalid_argument("negative derivative order");
  return basis_derivative_unchecked(id.degree, id.alpha, id.endpoint, x, order);
}

template <int Dim>
CellData<Dim>::CellData(const Point<Dim>& origin_, const Point<Dim>& edges,
                        int k_)
    : origin(origin_), edge_lengths(edges), k(k_) {
  if (k < 0 || k > kMaxOrder) throw std::invalid_argument("jet order out of range");
  for (double e : edge_lengths)
    if (!(e > 0.0)) throw std::invalid_argument("cell edge lengths must be positive");
  values.assign(static_cast<std::size_t>(jet_size() * vertex_count()), 0.0);
}

template <int Dim>
double& CellData<Dim>::at(const MultiIndex<Dim>& q, const MultiIndex<Dim>& alpha) {
  return values[static_cast<std::size_t>(vertex_index<Dim>(q) * jet_size() +
                                         jet_index<Dim>(alpha, k))];
}

template <int Dim>
double CellData<Dim>::at(const MultiIndex<Dim>& q,
                         const MultiIndex<Dim>& alpha) const {
  return values[static_cast<std::size_t>(vertex_index<Dim>(q) * jet_size() +
                                         jet_index<Dim>(alpha, k))];
}

template <int Dim>
CellEvaluator<Dim>::CellEvaluator(int k, const Point<Dim>& edge_lengths,
                                  const Point<Dim>& xi, int max_deriv)
    : k_(k), max_deriv_(max_deriv) {
  if (k < 0 || k > kMaxOrder) throw std::invalid_argument("jet order out of range");
  if (max_deriv < 0 || max_deriv > kMaxDeriv)
    throw std::invalid_argument("derivative order out of range");
  const int degree = 2 * k + 1;
  for (int i = 0; i < Dim; ++i) {
    const double dx = edge_lengths[i];
    for (int d = 0; d <= max_deriv; ++d) {
      for (int a = 0; a <= k; ++a) {
        // dx^{a-d} as one power, so that a == d scales by exactly 1.
        double scale = 1.0;
        for (int e = 0; e < std::abs(a - d); ++e) scale *= dx;
        if (a < d) scale = 1.0 / scale;
        for (int q = 0; q < 2; ++q) {
          table_[i][d][q][a] = scale * basis_derivative_unchecked(degree, a, q, xi[i], d);
        }
      }
    }
  }
}

template <int Dim>
double CellEvaluator<Dim>::eval(std::span<const double> values,
                                const MultiIndex<Dim>& deriv) const {
  for (int i = 0; i < Dim; ++i) {
    if (deriv[i] < 0) throw std::invalid_argument("negative derivative order");
    if (deriv[i] > 2 * k_ + 1) return 0.0;
    if (deriv[i] > max_deriv_)
      throw std::invalid_argument("derivative not tabulated by this evaluator");
  }
  const int jet = ipow(k_ + 1, Dim);
  double sum = 0.0;
  if constexpr (Dim == 1) {
    const auto& t = table_[0][deriv[0]];
    for (int q = 0; q < 2; ++q)
      for (int a = 0; a <= k_; ++a) sum += values[q * jet + a] * t[q][a];
  } else if constexpr (Dim == 2) {
    const auto& tx = table_[0][deriv[0]];
    const auto& ty = table_[1][deriv[1]];
    for (int qx = 0; qx < 2; ++qx) {
      for (int qy = 0; qy < 2; ++qy) {
        const double* v = values.data() + (qx * 2 + qy) * jet;
        for (int ax = 0; ax <= k_; ++ax) {
          double row = 0.0;
          for (int ay = 0; ay <= k_; ++ay) row += v[ax * (k_ + 1) + ay] * ty[qy][ay];
          sum += row * tx[qx][ax];
        }
      }
    }
  } else {
    for (int v = 0; v < (1 << Dim); ++v) {
      const auto q = vertex_q<Dim>(v);
      for (int j = 0; j < jet; ++j) {
        const auto alpha = jet_alpha<Dim>(j, k_);
        double w = values[v * jet + j];
        for (int i = 0; i < Dim; ++i) w *= table_[i][deriv[i]][q[i]][alpha[i]];
        sum += w;
      }
    }
  }
  return sum;
}

template <int Dim>
Point<Dim> relative_coordinates(const CellData<Dim>& cell, const Point<Dim>& x) {
  Point<Dim> xi{};
  for (int i = 0; i < Dim; ++i)
    xi[i] = (x[i] - cell.origin[i]) / cell.edge_lengths[i];
  return xi;
}

template <int Dim>
double cell_eval(const CellData<Dim>& cell, const Point<Dim>& x,
                 const MultiIndex<Dim>& deriv) {
  int max_deriv = 0;
  for (int i = 0; i < Dim; ++i) {
    if (deriv[i] < 0) throw std::invalid_argument("negative derivative order");
    if (deriv[i] > 2 * cell.k + 1) return 0.0;
    max_deriv = std::max(max_deriv, deriv[i]);
  }
  const CellEvaluator<Dim> ev(cell.k, cell.edge_lengths,
                              relative_coordinates(cell, x), max_deriv);
  return ev.eval(cell.values, deriv);
}

template struct CellData<1>;
template struct CellData<2>;
template class CellEvaluator<1>;
template class CellEvaluator<2>;
template Point<1> relative_coordinates(const CellData<1>&, const Point<1>&);
template Point<2> relative_coordinates(const CellData<2>&, const Point<2>&);
template double cell_eval(const CellData<1>&, const Point<1>&, const MultiIndex<1>&);
template double cell_eval(const CellData<2>&, const Point<2>&, const MultiIndex<2>&);

}  // namespace jetadv::hermite
