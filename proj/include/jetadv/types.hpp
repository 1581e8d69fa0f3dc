#pragma once

#include <array>
#include <cstddef>

namespace jetadv {

// The size is spelled as a conversion so that Dim is deduced from the
// accompanying grid or field argument rather than from the array.
template <int Dim>
using Point = std::array<double, static_cast<std::size_t>(Dim)>;

template <int Dim>
using MultiIndex = std::array<int, static_cast<std::size_t>(Dim)>;

/// Square matrix, entry [i][j].
template <int Dim>
using Mat = std::array<Point<Dim>, static_cast<std::size_t>(Dim)>;

/// Third-order tensor [i][j][l], symmetric in (j, l) when it holds second
/// derivatives of a vector field component i.
template <int Dim>
using Tensor3 = std::array<Mat<Dim>, Dim>;

template <int Dim>
constexpr Mat<Dim> identity_matrix() {
  Mat<Dim> m{};
  for (int i = 0; i < Dim; ++i) m[i][i] = 1.0;
  return m;
}

template <int Dim>
constexpr int total_order(const MultiIndex<Dim>& alpha) {
  int s = 0;
  for (int a : alpha) s += a;
  return s;
}

constexpr int ipow(int base, int exp) {
  int r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace jetadv
