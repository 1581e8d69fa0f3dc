#pragma once

// Periodic grid storage of partial k-jets and the global piecewise Hermite
// interpolant built from them.
//
// Node index vectors are flattened row-major (first axis most significant);
// the jet entries at a node are ordered lexicographically in alpha, e.g. for
// k=1, p=2: (0,0), (0,1), (1,0), (1,1).

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "jetadv/hermite.hpp"
#include "jetadv/types.hpp"

namespace jetadv {

/// Periodic, axis-aligned grid: node N_i is identified with node 0.
template <int Dim>
struct GridSpec {
  Point<Dim> lower{};
  Point<Dim> upper{};
  std::array<int, Dim> nodes{};

  GridSpec() = default;
  GridSpec(const Point<Dim>& lower, const Point<Dim>& upper,
           const std::array<int, Dim>& nodes);

  /// Uniform grid on [0,1]^Dim with n nodes per axis.
  static GridSpec unit(int n);

  double length(int axis) const { return upper[axis] - lower[axis]; }
  double spacing(int axis) const { return length(axis) / nodes[axis]; }
  /// Resolution h = max_i spacing.
  double resolution() const;
  int node_count() const;

  int flat_index(const MultiIndex<Dim>& m) const;
  MultiIndex<Dim> multi_index(int flat) const;
  /// Wraps each component into [0, N_i).
  MultiIndex<Dim> wrap(MultiIndex<Dim> m) const;
  Point<Dim> node_position(const MultiIndex<Dim>& m) const;
  Point<Dim> cell_origin(const MultiIndex<Dim>& cell) const;
};

template <int Dim>
struct CellLocation {
  MultiIndex<Dim> cell{};
  Point<Dim> local{};  // relative coordinates in [0,1)
};

/// Periodic wrap followed by floor; points on a grid hyperplane belong to the
/// cell on their upper side (local coordinate 0). Coordinates within a few
/// ulps of a hyperplane are treated as lying on it.
template <int Dim>
CellLocation<Dim> locate_cell(const GridSpec<Dim>& grid, const Point<Dim>& x);

/// Jet-evaluable scalar function: returns d^alpha f(x).
template <int Dim>
using JetFunction =
    std::function<double(const Point<Dim>&, const MultiIndex<Dim>&)>;

template <int Dim>
using ScalarFunction = std::function<double(const Point<Dim>&)>;

template <int Dim>
class JetField {
 public:
  JetField() = default;
  JetField(const GridSpec<Dim>& grid, int k, double time = 0.0);

  const GridSpec<Dim>& grid() const { return grid_; }
  int k() const { return k_; }
  int jet_size() const { return jet_size_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  std::span<double> jet(int flat) {
    return {data_.data() + static_cast<std::size_t>(flat) * jet_size_,
            static_cast<std::size_t>(jet_size_)};
  }
  std::span<const double> jet(int flat) const {
    return {data_.data() + static_cast<std::size_t>(flat) * jet_size_,
            static_cast<std::size_t>(jet_size_)};
  }
  double& at(int flat, const MultiIndex<Dim>& alpha) {
    return data_[static_cast<std::size_t>(flat) * jet_size_ +
                 hermite::jet_index<Dim>(alpha, k_)];
  }
  double at(int flat, const MultiIndex<Dim>& alpha) const {
    return data_[static_cast<std::size_t>(flat) * jet_size_ +
                 hermite::jet_index<Dim>(alpha, k_)];
  }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

 private:
  GridSpec<Dim> grid_{};
  int k_ = 0;
  int jet_size_ = 1;
  double time_ = 0.0;
  std::vector<double> data_;
};

/// CellData of one grid cell, assembled from its 2^Dim vertex jets.
template <int Dim>
hermite::CellData<Dim> gather_cell(const JetField<Dim>& field,
                                   const MultiIndex<Dim>& cell);

/// Evaluates several partial derivatives of a specific cell's polynomial at x.
/// x is taken at its periodic image closest to the cell, and may lie outside
/// the cell (the polynomial extends globally).
template <int Dim>
void eval_in_cell(const JetField<Dim>& field, const MultiIndex<Dim>& cell,
                  const Point<Dim>& x, std::span<const MultiIndex<Dim>> derivs,
                  std::span<double> out);

template <int Dim>
double eval_in_cell(const JetField<Dim>& field, const MultiIndex<Dim>& cell,
                    const Point<Dim>& x, const MultiIndex<Dim>& deriv);

/// Single-sided evaluation of the global interpolant (owning cell per
/// locate_cell).
template <int Dim>
double eval_global(const JetField<Dim>& field, const Point<Dim>& x,
                   const MultiIndex<Dim>& deriv);

template <int Dim>
JetField<Dim> sample_from_function(const GridSpec<Dim>& grid, int k,
                                   const JetFunction<Dim>& f, double time = 0.0);

/// max over nodes of |phi_node - exact(x_node)|, function values only.
template <int Dim>
double linf_node_error(const JetField<Dim>& field,
                       const ScalarFunction<Dim>& exact);

/// Column name of a jet entry: "phi", "phi_x", "phi_xyy", ...
template <int Dim>
std::string jet_entry_name(const MultiIndex<Dim>& alpha);

/// CSV dump: `i,j,x,y,<jet entries>` (or `i,x,...` in 1-D), 17 significant
/// digits.
template <int Dim>
void write_field_csv(std::ostream& os, const JetField<Dim>& field);

}  // namespace jetadv
