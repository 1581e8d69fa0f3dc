#include "jetadv/jetfield.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace jetadv {

namespace {

constexpr double kSnapUlps = 64.0 * std::numeric_limits<double>::epsilon();

template <int Dim>
constexpr int max_cell_values() {
  return ipow(hermite::kMaxOrder + 1, Dim) * (1 << Dim);
}

// Gathers the cell's vertex jets into `values` (CellData layout).
template <int Dim>
void gather_values(const JetField<Dim>& field, const MultiIndex<Dim>& cell,
                   double* values) {
  const auto& grid = field.grid();
  const int jet = field.jet_size();
  for (int v = 0; v < (1 << Dim); ++v) {
    const auto q = hermite::vertex_q<Dim>(v);
    MultiIndex<Dim> node{};
    for (int i = 0; i < Dim; ++i) node[i] = cell[i] + q[i];
    const auto src = field.jet(grid.flat_index(grid.wrap(node)));
    std::copy(src.begin(), src.end(), values + v * jet);
  }
}

template <int Dim>
void eval_local(const JetField<Dim>& field, const MultiIndex<Dim>& cell,
                const Point<Dim>& xi, std::span<const MultiIndex<Dim>> derivs,
                std::span<double> out) {
  std::array<double, max_cell_values<Dim>()> values{};
  gather_values(field, cell, values.data());
  int max_deriv = 0;
  for (const auto& d : derivs)
    for (int i = 0; i < Dim; ++i)
      max_deriv = std::max(max_deriv, std::min(d[i], 2 * field.k() + 1));
  Point<Dim> edges{};
  for (int i = 0; i < Dim; ++i) edges[i] = field.grid().spacing(i);
  const hermite::CellEvaluator<Dim> ev(field.k(), edges, xi, max_deriv);
  const std::span<const double> vals(values.data(),
                                     static_cast<std::size_t>(field.jet_size() << Dim));
  for (std::size_t n = 0; n < derivs.size(); ++n) out[n] = ev.eval(vals, derivs[n]);
}

}  // namespace

template <int Dim>
GridSpec<Dim>::GridSpec(const Point<Dim>& lower_, const Point<Dim>& upper_,
                        const std::array<int, Dim>& nodes_)
    : lower(lower_), upper(upper_), nodes(nodes_) {
  for (int i = 0; i < Dim; ++i) {
    if (nodes[i] < 2) throw std::invalid_argument("grid needs >= 2 nodes per axis");
    if (!(upper[i] > lower[i])) throw std::invalid_argument("grid extent must be positive");
  }
}

template <int Dim>
GridSpec<Dim> GridSpec<Dim>::unit(int n) {
  Point<Dim> lo{}, hi{};
  std::array<int, Dim> ns{};
  for (int i = 0; i < Dim; ++i) {
    hi[i] = 1.0;
    ns[i] = n;
  }
  return GridSpec(lo, hi, ns);
}

template <int Dim>
double GridSpec<Dim>::resolution() const {
  double h = 0.0;
  for (int i = 0; i < Dim; ++i) h = std::max(h, spacing(i));
  return h;
}

template <int Dim>
int GridSpec<Dim>::node_count() const {
  int n = 1;
  for (int i = 0; i < Dim; ++i) n *= nodes[i];
  return n;
}

template <int Dim>
int GridSpec<Dim>::flat_index(const MultiIndex<Dim>& m) const {
  int idx = 0;
  for (int i = 0; i < Dim; ++i) idx = idx * nodes[i] + m[i];
  return idx;
}

template <int Dim>
MultiIndex<Dim> GridSpec<Dim>::multi_index(int flat) const {
  MultiIndex<Dim> m{};
  for (int i = Dim - 1; i >= 0; --i) {
    m[i] = flat % nodes[i];
    flat /= nodes[i];
  }
  return m;
}

template <int Dim>
MultiIndex<Dim> GridSpec<Dim>::wrap(MultiIndex<Dim> m) const {
  for (int i = 0; i < Dim; ++i) {
    m[i] %= nodes[i];
    if (m[i] < 0) m[i] += nodes[i];
  }
  return m;
}

template <int Dim>
Point<Dim> GridSpec<Dim>::node_position(const MultiIndex<Dim>& m) const {
  Point<Dim> x{};
  for (int i = 0; i < Dim; ++i) x[i] = lower[i] + m[i] * spacing(i);
  return x;
}

template <int Dim>
Point<Dim> GridSpec<Dim>::cell_origin(const MultiIndex<Dim>& cell) const {
  return node_position(cell);
}

template <int Dim>
CellLocation<Dim> locate_cell(const GridSpec<Dim>& grid, const Point<Dim>& x) {
  CellLocation<Dim> loc;
  for (int i = 0; i < Dim; ++i) {
    const int n = grid.nodes[i];
    double u = (x[i] - grid.lower[i]) / grid.spacing(i);
    u -= n * std::floor(u / n);
    const double nearest = std::round(u);
    if (std::abs(u - nearest) <= kSnapUlps * std::max(1.0, std::abs(u))) u = nearest;
    int c = static_cast<int>(std::floor(u));
    double xi = u - c;
    if (c >= n) c -= n;
    if (c < 0) c += n;
    loc.cell[i] = c;
    loc.local[i] = xi;
  }
  return loc;
}

template <int Dim>
JetField<Dim>::JetField(const GridSpec<Dim>& grid, int k, double time)
    : grid_(grid), k_(k), jet_size_(ipow(k + 1, Dim)), time_(time) {
  if (k < 0 || k > hermite::kMaxOrder) throw std::invalid_argument("jet order out of range");
  data_.assign(static_cast<std::size_t>(grid.node_count()) * jet_size_, 0.0);
}

template <int Dim>
hermite::CellData<Dim> gather_cell(const JetField<Dim>& field,
                                   const MultiIndex<Dim>& cell) {
  Point<Dim> edges{};
  for (int i = 0; i < Dim; ++i) edges[i] = field.grid().spacing(i);
  hermite::CellData<Dim> data(field.grid().cell_origin(field.grid().wrap(cell)),
                              edges, field.k());
  gather_values(field, field.grid().wrap(cell), data.values.data());
  return data;
}

template <int Dim>
void eval_in_cell(const JetField<Dim>& field, const MultiIndex<Dim>& cell,
                  const Point<Dim>& x, std::span<const MultiIndex<Dim>> derivs,
                  std::span<double> out) {
  const auto& grid = field.grid();
  const auto c = grid.wrap(cell);
  const auto origin = grid.cell_origin(c);
  Point<Dim> xi{};
  for (int i = 0; i < Dim; ++i) {
    const double h = grid.spacing(i);
    const double len = grid.length(i);
    double d = x[i] - origin[i];
    d -= len * std::round((d - 0.5 * h) / len);
    xi[i] = d / h;
  }
  eval_local(field, c, xi, derivs, out);
}

template <int Dim>
double eval_in_cell(const JetField<Dim>& field, const MultiIndex<Dim>& cell,
                    const Point<Dim>& x, const MultiIndex<Dim>& deriv) {
  double out = 0.0;
  eval_in_cell<Dim>(field, cell, x, std::span<const MultiIndex<Dim>>(&deriv, 1),
                    std::span<double>(&out, 1));
  return out;
}

template <int Dim>
double eval_global(const JetField<Dim>& field, const Point<Dim>& x,
                   const MultiIndex<Dim>& deriv) {
  const auto loc = locate_cell(field.grid(), x);
  double out = 0.0;
  eval_local<Dim>(field, loc.cell, loc.local,
                  std::span<const MultiIndex<Dim>>(&deriv, 1),
                  std::span<double>(&out, 1));
  return out;
}

template <int Dim>
JetField<Dim> sample_from_function(const GridSpec<Dim>& grid, int k,
                                   const JetFunction<Dim>& f, double time) {
  JetField<Dim> field(grid, k, time);
  for (int n = 0; n < grid.node_count(); ++n) {
    const auto x = grid.node_position(grid.multi_index(n));
    auto jet = field.jet(n);
    for (int j = 0; j < field.jet_size(); ++j)
      jet[j] = f(x, hermite::jet_alpha<Dim>(j, k));
  }
  return field;
}

template <int Dim>
double linf_node_error(const JetField<Dim>& field,
                       const ScalarFunction<Dim>& exact) {
  const auto& grid = field.grid();
  double err = 0.0;
  for (int n = 0; n < grid.node_count(); ++n) {
    const auto x = grid.node_position(grid.multi_index(n));
    err = std::max(err, std::abs(field.jet(n)[0] - exact(x)));
  }
  return err;
}

template <int Dim>
std::string jet_entry_name(const MultiIndex<Dim>& alpha) {
  static constexpr char kAxes[] = {'x', 'y', 'z'};
  std::string name = "phi";
  if (total_order<Dim>(alpha) == 0) return name;
  name += '_';
  for (int i = 0; i < Dim; ++i) name.append(static_cast<std::size_t>(alpha[i]), kAxes[i]);
  return name;
}

template <int Dim>
void write_field_csv(std::ostream& os, const JetField<Dim>& field) {
  static_assert(Dim == 1 || Dim == 2);
  const auto& grid = field.grid();
  if constexpr (Dim == 1) {
    os << "i,x,";
  } else {
    os << "i,j,x,y,";
  }
  for (int j = 0; j < field.jet_size(); ++j) {
    if (j) os << ',';
    os << jet_entry_name<Dim>(hermite::jet_alpha<Dim>(j, field.k()));
  }
  os << '\n';
  char buf[32];
  for (int n = 0; n < grid.node_count(); ++n) {
    const auto m = grid.multi_index(n);
    const auto x = grid.node_position(m);
    for (int i = 0; i < Dim; ++i) os << m[i] << ',';
    for (int i = 0; i < Dim; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", x[i]);
      os << buf << ',';
    }
    const auto jet = field.jet(n);
    for (int j = 0; j < field.jet_size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", jet[j]);
      if (j) os << ',';
      os << buf;
    }
    os << '\n';
  }
}

#define JETADV_INSTANTIATE(D)                                                  \
  template struct GridSpec<D>;                                                 \
  template class JetField<D>;                                                  \
  template CellLocation<D> locate_cell(const GridSpec<D>&, const Point<D>&);   \
  template hermite::CellData<D> gather_cell(const JetField<D>&,                \
                                            const MultiIndex<D>&);             \
  template void eval_in_cell(const JetField<D>&, const MultiIndex<D>&,         \
                             const Point<D>&, std::span<const MultiIndex<D>>,  \
                             std::span<double>);                               \
  template double eval_in_cell(const JetField<D>&, const MultiIndex<D>&,       \
                               const Point<D>&, const MultiIndex<D>&);         \
  template double eval_global(const JetField<D>&, const Point<D>&,             \
                              const MultiIndex<D>&);                           \
  template JetField<D> sample_from_function(const GridSpec<D>&, int,           \
                                            const JetFunction<D>&, double);    \
  template double linf_node_error(const JetField<D>&,                          \
                                  const ScalarFunction<D>&);                   \
  template std::string jet_entry_name<D>(const MultiIndex<D>&);                \
  template void write_field_csv(std::ostream&, const JetField<D>&);

JETADV_INSTANTIATE(1)
JETADV_INSTANTIATE(2)

#undef JETADV_INSTANTIATE

}  // namespace jetadv
