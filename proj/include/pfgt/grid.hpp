// grid.hpp -- uniform 1D/2D grids and the scalar/vector/tensor fields on them
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace pfgt {

enum class Topology { periodic, bounded };

// Uniform node-centered grid. Periodic grids exclude the right endpoint
// (length = n*h); bounded grids include both endpoints (length = (n-1)*h).
// Storage is row-major with y outer: index = iy*nx + ix.
struct Grid {
  int dim = 1;
  int nx = 0, ny = 1;
  double hx = 0.0, hy = 0.0;
  double x0 = 0.0, y0 = 0.0;
  Topology topology = Topology::periodic;

  static Grid make_1d(int n, double h, Topology topo, double x0 = 0.0) {
    Grid g;
    g.dim = 1; g.nx = n; g.ny = 1; g.hx = h; g.hy = 0.0;
    g.x0 = x0; g.topology = topo;
    g.validate();
    return g;
  }

  static Grid make_2d(int nx, int ny, double hx, double hy, Topology topo,
                      double x0 = 0.0, double y0 = 0.0) {
    Grid g;
    g.dim = 2; g.nx = nx; g.ny = ny; g.hx = hx; g.hy = hy;
    g.x0 = x0; g.y0 = y0; g.topology = topo;
    g.validate();
    return g;
  }

  // Periodic box with nodes at j*L/n, j = 0..n-1.
  static Grid periodic_1d(int n, double length, double x0 = 0.0) {
    return make_1d(n, length / n, Topology::periodic, x0);
  }
  static Grid periodic_2d(int nx, int ny, double lx, double ly,
                          double x0 = 0.0, double y0 = 0.0) {
    return make_2d(nx, ny, lx / nx, ly / ny, Topology::periodic, x0, y0);
  }
  // Bounded interval [x0, x0+length] with both endpoints stored.
  static Grid bounded_1d(int n, double length, double x0 = 0.0) {
    return make_1d(n, length / (n - 1), Topology::bounded, x0);
  }
  static Grid bounded_2d(int nx, int ny, double lx, double ly,
                         double x0 = 0.0, double y0 = 0.0) {
    return make_2d(nx, ny, lx / (nx - 1), ly / (ny - 1), Topology::bounded, x0, y0);
  }

  void validate() const {
    if (dim != 1 && dim != 2) throw std::invalid_argument("Grid: dim must be 1 or 2");
    if (nx < 8 || (dim == 2 && ny < 8))
      throw std::invalid_argument("Grid: need at least 8 points per axis");
    if (dim == 1 && ny != 1) throw std::invalid_argument("Grid: 1D grid must have ny = 1");
    if (!(hx > 0.0) || (dim == 2 && !(hy > 0.0)))
      throw std::invalid_argument("Grid: spacing must be positive");
  }

  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  double length_x() const {
    return topology == Topology::periodic ? nx * hx : (nx - 1) * hx;
  }
  double length_y() const {
    if (dim == 1) return 0.0;
    return topology == Topology::periodic ? ny * hy : (ny - 1) * hy;
  }
  double x(int ix) const { return x0 + ix * hx; }
  double y(int iy) const { return dim == 2 ? y0 + iy * hy : 0.0; }
  std::size_t idx(int ix, int iy = 0) const {
    return static_cast<std::size_t>(iy) * nx + ix;
  }
  // Cell volume of the quadrature weight at a node (trapezoid on bounded grids).
  double cell_volume() const { return dim == 1 ? hx : hx * hy; }

  bool operator==(const Grid&) const = default;
};

namespace detail {
inline bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}
}  // namespace detail

struct ScalarField {
  Grid grid;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(const Grid& g, double fill = 0.0)
      : grid(g), v(g.size(), fill) {}

  double& operator()(int ix, int iy = 0) { return v[grid.idx(ix, iy)]; }
  double operator()(int ix, int iy = 0) const { return v[grid.idx(ix, iy)]; }
  std::size_t size() const { return v.size(); }
  bool finite() const { return detail::all_finite(v); }
};

// Components stored as consecutive planes: component c occupies
// v[c*grid.size() .. (c+1)*grid.size()).
struct MultiField {
  Grid grid;
  int ncomp = 0;
  std::vector<double> v;

  MultiField() = default;
  MultiField(const Grid& g, int nc)
      : grid(g), ncomp(nc), v(g.size() * nc, 0.0) {}

  double* comp(int c) { return v.data() + static_cast<std::size_t>(c) * grid.size(); }
  const double* comp(int c) const {
    return v.data() + static_cast<std::size_t>(c) * grid.size();
  }
  double& at(int c, std::size_t i) { return comp(c)[i]; }
  double at(int c, std::size_t i) const { return comp(c)[i]; }
  ScalarField extract(int c) const {
    ScalarField s(grid);
    const double* p = comp(c);
    std::copy(p, p + grid.size(), s.v.begin());
    return s;
  }
  bool finite() const { return detail::all_finite(v); }
};

// dim components: (x[, y]).
struct VectorField : MultiField {
  VectorField() = default;
  explicit VectorField(const Grid& g) : MultiField(g, g.dim) {}
};

// dim(dim+1)/2 components: 1D (xx); 2D (xx, yy, xy).
struct SymTensorField : MultiField {
  SymTensorField() = default;
  explicit SymTensorField(const Grid& g) : MultiField(g, g.dim * (g.dim + 1) / 2) {}
  double trace(std::size_t i) const {
    return grid.dim == 1 ? at(0, i) : at(0, i) + at(1, i);
  }
};

// dim*dim components, not assumed symmetric: 1D (xx); 2D (xx, xy, yx, yy).
struct TensorField : MultiField {
  TensorField() = default;
  explicit TensorField(const Grid& g) : MultiField(g, g.dim * g.dim) {}
};

}  // namespace pfgt
