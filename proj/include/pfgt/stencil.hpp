// stencil.hpp -- bounded-grid fields with two ghost layers per face and the
// 2nd-order central-difference operators acting on them
#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "pfgt/errors.hpp"
#include "pfgt/grid.hpp"

namespace pfgt {

// Interior data plus a two-layer ghost frame. Ghost entries start as NaN and
// must be filled by a boundary closure before any operator touches them.
struct PaddedField {
  static constexpr int pad = 2;
  Grid grid;  // the interior (bounded) grid
  std::vector<double> v;

  PaddedField() = default;
  explicit PaddedField(const Grid& g)
      : grid(g),
        v(static_cast<std::size_t>(g.nx + 2 * pad) *
              (g.dim == 2 ? g.ny + 2 * pad : 1),
          std::numeric_limits<double>::quiet_NaN()) {
    if (g.topology != Topology::bounded)
      throw std::invalid_argument("PaddedField: grid must be bounded");
  }

  int stride() const { return grid.nx + 2 * pad; }

  double& at(int ix, int iy = 0) {
    const int row = grid.dim == 2 ? iy + pad : 0;
    return v[static_cast<std::size_t>(row) * stride() + (ix + pad)];
  }
  double at(int ix, int iy = 0) const {
    const int row = grid.dim == 2 ? iy + pad : 0;
    return v[static_cast<std::size_t>(row) * stride() + (ix + pad)];
  }

  bool ghosts_filled() const {
    for (double x : v)
      if (std::isnan(x)) return false;
    return true;
  }
};

inline PaddedField make_padded(const ScalarField& f) {
  PaddedField p(f.grid);
  for (int iy = 0; iy < (f.grid.dim == 2 ? f.grid.ny : 1); ++iy)
    for (int ix = 0; ix < f.grid.nx; ++ix) p.at(ix, iy) = f(ix, iy);
  return p;
}

inline ScalarField unpad(const PaddedField& p) {
  ScalarField f(p.grid);
  for (int iy = 0; iy < (p.grid.dim == 2 ? p.grid.ny : 1); ++iy)
    for (int ix = 0; ix < p.grid.nx; ++ix) f(ix, iy) = p.at(ix, iy);
  return f;
}

namespace fd {

inline void require_closure(const PaddedField& p) {
  if (!p.ghosts_filled())
    throw bounded_without_closure("bounded-grid operator called without ghost data");
}

inline ScalarField laplacian(const PaddedField& p) {
  require_closure(p);
  const Grid& g = p.grid;
  ScalarField out(g);
  const double cx = 1.0 / (g.hx * g.hx);
  const double cy = g.dim == 2 ? 1.0 / (g.hy * g.hy) : 0.0;
  for (int iy = 0; iy < (g.dim == 2 ? g.ny : 1); ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      double s = cx * (p.at(ix - 1, iy) - 2.0 * p.at(ix, iy) + p.at(ix + 1, iy));
      if (g.dim == 2)
        s += cy * (p.at(ix, iy - 1) - 2.0 * p.at(ix, iy) + p.at(ix, iy + 1));
      out(ix, iy) = s;
    }
  return out;
}

inline ScalarField bilaplacian(const PaddedField& p) {
  require_closure(p);
  const Grid& g = p.grid;
  ScalarField out(g);
  const double cx = 1.0 / (g.hx * g.hx);
  const double cy = g.dim == 2 ? 1.0 / (g.hy * g.hy) : 0.0;
  for (int iy = 0; iy < (g.dim == 2 ? g.ny : 1); ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const double xxxx =
          cx * cx *
          (p.at(ix - 2, iy) - 4.0 * p.at(ix - 1, iy) + 6.0 * p.at(ix, iy) -
           4.0 * p.at(ix + 1, iy) + p.at(ix + 2, iy));
      if (g.dim == 1) {
        out(ix, iy) = xxxx;
        continue;
      }
      const double yyyy =
          cy * cy *
          (p.at(ix, iy - 2) - 4.0 * p.at(ix, iy - 1) + 6.0 * p.at(ix, iy) -
           4.0 * p.at(ix, iy + 1) + p.at(ix, iy + 2));
      const double xxyy =
          cx * cy *
          ((p.at(ix - 1, iy - 1) - 2.0 * p.at(ix, iy - 1) + p.at(ix + 1, iy - 1)) -
           2.0 * (p.at(ix - 1, iy) - 2.0 * p.at(ix, iy) + p.at(ix + 1, iy)) +
           (p.at(ix - 1, iy + 1) - 2.0 * p.at(ix, iy + 1) + p.at(ix + 1, iy + 1)));
      out(ix, iy) = xxxx + yyyy + 2.0 * xxyy;
    }
  return out;
}

inline VectorField gradient(const PaddedField& p) {
  require_closure(p);
  const Grid& g = p.grid;
  VectorField out(g);
  for (int iy = 0; iy < (g.dim == 2 ? g.ny : 1); ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const std::size_t i = g.idx(ix, iy);
      out.comp(0)[i] = (p.at(ix + 1, iy) - p.at(ix - 1, iy)) / (2.0 * g.hx);
      if (g.dim == 2)
        out.comp(1)[i] = (p.at(ix, iy + 1) - p.at(ix, iy - 1)) / (2.0 * g.hy);
    }
  return out;
}

inline SymTensorField hessian(const PaddedField& p) {
  require_closure(p);
  const Grid& g = p.grid;
  SymTensorField out(g);
  const double cx = 1.0 / (g.hx * g.hx);
  const double cy = g.dim == 2 ? 1.0 / (g.hy * g.hy) : 0.0;
  for (int iy = 0; iy < (g.dim == 2 ? g.ny : 1); ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const std::size_t i = g.idx(ix, iy);
      out.comp(0)[i] =
          cx * (p.at(ix - 1, iy) - 2.0 * p.at(ix, iy) + p.at(ix + 1, iy));
      if (g.dim == 2) {
        out.comp(1)[i] =
            cy * (p.at(ix, iy - 1) - 2.0 * p.at(ix, iy) + p.at(ix, iy + 1));
        out.comp(2)[i] = (p.at(ix + 1, iy + 1) - p.at(ix + 1, iy - 1) -
                          p.at(ix - 1, iy + 1) + p.at(ix - 1, iy - 1)) /
                         (4.0 * g.hx * g.hy);
      }
    }
  return out;
}

// (1 + ell^2 lap)^2 phi = phi + 2 ell^2 lap phi + ell^4 bilap phi
inline ScalarField sh_linear(const PaddedField& p, double ell) {
  const ScalarField lap = laplacian(p);
  const ScalarField bilap = bilaplacian(p);
  const double l2 = ell * ell;
  ScalarField res(p.grid);
  for (int iy = 0; iy < (p.grid.dim == 2 ? p.grid.ny : 1); ++iy)
    for (int ix = 0; ix < p.grid.nx; ++ix) {
      const std::size_t i = p.grid.idx(ix, iy);
      res.v[i] = p.at(ix, iy) + 2.0 * l2 * lap.v[i] + l2 * l2 * bilap.v[i];
    }
  return res;
}

// Central x/y derivative of a node field, one-sided 2nd-order at the walls.
// Wall values are only consistent to first order through the closure; callers
// doing convergence studies restrict to interior nodes.
inline ScalarField derivative_interior(const ScalarField& f, int axis) {
  const Grid& g = f.grid;
  ScalarField out(g);
  const double h = axis == 0 ? g.hx : g.hy;
  const int n = axis == 0 ? g.nx : (g.dim == 2 ? g.ny : 1);
  auto val = [&](int i, int j) { return axis == 0 ? f(i, j) : f(j, i); };
  auto set = [&](int i, int j, double x) {
    if (axis == 0)
      out(i, j) = x;
    else
      out(j, i) = x;
  };
  const int m = axis == 0 ? (g.dim == 2 ? g.ny : 1) : g.nx;
  for (int j = 0; j < m; ++j) {
    set(0, j, (-3.0 * val(0, j) + 4.0 * val(1, j) - val(2, j)) / (2.0 * h));
    for (int i = 1; i < n - 1; ++i)
      set(i, j, (val(i + 1, j) - val(i - 1, j)) / (2.0 * h));
    set(n - 1, j,
        (3.0 * val(n - 1, j) - 4.0 * val(n - 2, j) + val(n - 3, j)) / (2.0 * h));
  }
  return out;
}

}  // namespace fd

// Quadrature of a node field: rectangle rule on periodic grids (spectrally
// accurate there), trapezoid on bounded grids.
inline double integrate(const ScalarField& f) {
  const Grid& g = f.grid;
  double s = 0.0;
  if (g.topology == Topology::periodic) {
    for (double x : f.v) s += x;
    return s * (g.dim == 2 ? g.hx * g.hy : g.hx);
  }
  auto wx = [&](int i) { return (i == 0 || i == g.nx - 1) ? 0.5 : 1.0; };
  if (g.dim == 1) {
    for (int i = 0; i < g.nx; ++i) s += wx(i) * f(i);
    return s * g.hx;
  }
  auto wy = [&](int j) { return (j == 0 || j == g.ny - 1) ? 0.5 : 1.0; };
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) s += wx(ix) * wy(iy) * f(ix, iy);
  return s * g.hx * g.hy;
}

inline void ensure_finite(const ScalarField& f, const char* what) {
  if (!f.finite())
    throw numerical_failure(std::string("non-finite values in ") + what);
}

}  // namespace pfgt
