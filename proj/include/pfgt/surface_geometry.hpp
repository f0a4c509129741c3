// surface_geometry.hpp -- analytic parametric patches, Darboux frames,
// curvature tensors, edge frames, and Gauss quadrature
#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "pfgt/errors.hpp"

namespace pfgt {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Analytic patch (u, v) -> x with first and second parametric derivatives.
struct ParamPatch {
  std::function<Vec3(double, double)> pos;
  std::function<Vec3(double, double)> du, dv;
  std::function<Vec3(double, double)> duu, duv, dvv;
  double u0 = 0.0, u1 = 1.0, v0 = 0.0, v1 = 1.0;  // parameter rectangle
};

// Frame data at one patch point. Sign convention L = -Grad_S n; a sphere with
// outward normal has L = -P/R.
struct PatchFrame {
  Vec3 x;
  Vec3 xu, xv;
  Vec3 n;
  Vec3 nu_u, nu_v;  // dn/du, dn/dv
  Vec3 gu, gv;      // dual tangent basis
  Mat3 P;           // 1 - n (x) n
  Mat3 L;           // curvature tensor
  double area_element;
};

inline PatchFrame eval_frame(const ParamPatch& p, double u, double v) {
  PatchFrame f;
  f.x = p.pos(u, v);
  f.xu = p.du(u, v);
  f.xv = p.dv(u, v);
  const Vec3 w = f.xu.cross(f.xv);
  const double wn = w.norm();
  if (!(wn > 1e-12)) throw degenerate_frame("patch frame is degenerate");
  f.n = w / wn;
  f.area_element = wn;

  const double E = f.xu.dot(f.xu), F = f.xu.dot(f.xv), G = f.xv.dot(f.xv);
  const double det = E * G - F * F;
  if (!(std::abs(det) > 1e-300)) throw degenerate_frame("metric is degenerate");
  f.gu = (G * f.xu - F * f.xv) / det;
  f.gv = (E * f.xv - F * f.xu) / det;

  const Vec3 xuu = p.duu(u, v), xuv = p.duv(u, v), xvv = p.dvv(u, v);
  const Vec3 wu = xuu.cross(f.xv) + f.xu.cross(xuv);
  const Vec3 wv = xuv.cross(f.xv) + f.xu.cross(xvv);
  f.nu_u = (wu - f.n * f.n.dot(wu)) / wn;
  f.nu_v = (wv - f.n * f.n.dot(wv)) / wn;

  f.P = Mat3::Identity() - f.n * f.n.transpose();
  f.L = -(f.nu_u * f.gu.transpose() + f.nu_v * f.gv.transpose());
  return f;
}

// Frame of the oppositely oriented surface: n and L flip, P is unchanged.
inline PatchFrame flip_orientation(const PatchFrame& f) {
  PatchFrame g = f;
  g.n = -f.n;
  g.nu_u = -f.nu_u;
  g.nu_v = -f.nu_v;
  g.L = -f.L;
  return g;
}

inline void validate_frame(const PatchFrame& f) {
  if (std::abs(f.n.norm() - 1.0) > 1e-12)
    throw degenerate_frame("frame normal is not unit");
  if ((f.L * f.n).norm() > 1e-10)
    throw degenerate_frame("curvature tensor is not tangential");
}

// ---- stock patches ----------------------------------------------------------

inline ParamPatch sphere_patch(double R, const Vec3& center,
                               double th0 = 0.15, double th1 = std::numbers::pi - 0.15,
                               double ph0 = 0.0, double ph1 = 2.0 * std::numbers::pi) {
  ParamPatch p;
  p.pos = [R, center](double th, double ph) -> Vec3 {
    return center + R * Vec3(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                             std::cos(th));
  };
  p.du = [R](double th, double ph) -> Vec3 {
    return R * Vec3(std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph),
                    -std::sin(th));
  };
  p.dv = [R](double th, double ph) -> Vec3 {
    return R * Vec3(-std::sin(th) * std::sin(ph), std::sin(th) * std::cos(ph), 0.0);
  };
  p.duu = [R](double th, double ph) -> Vec3 {
    return -R * Vec3(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                     std::cos(th));
  };
  p.duv = [R](double th, double ph) -> Vec3 {
    return R * Vec3(-std::cos(th) * std::sin(ph), std::cos(th) * std::cos(ph), 0.0);
  };
  p.dvv = [R](double th, double ph) -> Vec3 {
    return -R * Vec3(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), 0.0);
  };
  p.u0 = th0;
  p.u1 = th1;
  p.v0 = ph0;
  p.v1 = ph1;
  return p;
}

inline ParamPatch plane_patch(const Vec3& origin, const Vec3& e1, const Vec3& e2) {
  ParamPatch p;
  p.pos = [=](double u, double v) { return Vec3(origin + u * e1 + v * e2); };
  p.du = [=](double, double) { return e1; };
  p.dv = [=](double, double) { return e2; };
  p.duu = [](double, double) { return Vec3::Zero(); };
  p.duv = [](double, double) { return Vec3::Zero(); };
  p.dvv = [](double, double) { return Vec3::Zero(); };
  return p;
}

inline ParamPatch cylinder_patch(double R) {
  ParamPatch p;
  p.pos = [R](double u, double v) { return Vec3(R * std::cos(u), R * std::sin(u), v); };
  p.du = [R](double u, double) { return Vec3(-R * std::sin(u), R * std::cos(u), 0.0); };
  p.dv = [](double, double) { return Vec3(0.0, 0.0, 1.0); };
  p.duu = [R](double u, double) { return Vec3(-R * std::cos(u), -R * std::sin(u), 0.0); };
  p.duv = [](double, double) { return Vec3::Zero(); };
  p.dvv = [](double, double) { return Vec3::Zero(); };
  p.u0 = 0.0;
  p.u1 = 2.0 * std::numbers::pi;
  p.v0 = -1.0;
  p.v1 = 1.0;
  return p;
}

// Graph z = c[0] + c[1] x + c[2] y + c[3] x^2 + c[4] x y + c[5] y^2.
inline ParamPatch graph_patch(const std::array<double, 6>& c) {
  ParamPatch p;
  p.pos = [c](double u, double v) {
    return Vec3(u, v,
                c[0] + c[1] * u + c[2] * v + c[3] * u * u + c[4] * u * v +
                    c[5] * v * v);
  };
  p.du = [c](double u, double v) { return Vec3(1.0, 0.0, c[1] + 2.0 * c[3] * u + c[4] * v); };
  p.dv = [c](double u, double v) { return Vec3(0.0, 1.0, c[2] + c[4] * u + 2.0 * c[5] * v); };
  p.duu = [c](double, double) { return Vec3(0.0, 0.0, 2.0 * c[3]); };
  p.duv = [c](double, double) { return Vec3(0.0, 0.0, c[4]); };
  p.dvv = [c](double, double) { return Vec3(0.0, 0.0, 2.0 * c[5]); };
  p.u0 = -1.0;
  p.u1 = 1.0;
  p.v0 = -1.0;
  p.v1 = 1.0;
  return p;
}

// ---- smooth displacement fields ---------------------------------------------

// Displacement with analytic gradient and Hessian; quadratic polynomials are
// exact under both.
struct Deformation {
  std::function<Vec3(const Vec3&)> u;
  std::function<Mat3(const Vec3&)> grad;                 // grad(i,j) = du_i/dx_j
  std::function<std::array<Mat3, 3>(const Vec3&)> hess;  // hess[i](j,k)
};

inline Deformation quadratic_deformation(const std::array<Vec3, 1>& a,
                                         const Mat3& b,
                                         const std::array<Mat3, 3>& c) {
  // u_i = a_i + b(i,:) x + x^T c[i] x with c[i] symmetric
  Deformation d;
  d.u = [=](const Vec3& x) {
    Vec3 r = a[0] + b * x;
    for (int i = 0; i < 3; ++i) r[i] += x.dot(c[i] * x);
    return r;
  };
  d.grad = [=](const Vec3& x) {
    Mat3 gmat = b;
    for (int i = 0; i < 3; ++i) gmat.row(i) += (2.0 * c[i] * x).transpose();
    return gmat;
  };
  d.hess = [=](const Vec3&) {
    std::array<Mat3, 3> h;
    for (int i = 0; i < 3; ++i) h[i] = 2.0 * c[i];
    return h;
  };
  return d;
}

// Patch transported by x -> x + eps u(x); derivatives follow by the chain rule.
inline ParamPatch deformed_patch(const ParamPatch& p, const Deformation& d,
                                 double eps) {
  ParamPatch q = p;
  auto F = [d, eps](const Vec3& x) { return Mat3(Mat3::Identity() + eps * d.grad(x)); };
  auto hessdir = [d](const Vec3& x, const Vec3& a, const Vec3& b) {
    const auto h = d.hess(x);
    Vec3 r;
    for (int i = 0; i < 3; ++i) r[i] = a.dot(h[i] * b);
    return r;
  };
  q.pos = [p, d, eps](double u, double v) {
    const Vec3 x = p.pos(u, v);
    return Vec3(x + eps * d.u(x));
  };
  q.du = [p, F](double u, double v) { return Vec3(F(p.pos(u, v)) * p.du(u, v)); };
  q.dv = [p, F](double u, double v) { return Vec3(F(p.pos(u, v)) * p.dv(u, v)); };
  q.duu = [p, d, F, hessdir, eps](double u, double v) {
    const Vec3 x = p.pos(u, v);
    return Vec3(F(x) * p.duu(u, v) + eps * hessdir(x, p.du(u, v), p.du(u, v)));
  };
  q.duv = [p, d, F, hessdir, eps](double u, double v) {
    const Vec3 x = p.pos(u, v);
    return Vec3(F(x) * p.duv(u, v) + eps * hessdir(x, p.du(u, v), p.dv(u, v)));
  };
  q.dvv = [p, d, F, hessdir, eps](double u, double v) {
    const Vec3 x = p.pos(u, v);
    return Vec3(F(x) * p.dvv(u, v) + eps * hessdir(x, p.dv(u, v), p.dv(u, v)));
  };
  return q;
}

// ---- edges and closed surfaces ----------------------------------------------

// Edge of a (possibly nonsmooth) surface with the limiting Darboux data of the
// two adjacent smooth parts. Cube edges carry constant frames.
struct EdgeCurve {
  std::function<Vec3(double)> pos;
  std::function<Vec3(double)> tangent;  // d pos / d s (not necessarily unit)
  Vec3 n_plus, nu_plus, n_minus, nu_minus;
  double s0 = 0.0, s1 = 1.0;
};

struct ClosedSurface {
  std::vector<ParamPatch> patches;
  std::vector<EdgeCurve> edges;  // empty for smooth surfaces
};

// ---- Gauss-Legendre nodes ----------------------------------------------------

inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (t * p1 - p0) / (t * t - 1.0);
    x[i] = t;
    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

// Composite tensor-product Gauss quadrature of f(frame) dA over a patch.
template <class Fn>
double integrate_patch(const ParamPatch& p, Fn&& f, int order = 8,
                       int panels_u = 1, int panels_v = 1) {
  std::vector<double> x, w;
  gauss_legendre(order, x, w);
  double total = 0.0;
  const double du = (p.u1 - p.u0) / panels_u, dv = (p.v1 - p.v0) / panels_v;
  for (int pu = 0; pu < panels_u; ++pu)
    for (int pv = 0; pv < panels_v; ++pv) {
      const double ua = p.u0 + pu * du, va = p.v0 + pv * dv;
      for (int i = 0; i < order; ++i)
        for (int j = 0; j < order; ++j) {
          const double u = ua + 0.5 * du * (x[i] + 1.0);
          const double v = va + 0.5 * dv * (x[j] + 1.0);
          const PatchFrame fr = eval_frame(p, u, v);
          total += 0.25 * du * dv * w[i] * w[j] * f(fr) * fr.area_element;
        }
    }
  return total;
}

template <class Fn>
double integrate_edge(const EdgeCurve& e, Fn&& f, int order = 8) {
  std::vector<double> x, w;
  gauss_legendre(order, x, w);
  const double ds = e.s1 - e.s0;
  double total = 0.0;
  for (int i = 0; i < order; ++i) {
    const double s = e.s0 + 0.5 * ds * (x[i] + 1.0);
    total += 0.5 * ds * w[i] * f(e, s) * e.tangent(s).norm();
  }
  return total;
}

// The unit cube [0,1]^3 as six outward-oriented patches and twelve edges.
// At the edge between faces {x_i = c_i} and {x_j = c_j} the limiting normals
// are n+ = s_i e_i, n- = s_j e_j and the outward tangent-normals nu+ = s_j e_j,
// nu- = s_i e_i (s = +1 at the far face, -1 at the near one).
inline ClosedSurface unit_cube_surface() {
  ClosedSurface s;
  const Vec3 e[3] = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};

  auto face = [&](int axis, double c, bool flip) {
    const int a = (axis + 1) % 3, b = (axis + 2) % 3;
    const Vec3 ea = e[flip ? b : a], eb = e[flip ? a : b];
    ParamPatch p = plane_patch(c * e[axis], ea, eb);
    p.u0 = 0.0;
    p.u1 = 1.0;
    p.v0 = 0.0;
    p.v1 = 1.0;
    return p;
  };
  // outward normal = ea x eb: the near faces (c = 0) swap the tangents
  s.patches.push_back(face(0, 1.0, false));
  s.patches.push_back(face(0, 0.0, true));
  s.patches.push_back(face(1, 1.0, false));
  s.patches.push_back(face(1, 0.0, true));
  s.patches.push_back(face(2, 1.0, false));
  s.patches.push_back(face(2, 0.0, true));

  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const int k = 3 - i - j;
      for (int si : {-1, +1})
        for (int sj : {-1, +1}) {
          EdgeCurve ec;
          const double ci = si > 0 ? 1.0 : 0.0, cj = sj > 0 ? 1.0 : 0.0;
          const Vec3 ek = e[k];
          Vec3 base = ci * e[i] + cj * e[j];
          ec.pos = [base, ek](double t) { return Vec3(base + t * ek); };
          ec.tangent = [ek](double) { return ek; };
          ec.n_plus = si * e[i];
          ec.nu_plus = sj * e[j];
          ec.n_minus = sj * e[j];
          ec.nu_minus = si * e[i];
          s.edges.push_back(ec);
        }
    }
  return s;
}

inline ClosedSurface sphere_surface(double R, const Vec3& center) {
  ClosedSurface s;
  s.patches.push_back(sphere_patch(R, center, 0.0, std::numbers::pi));
  return s;
}

}  // namespace pfgt
