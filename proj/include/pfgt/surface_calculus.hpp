// surface_calculus.hpp -- closed-form first variations of the Darboux frame,
// curvature, and measures under x -> x + eps u, their finite-difference
// oracle, and the surface divergence theorem with edge surplus
#pragma once

#include <cmath>

#include "pfgt/microtraction.hpp"
#include "pfgt/surface_geometry.hpp"

namespace pfgt {

// Darboux data at a patch point with a chosen unit tangent direction t
// (tangential to the patch); nu = t x n completes the triad.
struct DarbouxPoint {
  PatchFrame frame;
  Vec3 t;
  Vec3 nu;
};

inline DarbouxPoint darboux_point(const ParamPatch& p, double u, double v,
                                  double mix = 0.35) {
  DarbouxPoint d;
  d.frame = eval_frame(p, u, v);
  Vec3 t = d.frame.xu + mix * d.frame.xv;
  t -= d.frame.n * d.frame.n.dot(t);
  const double tn = t.norm();
  if (!(tn > 1e-12)) throw degenerate_frame("tangent direction is degenerate");
  d.t = t / tn;
  d.nu = d.t.cross(d.frame.n);
  return d;
}

// ---- closed forms -------------------------------------------------------------

struct FrameVariation {
  Vec3 dt, dn, dnu;
};

// dt = du/ds - (du/ds . t) t
// dn = -(Grad_S u)^T n
// dnu = -(du/ds . nu) t + (Grad_S u)^T n x t
inline FrameVariation frame_variation(const DarbouxPoint& d, const Deformation& def) {
  const Mat3 gu = def.grad(d.frame.x);
  const Vec3 du_ds = gu * d.t;
  const Mat3 grad_s = gu * d.frame.P;
  const Vec3 v = grad_s.transpose() * d.frame.n;
  FrameVariation fv;
  fv.dt = du_ds - du_ds.dot(d.t) * d.t;
  fv.dn = -v;
  fv.dnu = -du_ds.dot(d.nu) * d.t + v.cross(d.t);
  return fv;
}

// dL = Grad_S((Grad_S u)^T n) - L Grad_S u + L (Grad_S u)^T n (x) n
inline Mat3 curvature_variation(const ParamPatch& p, double u, double v,
                                const Deformation& def) {
  const PatchFrame fr = eval_frame(p, u, v);
  const Mat3 gu = def.grad(fr.x);
  const auto hu = def.hess(fr.x);
  const Mat3 grad_s = gu * fr.P;
  const Vec3 w = grad_s.transpose() * fr.n;  // (Grad_S u)^T n

  // Grad_S w = w_u (x) g^u + w_v (x) g^v with
  // w_a = P_a (grad u)^T n + P (d_a grad u)^T n + P (grad u)^T n_a
  auto dgrad = [&](const Vec3& xdir) {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = xdir.dot(hu[i].col(j));
    return m;  // m(i,j) = d/d(dir) of du_i/dx_j
  };
  auto w_a = [&](const Vec3& xdir, const Vec3& ndir) {
    const Mat3 Pd = -(ndir * fr.n.transpose() + fr.n * ndir.transpose());
    return Vec3(Pd * (gu.transpose() * fr.n) + fr.P * (dgrad(xdir).transpose() * fr.n) +
                fr.P * (gu.transpose() * ndir));
  };
  const Vec3 wu = w_a(fr.xu, fr.nu_u);
  const Vec3 wv = w_a(fr.xv, fr.nu_v);
  const Mat3 grad_s_w = wu * fr.gu.transpose() + wv * fr.gv.transpose();

  return grad_s_w - fr.L * grad_s + (fr.L * w) * fr.n.transpose();
}

struct MeasureVariation {
  double length_rate;  // d|F_eps t|/deps     = grad u : t (x) t
  double area_rate;    // d(J |F^-T n|)/deps  = Div_S u
  double volume_rate;  // dJ/deps             = div u
};

inline MeasureVariation measure_variations(const DarbouxPoint& d,
                                           const Deformation& def) {
  const Mat3 gu = def.grad(d.frame.x);
  MeasureVariation mv;
  mv.length_rate = d.t.dot(gu * d.t);
  mv.area_rate = (gu * d.frame.P).trace();
  mv.volume_rate = gu.trace();
  return mv;
}

// ---- finite-difference oracle ---------------------------------------------------

enum class VariedQuantity {
  tangent,       // t_eps = F_eps t / |F_eps t|
  normal,        // n_eps = F_eps^-T n / |F_eps^-T n|
  tangent_normal,// nu_eps = t_eps x n_eps
  curvature,     // L_eps recomputed on the deformed patch
  length,        // |F_eps t|
  area,          // J_eps |F_eps^-T n|
  volume         // J_eps = det F_eps
};

namespace scdetail {

struct OracleSample {
  Vec3 vec = Vec3::Zero();
  Mat3 mat = Mat3::Zero();
  double scalar = 0.0;
};

inline OracleSample sample_quantity(const ParamPatch& p, double u, double v,
                                    const Vec3& t0, const Deformation& def,
                                    double eps, VariedQuantity q) {
  OracleSample s;
  if (q == VariedQuantity::curvature) {
    const ParamPatch pd = deformed_patch(p, def, eps);
    s.mat = eval_frame(pd, u, v).L;
    return s;
  }
  const PatchFrame fr = eval_frame(p, u, v);
  const Mat3 F = Mat3::Identity() + eps * def.grad(fr.x);
  const double J = F.determinant();
  if (!(std::abs(J) > 1e-8)) throw degenerate_frame("deformation is degenerate");
  const Vec3 Ft = F * t0;
  const Vec3 Fmtn = F.inverse().transpose() * fr.n;
  switch (q) {
    case VariedQuantity::tangent: s.vec = Ft.normalized(); break;
    case VariedQuantity::normal: s.vec = Fmtn.normalized(); break;
    case VariedQuantity::tangent_normal:
      s.vec = Ft.normalized().cross(Fmtn.normalized());
      break;
    case VariedQuantity::length: s.scalar = Ft.norm(); break;
    case VariedQuantity::area: s.scalar = J * Fmtn.norm(); break;
    case VariedQuantity::volume: s.scalar = J; break;
    default: break;
  }
  return s;
}

}  // namespace scdetail

// Central difference (value(+eps) - value(-eps)) / (2 eps) of the selected
// quantity at eps = 0. Vector quantities land in .vec, the curvature in .mat,
// measures in .scalar.
inline scdetail::OracleSample fd_variation_oracle(const ParamPatch& p, double u,
                                                  double v, const Vec3& t0,
                                                  const Deformation& def,
                                                  double eps, VariedQuantity q) {
  if (!(eps > 0.0) || eps > 1e-3)
    throw std::invalid_argument("fd_variation_oracle: need 0 < eps <= 1e-3");
  const auto a = scdetail::sample_quantity(p, u, v, t0, def, +eps, q);
  const auto b = scdetail::sample_quantity(p, u, v, t0, def, -eps, q);
  scdetail::OracleSample out;
  out.vec = (a.vec - b.vec) / (2.0 * eps);
  out.mat = (a.mat - b.mat) / (2.0 * eps);
  out.scalar = (a.scalar - b.scalar) / (2.0 * eps);
  return out;
}

// ---- surface divergence theorem with edge surplus --------------------------------

struct SurplusReport {
  double lhs = 0.0;  // integral of Div_S(P g) over the surface
  double rhs = 0.0;  // integral of [[g . nu]] over the edges
  double diff = 0.0;
};

// g is a smooth vector field with analytic gradient.
struct SmoothVectorField {
  std::function<Vec3(const Vec3&)> value;
  std::function<Mat3(const Vec3&)> grad;  // grad(i,j) = dg_i/dx_j
};

inline double div_s_pg(const SmoothVectorField& g, const PatchFrame& fr) {
  const Vec3 gv = g.value(fr.x);
  const Mat3 gg = g.grad(fr.x);
  auto dw = [&](const Vec3& xdir, const Vec3& ndir) {
    const Mat3 Pd = -(ndir * fr.n.transpose() + fr.n * ndir.transpose());
    return Vec3(Pd * gv + fr.P * (gg * xdir));
  };
  return dw(fr.xu, fr.nu_u).dot(fr.gu) + dw(fr.xv, fr.nu_v).dot(fr.gv);
}

inline SurplusReport surplus_divergence_check(const ClosedSurface& s,
                                              const SmoothVectorField& g,
                                              int order = 8, int panels_u = 1,
                                              int panels_v = 1) {
  SurplusReport r;
  for (const auto& p : s.patches)
    r.lhs += integrate_patch(
        p, [&](const PatchFrame& fr) { return div_s_pg(g, fr); }, order, panels_u,
        panels_v);
  for (const auto& e : s.edges)
    r.rhs += integrate_edge(
        e,
        [&](const EdgeCurve& ec, double t) {
          const Vec3 x = ec.pos(t);
          return g.value(x).dot(ec.nu_plus) + g.value(x).dot(ec.nu_minus);
        },
        order);
  r.diff = std::abs(r.lhs - r.rhs);
  return r;
}

}  // namespace pfgt
