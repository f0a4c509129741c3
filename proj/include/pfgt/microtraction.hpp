// microtraction.hpp -- surface, surface-couple, boundary-edge and
// internal-edge microtractions induced by the microstress pair (xi, Sigma)
// on oriented surfaces
#pragma once

#include <array>
#include <functional>

#include "pfgt/surface_geometry.hpp"

namespace pfgt {

// Smooth stress data: values and first derivatives at arbitrary points.
// grad_sigma[k] holds dSigma/dx_k.
struct TractionFields {
  std::function<Vec3(const Vec3&)> xi;
  std::function<Mat3(const Vec3&)> sigma;
  std::function<std::array<Mat3, 3>(const Vec3&)> grad_sigma;
};

// zeta = xi - div Sigma (row divergence, (div S)_i = dS_ij/dx_j).
inline Vec3 zeta_field(const TractionFields& f, const Vec3& x) {
  const auto gs = f.grad_sigma(x);
  Vec3 div = Vec3::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) div[i] += gs[j](i, j);
  return f.xi(x) - div;
}

// sigma_S = n . Sigma n
inline double hypermicrotraction(const Mat3& sigma, const Vec3& n) {
  return n.dot(sigma * n);
}

// varpi_S = sigma_S n
inline Vec3 surface_couple(const Mat3& sigma, const Vec3& n) {
  return hypermicrotraction(sigma, n) * n;
}

// tau_{dS} = nu . Sigma n
inline double boundary_edge_microtraction(const Mat3& sigma, const Vec3& nu,
                                          const Vec3& n) {
  return nu.dot(sigma * n);
}

// tau_C = [[nu . Sigma n]] = nu+ . Sigma n+ + nu- . Sigma n-
inline double internal_edge_microtraction(const Mat3& sigma, const Vec3& nu_p,
                                          const Vec3& n_p, const Vec3& nu_m,
                                          const Vec3& n_m) {
  return nu_p.dot(sigma * n_p) + nu_m.dot(sigma * n_m);
}

// Surface divergence of the tangential field w = P Sigma n along the patch,
// assembled intrinsically from parametric derivatives:
//   dw/du = P_u Sigma n + P (dSigma/du) n + P Sigma dn/du,  P_u = -(n_u (x) n + n (x) n_u)
inline double div_s_p_sigma_n(const TractionFields& f, const PatchFrame& fr) {
  const Mat3 sig = f.sigma(fr.x);
  const auto gs = f.grad_sigma(fr.x);
  auto dir_deriv = [&](const Vec3& d) {
    Mat3 m = Mat3::Zero();
    for (int k = 0; k < 3; ++k) m += gs[k] * d[k];
    return m;
  };
  auto dw = [&](const Vec3& xdir, const Vec3& ndir) {
    const Mat3 Pd = -(ndir * fr.n.transpose() + fr.n * ndir.transpose());
    return Vec3(Pd * (sig * fr.n) + fr.P * (dir_deriv(xdir) * fr.n) +
                fr.P * (sig * ndir));
  };
  const Vec3 wu = dw(fr.xu, fr.nu_u);
  const Vec3 wv = dw(fr.xv, fr.nu_v);
  return wu.dot(fr.gu) + wv.dot(fr.gv);
}

// xi_S = (xi - div Sigma) . n - Div_S(P Sigma n)
inline double surface_microtraction(const TractionFields& f, const PatchFrame& fr) {
  return zeta_field(f, fr.x).dot(fr.n) - div_s_p_sigma_n(f, fr);
}

// Stress data of the second-grade constitutive closure built from an analytic
// phase field: xi = -2 lambda l^2 grad phi, Sigma = lambda l^4 (lap phi) 1.
struct AnalyticPhase3d {
  std::function<double(const Vec3&)> phi;
  std::function<Vec3(const Vec3&)> grad;
  std::function<Mat3(const Vec3&)> hess;
  std::function<Vec3(const Vec3&)> grad_lap;  // grad of the laplacian
};

inline TractionFields constitutive_traction_fields(const AnalyticPhase3d& p,
                                                   double lambda, double ell) {
  const double l2 = ell * ell, l4 = l2 * l2;
  TractionFields f;
  f.xi = [p, lambda, l2](const Vec3& x) { return Vec3(-2.0 * lambda * l2 * p.grad(x)); };
  f.sigma = [p, lambda, l4](const Vec3& x) {
    return Mat3(lambda * l4 * p.hess(x).trace() * Mat3::Identity());
  };
  f.grad_sigma = [p, lambda, l4](const Vec3& x) {
    const Vec3 gl = p.grad_lap(x);
    std::array<Mat3, 3> gs;
    for (int k = 0; k < 3; ++k) gs[k] = lambda * l4 * gl[k] * Mat3::Identity();
    return gs;
  };
  return f;
}

}  // namespace pfgt
