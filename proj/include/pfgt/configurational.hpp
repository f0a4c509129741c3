// configurational.hpp -- Eshelby stress and configurational force fields for
// both theories, and the pointwise balance div C + f + e = 0 as a numerical
// residual
#pragma once

#include <algorithm>
#include <cmath>

#include "pfgt/constitutive.hpp"
#include "pfgt/spectral.hpp"
#include "pfgt/stencil.hpp"

namespace pfgt {

struct ConfigurationalFields {
  TensorField C;      // configurational (Eshelby) stress
  VectorField f_int;  // internal configurational force
  VectorField e_ext;  // external configurational force
};

namespace cdetail {

// C = a 1 - grad phi (x) zeta - H^T Sigma with zeta = xi - div Sigma. The
// H^T Sigma product is formed in full, so anisotropic hypermicrostresses
// would go through unchanged.
inline void assemble(const VectorField& grad, const SymTensorField& hess,
                     const SymTensorField& sigma, const VectorField& div_sigma,
                     const ScalarField& spherical, const VectorField& force_int,
                     const ScalarField& gamma, double lambda, double ell,
                     ConfigurationalFields& out) {
  const Grid& g = spherical.grid;
  const double l2 = ell * ell;
  out.C = TensorField(g);
  out.f_int = force_int;
  out.e_ext = VectorField(g);
  const int dim = g.dim;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double gx = grad.at(0, i);
    const double gy = dim == 2 ? grad.at(1, i) : 0.0;
    const double zx = -2.0 * lambda * l2 * gx - div_sigma.at(0, i);
    const double zy = dim == 2 ? -2.0 * lambda * l2 * gy - div_sigma.at(1, i) : 0.0;
    const double a = spherical.v[i];
    if (dim == 1) {
      const double hts = hess.at(0, i) * sigma.at(0, i);
      out.C.at(0, i) = a - gx * zx - hts;
    } else {
      const double hxx = hess.at(0, i), hyy = hess.at(1, i), hxy = hess.at(2, i);
      const double sxx = sigma.at(0, i), syy = sigma.at(1, i), sxy = sigma.at(2, i);
      // (H^T Sigma) with symmetric H: row i of H times column j of Sigma
      const double ts_xx = hxx * sxx + hxy * sxy;
      const double ts_xy = hxx * sxy + hxy * syy;
      const double ts_yx = hxy * sxx + hyy * sxy;
      const double ts_yy = hxy * sxy + hyy * syy;
      out.C.at(0, i) = a - gx * zx - ts_xx;
      out.C.at(1, i) = -gx * zy - ts_xy;
      out.C.at(2, i) = -gy * zx - ts_yx;
      out.C.at(3, i) = a - gy * zy - ts_yy;
    }
    out.e_ext.at(0, i) = -gamma.v[i] * gx;
    if (dim == 2) out.e_ext.at(1, i) = -gamma.v[i] * gy;
  }
}

inline SymTensorField sigma_field(const SymTensorField& hess, double lambda,
                                  double ell) {
  const Grid& g = hess.grid;
  SymTensorField s(g);
  const double l4 = ell * ell * ell * ell;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double v = lambda * l4 * hess.trace(i);
    s.at(0, i) = v;
    if (g.dim == 2) s.at(1, i) = v;  // xy stays zero
  }
  return s;
}

inline ScalarField psi_field(const ScalarField& phi, const VectorField& grad,
                             const ScalarField& lap, double lambda, double ell,
                             const BulkPotential& f) {
  const Grid& g = phi.grid;
  ScalarField psi(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    double g2 = grad.at(0, i) * grad.at(0, i);
    if (g.dim == 2) g2 += grad.at(1, i) * grad.at(1, i);
    psi.v[i] = free_energy_density_point(phi.v[i], g2, lap.v[i], lambda, ell, f);
  }
  return psi;
}

}  // namespace cdetail

// C = psi 1 - grad phi (x) (xi - div Sigma) - (grad^2 phi)^T Sigma,
// f = -pi_dis grad phi = beta phi_dot grad phi, e = -gamma grad phi.
inline ConfigurationalFields eshelby_nonconserved(const ScalarField& phi,
                                                  const ScalarField& phi_dot,
                                                  const ScalarField& gamma,
                                                  const ShParams& p,
                                                  SpectralOps& ops) {
  const Grid& g = phi.grid;
  const VectorField grad = ops.gradient(phi);
  const SymTensorField hess = ops.hessian(phi);
  const ScalarField lap = ops.laplacian(phi);
  const SymTensorField sigma = cdetail::sigma_field(hess, p.lambda, p.ell);
  const VectorField div_sigma = ops.divergence(sigma);
  const ScalarField psi = cdetail::psi_field(phi, grad, lap, p.lambda, p.ell,
                                             p.potential);
  VectorField f_int(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double c = p.beta * phi_dot.v[i];
    f_int.at(0, i) = c * grad.at(0, i);
    if (g.dim == 2) f_int.at(1, i) = c * grad.at(1, i);
  }
  ConfigurationalFields out;
  cdetail::assemble(grad, hess, sigma, div_sigma, psi, f_int, gamma, p.lambda,
                    p.ell, out);
  return out;
}

// C = (psi - mu phi) 1 - grad phi (x) (xi - div Sigma) - (grad^2 phi)^T Sigma,
// f = phi grad mu, e = -gamma grad phi.
inline ConfigurationalFields eshelby_conserved(const ScalarField& phi,
                                               const ScalarField& mu,
                                               const ScalarField& gamma,
                                               const PfcParams& p,
                                               SpectralOps& ops) {
  const Grid& g = phi.grid;
  const VectorField grad = ops.gradient(phi);
  const SymTensorField hess = ops.hessian(phi);
  const ScalarField lap = ops.laplacian(phi);
  const SymTensorField sigma = cdetail::sigma_field(hess, p.lambda, p.ell);
  const VectorField div_sigma = ops.divergence(sigma);
  const VectorField grad_mu = ops.gradient(mu);
  ScalarField spherical = cdetail::psi_field(phi, grad, lap, p.lambda, p.ell,
                                             p.potential);
  VectorField f_int(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    spherical.v[i] -= mu.v[i] * phi.v[i];
    f_int.at(0, i) = phi.v[i] * grad_mu.at(0, i);
    if (g.dim == 2) f_int.at(1, i) = phi.v[i] * grad_mu.at(1, i);
  }
  ConfigurationalFields out;
  cdetail::assemble(grad, hess, sigma, div_sigma, spherical, f_int, gamma,
                    p.lambda, p.ell, out);
  return out;
}

// Bounded-grid (finite difference) variant; derivative fields come from the
// closed padded field, and the residual is meaningful on interior nodes.
inline ConfigurationalFields eshelby_nonconserved_fd(const PaddedField& pad,
                                                     const ScalarField& phi_dot,
                                                     const ScalarField& gamma,
                                                     const ShParams& p) {
  const Grid& g = pad.grid;
  const ScalarField phi = unpad(pad);
  const VectorField grad = fd::gradient(pad);
  const SymTensorField hess = fd::hessian(pad);
  const ScalarField lap = fd::laplacian(pad);
  const SymTensorField sigma = cdetail::sigma_field(hess, p.lambda, p.ell);
  VectorField div_sigma(g);
  {
    // isotropic Sigma: row divergence reduces to the gradient of its scalar
    ScalarField s(g);
    std::copy(sigma.comp(0), sigma.comp(0) + g.size(), s.v.begin());
    const ScalarField dx = fd::derivative_interior(s, 0);
    std::copy(dx.v.begin(), dx.v.end(), div_sigma.comp(0));
    if (g.dim == 2) {
      const ScalarField dy = fd::derivative_interior(s, 1);
      std::copy(dy.v.begin(), dy.v.end(), div_sigma.comp(1));
    }
  }
  const ScalarField psi = cdetail::psi_field(phi, grad, lap, p.lambda, p.ell,
                                             p.potential);
  VectorField f_int(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double c = p.beta * phi_dot.v[i];
    f_int.at(0, i) = c * grad.at(0, i);
    if (g.dim == 2) f_int.at(1, i) = c * grad.at(1, i);
  }
  ConfigurationalFields out;
  cdetail::assemble(grad, hess, sigma, div_sigma, psi, f_int, gamma, p.lambda,
                    p.ell, out);
  return out;
}

struct ConfigurationalResidual {
  ScalarField field;  // per-node max component of |div C + f + e|
  double max_norm = 0.0;
};

inline ConfigurationalResidual configurational_residual(
    const ConfigurationalFields& cf, SpectralOps& ops) {
  const Grid& g = cf.C.grid;
  const VectorField divC = ops.divergence(cf.C);
  ConfigurationalResidual r;
  r.field = ScalarField(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    double m = std::abs(divC.at(0, i) + cf.f_int.at(0, i) + cf.e_ext.at(0, i));
    if (g.dim == 2)
      m = std::max(m,
                   std::abs(divC.at(1, i) + cf.f_int.at(1, i) + cf.e_ext.at(1, i)));
    r.field.v[i] = m;
    r.max_norm = std::max(r.max_norm, m);
  }
  return r;
}

// Finite-difference residual over nodes at least `margin` away from the walls
// (div C needs neighbors of C that themselves avoided the pad edge).
inline ConfigurationalResidual configurational_residual_fd(
    const ConfigurationalFields& cf, int margin = 2) {
  const Grid& g = cf.C.grid;
  ConfigurationalResidual r;
  r.field = ScalarField(g);
  const int ny = g.dim == 2 ? g.ny : 1;
  auto deriv_comp = [&](int c, int axis) {
    ScalarField tmp(g);
    std::copy(cf.C.comp(c), cf.C.comp(c) + g.size(), tmp.v.begin());
    return fd::derivative_interior(tmp, axis);
  };
  if (g.dim == 1) {
    const ScalarField dCxx = deriv_comp(0, 0);
    for (int i = margin; i < g.nx - margin; ++i) {
      const double m = std::abs(dCxx.v[i] + cf.f_int.at(0, i) + cf.e_ext.at(0, i));
      r.field.v[i] = m;
      r.max_norm = std::max(r.max_norm, m);
    }
    return r;
  }
  const ScalarField dCxx = deriv_comp(0, 0), dCxy = deriv_comp(1, 1);
  const ScalarField dCyx = deriv_comp(2, 0), dCyy = deriv_comp(3, 1);
  for (int iy = margin; iy < ny - margin; ++iy)
    for (int ix = margin; ix < g.nx - margin; ++ix) {
      const std::size_t i = g.idx(ix, iy);
      double m = std::abs(dCxx.v[i] + dCxy.v[i] + cf.f_int.at(0, i) +
                          cf.e_ext.at(0, i));
      m = std::max(m, std::abs(dCyx.v[i] + dCyy.v[i] + cf.f_int.at(1, i) +
                               cf.e_ext.at(1, i)));
      r.field.v[i] = m;
      r.max_norm = std::max(r.max_norm, m);
    }
  return r;
}

}  // namespace pfgt
