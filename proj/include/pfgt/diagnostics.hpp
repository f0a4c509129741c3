// diagnostics.hpp -- global functionals (free energy, mass), the pointwise
// dissipation identity, and the discrete virtual-power balance
#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "pfgt/constitutive.hpp"
#include "pfgt/spectral.hpp"
#include "pfgt/stencil.hpp"

namespace pfgt {

struct DiagnosticsRow {
  double t, energy, mass, min_phi, max_phi, dissipation;
};

struct DiagnosticsSeries {
  std::vector<DiagnosticsRow> rows;
};

// ---- energy and mass -------------------------------------------------------

namespace ddetail {
inline ScalarField energy_density(const ScalarField& phi, const VectorField& grad,
                                  const ScalarField& lap, double lambda, double ell,
                                  const BulkPotential& f) {
  ScalarField psi(phi.grid);
  const Grid& g = phi.grid;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double g2 = grad.at(0, i) * grad.at(0, i);
    if (g.dim == 2) g2 += grad.at(1, i) * grad.at(1, i);
    psi.v[i] = free_energy_density_point(phi.v[i], g2, lap.v[i], lambda, ell, f);
  }
  return psi;
}
}  // namespace ddetail

template <class Params>
double total_free_energy(const ScalarField& phi, const Params& p, SpectralOps& ops) {
  const VectorField grad = ops.gradient(phi);
  const ScalarField lap = ops.laplacian(phi);
  return integrate(ddetail::energy_density(phi, grad, lap, p.lambda, p.ell, p.potential));
}

template <class Params>
double total_free_energy(const PaddedField& pad, const Params& p) {
  const VectorField grad = fd::gradient(pad);
  const ScalarField lap = fd::laplacian(pad);
  return integrate(ddetail::energy_density(unpad(pad), grad, lap, p.lambda, p.ell,
                                           p.potential));
}

inline double total_mass(const ScalarField& phi) { return integrate(phi); }

// ---- pointwise dissipation identity ----------------------------------------
// psidot + pi phidot - xi . grad phidot - Sigma : grad^2 phidot = -beta phidot^2
// for the shipped constitutive family, with psidot expanded by the chain rule.

template <int Dim>
struct RatePoint {
  PointState<Dim> state;  // phi, grad, hess, phi_dot
  std::array<double, Dim> grad_dot{};
  std::array<double, PointState<Dim>::nsym> hess_dot{};
};

template <int Dim>
double dissipation_identity_residual_point(const RatePoint<Dim>& r,
                                           const ShParams& p) {
  const auto& s = r.state;
  const double l2 = p.ell * p.ell;
  double g_dot_gdot = 0.0;
  for (int i = 0; i < Dim; ++i) g_dot_gdot += s.grad[i] * r.grad_dot[i];
  const double tr_hdot = Dim == 1 ? r.hess_dot[0] : r.hess_dot[0] + r.hess_dot[1];
  const double psidot =
      p.potential.d1(s.phi) * s.phi_dot +
      p.lambda * (s.phi * s.phi_dot - 2.0 * l2 * g_dot_gdot +
                  l2 * l2 * s.tr_hess() * tr_hdot);

  const double pi = internal_microforce(s.phi, s.phi_dot, p).total;
  const auto xi = microstress<Dim>(s.grad, p);
  double xi_gdot = 0.0;
  for (int i = 0; i < Dim; ++i) xi_gdot += xi[i] * r.grad_dot[i];
  const auto sg = hypermicrostress<Dim>(s.hess, p);
  double sg_hdot = sg[0] * r.hess_dot[0];
  if constexpr (Dim == 2)
    sg_hdot += sg[1] * r.hess_dot[1];  // off-diagonal of Sigma is zero
  const double lhs = psidot + pi * s.phi_dot - xi_gdot - sg_hdot;
  return std::abs(lhs + p.beta * s.phi_dot * s.phi_dot);
}

template <int Dim>
double dissipation_identity_residual(std::span<const RatePoint<Dim>> pts,
                                     const ShParams& p) {
  double m = 0.0;
  for (const auto& r : pts)
    m = std::max(m, dissipation_identity_residual_point(r, p));
  return m;
}

// Same identity on discrete trajectory data: phidot and psidot are backward
// differences, so the residual is O(dt).
inline double dissipation_identity_residual_discrete(const ScalarField& phi_now,
                                                     const ScalarField& phi_prev,
                                                     double dt, const ShParams& p,
                                                     SpectralOps& ops) {
  const Grid& g = phi_now.grid;
  ScalarField phidot(g);
  for (std::size_t i = 0; i < g.size(); ++i)
    phidot.v[i] = (phi_now.v[i] - phi_prev.v[i]) / dt;

  const VectorField gn = ops.gradient(phi_now);
  const ScalarField ln = ops.laplacian(phi_now);
  const VectorField gp = ops.gradient(phi_prev);
  const ScalarField lp = ops.laplacian(phi_prev);
  const VectorField gd = ops.gradient(phidot);
  const SymTensorField hd = ops.hessian(phidot);
  const SymTensorField hn = ops.hessian(phi_now);

  const ScalarField psi_now =
      ddetail::energy_density(phi_now, gn, ln, p.lambda, p.ell, p.potential);
  const ScalarField psi_prev =
      ddetail::energy_density(phi_prev, gp, lp, p.lambda, p.ell, p.potential);

  double res = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double psidot = (psi_now.v[i] - psi_prev.v[i]) / dt;
    const double pd = phidot.v[i];
    const double pi = internal_microforce(phi_now.v[i], pd, p).total;
    const double l2 = p.ell * p.ell;
    double xi_gdot = -2.0 * p.lambda * l2 * gn.at(0, i) * gd.at(0, i);
    if (g.dim == 2) xi_gdot += -2.0 * p.lambda * l2 * gn.at(1, i) * gd.at(1, i);
    const double sig = p.lambda * l2 * l2 * hn.trace(i);
    const double sg_hdot = sig * hd.trace(i);
    res = std::max(res, std::abs(psidot + pi * pd - xi_gdot - sg_hdot +
                                 p.beta * pd * pd));
  }
  return res;
}

// ---- virtual power balance --------------------------------------------------

struct VirtualPowerReport {
  double v_int = 0.0;
  double v_ext = 0.0;
  double residual = 0.0;
};

// Periodic domains: V_int = int(-pi chi + xi . grad chi + Sigma : grad^2 chi),
// V_ext = int(gamma chi); boundary terms vanish.
inline VirtualPowerReport virtual_power_residual(const ScalarField& phi,
                                                 const ScalarField& phi_dot,
                                                 const ScalarField& gamma,
                                                 const ScalarField& chi,
                                                 const ShParams& p,
                                                 SpectralOps& ops) {
  const Grid& g = phi.grid;
  const VectorField gphi = ops.gradient(phi);
  const VectorField gchi = ops.gradient(chi);
  const SymTensorField hphi = ops.hessian(phi);
  const SymTensorField hchi = ops.hessian(chi);

  const double l2 = p.ell * p.ell;
  ScalarField integrand(g), ext(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double pi = internal_microforce(phi.v[i], phi_dot.v[i], p).total;
    double xig = -2.0 * p.lambda * l2 * gphi.at(0, i) * gchi.at(0, i);
    if (g.dim == 2) xig += -2.0 * p.lambda * l2 * gphi.at(1, i) * gchi.at(1, i);
    const double sig = p.lambda * l2 * l2 * hphi.trace(i);
    const double sg_h = sig * hchi.trace(i);
    integrand.v[i] = -pi * chi.v[i] + xig + sg_h;
    ext.v[i] = gamma.v[i] * chi.v[i];
  }
  VirtualPowerReport r;
  r.v_int = integrate(integrand);
  r.v_ext = integrate(ext);
  r.residual = std::abs(r.v_int - r.v_ext);
  return r;
}

// Bounded 1D domains: the wall contributions int(xi_S chi + sigma_S dchi/dn)
// reduce to point values at the two walls, assembled from the padded field.
inline VirtualPowerReport virtual_power_residual_bounded_1d(
    const PaddedField& pad, const ScalarField& phi_dot, const ScalarField& gamma,
    const ScalarField& chi, const ShParams& p) {
  const Grid& g = pad.grid;
  const ScalarField phi = unpad(pad);
  const VectorField gphi = fd::gradient(pad);
  const ScalarField lap = fd::laplacian(pad);
  const PaddedField chipad = [&] {
    PaddedField cp = make_padded(chi);
    // interior-valued test fields: continue by zero outside
    for (int ix = -2; ix < 0; ++ix) cp.at(ix) = 0.0;
    for (int ix = g.nx; ix < g.nx + 2; ++ix) cp.at(ix) = 0.0;
    return cp;
  }();
  const VectorField gchi = fd::gradient(chipad);
  const ScalarField lchi = fd::laplacian(chipad);

  const double l2 = p.ell * p.ell, l4 = l2 * l2;
  ScalarField integrand(g), ext(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double pi = internal_microforce(phi.v[i], phi_dot.v[i], p).total;
    const double xig = -2.0 * p.lambda * l2 * gphi.at(0, i) * gchi.at(0, i);
    const double sg_h = p.lambda * l4 * lap.v[i] * lchi.v[i];
    integrand.v[i] = -pi * chi.v[i] + xig + sg_h;
    ext.v[i] = gamma.v[i] * chi.v[i];
  }

  VirtualPowerReport r;
  r.v_int = integrate(integrand);
  r.v_ext = integrate(ext);

  // wall microtractions: xi_S = (xi - div Sigma) . n, sigma_S = lambda l^4 lap
  auto wall_terms = [&](bool left) {
    const int w = left ? 0 : g.nx - 1;
    const int s = left ? -1 : +1;
    const double h = g.hx;
    auto at = [&](int k) { return pad.at(k); };
    const double dphi_dn = (at(w + s) - at(w - s)) / (2.0 * h);
    auto lap_at = [&](int k) { return (at(k - 1) - 2.0 * at(k) + at(k + 1)) / (h * h); };
    const double dlap_dn = (lap_at(w + s) - lap_at(w - s)) / (2.0 * h);
    const double xi_s = -2.0 * p.lambda * l2 * dphi_dn - p.lambda * l4 * dlap_dn;
    const double sigma_s = p.lambda * l4 * lap_at(w);
    const double dchi_dn = (chipad.at(w + s) - chipad.at(w - s)) / (2.0 * h);
    return xi_s * chi.v[g.idx(w)] + sigma_s * dchi_dn;
  };
  r.v_ext += wall_terms(true) + wall_terms(false);
  r.residual = std::abs(r.v_int - r.v_ext);
  return r;
}

}  // namespace pfgt
