// constitutive.hpp -- pointwise closures of the Brazovskii free energy:
// psi, microstress xi, hypermicrostress Sigma, internal microforce pi,
// chemical potential mu, and a Coleman-Noll consistency checker.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "pfgt/potential.hpp"

namespace pfgt {

// Scalar field of (x, y, t); y is ignored on 1D grids. Empty means zero.
using SpaceTimeFn = std::function<double(double, double, double)>;

inline double eval_or_zero(const SpaceTimeFn& f, double x, double y, double t) {
  return f ? f(x, y, t) : 0.0;
}

// Constants of the nonconserved (relaxational) model. All quantities are
// nondimensional; lambda, ell, beta must be strictly positive.
struct ShParams {
  double lambda = 1.0;  // energy/volume
  double ell = 1.0;     // length
  double beta = 1.0;    // dynamic viscosity
  BulkPotential potential = BulkPotential::double_well(1.0);
  SpaceTimeFn gamma;  // external microforce, default zero

  void validate() const {
    if (!(lambda > 0.0)) throw std::invalid_argument("ShParams: lambda must be > 0");
    if (!(ell > 0.0)) throw std::invalid_argument("ShParams: ell must be > 0");
    if (!(beta > 0.0)) throw std::invalid_argument("ShParams: beta must be > 0");
    potential.validate();
  }
};

// Constants of the conserved model; isotropic mobility M > 0.
struct PfcParams {
  double lambda = 1.0;
  double ell = 1.0;
  double mobility = 1.0;
  BulkPotential potential = BulkPotential::double_well(1.0);
  SpaceTimeFn gamma;   // external microforce, default zero
  SpaceTimeFn source;  // species supply s, default zero

  void validate() const {
    if (!(lambda > 0.0)) throw std::invalid_argument("PfcParams: lambda must be > 0");
    if (!(ell > 0.0)) throw std::invalid_argument("PfcParams: ell must be > 0");
    if (!(mobility > 0.0)) throw std::invalid_argument("PfcParams: mobility must be > 0");
    potential.validate();
  }
};

// Pointwise state (phi, grad phi, grad^2 phi, phi_dot). The Hessian is kept
// in symmetric storage, 1D (xx) / 2D (xx, yy, xy), so hess == hess^T holds
// by construction.
template <int Dim>
struct PointState {
  static_assert(Dim == 1 || Dim == 2);
  static constexpr int nsym = Dim * (Dim + 1) / 2;
  double phi = 0.0;
  std::array<double, Dim> grad{};
  std::array<double, nsym> hess{};
  double phi_dot = 0.0;

  double grad_sq() const {
    double s = 0.0;
    for (double g : grad) s += g * g;
    return s;
  }
  double tr_hess() const { return Dim == 1 ? hess[0] : hess[0] + hess[1]; }
};

// psi = f(phi) + (lambda/2)(phi^2 - 2 ell^2 |grad phi|^2 + ell^4 (tr grad^2 phi)^2)
inline double free_energy_density_point(double phi, double grad_sq, double tr_hess,
                                        double lambda, double ell,
                                        const BulkPotential& f) {
  const double l2 = ell * ell;
  return f.value(phi) +
         0.5 * lambda * (phi * phi - 2.0 * l2 * grad_sq + l2 * l2 * tr_hess * tr_hess);
}

template <int Dim, class Params>
double free_energy_density(const PointState<Dim>& s, const Params& p) {
  return free_energy_density_point(s.phi, s.grad_sq(), s.tr_hess(), p.lambda, p.ell,
                                   p.potential);
}

// xi = -2 lambda ell^2 grad phi
template <int Dim, class Params>
std::array<double, Dim> microstress(const std::array<double, Dim>& grad, const Params& p) {
  const double c = -2.0 * p.lambda * p.ell * p.ell;
  std::array<double, Dim> xi{};
  for (int i = 0; i < Dim; ++i) xi[i] = c * grad[i];
  return xi;
}

// Sigma = lambda ell^4 (laplacian phi) * Identity, in symmetric storage.
template <int Dim, class Params>
std::array<double, Dim*(Dim + 1) / 2> hypermicrostress(
    const std::array<double, Dim*(Dim + 1) / 2>& hess, const Params& p) {
  const double l2 = p.ell * p.ell;
  const double tr = Dim == 1 ? hess[0] : hess[0] + hess[1];
  const double s = p.lambda * l2 * l2 * tr;
  std::array<double, Dim*(Dim + 1) / 2> sig{};
  sig[0] = s;
  if constexpr (Dim == 2) sig[1] = s;  // xy component stays zero
  return sig;
}

struct Microforce {
  double total;        // pi = -f'(phi) - lambda phi - beta phi_dot
  double equilibrium;  // -f'(phi) - lambda phi
  double dissipative;  // -beta phi_dot, so dissipative * phi_dot <= 0 always
};

inline Microforce internal_microforce(double phi, double phi_dot, const ShParams& p) {
  const double eq = -p.potential.d1(phi) - p.lambda * phi;
  const double dis = -p.beta * phi_dot;
  return {eq + dis, eq, dis};
}

// mu = f'(phi) + lambda (phi + 2 ell^2 lap phi + ell^4 bilap phi) - gamma
inline double chemical_potential(double phi, double lap_phi, double bilap_phi,
                                 double gamma, const PfcParams& p) {
  const double l2 = p.ell * p.ell;
  return p.potential.d1(phi) +
         p.lambda * (phi + 2.0 * l2 * lap_phi + l2 * l2 * bilap_phi) - gamma;
}

struct ColemanNollResidual {
  double err_xi;
  double err_sigma;
  double err_pi;
};

// Central-differences the free-energy response in argument space and compares
// against the closed-form stresses. psi is quadratic in grad phi and tr hess,
// so err_xi and err_sigma sit at round-off; err_pi converges at order h^2.
template <int Dim, class Params>
ColemanNollResidual coleman_noll_residual(const Params& p, const PointState<Dim>& s,
                                          double h = 1e-5) {
  if (!(h > 0.0)) throw std::invalid_argument("coleman_noll_residual: h must be > 0");
  auto psi = [&](const PointState<Dim>& q) { return free_energy_density(q, p); };

  const auto xi = microstress<Dim>(s.grad, p);
  double err_xi = 0.0;
  for (int i = 0; i < Dim; ++i) {
    PointState<Dim> a = s, b = s;
    a.grad[i] += h;
    b.grad[i] -= h;
    err_xi = std::max(err_xi, std::abs((psi(a) - psi(b)) / (2.0 * h) - xi[i]));
  }

  // Perturbing an off-diagonal slot of the symmetric storage moves both H_ij
  // and H_ji, so the matching closed-form value is Sigma_ij + Sigma_ji.
  const auto sg = hypermicrostress<Dim>(s.hess, p);
  double err_sigma = 0.0;
  for (int c = 0; c < PointState<Dim>::nsym; ++c) {
    PointState<Dim> a = s, b = s;
    a.hess[c] += h;
    b.hess[c] -= h;
    const bool off_diag = (Dim == 2 && c == 2);
    const double expected = off_diag ? 2.0 * sg[c] : sg[c];
    err_sigma = std::max(err_sigma,
                         std::abs((psi(a) - psi(b)) / (2.0 * h) - expected));
  }

  ShParams sh;  // only lambda and the potential enter the equilibrium part
  sh.lambda = p.lambda;
  sh.ell = p.ell;
  sh.potential = p.potential;
  const double pi_eq = internal_microforce(s.phi, 0.0, sh).equilibrium;
  PointState<Dim> a = s, b = s;
  a.phi += h;
  b.phi -= h;
  const double err_pi = std::abs(-(psi(a) - psi(b)) / (2.0 * h) - pi_eq);

  return {err_xi, err_sigma, err_pi};
}

}  // namespace pfgt
