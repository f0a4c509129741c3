// evolution.hpp -- time integration of the nonconserved (relaxational) and
// conserved equations: stabilized semi-implicit spectral steppers on periodic
// grids, explicit RK2 with ghost closures on bounded grids, run orchestration
// and linear growth-rate measurement
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "pfgt/boundary.hpp"
#include "pfgt/constitutive.hpp"
#include "pfgt/diagnostics.hpp"
#include "pfgt/errors.hpp"
#include "pfgt/io.hpp"
#include "pfgt/random.hpp"
#include "pfgt/spectral.hpp"
#include "pfgt/stencil.hpp"

namespace pfgt {

enum class Model { sh, pfc };

struct SimState {
  ScalarField phi;
  ScalarField phi_prev;  // previous step, for backward-difference rates
  double time = 0.0;
  long step = 0;
};

struct InitialCondition {
  enum class Kind { constant, random, mode, file } kind = Kind::constant;
  double value = 0.0;                    // constant
  double amplitude = 0.0, mean = 0.0;    // random / mode
  std::uint64_t seed = 0;                // random (algorithm: kRngAlgorithm)
  double kx = 0.0, ky = 0.0;             // mode wavenumbers
  std::string file;                      // snapshot path

  double amplitude_bound() const {
    switch (kind) {
      case Kind::constant: return std::abs(value);
      case Kind::random:
      case Kind::mode: return std::abs(mean) + std::abs(amplitude);
      case Kind::file: return 1.0;  // refined from the data when loaded
    }
    return 1.0;
  }
};

struct SimConfig {
  Model model = Model::sh;
  Grid grid;
  ShParams sh;
  PfcParams pfc;
  double dt = 1e-3;
  double t_end = 1.0;
  double stabilization = -1.0;  // < 0: auto from the potential and IC bound
  InitialCondition ic;
  ShBoundarySet sh_bc;   // bounded SH runs
  PfcBoundarySet pfc_bc; // bounded PFC runs (1D)
  int cadence = 10;

  void validate() const {
    grid.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("SimConfig: dt must be > 0");
    if (!(t_end >= 0.0)) throw std::invalid_argument("SimConfig: t_end must be >= 0");
    if (cadence < 1) throw std::invalid_argument("SimConfig: cadence must be >= 1");
    if (model == Model::sh) sh.validate(); else pfc.validate();
  }
};

// ---- stabilization ----------------------------------------------------------

// Default splitting constant: max(0, sup over [-cap, cap] of -f'') with
// cap = 1.5 x the initial-condition amplitude bound. The sup is taken on a
// dense sample of the interval.
inline double default_stabilization(const BulkPotential& f, double ic_bound) {
  const double cap = 1.5 * std::max(ic_bound, 1e-12);
  double s = 0.0;
  const int n = 2048;
  for (int i = 0; i <= n; ++i) {
    const double phi = -cap + 2.0 * cap * i / n;
    s = std::max(s, -f.d2(phi));
  }
  return std::max(0.0, s);
}

// ---- initial conditions -----------------------------------------------------

inline void check_mode_commensurate(const Grid& g, double k, double length) {
  const double m = k * length / (2.0 * std::numbers::pi);
  if (std::abs(m - std::round(m)) > 1e-9)
    throw std::invalid_argument("mode wavenumber not commensurate with the box");
}

inline ScalarField build_initial_field(const SimConfig& cfg) {
  const Grid& g = cfg.grid;
  const InitialCondition& ic = cfg.ic;
  switch (ic.kind) {
    case InitialCondition::Kind::constant: return ScalarField(g, ic.value);
    case InitialCondition::Kind::random:
      return random_field(g, ic.amplitude, ic.mean, ic.seed);
    case InitialCondition::Kind::mode: {
      if (g.topology == Topology::periodic) {
        check_mode_commensurate(g, ic.kx, g.length_x());
        if (g.dim == 2 && ic.ky != 0.0) check_mode_commensurate(g, ic.ky, g.length_y());
      }
      ScalarField f(g);
      for (int iy = 0; iy < (g.dim == 2 ? g.ny : 1); ++iy)
        for (int ix = 0; ix < g.nx; ++ix)
          f(ix, iy) = ic.mean + ic.amplitude * std::cos(ic.kx * g.x(ix)) *
                                    (g.dim == 2 ? std::cos(ic.ky * g.y(iy)) : 1.0);
      return f;
    }
    case InitialCondition::Kind::file: {
      ScalarField f = read_snapshot_field(ic.file, g);
      return f;
    }
  }
  throw std::logic_error("build_initial_field");
}

// ---- spectral steppers ------------------------------------------------------

// One first-order stabilized semi-implicit step of
//   beta phidot = -lambda (1 + l^2 lap)^2 phi - f'(phi) + gamma:
//   phihat^{n+1} = [phihat^n + (dt/beta) FT(-f'(phi^n) + gamma + S phi^n)]
//                  / [1 + (dt/beta)(lambda (1 - l^2 k^2)^2 + S)]
class ShSpectralStepper {
 public:
  ShSpectralStepper(const Grid& g, const ShParams& p, double S, double dt)
      : ops_(g), p_(p), S_(S), dt_(dt) {
    const int nxr = g.nx / 2 + 1, ny = g.dim == 2 ? g.ny : 1;
    denom_.resize(static_cast<std::size_t>(ny) * nxr);
    const double l2 = p.ell * p.ell;
    for (int jy = 0; jy < ny; ++jy)
      for (int jx = 0; jx < nxr; ++jx) {
        const double a = 1.0 - l2 * ops_.k_sq(jx, jy);
        denom_[static_cast<std::size_t>(jy) * nxr + jx] =
            1.0 + dt / p.beta * (p.lambda * a * a + S);
      }
  }

  SpectralOps& ops() { return ops_; }
  double stabilization() const { return S_; }

  void step(SimState& st) {
    const Grid& g = st.phi.grid;
    ScalarField n(g);
    for (int iy = 0; iy < (g.dim == 2 ? g.ny : 1); ++iy)
      for (int ix = 0; ix < g.nx; ++ix) {
        const std::size_t i = g.idx(ix, iy);
        n.v[i] = -p_.potential.d1(st.phi.v[i]) +
                 eval_or_zero(p_.gamma, g.x(ix), g.y(iy), st.time) +
                 S_ * st.phi.v[i];
      }
    ops_.forward(st.phi, phihat_);
    ops_.forward(n, nhat_);
    const double r = dt_ / p_.beta;
    for (std::size_t i = 0; i < phihat_.size(); ++i)
      phihat_[i] = (phihat_[i] + r * nhat_[i]) / denom_[i];
    st.phi_prev = st.phi;
    ops_.inverse(phihat_, st.phi);
    st.time += dt_;
    ++st.step;
  }

 private:
  SpectralOps ops_;
  ShParams p_;
  double S_, dt_;
  std::vector<double> denom_;
  std::vector<std::complex<double>> phihat_, nhat_;
};

// Conserved counterpart:
//   phihat^{n+1} = [phihat^n - dt M k^2 FT(f'(phi^n) - gamma - S phi^n) + dt shat]
//                  / [1 + dt M k^2 (lambda (1 - l^2 k^2)^2 + S)]
// (the explicit term carries -S phi so the splitting cancels in the limit).
// The k = 0 mode evolves only through the source; its exact invariance is
// maintained against FFT round-off by re-anchoring the mean each step.
class PfcSpectralStepper {
 public:
  PfcSpectralStepper(const Grid& g, const PfcParams& p, double S, double dt)
      : ops_(g), p_(p), S_(S), dt_(dt) {
    const int nxr = g.nx / 2 + 1, ny = g.dim == 2 ? g.ny : 1;
    denom_.resize(static_cast<std::size_t>(ny) * nxr);
    ksq_.resize(denom_.size());
    const double l2 = p.ell * p.ell;
    for (int jy = 0; jy < ny; ++jy)
      for (int jx = 0; jx < nxr; ++jx) {
        const std::size_t i = static_cast<std::size_t>(jy) * nxr + jx;
        const double k2 = ops_.k_sq(jx, jy);
        const double a = 1.0 - l2 * k2;
        ksq_[i] = k2;
        denom_[i] = 1.0 + dt * p.mobility * k2 * (p.lambda * a * a + S);
      }
  }

  SpectralOps& ops() { return ops_; }
  double stabilization() const { return S_; }

  void prime_mean(const ScalarField& phi) {
    mean_ = field_mean(phi);
    primed_ = true;
  }

  void step(SimState& st) {
    const Grid& g = st.phi.grid;
    if (!primed_) prime_mean(st.phi);
    ScalarField n(g), src(g);
    bool has_src = static_cast<bool>(p_.source);
    for (int iy = 0; iy < (g.dim == 2 ? g.ny : 1); ++iy)
      for (int ix = 0; ix < g.nx; ++ix) {
        const std::size_t i = g.idx(ix, iy);
        n.v[i] = p_.potential.d1(st.phi.v[i]) -
                 eval_or_zero(p_.gamma, g.x(ix), g.y(iy), st.time) -
                 S_ * st.phi.v[i];
        if (has_src) src.v[i] = p_.source(g.x(ix), g.y(iy), st.time);
      }
    ops_.forward(st.phi, phihat_);
    ops_.forward(n, nhat_);
    if (has_src) ops_.forward(src, shat_);
    const double M = p_.mobility;
    for (std::size_t i = 0; i < phihat_.size(); ++i) {
      std::complex<double> num = phihat_[i] - dt_ * M * ksq_[i] * nhat_[i];
      if (has_src) num += dt_ * shat_[i];
      phihat_[i] = num / denom_[i];
    }
    st.phi_prev = st.phi;
    ops_.inverse(phihat_, st.phi);
    mean_ += has_src ? dt_ * field_mean(src) : 0.0;
    const double shift = mean_ - field_mean(st.phi);
    for (double& x : st.phi.v) x += shift;
    st.time += dt_;
    ++st.step;
  }

 private:
  static double field_mean(const ScalarField& f) {
    long double s = 0.0L;
    for (double x : f.v) s += x;
    return static_cast<double>(s / f.v.size());
  }

  SpectralOps ops_;
  PfcParams p_;
  double S_, dt_;
  std::vector<double> denom_, ksq_;
  std::vector<std::complex<double>> phihat_, nhat_, shat_;
  double mean_ = 0.0;
  bool primed_ = false;
};

// ---- bounded steppers (explicit RK2 with ghost closures) --------------------

// Documented explicit step-size limit dt <= C beta h^4 / (lambda ell^4) with
// C = 0.1; in 2D the limit carries an extra 1/4 from the stencil spectrum.
inline double sh_bounded_dt_limit(const Grid& g, const ShParams& p) {
  const double h = g.dim == 2 ? std::min(g.hx, g.hy) : g.hx;
  const double l4 = p.ell * p.ell * p.ell * p.ell;
  const double c = g.dim == 2 ? 0.025 : 0.1;
  return c * p.beta * h * h * h * h / (p.lambda * l4);
}

class ShBoundedStepper {
 public:
  ShBoundedStepper(const Grid& g, const ShParams& p, const ShBoundarySet& bc,
                   double dt)
      : grid_(g), p_(p), bc_(bc), dt_(dt) {
    bc_.validate_all();
  }

  bool dt_exceeds_limit() const { return dt_ > sh_bounded_dt_limit(grid_, p_); }

  void prime(const ScalarField& phi) {
    using namespace bdetail;
    const int nfaces = grid_.dim == 1 ? 2 : 4;
    for (int fi = 0; fi < nfaces; ++fi) {
      const FaceGeom fg = face_geom(grid_, static_cast<Face>(fi));
      hist_.x_prev[fi].resize(fg.m);
      for (int j = 0; j < fg.m; ++j)
        hist_.x_prev[fi][j] = one_sided_dphi_dn(phi, grid_, fg, j);
    }
    hist_.primed = true;
  }

  ScalarField rhs(const ScalarField& phi, const ScalarField& phi_prev, double t) {
    const auto cl = ghost_closure_sh(phi, bc_, t, dt_, p_, &phi_prev, &hist_);
    const ScalarField lin = fd::sh_linear(cl.pad, p_.ell);
    ScalarField out(grid_);
    for (int iy = 0; iy < (grid_.dim == 2 ? grid_.ny : 1); ++iy)
      for (int ix = 0; ix < grid_.nx; ++ix) {
        const std::size_t i = grid_.idx(ix, iy);
        out.v[i] = (-p_.lambda * lin.v[i] - p_.potential.d1(phi.v[i]) +
                    eval_or_zero(p_.gamma, grid_.x(ix), grid_.y(iy), t)) /
                   p_.beta;
      }
    return out;
  }

  // Heun step; essential wall values are pinned after every stage.
  void step(SimState& st) {
    if (!hist_.primed) prime(st.phi);
    const double t = st.time;
    ScalarField k1 = rhs(st.phi, st.phi_prev, t);
    ScalarField mid(grid_);
    for (std::size_t i = 0; i < mid.size(); ++i)
      mid.v[i] = st.phi.v[i] + dt_ * k1.v[i];
    apply_essential_values(mid, bc_, t + dt_);
    ScalarField k2 = rhs(mid, st.phi, t + dt_);
    ScalarField next(grid_);
    for (std::size_t i = 0; i < next.size(); ++i)
      next.v[i] = st.phi.v[i] + 0.5 * dt_ * (k1.v[i] + k2.v[i]);
    apply_essential_values(next, bc_, t + dt_);
    st.phi_prev = st.phi;
    st.phi = next;
    st.time += dt_;
    ++st.step;
    const auto cl = ghost_closure_sh(st.phi, bc_, st.time, dt_, p_, &st.phi_prev,
                                     &hist_);
    hist_.x_prev = cl.x_now;
    last_pad_ = cl.pad;
  }

  // Closure of the current state (kept from the last accepted step).
  const PaddedField& last_pad() const { return last_pad_; }
  PaddedField closure(const SimState& st) {
    if (!hist_.primed) prime(st.phi);
    return ghost_closure_sh(st.phi, bc_, st.time, dt_, p_, &st.phi_prev, &hist_)
        .pad;
  }

 private:
  Grid grid_;
  ShParams p_;
  ShBoundarySet bc_;
  double dt_;
  MixedHistory hist_;
  PaddedField last_pad_;
};

// Conserved bounded stepper, 1D only. Finite-volume flux form with half cells
// at the walls, so the trapezoid mass changes only through the wall fluxes.
class PfcBounded1dStepper {
 public:
  PfcBounded1dStepper(const Grid& g, const PfcParams& p, const PfcBoundarySet& bc,
                      double dt)
      : grid_(g), p_(p), bc_(bc), dt_(dt) {
    if (g.dim != 1) throw std::invalid_argument("bounded conserved runs are 1D");
    bc_.validate_all();
  }

  ScalarField rhs(const ScalarField& phi, double t) {
    const auto cl = ghost_closure_pfc(phi, bc_, t, p_);
    const int n = grid_.nx;
    const double h = grid_.hx, M = p_.mobility;
    // q_{i+1/2} = -M (mu_{i+1} - mu_i)/h at interior faces; wall faces carry
    // the closure fluxes.
    std::vector<double> q(n + 1);
    q[0] = cl.wall_flux_left;
    q[n] = cl.wall_flux_right;
    for (int i = 1; i < n; ++i) q[i] = -M * (cl.mu.v[i] - cl.mu.v[i - 1]) / h;
    ScalarField out(grid_);
    const bool has_src = static_cast<bool>(p_.source);
    for (int i = 0; i < n; ++i) {
      const double w = (i == 0 || i == n - 1) ? 0.5 * h : h;
      out.v[i] = -(q[i + 1] - q[i]) / w +
                 (has_src ? p_.source(grid_.x(i), 0.0, t) : 0.0);
    }
    return out;
  }

  void step(SimState& st) {
    const double t = st.time;
    ScalarField k1 = rhs(st.phi, t);
    ScalarField mid(grid_);
    for (std::size_t i = 0; i < mid.size(); ++i)
      mid.v[i] = st.phi.v[i] + dt_ * k1.v[i];
    ScalarField k2 = rhs(mid, t + dt_);
    st.phi_prev = st.phi;
    for (std::size_t i = 0; i < st.phi.size(); ++i)
      st.phi.v[i] += 0.5 * dt_ * (k1.v[i] + k2.v[i]);
    st.time += dt_;
    ++st.step;
  }

  PfcClosure1d closure(const SimState& st) {
    return ghost_closure_pfc(st.phi, bc_, st.time, p_);
  }

 private:
  Grid grid_;
  PfcParams p_;
  PfcBoundarySet bc_;
  double dt_;
};

// mu of a periodic state, used for conserved diagnostics.
inline ScalarField pfc_mu_periodic(const ScalarField& phi, const PfcParams& p,
                                   SpectralOps& ops, double t) {
  const ScalarField lin = ops.sh_linear(phi, p.ell);
  ScalarField mu(phi.grid);
  const Grid& g = phi.grid;
  for (int iy = 0; iy < (g.dim == 2 ? g.ny : 1); ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const std::size_t i = g.idx(ix, iy);
      mu.v[i] = p.potential.d1(phi.v[i]) + p.lambda * lin.v[i] -
                eval_or_zero(p.gamma, g.x(ix), g.y(iy), t);
    }
  return mu;
}

// ---- run orchestration ------------------------------------------------------

struct RunResult {
  SimState state;
  DiagnosticsSeries series;
  std::vector<std::string> warnings;
};

// Steps from t = 0 to t_end recording diagnostics every `cadence` steps.
// Deterministic for a given configuration and seed. The optional callback
// fires at every recorded row (for snapshot writers).
inline RunResult run(const SimConfig& cfg,
                     const std::function<void(const SimState&, const DiagnosticsRow&)>&
                         on_record = {}) {
  cfg.validate();
  const Grid& g = cfg.grid;
  RunResult res;
  res.state.phi = build_initial_field(cfg);
  ensure_finite(res.state.phi, "initial condition");
  res.state.phi_prev = res.state.phi;

  double ic_bound = cfg.ic.amplitude_bound();
  if (cfg.ic.kind == InitialCondition::Kind::file) {
    ic_bound = 0.0;
    for (double x : res.state.phi.v) ic_bound = std::max(ic_bound, std::abs(x));
  }
  const BulkPotential& pot =
      cfg.model == Model::sh ? cfg.sh.potential : cfg.pfc.potential;
  const double S = cfg.stabilization >= 0.0 ? cfg.stabilization
                                            : default_stabilization(pot, ic_bound);

  const bool periodic = g.topology == Topology::periodic;
  std::unique_ptr<ShSpectralStepper> sh_sp;
  std::unique_ptr<PfcSpectralStepper> pfc_sp;
  std::unique_ptr<ShBoundedStepper> sh_bd;
  std::unique_ptr<PfcBounded1dStepper> pfc_bd;
  SpectralOps* diag_ops = nullptr;

  if (cfg.model == Model::sh) {
    if (periodic) {
      sh_sp = std::make_unique<ShSpectralStepper>(g, cfg.sh, S, cfg.dt);
      diag_ops = &sh_sp->ops();
    } else {
      sh_bd = std::make_unique<ShBoundedStepper>(g, cfg.sh, cfg.sh_bc, cfg.dt);
      ScalarField phi0 = res.state.phi;
      apply_essential_values(phi0, cfg.sh_bc, 0.0);
      res.state.phi = phi0;
      res.state.phi_prev = phi0;
      sh_bd->prime(phi0);
      if (sh_bd->dt_exceeds_limit())
        res.warnings.push_back("stability warning: dt exceeds the documented "
                               "h^4-scaled explicit limit");
    }
  } else {
    if (periodic) {
      pfc_sp = std::make_unique<PfcSpectralStepper>(g, cfg.pfc, S, cfg.dt);
      pfc_sp->prime_mean(res.state.phi);
      diag_ops = &pfc_sp->ops();
    } else {
      pfc_bd = std::make_unique<PfcBounded1dStepper>(g, cfg.pfc, cfg.pfc_bc, cfg.dt);
    }
  }

  auto record = [&](RunResult& r) {
    const SimState& st = r.state;
    DiagnosticsRow row{};
    row.t = st.time;
    row.mass = total_mass(st.phi);
    double mn = st.phi.v[0], mx = st.phi.v[0];
    for (double x : st.phi.v) {
      mn = std::min(mn, x);
      mx = std::max(mx, x);
    }
    row.min_phi = mn;
    row.max_phi = mx;
    if (periodic) {
      if (cfg.model == Model::sh)
        row.energy = total_free_energy(st.phi, cfg.sh, *diag_ops);
      else
        row.energy = total_free_energy(st.phi, cfg.pfc, *diag_ops);
    } else {
      if (cfg.model == Model::sh)
        row.energy = total_free_energy(sh_bd->closure(st), cfg.sh);
      else
        row.energy = total_free_energy(pfc_bd->closure(st).phi_pad, cfg.pfc);
    }
    if (cfg.model == Model::sh) {
      // beta int(phidot^2) with the backward difference; zero on the first row
      if (st.step > 0) {
        ScalarField sq(g);
        for (std::size_t i = 0; i < g.size(); ++i) {
          const double d = (st.phi.v[i] - st.phi_prev.v[i]) / cfg.dt;
          sq.v[i] = d * d;
        }
        row.dissipation = cfg.sh.beta * integrate(sq);
      }
    } else {
      // int(M |grad mu|^2) of the current state
      if (periodic) {
        ScalarField mu = pfc_mu_periodic(st.phi, cfg.pfc, *diag_ops, st.time);
        VectorField gmu = diag_ops->gradient(mu);
        ScalarField sq(g);
        for (std::size_t i = 0; i < g.size(); ++i) {
          double s2 = gmu.at(0, i) * gmu.at(0, i);
          if (g.dim == 2) s2 += gmu.at(1, i) * gmu.at(1, i);
          sq.v[i] = s2;
        }
        row.dissipation = cfg.pfc.mobility * integrate(sq);
      } else {
        const auto cl = pfc_bd->closure(st);
        const ScalarField dmu = fd::derivative_interior(cl.mu, 0);
        ScalarField sq(g);
        for (int i = 0; i < g.nx; ++i) sq.v[i] = dmu.v[i] * dmu.v[i];
        row.dissipation = cfg.pfc.mobility * integrate(sq);
      }
    }
    r.series.rows.push_back(row);
    if (on_record) on_record(st, row);
  };

  const long nsteps = std::lround(cfg.t_end / cfg.dt);
  record(res);
  for (long s = 0; s < nsteps; ++s) {
    if (sh_sp) sh_sp->step(res.state);
    else if (pfc_sp) pfc_sp->step(res.state);
    else if (sh_bd) sh_bd->step(res.state);
    else pfc_bd->step(res.state);
    if (!res.state.phi.finite())
      throw numerical_failure("non-finite phi at step " +
                              std::to_string(res.state.step));
    if (res.state.step % cfg.cadence == 0) record(res);
  }
  return res;
}

// ---- linear growth-rate measurement ------------------------------------------

struct DispersionPoint {
  double k = 0.0;
  double sigma_measured = 0.0;
  double sigma_analytic = 0.0;
};

inline double sigma_analytic(Model model, double k, double phi0, const ShParams& sh,
                             const PfcParams& pfc) {
  if (model == Model::sh) {
    const double a = 1.0 - sh.ell * sh.ell * k * k;
    return -(sh.lambda * a * a + sh.potential.d2(phi0)) / sh.beta;
  }
  const double a = 1.0 - pfc.ell * pfc.ell * k * k;
  return -pfc.mobility * k * k * (pfc.lambda * a * a + pfc.potential.d2(phi0));
}

// Seeds each mode at a tiny amplitude, advances `steps` semi-implicit steps,
// and fits the log-amplitude slope of that mode. Throws fit_failure if the
// amplitude leaves the linear regime.
inline std::vector<DispersionPoint> dispersion_scan(const SimConfig& cfg,
                                                    const std::vector<double>& ks,
                                                    int steps = 200,
                                                    double amplitude = 1e-4) {
  SimConfig c = cfg;
  c.validate();
  if (c.grid.topology != Topology::periodic || c.grid.dim != 1)
    throw std::invalid_argument("dispersion_scan: periodic 1D grids only");
  const Grid& g = c.grid;
  const double phi0 = c.ic.mean;
  const double linear_cap = std::max(100.0 * amplitude, 1e-8);

  std::vector<DispersionPoint> out;
  for (double k : ks) {
    check_mode_commensurate(g, k, g.length_x());
    const int mode = static_cast<int>(std::lround(k * g.length_x() /
                                                  (2.0 * std::numbers::pi)));
    SimState st;
    st.phi = ScalarField(g);
    for (int i = 0; i < g.nx; ++i)
      st.phi(i) = phi0 + amplitude * std::cos(k * g.x(i));
    st.phi_prev = st.phi;

    const BulkPotential& pot = c.model == Model::sh ? c.sh.potential : c.pfc.potential;
    const double S = c.stabilization >= 0.0
                         ? c.stabilization
                         : default_stabilization(pot, std::abs(phi0) + amplitude);

    std::unique_ptr<ShSpectralStepper> shs;
    std::unique_ptr<PfcSpectralStepper> pfcs;
    SpectralOps* ops = nullptr;
    if (c.model == Model::sh) {
      shs = std::make_unique<ShSpectralStepper>(g, c.sh, S, c.dt);
      ops = &shs->ops();
    } else {
      pfcs = std::make_unique<PfcSpectralStepper>(g, c.pfc, S, c.dt);
      ops = &pfcs->ops();
    }

    std::vector<std::complex<double>> spec;
    std::vector<double> ts, logs;
    auto sample = [&]() {
      ops->forward(st.phi, spec);
      const double amp = std::abs(spec[mode]) / g.nx;
      if (amp > 0.0) {
        ts.push_back(st.time);
        logs.push_back(std::log(amp));
      }
    };
    sample();
    for (int s = 0; s < steps; ++s) {
      if (shs) shs->step(st); else pfcs->step(st);
      for (double x : st.phi.v)
        if (std::abs(x - phi0) > linear_cap)
          throw fit_failure("dispersion_scan: amplitude left the linear regime");
      sample();
    }
    // least-squares slope of log amplitude vs time
    double sigma = 0.0;
    if (ts.size() >= 2) {
      const double n = static_cast<double>(ts.size());
      double st_ = 0, sl = 0, stt = 0, stl = 0;
      for (std::size_t i = 0; i < ts.size(); ++i) {
        st_ += ts[i];
        sl += logs[i];
        stt += ts[i] * ts[i];
        stl += ts[i] * logs[i];
      }
      const double det = n * stt - st_ * st_;
      sigma = det != 0.0 ? (n * stl - st_ * sl) / det : 0.0;
    }
    out.push_back({k, sigma, sigma_analytic(c.model, k, phi0, c.sh, c.pfc)});
  }
  return out;
}

}  // namespace pfgt
