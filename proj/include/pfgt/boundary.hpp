// boundary.hpp -- natural / essential / mixed wall conditions for both
// equations, realized as two-layer ghost closures on bounded grids
#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <variant>
#include <vector>

#include "pfgt/constitutive.hpp"
#include "pfgt/errors.hpp"
#include "pfgt/stencil.hpp"

namespace pfgt {

// ---- boundary condition families ------------------------------------------

// Prescribed environmental microtraction and hypermicrotraction:
//   -xi_env/(2 lambda ell^2) = dphi/dn + (ell^2/2) d(lap phi)/dn
//    sigma_env/(lambda ell^4) = lap phi
struct NaturalSh {
  SpaceTimeFn xi_env;     // empty = 0
  SpaceTimeFn sigma_env;  // empty = 0
};

// phi and dphi/dn prescribed at the wall (time-integrated form of the rate
// equalities; assumes compatible initial data).
struct EssentialSh {
  SpaceTimeFn phi_env;
  SpaceTimeFn dphi_dn_env;
};

// Microtractions driven by rate mismatches with transfer coefficients a, b:
//   -a (phi_dot_env - phi_dot)/(2 lambda ell^2) = dphi/dn + (ell^2/2) d(lap phi)/dn
//    b (dphi_dot_env/dn - dphi_dot/dn)/(lambda ell^4) = lap phi
// Rates are discretized by backward differences.
struct MixedSh {
  double a = 1.0, b = 1.0;
  SpaceTimeFn phi_env;
  SpaceTimeFn dphi_dn_env;
};

using ShBoundary = std::variant<NaturalSh, EssentialSh, MixedSh>;

inline void validate(const ShBoundary& bc) {
  if (const auto* m = std::get_if<MixedSh>(&bc)) {
    if (!(m->a > 0.0) || !(m->b > 0.0))
      throw std::invalid_argument("MixedSh: transfer coefficients must be > 0");
  }
}

// Conserved-species wall conditions; these constrain mu. The sixth-order
// operator additionally needs wall data for phi, supplied by the homogeneous
// natural conditions (xi_env = sigma_env = 0).
struct FluxPfc {
  SpaceTimeFn j_env;  // M dmu/dn = -j_env
};
struct ChemPotPfc {
  SpaceTimeFn mu_env;  // mu = mu_env at the wall
};
struct MixedMassPfc {
  double c = 1.0;      // M dmu/dn = c (mu_env - mu)
  SpaceTimeFn mu_env;
};
using PfcBoundary = std::variant<FluxPfc, ChemPotPfc, MixedMassPfc>;

inline void validate(const PfcBoundary& bc) {
  if (const auto* m = std::get_if<MixedMassPfc>(&bc)) {
    if (!(m->c > 0.0))
      throw std::invalid_argument("MixedMassPfc: transfer coefficient must be > 0");
  }
}

enum class Face : int { left = 0, right = 1, bottom = 2, top = 3 };

struct ShBoundarySet {
  std::array<ShBoundary, 4> bc{NaturalSh{}, NaturalSh{}, NaturalSh{}, NaturalSh{}};
  ShBoundary& operator[](Face f) { return bc[static_cast<int>(f)]; }
  const ShBoundary& operator[](Face f) const { return bc[static_cast<int>(f)]; }
  void validate_all() const {
    for (const auto& b : bc) validate(b);
  }
};

struct PfcBoundarySet {
  PfcBoundary left = FluxPfc{};
  PfcBoundary right = FluxPfc{};
  void validate_all() const {
    validate(left);
    validate(right);
  }
};

// Wall normal-derivative history, needed by the mixed family's rate terms.
// x_prev holds dphi/dn per face node from the previously accepted closure.
struct MixedHistory {
  std::array<std::vector<double>, 4> x_prev;
  bool primed = false;
};

// ---- face geometry ---------------------------------------------------------

namespace bdetail {

struct FaceGeom {
  int axis;   // 0: normal along x, 1: normal along y
  int s;      // outward step sign along the axis
  int w;      // wall index along the axis
  int m;      // nodes along the face
  double h;   // spacing along the axis
  double ht;  // tangential spacing (0 in 1D)
};

inline FaceGeom face_geom(const Grid& g, Face f) {
  switch (f) {
    case Face::left: return {0, -1, 0, g.dim == 2 ? g.ny : 1, g.hx, g.hy};
    case Face::right: return {0, +1, g.nx - 1, g.dim == 2 ? g.ny : 1, g.hx, g.hy};
    case Face::bottom: return {1, -1, 0, g.nx, g.hy, g.hx};
    case Face::top: return {1, +1, g.ny - 1, g.nx, g.hy, g.hx};
  }
  throw std::logic_error("face_geom");
}

inline double& pref(PaddedField& p, const FaceGeom& fg, int a, int j) {
  return fg.axis == 0 ? p.at(a, j) : p.at(j, a);
}
inline double pval(const PaddedField& p, const FaceGeom& fg, int a, int j) {
  return fg.axis == 0 ? p.at(a, j) : p.at(j, a);
}
inline double xpos(const Grid& g, const FaceGeom& fg, int a, int j) {
  return fg.axis == 0 ? g.x(a) : g.x(j);
}
inline double ypos(const Grid& g, const FaceGeom& fg, int a, int j) {
  return fg.axis == 0 ? g.y(j) : g.y(a);
}

// Tangential second difference of the layer at axis-index a. Face-end nodes
// use the stencil shifted one node inward (order-independent across faces).
inline double tang2_shifted(const PaddedField& p, const FaceGeom& fg, int a, int j) {
  if (fg.ht == 0.0) return 0.0;
  int jc = j;
  if (j == 0) jc = 1;
  if (j == fg.m - 1) jc = fg.m - 2;
  return (pval(p, fg, a, jc - 1) - 2.0 * pval(p, fg, a, jc) + pval(p, fg, a, jc + 1)) /
         (fg.ht * fg.ht);
}

// Centered tangential second difference; valid once the adjacent faces' first
// ghost layers (and corner fills) exist.
inline double tang2_centered(const PaddedField& p, const FaceGeom& fg, int a, int j) {
  if (fg.ht == 0.0) return 0.0;
  return (pval(p, fg, a, j - 1) - 2.0 * pval(p, fg, a, j) + pval(p, fg, a, j + 1)) /
         (fg.ht * fg.ht);
}

// Backward difference of an environment function, consistent with the phi
// rate discretization.
inline double env_rate(const SpaceTimeFn& f, double x, double y, double t, double dt) {
  if (!f) return 0.0;
  return (f(x, y, t) - f(x, y, t - dt)) / dt;
}

// One-sided 2nd-order dphi/dn at the wall from interior data only.
inline double one_sided_dphi_dn(const ScalarField& phi, const Grid& g,
                                const FaceGeom& fg, int j) {
  auto val = [&](int a) { return fg.axis == 0 ? phi(a, j) : phi(j, a); };
  return (3.0 * val(fg.w) - 4.0 * val(fg.w - fg.s) + val(fg.w - 2 * fg.s)) /
         (2.0 * fg.h);
}

}  // namespace bdetail

// ---- SH ghost closure ------------------------------------------------------

struct ShClosureResult {
  PaddedField pad;
  // dphi/dn at the wall implied by the new ghosts, per face node; the stepper
  // commits these into MixedHistory after the step is accepted.
  std::array<std::vector<double>, 4> x_now;
};

// Fills two ghost layers per face from the active condition family. Per
// boundary node the two conditions give a triangular 2x2 linear system in the
// two ghost unknowns: the first layer from the sigma-type condition (or the
// prescribed normal derivative), the second from the xi-type condition.
inline ShClosureResult ghost_closure_sh(const ScalarField& phi,
                                        const ShBoundarySet& bcs, double t,
                                        double dt, const ShParams& params,
                                        const ScalarField* phi_prev = nullptr,
                                        const MixedHistory* hist = nullptr) {
  using namespace bdetail;
  const Grid& g = phi.grid;
  if (g.topology != Topology::bounded)
    throw std::invalid_argument("ghost_closure_sh: grid must be bounded");
  bcs.validate_all();

  const double lam = params.lambda, ell = params.ell;
  const double l2 = ell * ell, l4 = l2 * l2;
  const int nfaces = g.dim == 1 ? 2 : 4;

  ShClosureResult res{make_padded(phi), {}};
  PaddedField& p = res.pad;

  auto face_bc = [&](int fi) -> const ShBoundary& { return bcs.bc[fi]; };

  // Pass A: first ghost layer per face.
  for (int fi = 0; fi < nfaces; ++fi) {
    const FaceGeom fg = face_geom(g, static_cast<Face>(fi));
    res.x_now[fi].assign(fg.m, 0.0);
    for (int j = 0; j < fg.m; ++j) {
      const double x = xpos(g, fg, fg.w, j), y = ypos(g, fg, fg.w, j);
      const double phi_w = pval(p, fg, fg.w, j);
      const double phi_i = pval(p, fg, fg.w - fg.s, j);
      const double tang_w = tang2_shifted(p, fg, fg.w, j);
      double g1;
      if (const auto* nat = std::get_if<NaturalSh>(&face_bc(fi))) {
        const double sv = eval_or_zero(nat->sigma_env, x, y, t) / (lam * l4);
        g1 = fg.h * fg.h * (sv - tang_w) + 2.0 * phi_w - phi_i;
      } else if (const auto* ess = std::get_if<EssentialSh>(&face_bc(fi))) {
        const double q = eval_or_zero(ess->dphi_dn_env, x, y, t);
        g1 = phi_i + 2.0 * fg.h * q;
      } else {
        const auto& mix = std::get<MixedSh>(face_bc(fi));
        const double qdot = env_rate(mix.dphi_dn_env, x, y, t, dt);
        const double xp = (hist && hist->primed)
                              ? hist->x_prev[fi][j]
                              : one_sided_dphi_dn(phi, g, fg, j);
        const double A = mix.b / (lam * l4);
        const double h = fg.h;
        const double coef = 1.0 / (h * h) + A / (2.0 * h * dt);
        if (!(std::abs(coef) > 1e-300))
          throw singular_closure("mixed sigma-rate closure became singular");
        const double rhs = A * qdot + A * xp / dt + A * phi_i / (2.0 * h * dt) -
                           (phi_i - 2.0 * phi_w) / (h * h) - tang_w;
        g1 = rhs / coef;
      }
      pref(p, fg, fg.w + fg.s, j) = g1;
      res.x_now[fi][j] = (g1 - phi_i) / (2.0 * fg.h);
    }
  }

  // Corner quadrant, first layer: average of the two face extrapolations
  // (quadratic extrapolation of each face's ghost layer past its end).
  if (g.dim == 2) {
    auto fill_corner = [&](int cx, int cy, int sx, int sy) {
      // along y from the x-face ghost column, and along x from the y-face row
      const double ey = 3.0 * p.at(cx, cy + sy) - 3.0 * p.at(cx, cy + 2 * sy) +
                        p.at(cx, cy + 3 * sy);
      const double ex = 3.0 * p.at(cx + sx, cy) - 3.0 * p.at(cx + 2 * sx, cy) +
                        p.at(cx + 3 * sx, cy);
      p.at(cx, cy) = 0.5 * (ex + ey);
    };
    fill_corner(-1, -1, +1, +1);
    fill_corner(g.nx, -1, -1, +1);
    fill_corner(-1, g.ny, +1, -1);
    fill_corner(g.nx, g.ny, -1, -1);
  }

  // Pass B: second ghost layer per face from the xi-type condition.
  for (int fi = 0; fi < nfaces; ++fi) {
    const FaceGeom fg = face_geom(g, static_cast<Face>(fi));
    for (int j = 0; j < fg.m; ++j) {
      const double x = xpos(g, fg, fg.w, j), y = ypos(g, fg, fg.w, j);
      const double h = fg.h;
      const double phi_w = pval(p, fg, fg.w, j);
      const double phi_i = pval(p, fg, fg.w - fg.s, j);
      const double g1 = pval(p, fg, fg.w + fg.s, j);
      double xv;  // prescribed value of dphi/dn + (l^2/2) d(lap phi)/dn
      if (const auto* nat = std::get_if<NaturalSh>(&face_bc(fi))) {
        xv = -eval_or_zero(nat->xi_env, x, y, t) / (2.0 * lam * l2);
      } else if (std::holds_alternative<EssentialSh>(face_bc(fi))) {
        xv = 0.0;  // passive completion; unused by the essential evolution path
      } else {
        const auto& mix = std::get<MixedSh>(face_bc(fi));
        const double phidot_env = env_rate(mix.phi_env, x, y, t, dt);
        const double phidot_w =
            phi_prev ? (phi_w - (fg.axis == 0 ? (*phi_prev)(fg.w, j)
                                              : (*phi_prev)(j, fg.w))) /
                           dt
                     : 0.0;
        xv = -mix.a * (phidot_env - phidot_w) / (2.0 * lam * l2);
      }
      const double X = (g1 - phi_i) / (2.0 * h);
      const double qi = (pval(p, fg, fg.w - 2 * fg.s, j) - 2.0 * phi_i + phi_w) /
                            (h * h) +
                        tang2_centered(p, fg, fg.w - fg.s, j);
      const double tang_g = tang2_centered(p, fg, fg.w + fg.s, j);
      const double qg = qi + (4.0 * h / l2) * (xv - X);
      const double g2 = h * h * (qg - tang_g) - phi_w + 2.0 * g1;
      pref(p, fg, fg.w + 2 * fg.s, j) = g2;
    }
  }

  // Remaining corner-quadrant cells; beyond every shipped stencil, filled so
  // the pad holds no NaN.
  if (g.dim == 2) {
    auto extrap_x = [&](int cx, int cy, int sx) {
      return 3.0 * p.at(cx + sx, cy) - 3.0 * p.at(cx + 2 * sx, cy) +
             p.at(cx + 3 * sx, cy);
    };
    auto extrap_y = [&](int cx, int cy, int sy) {
      return 3.0 * p.at(cx, cy + sy) - 3.0 * p.at(cx, cy + 2 * sy) +
             p.at(cx, cy + 3 * sy);
    };
    auto fill_quadrant = [&](int gx, int gy, int sx, int sy) {
      // gx, gy: outermost corner cell; sx, sy point back toward the domain
      const int x1 = gx + sx, y1 = gy + sy;  // inner corner cell (filled)
      p.at(gx, y1) = 0.5 * (extrap_x(gx, y1, sx) + extrap_y(gx, y1, sy));
      p.at(x1, gy) = 0.5 * (extrap_x(x1, gy, sx) + extrap_y(x1, gy, sy));
      p.at(gx, gy) = 0.5 * (extrap_x(gx, gy, sx) + extrap_y(gx, gy, sy));
    };
    fill_quadrant(-2, -2, +1, +1);
    fill_quadrant(g.nx + 1, -2, -1, +1);
    fill_quadrant(-2, g.ny + 1, +1, -1);
    fill_quadrant(g.nx + 1, g.ny + 1, -1, -1);
  }

  return res;
}

// Pins wall nodes of essential faces to phi_env; the stepper applies this to
// the state after every stage, before building the closure.
inline void apply_essential_values(ScalarField& phi, const ShBoundarySet& bcs,
                                   double t) {
  using namespace bdetail;
  const Grid& g = phi.grid;
  const int nfaces = g.dim == 1 ? 2 : 4;
  for (int fi = 0; fi < nfaces; ++fi) {
    const auto* ess = std::get_if<EssentialSh>(&bcs.bc[fi]);
    if (!ess || !ess->phi_env) continue;
    const FaceGeom fg = face_geom(g, static_cast<Face>(fi));
    for (int j = 0; j < fg.m; ++j) {
      const double x = xpos(g, fg, fg.w, j), y = ypos(g, fg, fg.w, j);
      if (fg.axis == 0)
        phi(fg.w, j) = ess->phi_env(x, y, t);
      else
        phi(j, fg.w) = ess->phi_env(x, y, t);
    }
  }
}

// ---- PFC wall closure (bounded grids are 1D for the conserved theory) ------

struct PfcClosure1d {
  PaddedField phi_pad;  // phi ghosts from the homogeneous natural conditions
  ScalarField mu;       // chemical potential at the nodes
  // Flux q = -M dmu/dx at the two walls (value of the flux component along +x).
  double wall_flux_left = 0.0;
  double wall_flux_right = 0.0;
};

inline PfcClosure1d ghost_closure_pfc(const ScalarField& phi,
                                      const PfcBoundarySet& bcs, double t,
                                      const PfcParams& params) {
  const Grid& g = phi.grid;
  if (g.dim != 1 || g.topology != Topology::bounded)
    throw std::invalid_argument("ghost_closure_pfc: needs a bounded 1D grid");
  bcs.validate_all();

  ShParams sh_like;
  sh_like.lambda = params.lambda;
  sh_like.ell = params.ell;
  sh_like.potential = params.potential;
  ShBoundarySet natural;  // homogeneous natural closure for phi
  PfcClosure1d out{ghost_closure_sh(phi, natural, t, 1.0, sh_like).pad,
                   ScalarField(g), 0.0, 0.0};

  const ScalarField lap = fd::laplacian(out.phi_pad);
  const ScalarField bilap = fd::bilaplacian(out.phi_pad);
  for (int i = 0; i < g.nx; ++i)
    out.mu.v[i] = chemical_potential(phi(i), lap(i), bilap(i),
                                     eval_or_zero(params.gamma, g.x(i), 0.0, t),
                                     params);

  const double M = params.mobility, h = g.hx;
  auto wall_flux = [&](const PfcBoundary& bc, bool left) {
    const int w = left ? 0 : g.nx - 1;
    const int in1 = left ? 1 : g.nx - 2;
    const double x = g.x(w);
    if (const auto* fx = std::get_if<FluxPfc>(&bc)) {
      // M dmu/dn = -j_env with n outward: flux component along +x
      const double j = eval_or_zero(fx->j_env, x, 0.0, t);
      return left ? -j : j;
    }
    const double mu_in = out.mu.v[in1];
    double mu_ghost;
    if (const auto* cp = std::get_if<ChemPotPfc>(&bc)) {
      mu_ghost = 2.0 * eval_or_zero(cp->mu_env, x, 0.0, t) - mu_in;
    } else {
      const auto& mm = std::get<MixedMassPfc>(bc);
      const double mu_env = eval_or_zero(mm.mu_env, x, 0.0, t);
      const double r = M / (2.0 * h), c2 = 0.5 * mm.c;
      // robin condition on the ghost/interior pair; wall value is their mean
      mu_ghost = (mm.c * mu_env + (r - c2) * mu_in) / (r + c2);
    }
    // q = -M dmu/dx, centered at the wall through the ghost
    return left ? -M * (mu_in - mu_ghost) / (2.0 * h)
                : -M * (mu_ghost - mu_in) / (2.0 * h);
  };
  out.wall_flux_left = wall_flux(bcs.left, true);
  out.wall_flux_right = wall_flux(bcs.right, false);
  return out;
}

}  // namespace pfgt
