// test_microtraction.cpp -- microtraction algebra: hand values, action-
// reaction, symmetric-part invariance, constitutive specialization
#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "pfgt/microtraction.hpp"
#include "pfgt/random.hpp"

using namespace pfgt;

namespace {

// Affine tensor field Sigma(x) = A + sum_k B_k x_k; derivatives are exact.
struct AffineTensor {
  Mat3 A;
  std::array<Mat3, 3> B;
  TractionFields fields(const std::function<Vec3(const Vec3&)>& xi = {}) const {
    TractionFields f;
    const Mat3 A_ = A;
    const auto B_ = B;
    f.sigma = [A_, B_](const Vec3& x) {
      Mat3 s = A_;
      for (int k = 0; k < 3; ++k) s += B_[k] * x[k];
      return s;
    };
    f.grad_sigma = [B_](const Vec3&) { return B_; };
    f.xi = xi ? xi : [](const Vec3&) { return Vec3::Zero(); };
    return f;
  }
  AffineTensor symmetrized() const {
    AffineTensor s;
    s.A = 0.5 * (A + A.transpose());
    for (int k = 0; k < 3; ++k) s.B[k] = 0.5 * (B[k] + B[k].transpose());
    return s;
  }
};

AffineTensor random_affine(Rng& rng) {
  AffineTensor t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      t.A(i, j) = rng.sym();
      for (int k = 0; k < 3; ++k) t.B[k](i, j) = rng.sym();
    }
  return t;
}

}  // namespace

TEST_CASE("surface microtraction: constant xi on a plane") {
  const Vec3 c(0.7, -0.4, 1.1);
  TractionFields f;
  f.xi = [c](const Vec3&) { return c; };
  f.sigma = [](const Vec3&) { return Mat3::Zero(); };
  f.grad_sigma = [](const Vec3&) {
    return std::array<Mat3, 3>{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
  };
  ParamPatch p = plane_patch(Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY());
  const PatchFrame fr = eval_frame(p, 0.3, -0.2);
  CHECK(surface_microtraction(f, fr) == Catch::Approx(c.dot(fr.n)).margin(1e-14));
}

TEST_CASE("surface microtraction: isotropic Sigma reduces to (xi - grad s).n") {
  // Sigma = s(x) I with s = x1, xi = 0, plane with n = e1: xi_S = -1
  AffineTensor t;
  t.A = Mat3::Zero();
  t.B = {Mat3::Identity(), Mat3::Zero(), Mat3::Zero()};  // s = x_1
  TractionFields f = t.fields();
  ParamPatch p = plane_patch(Vec3::Zero(), Vec3::UnitY(), Vec3::UnitZ());  // n = e1
  const PatchFrame fr = eval_frame(p, 0.1, 0.4);
  REQUIRE((fr.n - Vec3::UnitX()).norm() <= 1e-14);
  CHECK(surface_microtraction(f, fr) == Catch::Approx(-1.0).margin(1e-13));
}

TEST_CASE("surface microtraction ignores the skew part of Sigma") {
  Rng rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    AffineTensor t = random_affine(rng);
    AffineTensor ts = t.symmetrized();
    const Vec3 c(rng.sym(), rng.sym(), rng.sym());
    auto xi = [c](const Vec3&) { return c; };
    TractionFields f = t.fields(xi);
    TractionFields fs = ts.fields(xi);
    ParamPatch p = sphere_patch(1.0 + rng.u01(), Vec3(rng.sym(), rng.sym(), rng.sym()));
    const PatchFrame fr = eval_frame(p, 0.6 + 1.5 * rng.u01(), 6.0 * rng.u01());
    const double a = surface_microtraction(f, fr);
    const double b = surface_microtraction(fs, fr);
    CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("hypermicrotraction and surface couple") {
  CHECK(hypermicrotraction(Mat3::Identity(), Vec3(0.6, 0.8, 0.0)) ==
        Catch::Approx(1.0));
  Mat3 d = Vec3(1.0, 2.0, 3.0).asDiagonal();
  CHECK(hypermicrotraction(d, Vec3::UnitZ()) == Catch::Approx(3.0));
  Mat3 skew;
  skew << 0, 1, -2, -1, 0, 3, 2, -3, 0;
  CHECK(hypermicrotraction(skew, Vec3(0.6, 0.0, 0.8)) == Catch::Approx(0.0).margin(1e-15));
  const Vec3 n = Vec3(1.0, 1.0, 1.0).normalized();
  CHECK((surface_couple(d, n) - hypermicrotraction(d, n) * n).norm() == 0.0);
}

TEST_CASE("edge microtractions") {
  SECTION("identity Sigma vanishes on orthonormal frames") {
    const Vec3 n = Vec3::UnitY(), nu = Vec3::UnitX();
    CHECK(boundary_edge_microtraction(Mat3::Identity(), nu, n) == 0.0);
    CHECK(internal_edge_microtraction(Mat3::Identity(), Vec3::UnitY(), Vec3::UnitX(),
                                      Vec3::UnitX(), Vec3::UnitY()) == 0.0);
  }
  SECTION("shear Sigma") {
    Mat3 s = Mat3::Zero();
    s(0, 1) = s(1, 0) = 1.0;  // e1 (x) e2 + e2 (x) e1
    CHECK(boundary_edge_microtraction(s, Vec3::UnitX(), Vec3::UnitY()) ==
          Catch::Approx(1.0));
    // cube edge between faces (n+ = e1, nu+ = e2) and (n- = e2, nu- = e1)
    CHECK(internal_edge_microtraction(s, Vec3::UnitY(), Vec3::UnitX(),
                                      Vec3::UnitX(), Vec3::UnitY()) ==
          Catch::Approx(2.0));
  }
}

TEST_CASE("action-reaction sign flips") {
  Rng rng(808);
  for (int trial = 0; trial < 50; ++trial) {
    AffineTensor t = random_affine(rng);
    const Vec3 c(rng.sym(), rng.sym(), rng.sym());
    TractionFields f = t.fields([c](const Vec3&) { return c; });
    ParamPatch p = sphere_patch(1.0 + rng.u01(), Vec3(rng.sym(), rng.sym(), rng.sym()));
    const PatchFrame fr = eval_frame(p, 0.6 + 1.5 * rng.u01(), 6.0 * rng.u01());
    const PatchFrame fl = flip_orientation(fr);

    const double xs = surface_microtraction(f, fr);
    const double xs_f = surface_microtraction(f, fl);
    CHECK(std::abs(xs_f + xs) <= 1e-12 * std::max(1.0, std::abs(xs)));

    const Mat3 sig = f.sigma(fr.x);
    CHECK((surface_couple(sig, -fr.n) + surface_couple(sig, fr.n)).norm() <= 1e-12);

    // flipping the surface orientation flips both limiting normals while the
    // outward tangent-normals stay put
    const Vec3 np = Vec3::UnitX(), nup = Vec3::UnitY();
    const Vec3 nm = Vec3::UnitY(), num = Vec3::UnitX();
    const double tc = internal_edge_microtraction(sig, nup, np, num, nm);
    const double tc_f = internal_edge_microtraction(sig, nup, -np, num, -nm);
    CHECK(std::abs(tc_f + tc) <= 1e-12 * std::max(1.0, std::abs(tc)));
  }
}

TEST_CASE("symmetric-part invariance of the edge and couple tractions") {
  Rng rng(909);
  for (int trial = 0; trial < 100; ++trial) {
    AffineTensor t = random_affine(rng);
    const Vec3 x(rng.sym(), rng.sym(), rng.sym());
    const Mat3 sig = t.fields().sigma(x);
    const Mat3 sym = 0.5 * (sig + sig.transpose());

    // sigma_S and varpi_S
    Vec3 n(rng.sym(), rng.sym(), rng.sym());
    n.normalize();
    CHECK(std::abs(hypermicrotraction(sig, n) - hypermicrotraction(sym, n)) <= 1e-12);

    // tau_C through coplanar limiting pairs (n+- and nu+- span one plane)
    Vec3 a(rng.sym(), rng.sym(), rng.sym());
    a.normalize();
    Vec3 b0(rng.sym(), rng.sym(), rng.sym());
    Vec3 b = (b0 - b0.dot(a) * a).normalized();
    const double cth = std::cos(1.1), sth = std::sin(1.1);
    const Vec3 np = a, nup = b;
    const Vec3 nm = cth * a + sth * b, num = sth * a - cth * b;
    const double tc = internal_edge_microtraction(sig, nup, np, num, nm);
    const double tcs = internal_edge_microtraction(sym, nup, np, num, nm);
    CHECK(std::abs(tc - tcs) <= 1e-10);

    // tau_dS alone is invariant under the coplanar internal-edge pairing: the
    // smooth continuation nu- = -nu+, n- = n+ cancels the skew contribution
    const double pair = boundary_edge_microtraction(sig, nup, np) +
                        boundary_edge_microtraction(sig, -nup, np);
    const double pair_s = boundary_edge_microtraction(sym, nup, np) +
                          boundary_edge_microtraction(sym, -nup, np);
    CHECK(std::abs(pair - pair_s) <= 1e-12);
  }
}

TEST_CASE("constitutive specialization: isotropic Sigma from the phase field") {
  // phi = x^2 y + z^3 - x y z: lap phi = 2 y + 6 z, grad lap = (0, 2, 6)
  AnalyticPhase3d phi;
  phi.phi = [](const Vec3& x) {
    return x[0] * x[0] * x[1] + x[2] * x[2] * x[2] - x[0] * x[1] * x[2];
  };
  phi.grad = [](const Vec3& x) {
    return Vec3(2.0 * x[0] * x[1] - x[1] * x[2], x[0] * x[0] - x[0] * x[2],
                3.0 * x[2] * x[2] - x[0] * x[1]);
  };
  phi.hess = [](const Vec3& x) {
    Mat3 h;
    h << 2.0 * x[1], 2.0 * x[0] - x[2], -x[1],
         2.0 * x[0] - x[2], 0.0, -x[0],
         -x[1], -x[0], 6.0 * x[2];
    return h;
  };
  phi.grad_lap = [](const Vec3&) { return Vec3(0.0, 2.0, 6.0); };

  const double lambda = 1.3, ell = 0.9;
  TractionFields f = constitutive_traction_fields(phi, lambda, ell);
  const double l2 = ell * ell;

  Rng rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    ParamPatch p = sphere_patch(1.0 + rng.u01(), Vec3(rng.sym(), rng.sym(), rng.sym()));
    const PatchFrame fr = eval_frame(p, 0.6 + 1.5 * rng.u01(), 6.0 * rng.u01());
    validate_frame(fr);

    // tau_dS and tau_C vanish for isotropic Sigma
    const Mat3 sig = f.sigma(fr.x);
    Vec3 t = fr.xu.normalized();
    const Vec3 nu = t.cross(fr.n);
    CHECK(std::abs(boundary_edge_microtraction(sig, nu, fr.n)) <= 1e-12);
    CHECK(std::abs(internal_edge_microtraction(sig, nu, fr.n, -nu, fr.n)) <= 1e-12);

    // xi_S reduces to -2 lambda l^2 (dphi/dn + (l^2/2) d(lap phi)/dn)
    const double dphi_dn = phi.grad(fr.x).dot(fr.n);
    const double dlap_dn = phi.grad_lap(fr.x).dot(fr.n);
    const double expected = -2.0 * lambda * l2 * (dphi_dn + 0.5 * l2 * dlap_dn);
    const double xs = surface_microtraction(f, fr);
    CHECK(xs == Catch::Approx(expected).margin(1e-10));
  }
}

TEST_CASE("frame validation catches broken input") {
  ParamPatch p = sphere_patch(1.0, Vec3::Zero());
  PatchFrame fr = eval_frame(p, 1.0, 1.0);
  validate_frame(fr);
  fr.n *= 1.5;
  CHECK_THROWS_AS(validate_frame(fr), degenerate_frame);
}
