// test_evolution.cpp -- steppers against linearization oracles, conservation
// and dissipation contracts, determinism
#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

#include "pfgt/evolution.hpp"

using namespace pfgt;
using std::numbers::pi;

namespace {

SimConfig sh_config_1d(int n, double length) {
  SimConfig c;
  c.model = Model::sh;
  c.grid = Grid::periodic_1d(n, length);
  c.sh.lambda = 1.0;
  c.sh.ell = 1.0;
  c.sh.beta = 1.0;
  c.sh.potential = BulkPotential::double_well(0.3);
  return c;
}

}  // namespace

TEST_CASE("sh: zero state is an equilibrium") {
  SimConfig c = sh_config_1d(64, 20.0 * pi);
  c.dt = 1e-2;
  ShSpectralStepper stepper(c.grid, c.sh, 0.3, c.dt);
  SimState st;
  st.phi = ScalarField(c.grid, 0.0);
  st.phi_prev = st.phi;
  for (int i = 0; i < 50; ++i) stepper.step(st);
  double m = 0.0;
  for (double x : st.phi.v) m = std::max(m, std::abs(x));
  CHECK(m == 0.0);
}

TEST_CASE("sh: single-mode growth matches the linearization") {
  // IC = 1e-4 cos(kx): amplitude ratio tracks exp(sigma(k) n dt) with
  // sigma(k) = -(lambda (1 - l^2 k^2)^2 + f''(0)) / beta.
  SimConfig c = sh_config_1d(256, 20.0 * pi);
  c.dt = 1e-3;
  const double k = 0.8;
  const double g = 0.3;
  const double a = 1.0 - k * k;
  const double sigma = -(a * a - g);

  ShSpectralStepper stepper(c.grid, c.sh, g, c.dt);
  SimState st;
  st.phi = ScalarField(c.grid);
  const double A = 1e-4;
  for (int i = 0; i < c.grid.nx; ++i) st.phi(i) = A * std::cos(k * c.grid.x(i));
  st.phi_prev = st.phi;

  const int nsteps = 200;
  for (int i = 0; i < nsteps; ++i) stepper.step(st);

  std::vector<std::complex<double>> spec;
  stepper.ops().forward(st.phi, spec);
  const int mode = static_cast<int>(std::lround(k * c.grid.length_x() / (2.0 * pi)));
  const double amp = std::abs(spec[mode]) / c.grid.nx;
  const double expected = 0.5 * A * std::exp(sigma * nsteps * c.dt);
  CHECK(amp / expected == Catch::Approx(1.0).epsilon(0.01));

  // cross-check against a tiny explicit-Euler integration of the linearized ODE
  double amp_euler = 0.5 * A;
  const int sub = 20;
  for (int i = 0; i < nsteps * sub; ++i) amp_euler *= 1.0 + sigma * c.dt / sub;
  CHECK(amp / amp_euler == Catch::Approx(1.0).epsilon(0.01));
}

TEST_CASE("sh: stabilized IMEX decreases the energy from a random IC") {
  SimConfig c;
  c.model = Model::sh;
  c.grid = Grid::periodic_2d(48, 48, 16.0 * pi, 16.0 * pi);
  c.sh.potential = BulkPotential::double_well(0.3);
  c.dt = 2e-2;
  c.t_end = c.dt * 300;
  c.cadence = 1;
  c.ic.kind = InitialCondition::Kind::random;
  c.ic.amplitude = 0.1;
  c.ic.seed = 7;

  RunResult r = run(c);
  REQUIRE(r.series.rows.size() == 301);
  for (std::size_t i = 1; i < r.series.rows.size(); ++i) {
    const double prev = r.series.rows[i - 1].energy;
    const double cur = r.series.rows[i].energy;
    CHECK(cur <= prev + 1e-10 * std::abs(prev));
  }
  CHECK(r.series.rows.back().energy < r.series.rows.front().energy);
}

TEST_CASE("pfc: constant state is stationary") {
  SimConfig c;
  c.model = Model::pfc;
  c.grid = Grid::periodic_1d(64, 16.0 * pi);
  c.pfc.potential = BulkPotential::double_well(0.3);
  PfcSpectralStepper stepper(c.grid, c.pfc, 0.3, 1e-3);
  SimState st;
  st.phi = ScalarField(c.grid, 0.4);
  st.phi_prev = st.phi;
  stepper.prime_mean(st.phi);
  for (int i = 0; i < 100; ++i) stepper.step(st);
  for (double x : st.phi.v) CHECK(x == Catch::Approx(0.4).margin(1e-13));
}

TEST_CASE("pfc: mass is conserved to round-off over 1000 steps") {
  SimConfig c;
  c.model = Model::pfc;
  c.grid = Grid::periodic_1d(128, 16.0 * pi);
  c.pfc.potential = BulkPotential::double_well(0.5);
  c.dt = 1e-3;
  PfcSpectralStepper stepper(c.grid, c.pfc, 0.5, c.dt);
  SimState st;
  st.phi = random_field(c.grid, 0.2, 0.3, 11);
  st.phi_prev = st.phi;
  stepper.prime_mean(st.phi);
  const double m0 = total_mass(st.phi);
  for (int i = 0; i < 1000; ++i) stepper.step(st);
  CHECK(std::abs(total_mass(st.phi) - m0) <= 1e-12 * std::abs(m0));
}

TEST_CASE("pfc: single-mode growth matches the linearization") {
  SimConfig c;
  c.model = Model::pfc;
  c.grid = Grid::periodic_1d(256, 20.0 * pi);
  c.pfc.potential = BulkPotential::double_well(0.3);
  c.dt = 5e-4;
  c.ic.mean = 0.0;

  auto pts = dispersion_scan(c, {0.8}, 300);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].sigma_measured ==
        Catch::Approx(pts[0].sigma_analytic).epsilon(0.01));
}

TEST_CASE("dispersion scan: marginal and conserved zero modes") {
  SimConfig c = sh_config_1d(256, 20.0 * pi);
  c.dt = 1e-3;
  c.sh.potential = BulkPotential::zero();  // f''(0) = 0

  SECTION("sh marginal mode k = 1/ell") {
    auto pts = dispersion_scan(c, {1.0}, 200);
    CHECK(pts[0].sigma_analytic == 0.0);
    CHECK(std::abs(pts[0].sigma_measured) <= 1e-3);
  }

  SECTION("sh k = 0 relaxes at -(lambda + f''(0))/beta") {
    c.sh.potential = BulkPotential::double_well(0.3);
    auto pts = dispersion_scan(c, {0.0}, 200);
    CHECK(pts[0].sigma_analytic == Catch::Approx(-(1.0 - 0.3)));
    CHECK(pts[0].sigma_measured ==
          Catch::Approx(pts[0].sigma_analytic).epsilon(0.01));
  }

  SECTION("pfc k = 0 is exactly conserved") {
    SimConfig cp;
    cp.model = Model::pfc;
    cp.grid = Grid::periodic_1d(256, 20.0 * pi);
    cp.pfc.potential = BulkPotential::double_well(0.3);
    cp.dt = 1e-3;
    cp.ic.mean = 0.3;
    auto pts = dispersion_scan(cp, {0.0}, 100);
    CHECK(pts[0].sigma_analytic == 0.0);
    CHECK(pts[0].sigma_measured == Catch::Approx(0.0).margin(1e-12));
  }
}

TEST_CASE("dispersion scan rejects amplitudes that leave the linear regime") {
  SimConfig c = sh_config_1d(64, 20.0 * pi);
  c.dt = 5e-2;
  c.sh.potential = BulkPotential::double_well(5.0);  // strongly unstable
  CHECK_THROWS_AS(dispersion_scan(c, {1.0}, 4000, 1e-4), fit_failure);
}

TEST_CASE("run: t_end = 0 leaves exactly the initial row") {
  SimConfig c = sh_config_1d(64, 16.0 * pi);
  c.t_end = 0.0;
  c.ic.kind = InitialCondition::Kind::constant;
  c.ic.value = 0.25;
  RunResult r = run(c);
  REQUIRE(r.series.rows.size() == 1);
  CHECK(r.series.rows[0].t == 0.0);
  CHECK(r.state.step == 0);
  CHECK(r.series.rows[0].mass == Catch::Approx(0.25 * c.grid.length_x()));
}

TEST_CASE("run: identical configs and seeds are bit-identical") {
  SimConfig c = sh_config_1d(64, 16.0 * pi);
  c.dt = 5e-3;
  c.t_end = 0.5;
  c.cadence = 10;
  c.ic.kind = InitialCondition::Kind::random;
  c.ic.amplitude = 0.1;
  c.ic.seed = 999;

  RunResult a = run(c);
  RunResult b = run(c);
  REQUIRE(a.series.rows.size() == b.series.rows.size());
  for (std::size_t i = 0; i < a.series.rows.size(); ++i) {
    CHECK(a.series.rows[i].energy == b.series.rows[i].energy);
    CHECK(a.series.rows[i].mass == b.series.rows[i].mass);
    CHECK(a.series.rows[i].min_phi == b.series.rows[i].min_phi);
    CHECK(a.series.rows[i].max_phi == b.series.rows[i].max_phi);
    CHECK(a.series.rows[i].dissipation == b.series.rows[i].dissipation);
  }
}

TEST_CASE("run: row count follows the cadence contract") {
  SimConfig c = sh_config_1d(64, 16.0 * pi);
  c.dt = 1e-2;
  c.t_end = 0.55;  // 55 steps
  c.cadence = 10;
  c.ic.kind = InitialCondition::Kind::constant;
  c.ic.value = 0.0;
  RunResult r = run(c);
  CHECK(r.series.rows.size() == 1 + 55 / 10);
  for (std::size_t i = 1; i < r.series.rows.size(); ++i)
    CHECK(r.series.rows[i].t > r.series.rows[i - 1].t);
}

TEST_CASE("default stabilization covers the double-well curvature") {
  // -f'' = g - 3 phi^2 peaks at phi = 0 for the shipped potential
  CHECK(default_stabilization(BulkPotential::double_well(0.3), 0.1) ==
        Catch::Approx(0.3).margin(1e-6));
  CHECK(default_stabilization(BulkPotential::zero(), 1.0) == 0.0);
}

TEST_CASE("mode commensurability is validated") {
  SimConfig c = sh_config_1d(64, 20.0 * pi);
  c.ic.kind = InitialCondition::Kind::mode;
  c.ic.kx = 0.33;  // not a multiple of 2 pi / L = 0.1
  c.ic.amplitude = 1e-4;
  CHECK_THROWS(build_initial_field(c));
}
