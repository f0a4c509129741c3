// random.hpp -- seeded, platform-stable field generators
#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "pfgt/grid.hpp"
#include "pfgt/spectral.hpp"

namespace pfgt {

// The one RNG algorithm used anywhere in the library. mt19937_64 has a
// standard-mandated sequence; the 53-bit mapping below makes the uniform
// draw reproducible across platforms. Config files name it "mt19937_64-u53".
inline constexpr const char* kRngAlgorithm = "mt19937_64-u53";

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  // Uniform in [0, 1).
  double u01() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
  // Uniform in [-1, 1).
  double sym() { return 2.0 * u01() - 1.0; }
};

// i.i.d. uniform values in [mean - amplitude, mean + amplitude), filled in
// storage order so runs reproduce exactly for a given seed.
inline ScalarField random_field(const Grid& g, double amplitude, double mean,
                                std::uint64_t seed) {
  Rng rng(seed);
  ScalarField f(g);
  for (double& x : f.v) x = mean + amplitude * rng.sym();
  return f;
}

// Periodic band-limited field: random spectrum cut at cutoff_frac of the
// Nyquist wavenumber, zero mean, scaled to the requested max amplitude.
// grad^2 of such a field is spectrally exact.
inline ScalarField band_limited_field(const Grid& g, double amplitude,
                                      std::uint64_t seed,
                                      double cutoff_frac = 0.5) {
  SpectralOps ops(g);
  Rng rng(seed);
  const int nxr = g.nx / 2 + 1;
  const int ny = g.dim == 2 ? g.ny : 1;
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(ny) * nxr,
                                         {0.0, 0.0});
  auto slot = [&](int jx, int jy) -> std::complex<double>& {
    return spec[static_cast<std::size_t>(jy) * nxr + jx];
  };
  const double k_cut = cutoff_frac * ops.kx(g.nx / 2);
  auto keep = [&](int jx, int jy) {
    return ops.k_sq(jx, jy) <= k_cut * k_cut && !ops.kx_nyquist(jx) &&
           !ops.ky_nyquist(jy);
  };
  // Interior columns are free; the jx = 0 column must be Hermitian in jy for
  // the half-spectrum to describe a real field. The (0,0) mode stays zero.
  for (int jy = 0; jy < ny; ++jy)
    for (int jx = 1; jx < nxr; ++jx)
      if (keep(jx, jy)) slot(jx, jy) = {rng.sym(), rng.sym()};
  for (int jy = 1; jy < (ny + 1) / 2; ++jy)
    if (keep(0, jy)) {
      const std::complex<double> c(rng.sym(), rng.sym());
      slot(0, jy) = c;
      slot(0, ny - jy) = std::conj(c);
    }
  ScalarField out;
  ops.inverse(spec, out);
  double peak = 0.0;
  for (double x : out.v) peak = std::max(peak, std::abs(x));
  if (peak > 0.0)
    for (double& x : out.v) x *= amplitude / peak;
  return out;
}

}  // namespace pfgt
