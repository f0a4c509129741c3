// spectral.hpp -- Fourier-collocation differential operators on periodic grids
#pragma once

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <vector>

#include "pfgt/errors.hpp"
#include "pfgt/grid.hpp"

namespace pfgt {

namespace detail {
inline std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

// One instance owns FFTW plans and scratch buffers for a fixed periodic grid.
// Not copyable; use one instance per thread. The Nyquist coefficient of odd
// derivatives is zeroed (standard collocation convention); even derivatives
// keep the full symbol.
class SpectralOps {
 public:
  explicit SpectralOps(const Grid& g) : grid_(g) {
    if (g.topology != Topology::periodic)
      throw bounded_without_closure("SpectralOps requires a periodic grid");
    nx_ = g.nx;
    ny_ = g.dim == 2 ? g.ny : 1;
    nxr_ = nx_ / 2 + 1;
    nspec_ = static_cast<std::size_t>(ny_) * nxr_;
    real_ = fftw_alloc_real(grid_.size());
    spec_ = fftw_alloc_complex(nspec_);
    {
      std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
      if (g.dim == 1) {
        fwd_ = fftw_plan_dft_r2c_1d(nx_, real_, spec_, FFTW_ESTIMATE);
        inv_ = fftw_plan_dft_c2r_1d(nx_, spec_, real_, FFTW_ESTIMATE);
      } else {
        fwd_ = fftw_plan_dft_r2c_2d(ny_, nx_, real_, spec_, FFTW_ESTIMATE);
        inv_ = fftw_plan_dft_c2r_2d(ny_, nx_, spec_, real_, FFTW_ESTIMATE);
      }
    }
    const double two_pi = 2.0 * std::numbers::pi;
    kx_.resize(nxr_);
    for (int j = 0; j < nxr_; ++j) kx_[j] = two_pi * j / g.length_x();
    ky_.resize(ny_);
    for (int j = 0; j < ny_; ++j) {
      const int js = j <= ny_ / 2 ? j : j - ny_;
      ky_[j] = g.dim == 2 ? two_pi * js / g.length_y() : 0.0;
    }
  }

  ~SpectralOps() {
    std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
    fftw_free(real_);
    fftw_free(spec_);
  }

  SpectralOps(const SpectralOps&) = delete;
  SpectralOps& operator=(const SpectralOps&) = delete;

  const Grid& grid() const { return grid_; }
  std::size_t nspec() const { return nspec_; }
  double kx(int jx) const { return kx_[jx]; }
  double ky(int jy) const { return ky_[jy]; }
  bool kx_nyquist(int jx) const { return nx_ % 2 == 0 && jx == nx_ / 2; }
  bool ky_nyquist(int jy) const { return ny_ % 2 == 0 && ny_ > 1 && jy == ny_ / 2; }
  double k_sq(int jx, int jy) const {
    return kx_[jx] * kx_[jx] + ky_[jy] * ky_[jy];
  }

  void forward(const ScalarField& f, std::vector<std::complex<double>>& out) {
    check(f);
    std::copy(f.v.begin(), f.v.end(), real_);
    fftw_execute(fwd_);
    out.resize(nspec_);
    std::copy(reinterpret_cast<std::complex<double>*>(spec_),
              reinterpret_cast<std::complex<double>*>(spec_) + nspec_, out.begin());
  }

  // Normalizing inverse; clobbers the spectrum argument (c2r destroys input).
  void inverse(std::vector<std::complex<double>>& in, ScalarField& out) {
    std::copy(in.begin(), in.end(), reinterpret_cast<std::complex<double>*>(spec_));
    fftw_execute(inv_);
    out.grid = grid_;
    out.v.resize(grid_.size());
    const double norm = 1.0 / static_cast<double>(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i) out.v[i] = real_[i] * norm;
  }

  // Applies a real multiplier m(jx, jy) in spectral space.
  template <class Fn>
  ScalarField apply_symbol(const ScalarField& f, Fn&& m) {
    forward(f, scratch_);
    for (int jy = 0; jy < ny_; ++jy)
      for (int jx = 0; jx < nxr_; ++jx) scratch_[spec_idx(jx, jy)] *= m(jx, jy);
    ScalarField out;
    inverse(scratch_, out);
    return out;
  }

  ScalarField laplacian(const ScalarField& f) {
    return apply_symbol(f, [this](int jx, int jy) { return -k_sq(jx, jy); });
  }

  ScalarField bilaplacian(const ScalarField& f) {
    return apply_symbol(f, [this](int jx, int jy) {
      const double k2 = k_sq(jx, jy);
      return k2 * k2;
    });
  }

  // (1 + ell^2 lap)^2 phi, evaluated as multiplication by (1 - ell^2 k^2)^2.
  ScalarField sh_linear(const ScalarField& f, double ell) {
    const double l2 = ell * ell;
    return apply_symbol(f, [this, l2](int jx, int jy) {
      const double a = 1.0 - l2 * k_sq(jx, jy);
      return a * a;
    });
  }

  VectorField gradient(const ScalarField& f) {
    VectorField out(grid_);
    forward(f, scratch_);
    derivative_axis(scratch_, 0, out.comp(0));
    if (grid_.dim == 2) derivative_axis(scratch_, 1, out.comp(1));
    return out;
  }

  ScalarField divergence(const VectorField& f) {
    ScalarField out(grid_);
    std::vector<double> acc(grid_.size(), 0.0);
    std::vector<double> tmp(grid_.size());
    for (int c = 0; c < grid_.dim; ++c) {
      forward_plane(f.comp(c));
      derivative_axis(scratch_, c, tmp.data());
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += tmp[i];
    }
    out.v = std::move(acc);
    return out;
  }

  // Row divergence of a symmetric tensor: out_i = d_j T_ij.
  VectorField divergence(const SymTensorField& f) {
    VectorField out(grid_);
    std::vector<double> tmp(grid_.size());
    if (grid_.dim == 1) {
      forward_plane(f.comp(0));
      derivative_axis(scratch_, 0, out.comp(0));
      return out;
    }
    // out_x = dx Txx + dy Txy ; out_y = dx Txy + dy Tyy
    forward_plane(f.comp(0));
    derivative_axis(scratch_, 0, out.comp(0));
    forward_plane(f.comp(2));
    derivative_axis(scratch_, 1, tmp.data());
    add_into(out.comp(0), tmp);
    forward_plane(f.comp(2));
    derivative_axis(scratch_, 0, out.comp(1));
    forward_plane(f.comp(1));
    derivative_axis(scratch_, 1, tmp.data());
    add_into(out.comp(1), tmp);
    return out;
  }

  // Row divergence of a general tensor (components xx, xy, yx, yy).
  VectorField divergence(const TensorField& f) {
    VectorField out(grid_);
    std::vector<double> tmp(grid_.size());
    if (grid_.dim == 1) {
      forward_plane(f.comp(0));
      derivative_axis(scratch_, 0, out.comp(0));
      return out;
    }
    forward_plane(f.comp(0));
    derivative_axis(scratch_, 0, out.comp(0));
    forward_plane(f.comp(1));
    derivative_axis(scratch_, 1, tmp.data());
    add_into(out.comp(0), tmp);
    forward_plane(f.comp(2));
    derivative_axis(scratch_, 0, out.comp(1));
    forward_plane(f.comp(3));
    derivative_axis(scratch_, 1, tmp.data());
    add_into(out.comp(1), tmp);
    return out;
  }

  // Symmetric by construction: (xx, yy, xy) from the spectral symbol.
  SymTensorField hessian(const ScalarField& f) {
    SymTensorField out(grid_);
    forward(f, scratch_);
    spec2_ = scratch_;
    multiply_symbol(spec2_, [this](int jx, int jy) {
      (void)jy;
      return -kx_[jx] * kx_[jx];
    });
    inverse_to(spec2_, out.comp(0));
    if (grid_.dim == 2) {
      spec2_ = scratch_;
      multiply_symbol(spec2_, [this](int jx, int jy) {
        (void)jx;
        return -ky_[jy] * ky_[jy];
      });
      inverse_to(spec2_, out.comp(1));
      spec2_ = scratch_;
      multiply_symbol(spec2_, [this](int jx, int jy) {
        if (kx_nyquist(jx) || ky_nyquist(jy)) return 0.0;
        return -kx_[jx] * ky_[jy];
      });
      inverse_to(spec2_, out.comp(2));
    }
    return out;
  }

 private:
  std::size_t spec_idx(int jx, int jy) const {
    return static_cast<std::size_t>(jy) * nxr_ + jx;
  }

  void check(const ScalarField& f) const {
    if (!(f.grid == grid_))
      throw std::invalid_argument("SpectralOps: field grid mismatch");
  }

  void forward_plane(const double* data) {
    std::copy(data, data + grid_.size(), real_);
    fftw_execute(fwd_);
    scratch_.resize(nspec_);
    std::copy(reinterpret_cast<std::complex<double>*>(spec_),
              reinterpret_cast<std::complex<double>*>(spec_) + nspec_,
              scratch_.begin());
  }

  template <class Fn>
  void multiply_symbol(std::vector<std::complex<double>>& s, Fn&& m) const {
    for (int jy = 0; jy < ny_; ++jy)
      for (int jx = 0; jx < nxr_; ++jx) s[spec_idx(jx, jy)] *= m(jx, jy);
  }

  void inverse_to(std::vector<std::complex<double>>& s, double* out) {
    std::copy(s.begin(), s.end(), reinterpret_cast<std::complex<double>*>(spec_));
    fftw_execute(inv_);
    const double norm = 1.0 / static_cast<double>(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i) out[i] = real_[i] * norm;
  }

  // d/dx_axis: multiply by i*k, Nyquist coefficient zeroed.
  void derivative_axis(const std::vector<std::complex<double>>& s, int axis,
                       double* out) {
    spec2_.resize(nspec_);
    for (int jy = 0; jy < ny_; ++jy)
      for (int jx = 0; jx < nxr_; ++jx) {
        const std::size_t i = spec_idx(jx, jy);
        double k = axis == 0 ? kx_[jx] : ky_[jy];
        if (axis == 0 && kx_nyquist(jx)) k = 0.0;
        if (axis == 1 && ky_nyquist(jy)) k = 0.0;
        spec2_[i] = std::complex<double>(-s[i].imag() * k, s[i].real() * k);
      }
    inverse_to(spec2_, out);
  }

  static void add_into(double* dst, const std::vector<double>& src) {
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] += src[i];
  }

  Grid grid_;
  int nx_, ny_, nxr_;
  std::size_t nspec_;
  double* real_;
  fftw_complex* spec_;
  fftw_plan fwd_, inv_;
  std::vector<double> kx_, ky_;
  std::vector<std::complex<double>> scratch_, spec2_;
};

}  // namespace pfgt
