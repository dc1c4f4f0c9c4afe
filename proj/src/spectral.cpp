#include "spectral.hpp"

#include <cstring>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace anicurv {

namespace {
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

// frequency (radians per unit length) of index j on an axis with n cells of
// spacing h; standard FFT ordering
inline double freq(int j, int n, double length) {
  const int f = j <= n / 2 ? j : j - n;
  return 2.0 * std::numbers::pi * f / length;
}
}  // namespace

Spectral::Spectral(const Grid& g) : g_(g) {
  if (g.boundary != Boundary::periodic)
    throw std::invalid_argument("Spectral: periodic grids only");
  nreal_ = g.size();
  ncx_ = g.n[0] / 2 + 1;
  ncplx_ = static_cast<std::int64_t>(ncx_) * g.n[1] * (g.dim == 3 ? g.n[2] : 1);
  rbuf_ = fftw_alloc_real(nreal_);
  hat_ = fftw_alloc_complex(ncplx_);
  scratch_ = fftw_alloc_complex(ncplx_);
  std::lock_guard<std::mutex> lock(plan_mutex());
  if (g.dim == 2) {
    fwd_ = fftw_plan_dft_r2c_2d(g.n[1], g.n[0], rbuf_, hat_, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r_2d(g.n[1], g.n[0], scratch_, rbuf_, FFTW_ESTIMATE);
  } else {
    fwd_ = fftw_plan_dft_r2c_3d(g.n[2], g.n[1], g.n[0], rbuf_, hat_, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r_3d(g.n[2], g.n[1], g.n[0], scratch_, rbuf_, FFTW_ESTIMATE);
  }
  if (!fwd_ || !bwd_) throw std::runtime_error("Spectral: FFTW plan creation failed");
}

Spectral::~Spectral() {
  std::lock_guard<std::mutex> lock(plan_mutex());
  fftw_destroy_plan(fwd_);
  fftw_destroy_plan(bwd_);
  fftw_free(rbuf_);
  fftw_free(hat_);
  fftw_free(scratch_);
}

void Spectral::forward(const std::vector<double>& in) {
  if (static_cast<std::int64_t>(in.size()) != nreal_)
    throw std::invalid_argument("Spectral::forward: size mismatch");
  std::memcpy(rbuf_, in.data(), nreal_ * sizeof(double));
  fftw_execute(fwd_);
}

void Spectral::run_inverse(std::vector<double>& out) {
  fftw_execute(bwd_);
  out.resize(nreal_);
  const double scale = 1.0 / static_cast<double>(nreal_);
  for (std::int64_t i = 0; i < nreal_; ++i) out[i] = rbuf_[i] * scale;
}

void Spectral::inverse(std::vector<double>& out) {
  std::memcpy(scratch_, hat_, ncplx_ * sizeof(fftw_complex));
  run_inverse(out);
}

void Spectral::inverse_multiplied(const std::vector<double>& mult, std::vector<double>& out) {
  if (static_cast<std::int64_t>(mult.size()) != ncplx_)
    throw std::invalid_argument("Spectral::inverse_multiplied: size mismatch");
  for (std::int64_t i = 0; i < ncplx_; ++i) {
    scratch_[i][0] = hat_[i][0] * mult[i];
    scratch_[i][1] = hat_[i][1] * mult[i];
  }
  run_inverse(out);
}

void Spectral::inverse_derivative(int axis, std::vector<double>& out) {
  const std::vector<double> k = k_table(axis);
  for (std::int64_t i = 0; i < ncplx_; ++i) {
    // multiply by i*k
    scratch_[i][0] = -hat_[i][1] * k[i];
    scratch_[i][1] = hat_[i][0] * k[i];
  }
  run_inverse(out);
}

std::vector<double> Spectral::k2_table() const {
  std::vector<double> t(ncplx_);
  const int nz = g_.dim == 3 ? g_.n[2] : 1;
  std::int64_t idx = 0;
  for (int kk = 0; kk < nz; ++kk) {
    const double wz = g_.dim == 3 ? freq(kk, g_.n[2], g_.extent[2]) : 0.0;
    for (int j = 0; j < g_.n[1]; ++j) {
      const double wy = freq(j, g_.n[1], g_.extent[1]);
      for (int r = 0; r < ncx_; ++r, ++idx) {
        const double wx = 2.0 * std::numbers::pi * r / g_.extent[0];
        t[idx] = wx * wx + wy * wy + wz * wz;
      }
    }
  }
  return t;
}

std::vector<double> Spectral::k_table(int axis) const {
  std::vector<double> t(ncplx_);
  const int nz = g_.dim == 3 ? g_.n[2] : 1;
  std::int64_t idx = 0;
  for (int kk = 0; kk < nz; ++kk)
    for (int j = 0; j < g_.n[1]; ++j)
      for (int r = 0; r < ncx_; ++r, ++idx) {
        double w = 0.0;
        if (axis == 0) {
          w = r == g_.n[0] / 2 && g_.n[0] % 2 == 0
                  ? 0.0
                  : 2.0 * std::numbers::pi * r / g_.extent[0];
        } else if (axis == 1) {
          w = j == g_.n[1] / 2 && g_.n[1] % 2 == 0 ? 0.0 : freq(j, g_.n[1], g_.extent[1]);
        } else {
          w = kk == nz / 2 && nz % 2 == 0 ? 0.0 : freq(kk, g_.n[2], g_.extent[2]);
        }
        t[idx] = w;
      }
  return t;
}

VectorField gradient_spectral(const ScalarField& f) {
  Spectral sp(f.grid);
  sp.forward(f.data);
  VectorField out(f.grid);
  for (int a = 0; a < f.grid.dim; ++a) sp.inverse_derivative(a, out.comp[a]);
  return out;
}

ScalarField laplacian_spectral(const ScalarField& f) {
  Spectral sp(f.grid);
  sp.forward(f.data);
  std::vector<double> k2 = sp.k2_table();
  for (double& v : k2) v = -v;
  ScalarField out(f.grid);
  sp.inverse_multiplied(k2, out.data);
  return out;
}

}  // namespace anicurv
