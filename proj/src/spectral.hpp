#pragma once

#include <fftw3.h>

#include <complex>
#include <cstdint>
#include <vector>

#include "anicurv/field.hpp"

namespace anicurv {

// Real-to-complex FFT workspace for one periodic grid. Plans are created with
// FFTW_ESTIMATE (deterministic) under a global mutex; execution is reentrant.
class Spectral {
 public:
  explicit Spectral(const Grid& g);
  ~Spectral();
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  void forward(const std::vector<double>& in);

  std::complex<double>* hat() { return reinterpret_cast<std::complex<double>*>(hat_); }
  std::int64_t hat_size() const { return ncplx_; }

  // inverse transform of hat() (which is preserved), normalized by 1/N
  void inverse(std::vector<double>& out);
  // inverse of multiplier * hat(); multiplier has hat_size() entries
  void inverse_multiplied(const std::vector<double>& mult, std::vector<double>& out);
  // inverse of i*k_axis * hat() with the Nyquist mode dropped
  void inverse_derivative(int axis, std::vector<double>& out);

  // |k|^2 table over the complex layout
  std::vector<double> k2_table() const;
  // k_axis table over the complex layout, Nyquist zeroed
  std::vector<double> k_table(int axis) const;

 private:
  void run_inverse(std::vector<double>& out);

  Grid g_;
  std::int64_t nreal_, ncplx_;
  int ncx_;  // complex count along x (fastest axis)
  double* rbuf_;
  fftw_complex* hat_;
  fftw_complex* scratch_;
  fftw_plan fwd_, bwd_;
};

}  // namespace anicurv
