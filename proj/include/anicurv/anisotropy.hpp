#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "anicurv/vec.hpp"

namespace anicurv {

// Even positive weight on unit directions. The 2D angle parametrization is the
// primary interface; 3D vectors are accepted by evaluate/extend, the angle then
// being taken in the xy-plane.
class Anisotropy {
 public:
  // value and d/dtheta callbacks; pi-periodic evenness is the caller's duty
  // and is spot-checked.
  static Anisotropy from_function(std::function<double(double)> value,
                                  std::function<double(double)> dtheta);
  static Anisotropy isotropic();
  // 1 + beta cos^2(2 theta), beta > -1
  static Anisotropy fourfold(double beta);
  // sqrt(nu1^2 + rho^2) + sqrt(nu2^2 + rho^2): smooth l1 for rho > 0
  static Anisotropy smoothed_l1(double rho);
  // samples on the uniform angle grid 2*pi*j/n, piecewise-linear in between
  static Anisotropy from_samples(std::vector<double> values);
  static Anisotropy load_table(const std::string& path);

  void save_table(const std::string& path) const;

  double at_angle(double theta) const;
  double dtheta_at(double theta) const;

  // phi(z/|z|) for nonzero z of dim 2 or 3
  double evaluate(const double* z, int dim) const;

  // Bounded extension to all of R^dim at regularization scale r_eps:
  // phi_eps(z) = xi(s) phi(z/|z|) + (1 - xi(s)) min(phi)/4 with
  // s = |z|/sqrt(r_eps^2+|z|^2) and xi the linear ramp from 0 on [0,1/4] to 1
  // on [1/2,1] (slope 4).
  double extend(const double* z, int dim, double r_eps) const;

  // d/dz of extend, 2D
  Vec2 extend_grad(Vec2 z, double r_eps) const;

  double min_on_sphere() const { return min_; }
  double max_on_sphere() const { return max_; }
  // smallest C with 1/C <= phi <= C
  double bound() const;
  // sup |dphi/dtheta|
  double lipschitz() const;

  // Largest convex 1-homogeneous function below the 1-homogeneous extension,
  // restricted back to the sphere. Computed as a double polar dual over a
  // uniform n_dirs angle grid; returns a sampled Anisotropy on that grid.
  Anisotropy convex_envelope(int n_dirs) const;

  bool sampled() const { return !samples_.empty(); }
  const std::vector<double>& sample_values() const { return samples_; }

 private:
  Anisotropy() = default;
  void finalize();

  std::function<double(double)> value_;
  std::function<double(double)> dtheta_;
  std::vector<double> samples_;  // nonempty iff table-backed
  double min_ = 0.0, max_ = 0.0, lipschitz_ = 0.0;
};

}  // namespace anicurv
