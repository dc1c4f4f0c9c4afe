#pragma once

#include <stdexcept>

// One-dimensional optimal transition profile for the double well
// W(z) = (1 - z^2)^2, its truncation to a band of width 2*delta, and the
// associated masses. Everything here is exact 1D machinery; grids come later.

namespace anicurv {

inline double double_well(double z) {
  const double a = 1.0 - z * z;
  return a * a;
}

inline double double_well_d1(double z) { return -4.0 * z * (1.0 - z * z); }

inline double double_well_d2(double z) { return 4.0 * (3.0 * z * z - 1.0); }

// sup |W''| on [-1,1], used by the convex-splitting stabilization.
inline double double_well_d2_max() { return 8.0; }

// c0 = int_{-1}^{1} sqrt(2 W(z)) dz = 4*sqrt(2)/3.
double c0_constant();
// Same integral by adaptive quadrature; agrees with c0_constant to 1e-10.
double c0_quadrature();

// q(t) = tanh(sqrt(2) t), the entire solution of -q'' + W'(q) = 0.
double optimal_profile(double t);
double optimal_profile_d1(double t);
double optimal_profile_d2(double t);

// sign(t) - q(t), evaluated without cancellation (decays like e^{-2 sqrt2 |t|}).
double optimal_profile_gap(double t);

// C^2 cutoff: 1 on [-1,1], 0 outside (-2,2), quintic blend in between.
double cutoff(double t);
double cutoff_d1(double t);
double cutoff_d2(double t);

struct ProfileParams {
  double eps;
  double lambda;

  ProfileParams(double eps_, double lambda_) : eps(eps_), lambda(lambda_) {
    if (!(eps > 0.0) || !(eps < 1.0))
      throw std::invalid_argument("ProfileParams: eps must lie in (0,1)");
    if (!(lambda > 1.0))
      throw std::invalid_argument("ProfileParams: lambda must exceed 1");
  }

  // Half width of the transition band.
  double delta() const;
};

// Truncated profile: q_eps(t) = zeta(2t/delta) q(t/eps) + sign(t)(1 - zeta(2t/delta)).
// Coincides with q(t/eps) for |t| <= delta/2 and with sign(t) for |t| >= delta.
double truncated_profile(double t, const ProfileParams& p);
double truncated_profile_d1(double t, const ProfileParams& p);
double truncated_profile_d2(double t, const ProfileParams& p);

struct ProfileMass {
  double kinetic;    // int_{-delta}^{delta} (eps/2) |q_eps'|^2
  double potential;  // int_{-delta}^{delta} W(q_eps)/eps
  double tail;       // same integrand over delta/2 <= |t| <= delta
};

ProfileMass profile_mass(const ProfileParams& p);

// int_{-delta}^{delta} | -eps q_eps'' + W'(q_eps)/eps |^2 dt.  Identically zero
// outside the two bands delta/2 <= |t| <= delta.
double profile_residual(const ProfileParams& p);

}  // namespace anicurv
