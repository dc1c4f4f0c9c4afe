#include "anicurv/profiles.hpp"

#include <cmath>

#include "anicurv/quadrature.hpp"

namespace anicurv {

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

double c0_constant() { return 4.0 * kSqrt2 / 3.0; }

double c0_quadrature() {
  return integrate_1d([](double z) { return std::sqrt(2.0 * double_well(z)); },
                      -1.0, 1.0, 1e-13);
}

double optimal_profile(double t) { return std::tanh(kSqrt2 * t); }

double optimal_profile_d1(double t) {
  const double q = optimal_profile(t);
  return kSqrt2 * (1.0 - q * q);
}

// q'' = W'(q); using the same expression keeps the residual of the untruncated
// profile exactly zero in floating point as well.
double optimal_profile_d2(double t) {
  return double_well_d1(optimal_profile(t));
}

double optimal_profile_gap(double t) {
  if (t == 0.0) return 0.0;
  const double m = 2.0 / (1.0 + std::exp(2.0 * kSqrt2 * std::abs(t)));
  return t > 0.0 ? m : -m;
}

namespace {
// Quintic smoothstep on [0,1] going 1 -> 0 with vanishing first and second
// derivatives at both ends.
inline double blend(double s) { return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); }
inline double blend_d1(double s) {
  const double u = s * (1.0 - s);
  return -30.0 * u * u;
}
inline double blend_d2(double s) { return -60.0 * s * (1.0 - s) * (1.0 - 2.0 * s); }
}  // namespace

double cutoff(double t) {
  const double a = std::abs(t);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  return blend(a - 1.0);
}

double cutoff_d1(double t) {
  const double a = std::abs(t);
  if (a <= 1.0 || a >= 2.0) return 0.0;
  const double d = blend_d1(a - 1.0);
  return t > 0.0 ? d : -d;
}

double cutoff_d2(double t) {
  const double a = std::abs(t);
  if (a <= 1.0 || a >= 2.0) return 0.0;
  return blend_d2(a - 1.0);
}

double ProfileParams::delta() const { return lambda * eps * std::abs(std::log(eps)); }

double truncated_profile(double t, const ProfileParams& p) {
  const double d = p.delta();
  if (std::abs(t) >= d) return t >= 0.0 ? 1.0 : -1.0;
  const double zeta = cutoff(2.0 * t / d);
  if (zeta == 1.0) return optimal_profile(t / p.eps);
  const double sgn = t >= 0.0 ? 1.0 : -1.0;
  return sgn - zeta * optimal_profile_gap(t / p.eps);
}

double truncated_profile_d1(double t, const ProfileParams& p) {
  const double d = p.delta();
  if (std::abs(t) >= d) return 0.0;
  const double z2 = 2.0 * t / d;
  const double zeta = cutoff(z2);
  const double dzeta = cutoff_d1(z2) * 2.0 / d;
  const double gap = -optimal_profile_gap(t / p.eps);  // q - sign
  return dzeta * gap + zeta * optimal_profile_d1(t / p.eps) / p.eps;
}

double truncated_profile_d2(double t, const ProfileParams& p) {
  const double d = p.delta();
  if (std::abs(t) >= d) return 0.0;
  const double z2 = 2.0 * t / d;
  const double zeta = cutoff(z2);
  const double dzeta = cutoff_d1(z2) * 2.0 / d;
  const double ddzeta = cutoff_d2(z2) * 4.0 / (d * d);
  const double gap = -optimal_profile_gap(t / p.eps);  // q - sign
  return ddzeta * gap + 2.0 * dzeta * optimal_profile_d1(t / p.eps) / p.eps +
         zeta * optimal_profile_d2(t / p.eps) / (p.eps * p.eps);
}

ProfileMass profile_mass(const ProfileParams& p) {
  const double d = p.delta();
  auto density = [&](double t) {
    const double dq = truncated_profile_d1(t, p);
    return 0.5 * p.eps * dq * dq + double_well(truncated_profile(t, p)) / p.eps;
  };
  auto kinetic = [&](double t) {
    const double dq = truncated_profile_d1(t, p);
    return 0.5 * p.eps * dq * dq;
  };
  auto potential = [&](double t) {
    return double_well(truncated_profile(t, p)) / p.eps;
  };
  ProfileMass m;
  // Split at the cutoff breakpoints so the quadrature never straddles a kink.
  m.kinetic = integrate_1d(kinetic, -d, -0.5 * d) + integrate_1d(kinetic, -0.5 * d, 0.5 * d) +
              integrate_1d(kinetic, 0.5 * d, d);
  m.potential = integrate_1d(potential, -d, -0.5 * d) +
                integrate_1d(potential, -0.5 * d, 0.5 * d) +
                integrate_1d(potential, 0.5 * d, d);
  m.tail = integrate_1d(density, -d, -0.5 * d) + integrate_1d(density, 0.5 * d, d);
  return m;
}

double profile_residual(const ProfileParams& p) {
  const double d = p.delta();
  auto r2 = [&](double t) {
    const double r = -p.eps * truncated_profile_d2(t, p) +
                     double_well_d1(truncated_profile(t, p)) / p.eps;
    return r * r;
  };
  return integrate_1d(r2, -d, -0.5 * d) + integrate_1d(r2, 0.5 * d, d);
}

}  // namespace anicurv
