#pragma once

#include "anicurv/anisotropy.hpp"
#include "anicurv/field.hpp"

namespace anicurv {

struct MsParams {
  double eps;
  double beta;    // point-energy localization scale
  double eta;     // penalty weight 1/eta
  double gamma;   // point-term coupling
  double lambda;  // profile truncation factor
  double r_eps;   // anisotropy regularization scale

  MsParams(double eps_, double beta_, double eta_, double gamma_, double lambda_ = 2.0,
           double r_eps_ = -1.0);

  // scaling diagnostics (reported, deliberately not enforced)
  double eps_log_over_beta() const;
  double beta_over_eta() const;
};

struct EnergyBreakdown {
  double bulk = 0.0;
  double anisotropic = 0.0;
  double curvature = 0.0;
  double point = 0.0;
  double penalty_v = 0.0;
  double penalty_w = 0.0;
  double total = 0.0;
  bool under_resolved = false;
};

// mu = (1/c0)(eps/2 |grad v|^2 + W(v)/eps); total mass optionally returned
ScalarField mm_measure(const ScalarField& v, double eps, double* total = nullptr);

// f = -eps lap v + W'(v)/eps; alpha = int f^2/(c0 eps) optionally returned
ScalarField willmore_residual(const ScalarField& v, double eps, double* alpha_total = nullptr);

// xi = eps/2 |grad v|^2 - W(v)/eps; L1 norm optionally returned
ScalarField discrepancy(const ScalarField& v, double eps, double* l1 = nullptr);

// (1/c0) int phi_eps(grad v) (eps/2 |grad v|^2 + W(v)/eps)  [anisotropic]
// + (1/(c0 eps)) int (-eps lap v + W'(v)/eps)^2             [curvature]
EnergyBreakdown set_energy(const ScalarField& v, const Anisotropy& phi, double eps,
                           double r_eps);

// (1/(c0 beta)) int mm + (beta/(c0 eps)) int f^2, optionally restricted to
// {mask > 1/2}
EnergyBreakdown point_phase_energy(const ScalarField& w, double eps, double beta,
                                   const ScalarField* mask = nullptr);

// Six-term functional:
//   1/4 int (1+v)^2 |grad u|^2
// + 1/(2 c0) int phi_eps(grad v) mm-density(v)
// + 1/(8 c0 eps) int f_v^2 (1+w)^2
// + gamma/(4 pi) [ point_phase_energy of w ]
// + 1/eta int (1-v)^2 + 1/eta int (1-w)^2
EnergyBreakdown ms_energy(const ScalarField& u, const ScalarField& v, const ScalarField& w,
                          const Anisotropy& phi, const MsParams& p);

}  // namespace anicurv
