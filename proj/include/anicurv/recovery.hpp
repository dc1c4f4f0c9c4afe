#pragma once

#include "anicurv/curves.hpp"
#include "anicurv/field.hpp"
#include "anicurv/phase_energy.hpp"

namespace anicurv {

// q_eps composed with the signed distance to a closed boundary (+1 outside).
// The transition tube must embed: delta_eps below the smallest curvature
// radius and inside the box.
ScalarField recover_set(const CurveNetwork& boundary, const Grid& g, double eps,
                        double lambda);

// same composition from a precomputed signed-distance field
ScalarField recover_set_from_distance(const ScalarField& signed_dist, double eps,
                                      double lambda);

struct MsRecovery {
  ScalarField u, v, w;
};

// Recovery triple for a piecewise-smooth state: v from the offset
// distance d - 2 delta, u ramped to zero across the inner band, w the pointwise
// minimum of radial junction-ball profiles.
MsRecovery recover_ms(const SharpMsState& state, const Grid& g, const MsParams& p);

// The two halves of the point functional for the radial profile
// w(x) = q_eps(|x| - beta) in the plane, by 1D radial quadrature.
// Returns the total; each half approaches 2 pi.
double radial_point_energy(double eps, double beta, double lambda, double* mm_half = nullptr,
                           double* willmore_half = nullptr);

}  // namespace anicurv
