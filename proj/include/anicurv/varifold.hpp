#pragma once

#include <functional>
#include <string>
#include <vector>

#include "anicurv/curves.hpp"
#include "anicurv/vec.hpp"

namespace anicurv {

struct VarifoldSample {
  Vec2 x;
  Vec2 tangent;    // unit
  double weight;   // arc-length weight
  int multiplicity = 1;
  Vec2 curvature;  // curvature vector at x
};

struct VarifoldAtom {
  Vec2 p;
  Vec2 v;  // junction vector (sum of outgoing unit tangents)
};

// Weighted tangent samples plus junction atoms of the first variation.
class DiscreteVarifold {
 public:
  std::vector<VarifoldSample> samples;
  std::vector<VarifoldAtom> atoms;   // only junctions with |v| > 0
  int zero_junctions = 0;            // junctions whose tangents cancel

  double mass() const;
  // int |H| dmu
  double total_curvature() const;

  // delta V (zeta) = int tau . (D zeta tau) dmu via the tangential divergence;
  // the callback writes the two Jacobian rows of zeta at x
  double first_variation(const std::function<void(Vec2, Vec2*)>& zeta_jac) const;
  // - int H . zeta dmu - sum zeta(p) . v_p; equals first_variation for curves
  // in the admissible class
  double first_variation_curvature(const std::function<Vec2(Vec2)>& zeta) const;

  double mass_in_ball(Vec2 x0, double r) const;

  // int |H| dmu - mu(B_r(x0))/r; nonnegative for atom-free finite-mass
  // curvature varifolds in the plane. Throws if atoms are present.
  double monotonicity_gap(Vec2 x0, double r) const;

  // int |H| dmu - 2 pi; requires no atoms and positive mass
  double gauss_bonnet_deficit() const;

  // density mu(B_rho)/(2 rho) extrapolated to rho -> 0 over the given radii
  // (decreasing). classification: nearest half-integer arm count k/2 within
  // 0.15, else -1 (ambiguous).
  double density(Vec2 x0, const std::vector<double>& rhos, int* k_class = nullptr) const;

  void write_csv(const std::string& samples_path, const std::string& atoms_path) const;
};

// Arc-length-uniform discretization at spacing h. Requires h at most a tenth
// of the smallest curvature radius.
DiscreteVarifold discretize(const CurveNetwork& net, double h);

// superposition (sample/atom concatenation)
DiscreteVarifold merge(const DiscreteVarifold& a, const DiscreteVarifold& b);

}  // namespace anicurv
