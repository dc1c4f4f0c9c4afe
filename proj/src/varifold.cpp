#include "anicurv/varifold.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "anicurv/quadrature.hpp"

namespace anicurv {

DiscreteVarifold discretize(const CurveNetwork& net, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("discretize: spacing must be positive");
  const double max_h = net.max_curvature_norm();
  if (max_h > 0.0 && h > 0.1 / max_h)
    throw std::invalid_argument("discretize: spacing exceeds a tenth of the curvature radius");
  DiscreteVarifold v;
  for (const auto& c : net.curves()) {
    const int m = std::max(8, static_cast<int>(std::ceil(c.length() / h)));
    const double w = c.length() / m;
    for (int i = 0; i < m; ++i) {
      const double s = (i + 0.5) * w;
      const double t = c.t_at_arclength(s);
      VarifoldSample smp;
      smp.x = c.pos(t);
      smp.tangent = c.d1(t).normalized();
      smp.weight = w;
      smp.multiplicity = 1;
      smp.curvature = c.curvature(t);
      v.samples.push_back(smp);
    }
  }
  for (const auto& j : net.junctions()) {
    if (j.v.norm() > 1e-12)
      v.atoms.push_back({j.p, j.v});
    else
      ++v.zero_junctions;
  }
  return v;
}

DiscreteVarifold merge(const DiscreteVarifold& a, const DiscreteVarifold& b) {
  DiscreteVarifold out = a;
  out.samples.insert(out.samples.end(), b.samples.begin(), b.samples.end());
  out.atoms.insert(out.atoms.end(), b.atoms.begin(), b.atoms.end());
  out.zero_junctions += b.zero_junctions;
  return out;
}

double DiscreteVarifold::mass() const {
  std::vector<double> w(samples.size());
  for (size_t i = 0; i < samples.size(); ++i)
    w[i] = samples[i].weight * samples[i].multiplicity;
  return pairwise_sum(w);
}

double DiscreteVarifold::total_curvature() const {
  std::vector<double> w(samples.size());
  for (size_t i = 0; i < samples.size(); ++i)
    w[i] = samples[i].weight * samples[i].multiplicity * samples[i].curvature.norm();
  return pairwise_sum(w);
}

double DiscreteVarifold::first_variation(
    const std::function<void(Vec2, Vec2*)>& zeta_jac) const {
  std::vector<double> acc(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    Vec2 rows[2];
    zeta_jac(samples[i].x, rows);
    const Vec2 tau = samples[i].tangent;
    // tau . (J tau) with J rows given
    const double val = tau.x * rows[0].dot(tau) + tau.y * rows[1].dot(tau);
    acc[i] = samples[i].weight * samples[i].multiplicity * val;
  }
  return pairwise_sum(acc);
}

double DiscreteVarifold::first_variation_curvature(
    const std::function<Vec2(Vec2)>& zeta) const {
  std::vector<double> acc(samples.size());
  for (size_t i = 0; i < samples.size(); ++i)
    acc[i] = -samples[i].weight * samples[i].multiplicity *
             samples[i].curvature.dot(zeta(samples[i].x));
  double s = pairwise_sum(acc);
  for (const auto& a : atoms) s -= zeta(a.p).dot(a.v);
  return s;
}

double DiscreteVarifold::mass_in_ball(Vec2 x0, double r) const {
  std::vector<double> acc;
  acc.reserve(samples.size());
  for (const auto& s : samples)
    if ((s.x - x0).norm() < r) acc.push_back(s.weight * s.multiplicity);
  return pairwise_sum(acc);
}

double DiscreteVarifold::monotonicity_gap(Vec2 x0, double r) const {
  if (!atoms.empty())
    throw std::invalid_argument("monotonicity_gap: first variation carries atoms");
  if (!(r > 0.0)) throw std::invalid_argument("monotonicity_gap: r must be positive");
  return total_curvature() - mass_in_ball(x0, r) / r;
}

double DiscreteVarifold::gauss_bonnet_deficit() const {
  if (!atoms.empty())
    throw std::invalid_argument("gauss_bonnet_deficit: first variation carries atoms");
  if (!(mass() > 0.0)) throw std::invalid_argument("gauss_bonnet_deficit: zero mass");
  return total_curvature() - 2.0 * std::numbers::pi;
}

double DiscreteVarifold::density(Vec2 x0, const std::vector<double>& rhos,
                                 int* k_class) const {
  if (rhos.size() < 2) throw std::invalid_argument("density: need at least two radii");
  for (size_t i = 1; i < rhos.size(); ++i)
    if (!(rhos[i] < rhos[i - 1])) throw std::invalid_argument("density: radii must decrease");
  std::vector<double> th(rhos.size());
  for (size_t i = 0; i < rhos.size(); ++i) th[i] = mass_in_ball(x0, rhos[i]) / (2.0 * rhos[i]);
  // linear extrapolation to rho = 0 from the last two radii
  const size_t m = rhos.size();
  const double r1 = rhos[m - 2], r2 = rhos[m - 1];
  const double theta = th[m - 1] + (th[m - 1] - th[m - 2]) * r2 / (r1 - r2);
  if (k_class) {
    *k_class = -1;
    const int k = static_cast<int>(std::lround(2.0 * theta));
    if (k >= 0 && std::abs(theta - 0.5 * k) <= 0.15) *k_class = k;
  }
  return theta;
}

void DiscreteVarifold::write_csv(const std::string& samples_path,
                                 const std::string& atoms_path) const {
  std::ofstream os(samples_path);
  if (!os) throw std::runtime_error("write_csv: cannot open " + samples_path);
  os << "x,y,tx,ty,weight,multiplicity,Hx,Hy\n";
  char buf[256];
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%d,%.17g,%.17g\n", s.x.x,
                  s.x.y, s.tangent.x, s.tangent.y, s.weight, s.multiplicity, s.curvature.x,
                  s.curvature.y);
    os << buf;
  }
  std::ofstream oa(atoms_path);
  if (!oa) throw std::runtime_error("write_csv: cannot open " + atoms_path);
  oa << "x,y,vx,vy\n";
  for (const auto& a : atoms) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", a.p.x, a.p.y, a.v.x, a.v.y);
    oa << buf;
  }
}

}  // namespace anicurv
