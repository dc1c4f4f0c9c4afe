#include "anicurv/phase_energy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "anicurv/profiles.hpp"
#include "anicurv/quadrature.hpp"

namespace anicurv {

MsParams::MsParams(double eps_, double beta_, double eta_, double gamma_, double lambda_,
                   double r_eps_)
    : eps(eps_), beta(beta_), eta(eta_), gamma(gamma_), lambda(lambda_),
      r_eps(r_eps_ < 0.0 ? eps_ : r_eps_) {
  if (!(eps > 0.0) || !(eps < 1.0)) throw std::invalid_argument("MsParams: eps in (0,1)");
  if (!(beta > 0.0)) throw std::invalid_argument("MsParams: beta must be positive");
  if (!(eta > 0.0)) throw std::invalid_argument("MsParams: eta must be positive");
  if (gamma < 0.0) throw std::invalid_argument("MsParams: gamma must be nonnegative");
  if (!(lambda > 1.0)) throw std::invalid_argument("MsParams: lambda must exceed 1");
  if (!(r_eps > 0.0)) throw std::invalid_argument("MsParams: r_eps must be positive");
}

double MsParams::eps_log_over_beta() const { return eps * std::abs(std::log(eps)) / beta; }
double MsParams::beta_over_eta() const { return beta / eta; }

ScalarField mm_measure(const ScalarField& v, double eps, double* total) {
  const double c0 = c0_constant();
  const VectorField g = gradient(v);
  ScalarField mu(v.grid);
  const std::int64_t n = v.grid.size();
  for (std::int64_t i = 0; i < n; ++i) {
    double g2 = 0.0;
    for (int a = 0; a < v.grid.dim; ++a) g2 += g.comp[a][i] * g.comp[a][i];
    mu.data[i] = (0.5 * eps * g2 + double_well(v.data[i]) / eps) / c0;
  }
  if (total) *total = integrate(mu);
  return mu;
}

ScalarField willmore_residual(const ScalarField& v, double eps, double* alpha_total) {
  const ScalarField lap = laplacian(v);
  ScalarField f(v.grid);
  const std::int64_t n = v.grid.size();
  for (std::int64_t i = 0; i < n; ++i)
    f.data[i] = -eps * lap.data[i] + double_well_d1(v.data[i]) / eps;
  if (alpha_total) {
    ScalarField a2(v.grid);
    const double c = 1.0 / (c0_constant() * eps);
    for (std::int64_t i = 0; i < n; ++i) a2.data[i] = c * f.data[i] * f.data[i];
    *alpha_total = integrate(a2);
  }
  return f;
}

ScalarField discrepancy(const ScalarField& v, double eps, double* l1) {
  const VectorField g = gradient(v);
  ScalarField xi(v.grid);
  const std::int64_t n = v.grid.size();
  for (std::int64_t i = 0; i < n; ++i) {
    double g2 = 0.0;
    for (int a = 0; a < v.grid.dim; ++a) g2 += g.comp[a][i] * g.comp[a][i];
    xi.data[i] = 0.5 * eps * g2 - double_well(v.data[i]) / eps;
  }
  if (l1) {
    ScalarField ab(v.grid);
    for (std::int64_t i = 0; i < n; ++i) ab.data[i] = std::abs(xi.data[i]);
    *l1 = integrate(ab);
  }
  return xi;
}

EnergyBreakdown set_energy(const ScalarField& v, const Anisotropy& phi, double eps,
                           double r_eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("set_energy: eps must be positive");
  if (r_eps < 0.0) r_eps = eps;
  const double c0 = c0_constant();
  const VectorField g = gradient(v);
  const ScalarField f = willmore_residual(v, eps);
  ScalarField aniso(v.grid), will(v.grid);
  const std::int64_t n = v.grid.size();
  const int dim = v.grid.dim;
  for (std::int64_t i = 0; i < n; ++i) {
    double z[3] = {g.comp[0][i], g.comp[1][i], dim == 3 ? g.comp[2][i] : 0.0};
    double g2 = 0.0;
    for (int a = 0; a < dim; ++a) g2 += z[a] * z[a];
    const double mm = 0.5 * eps * g2 + double_well(v.data[i]) / eps;
    aniso.data[i] = phi.extend(z, dim, r_eps) * mm / c0;
    will.data[i] = f.data[i] * f.data[i] / (c0 * eps);
  }
  EnergyBreakdown out;
  out.anisotropic = integrate(aniso);
  out.curvature = integrate(will);
  out.total = out.anisotropic + out.curvature;
  out.under_resolved = v.grid.h_max() > eps / 4.0;
  return out;
}

EnergyBreakdown point_phase_energy(const ScalarField& w, double eps, double beta,
                                   const ScalarField* mask) {
  if (!(beta > 0.0)) throw std::invalid_argument("point_phase_energy: beta must be positive");
  if (mask && !mask->grid.same_layout(w.grid))
    throw std::invalid_argument("point_phase_energy: mask grid mismatch");
  const double c0 = c0_constant();
  const VectorField g = gradient(w);
  const ScalarField f = willmore_residual(w, eps);
  ScalarField mm(w.grid), will(w.grid);
  const std::int64_t n = w.grid.size();
  for (std::int64_t i = 0; i < n; ++i) {
    if (mask && mask->data[i] <= 0.5) continue;
    double g2 = 0.0;
    for (int a = 0; a < w.grid.dim; ++a) g2 += g.comp[a][i] * g.comp[a][i];
    mm.data[i] = (0.5 * eps * g2 + double_well(w.data[i]) / eps) / (c0 * beta);
    will.data[i] = beta * f.data[i] * f.data[i] / (c0 * eps);
  }
  EnergyBreakdown out;
  out.anisotropic = integrate(mm);
  out.curvature = integrate(will);
  out.total = out.anisotropic + out.curvature;
  out.under_resolved = w.grid.h_max() > eps / 4.0;
  return out;
}

EnergyBreakdown ms_energy(const ScalarField& u, const ScalarField& v, const ScalarField& w,
                          const Anisotropy& phi, const MsParams& p) {
  if (!u.grid.same_layout(v.grid) || !u.grid.same_layout(w.grid))
    throw std::invalid_argument("ms_energy: fields live on different grids");
  const double c0 = c0_constant();
  const std::int64_t n = u.grid.size();
  const int dim = u.grid.dim;

  const VectorField gu = gradient(u);
  const VectorField gv = gradient(v);
  const ScalarField fv = willmore_residual(v, p.eps);
  const ScalarField fw = willmore_residual(w, p.eps);
  const VectorField gw = gradient(w);

  ScalarField bulk(u.grid), aniso(u.grid), curv(u.grid), pmm(u.grid), pwill(u.grid),
      pen_v(u.grid), pen_w(u.grid);
  for (std::int64_t i = 0; i < n; ++i) {
    double gu2 = 0.0, gv2 = 0.0, gw2 = 0.0;
    double zv[3] = {0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) {
      gu2 += gu.comp[a][i] * gu.comp[a][i];
      zv[a] = gv.comp[a][i];
      gv2 += zv[a] * zv[a];
      gw2 += gw.comp[a][i] * gw.comp[a][i];
    }
    const double one_v = 1.0 + v.data[i];
    const double one_w = 1.0 + w.data[i];
    bulk.data[i] = 0.25 * one_v * one_v * gu2;
    const double mmv = 0.5 * p.eps * gv2 + double_well(v.data[i]) / p.eps;
    aniso.data[i] = phi.extend(zv, dim, p.r_eps) * mmv / (2.0 * c0);
    curv.data[i] = fv.data[i] * fv.data[i] * one_w * one_w / (8.0 * c0 * p.eps);
    const double mmw = 0.5 * p.eps * gw2 + double_well(w.data[i]) / p.eps;
    pmm.data[i] = mmw / (c0 * p.beta);
    pwill.data[i] = p.beta * fw.data[i] * fw.data[i] / (c0 * p.eps);
    const double dv = 1.0 - v.data[i];
    const double dw = 1.0 - w.data[i];
    pen_v.data[i] = dv * dv / p.eta;
    pen_w.data[i] = dw * dw / p.eta;
  }
  EnergyBreakdown out;
  out.bulk = integrate(bulk);
  out.anisotropic = integrate(aniso);
  out.curvature = integrate(curv);
  out.point = p.gamma / (4.0 * std::numbers::pi) * (integrate(pmm) + integrate(pwill));
  out.penalty_v = integrate(pen_v);
  out.penalty_w = integrate(pen_w);
  out.total = out.bulk + out.anisotropic + out.curvature + out.point + out.penalty_v +
              out.penalty_w;
  out.under_resolved = u.grid.h_max() > p.eps / 4.0;
  return out;
}

}  // namespace anicurv
