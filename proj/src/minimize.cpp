#include "anicurv/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "anicurv/profiles.hpp"
#include "anicurv/quadrature.hpp"
#include "spectral.hpp"

namespace anicurv {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> prod(a.size());
  for (size_t i = 0; i < a.size(); ++i) prod[i] = a[i] * b[i];
  return pairwise_sum(prod);
}

void require_periodic_2d(const Grid& g, const char* who) {
  if (g.dim != 2 || g.boundary != Boundary::periodic)
    throw std::invalid_argument(std::string(who) + ": 2D periodic grids only");
}

// L2 gradient of set_energy: the anisotropic Modica-Mortola part via the
// chain rule through phi_eps(grad v), the squared-residual part through its
// self-adjoint linearization.
void set_energy_gradient(Spectral& sp, const ScalarField& v, const Anisotropy& phi,
                         double eps, double r, std::vector<double>& G) {
  const std::int64_t n = v.grid.size();
  std::vector<double> gx(n), gy(n), lap(n), f(n), px(n), py(n), tmp(n);
  std::vector<double> neg_k2 = sp.k2_table();
  for (auto& k : neg_k2) k = -k;
  sp.forward(v.data);
  sp.inverse_derivative(0, gx);
  sp.inverse_derivative(1, gy);
  sp.inverse_multiplied(neg_k2, lap);
  const double c0 = c0_constant();
  G.assign(n, 0.0);
  for (std::int64_t i = 0; i < n; ++i) {
    const Vec2 z{gx[i], gy[i]};
    const double zv[2] = {z.x, z.y};
    const double m = 0.5 * eps * z.norm2() + double_well(v.data[i]) / eps;
    const double ph = phi.extend(zv, 2, r);
    const Vec2 dph = phi.extend_grad(z, r);
    px[i] = m * dph.x + eps * ph * z.x;
    py[i] = m * dph.y + eps * ph * z.y;
    f[i] = -eps * lap[i] + double_well_d1(v.data[i]) / eps;
    G[i] = ph * double_well_d1(v.data[i]) / (eps * c0);
  }
  sp.forward(px);
  sp.inverse_derivative(0, tmp);
  for (std::int64_t i = 0; i < n; ++i) G[i] -= tmp[i] / c0;
  sp.forward(py);
  sp.inverse_derivative(1, tmp);
  for (std::int64_t i = 0; i < n; ++i) G[i] -= tmp[i] / c0;
  sp.forward(f);
  sp.inverse_multiplied(neg_k2, tmp);
  for (std::int64_t i = 0; i < n; ++i)
    G[i] += 2.0 / (c0 * eps) *
            (-eps * tmp[i] + double_well_d2(v.data[i]) * f[i] / eps);
}

double field_l2(const std::vector<double>& a, double cell) {
  std::vector<double> sq(a.size());
  for (size_t i = 0; i < a.size(); ++i) sq[i] = a[i] * a[i];
  return std::sqrt(cell * pairwise_sum(sq));
}

}  // namespace

FlowResult flow_set_energy(ScalarField& v, const Anisotropy& phi, const FlowParams& p) {
  require_periodic_2d(v.grid, "flow_set_energy");
  if (!(p.dt > 0.0) || p.steps < 0)
    throw std::invalid_argument("flow_set_energy: dt must be positive");
  const double eps = p.eps;
  const double r = p.r_eps < 0.0 ? eps : p.r_eps;
  const double c0 = c0_constant();
  const double cell = v.grid.cell_volume();
  Spectral sp(v.grid);
  const std::vector<double> k2 = sp.k2_table();
  const double a = 2.0 * eps / c0;
  const double c = double_well_d2_max() / eps;

  FlowResult res;
  double energy = set_energy(v, phi, eps, r).total;
  res.trace.push_back({0, 0.0, energy});
  double dt = p.dt;
  std::vector<double> G, step(v.grid.size()), mult(k2.size());
  ScalarField cand(v.grid);
  int bad = 0;
  for (int s = 1; s <= p.steps; ++s) {
    set_energy_gradient(sp, v, phi, eps, r, G);
    res.grad_norm = field_l2(G, cell);
    if (!std::isfinite(res.grad_norm)) {
      res.status = FlowStatus::diverged;
      break;
    }
    if (p.grad_tol > 0.0 && res.grad_norm < p.grad_tol) {
      res.status = FlowStatus::stationary;
      break;
    }
    sp.forward(G);
    bool accepted = false;
    double e_new = energy;
    for (int h = 0; h <= p.max_halvings; ++h) {
      for (size_t j = 0; j < mult.size(); ++j)
        mult[j] = dt / (1.0 + dt * (a * k2[j] * k2[j] + c * k2[j]));
      sp.inverse_multiplied(mult, step);
      for (std::int64_t i = 0; i < v.grid.size(); ++i)
        cand.data[i] = v.data[i] - step[i];
      e_new = set_energy(cand, phi, eps, r).total;
      if (std::isfinite(e_new) && e_new <= energy + p.slack) {
        accepted = true;
        break;
      }
      dt *= 0.5;
    }
    v.data.swap(cand.data);
    energy = e_new;
    res.steps_taken = s;
    if (!std::isfinite(energy)) {
      res.status = FlowStatus::diverged;
      break;
    }
    bad = accepted ? 0 : bad + 1;
    if (s % p.record_every == 0 || s == p.steps)
      res.trace.push_back({s, dt, energy});
    if (bad >= p.max_bad_steps) {
      res.status = FlowStatus::diverged;
      break;
    }
    if (accepted) dt = std::min(dt * 1.25, p.dt);
  }
  return res;
}

int solve_u_step(ScalarField& u, const ScalarField& v, const ScalarField& g, double mu_f,
                 double kappa_reg, double tol, int max_iter) {
  require_periodic_2d(u.grid, "solve_u_step");
  if (!u.grid.same_layout(v.grid) || !u.grid.same_layout(g.grid))
    throw std::invalid_argument("solve_u_step: mismatched grids");
  if (!(mu_f > 0.0)) throw std::invalid_argument("solve_u_step: fidelity must be positive");
  const std::int64_t n = u.grid.size();
  Spectral sp(u.grid);
  std::vector<double> kappa(n), gx(n), gy(n), t1(n), t2(n);
  for (std::int64_t i = 0; i < n; ++i) {
    const double s = 1.0 + v.data[i];
    kappa[i] = 0.25 * s * s + kappa_reg;
  }
  auto apply = [&](const std::vector<double>& x, std::vector<double>& out) {
    sp.forward(x);
    sp.inverse_derivative(0, gx);
    sp.inverse_derivative(1, gy);
    for (std::int64_t i = 0; i < n; ++i) {
      gx[i] *= kappa[i];
      gy[i] *= kappa[i];
    }
    sp.forward(gx);
    sp.inverse_derivative(0, t1);
    sp.forward(gy);
    sp.inverse_derivative(1, t2);
    for (std::int64_t i = 0; i < n; ++i) out[i] = -(t1[i] + t2[i]) + mu_f * x[i];
  };

  std::vector<double> b(n), rr(n), pp(n), ap(n);
  for (std::int64_t i = 0; i < n; ++i) b[i] = mu_f * g.data[i];
  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm == 0.0) {
    std::fill(u.data.begin(), u.data.end(), 0.0);
    return 0;
  }
  apply(u.data, ap);
  for (std::int64_t i = 0; i < n; ++i) rr[i] = b[i] - ap[i];
  pp = rr;
  double rs = dot(rr, rr);
  const double target = tol * bnorm;
  int it = 0;
  while (std::sqrt(rs) > target) {
    if (it >= max_iter)
      throw std::runtime_error("solve_u_step: conjugate gradients did not converge");
    apply(pp, ap);
    const double alpha = rs / dot(pp, ap);
    for (std::int64_t i = 0; i < n; ++i) {
      u.data[i] += alpha * pp[i];
      rr[i] -= alpha * ap[i];
    }
    const double rs_new = dot(rr, rr);
    const double beta = rs_new / rs;
    for (std::int64_t i = 0; i < n; ++i) pp[i] = rr[i] + beta * pp[i];
    rs = rs_new;
    ++it;
  }
  return it;
}

namespace {

// gradient of the tracked total in v at fixed u, w
void ms_gradient_v(Spectral& sp, const ScalarField& u, const ScalarField& v,
                   const ScalarField& w, const std::vector<double>& gradu2,
                   const Anisotropy& phi, const MsParams& mp, double r,
                   std::vector<double>& G) {
  const std::int64_t n = v.grid.size();
  const double eps = mp.eps;
  const double c0 = c0_constant();
  std::vector<double> gx(n), gy(n), lap(n), F(n), px(n), py(n), tmp(n);
  std::vector<double> neg_k2 = sp.k2_table();
  for (auto& k : neg_k2) k = -k;
  sp.forward(v.data);
  sp.inverse_derivative(0, gx);
  sp.inverse_derivative(1, gy);
  sp.inverse_multiplied(neg_k2, lap);
  G.assign(n, 0.0);
  for (std::int64_t i = 0; i < n; ++i) {
    const Vec2 z{gx[i], gy[i]};
    const double zv[2] = {z.x, z.y};
    const double m = 0.5 * eps * z.norm2() + double_well(v.data[i]) / eps;
    const double ph = phi.extend(zv, 2, r);
    const Vec2 dph = phi.extend_grad(z, r);
    px[i] = (m * dph.x + eps * ph * z.x) / (2.0 * c0);
    py[i] = (m * dph.y + eps * ph * z.y) / (2.0 * c0);
    const double fv = -eps * lap[i] + double_well_d1(v.data[i]) / eps;
    const double gate = 1.0 + w.data[i];
    F[i] = fv * gate * gate;
    G[i] = ph * double_well_d1(v.data[i]) / (2.0 * c0 * eps) +
           0.5 * (1.0 + v.data[i]) * gradu2[i] - 2.0 / mp.eta * (1.0 - v.data[i]);
  }
  sp.forward(px);
  sp.inverse_derivative(0, tmp);
  for (std::int64_t i = 0; i < n; ++i) G[i] -= tmp[i];
  sp.forward(py);
  sp.inverse_derivative(1, tmp);
  for (std::int64_t i = 0; i < n; ++i) G[i] -= tmp[i];
  sp.forward(F);
  sp.inverse_multiplied(neg_k2, tmp);
  for (std::int64_t i = 0; i < n; ++i)
    G[i] += (-eps * tmp[i] + double_well_d2(v.data[i]) * F[i] / eps) / (4.0 * c0 * eps);
  (void)u;
}

// gradient of the tracked total in w at fixed u, v
void ms_gradient_w(Spectral& sp, const ScalarField& v, const ScalarField& w,
                   const MsParams& mp, std::vector<double>& G) {
  const std::int64_t n = w.grid.size();
  const double eps = mp.eps;
  const double c0 = c0_constant();
  const double pref = mp.gamma / (4.0 * std::numbers::pi * c0);
  std::vector<double> lap(n), fw(n), fv(n), tmp(n);
  std::vector<double> neg_k2 = sp.k2_table();
  for (auto& k : neg_k2) k = -k;
  sp.forward(v.data);
  sp.inverse_multiplied(neg_k2, lap);
  for (std::int64_t i = 0; i < n; ++i)
    fv[i] = -eps * lap[i] + double_well_d1(v.data[i]) / eps;
  sp.forward(w.data);
  sp.inverse_multiplied(neg_k2, lap);
  G.assign(n, 0.0);
  for (std::int64_t i = 0; i < n; ++i) {
    fw[i] = -eps * lap[i] + double_well_d1(w.data[i]) / eps;
    G[i] = fv[i] * fv[i] * (1.0 + w.data[i]) / (4.0 * c0 * eps) + pref / mp.beta * fw[i] -
           2.0 / mp.eta * (1.0 - w.data[i]);
  }
  sp.forward(fw);
  sp.inverse_multiplied(neg_k2, tmp);
  for (std::int64_t i = 0; i < n; ++i)
    G[i] += 2.0 * pref * mp.beta / eps *
            (-eps * tmp[i] + double_well_d2(w.data[i]) * fw[i] / eps);
}

}  // namespace

MsFlowResult alternate_ms(ScalarField& u, ScalarField& v, ScalarField& w,
                          const ScalarField& g, const Anisotropy& phi,
                          const MsFlowParams& p) {
  require_periodic_2d(u.grid, "alternate_ms");
  if (!u.grid.same_layout(v.grid) || !u.grid.same_layout(w.grid) ||
      !u.grid.same_layout(g.grid))
    throw std::invalid_argument("alternate_ms: mismatched grids");
  if (!(p.mu_f > 0.0)) throw std::invalid_argument("alternate_ms: fidelity must be positive");
  if (!(p.dt > 0.0) || p.cycles < 0)
    throw std::invalid_argument("alternate_ms: dt must be positive");
  const MsParams& mp = p.energy;
  const double eps = mp.eps;
  const double r = mp.r_eps < 0.0 ? eps : mp.r_eps;
  const double c0 = c0_constant();
  const std::int64_t n = u.grid.size();
  const double cell = u.grid.cell_volume();
  Spectral sp(u.grid);
  const std::vector<double> k2 = sp.k2_table();

  std::vector<double> gradu2(n);
  double fid = 0.0;
  auto refresh_u_caches = [&]() {
    std::vector<double> gx(n), gy(n), sq(n);
    sp.forward(u.data);
    sp.inverse_derivative(0, gx);
    sp.inverse_derivative(1, gy);
    for (std::int64_t i = 0; i < n; ++i) {
      gradu2[i] = gx[i] * gx[i] + gy[i] * gy[i];
      const double d = u.data[i] - g.data[i];
      sq[i] = p.mu_f * d * d + p.kappa_reg * gradu2[i];
    }
    fid = cell * pairwise_sum(sq);
  };
  auto total_now = [&]() { return ms_energy(u, v, w, phi, mp).total + fid; };

  const double a_v = eps / c0;
  const double a_w = mp.gamma * mp.beta * eps / (2.0 * std::numbers::pi * c0);
  const double c_stab = double_well_d2_max() / eps;

  std::vector<double> G, step(n), mult(k2.size());
  ScalarField cand(u.grid);
  // shared halved-step update; returns whether the energy dropped
  auto try_substep = [&](ScalarField& x, double a_coef, double& dt, double& total) {
    sp.forward(G);
    for (int h = 0; h <= p.max_halvings; ++h) {
      for (size_t j = 0; j < mult.size(); ++j)
        mult[j] = dt / (1.0 + dt * (a_coef * k2[j] * k2[j] + c_stab * k2[j]));
      sp.inverse_multiplied(mult, step);
      for (std::int64_t i = 0; i < n; ++i) cand.data[i] = x.data[i] - step[i];
      cand.data.swap(x.data);
      const double t_new = total_now();
      if (std::isfinite(t_new) && t_new <= total + p.slack) {
        total = t_new;
        return true;
      }
      cand.data.swap(x.data);
      dt *= 0.5;
    }
    return false;
  };

  MsFlowResult res;
  refresh_u_caches();
  double total = total_now();
  res.trace.push_back({0, ms_energy(u, v, w, phi, mp), fid, total});
  double dt_v = p.dt, dt_w = p.dt;
  int bad = 0;
  for (int cyc = 1; cyc <= p.cycles; ++cyc) {
    const double prev = total;
    res.cg_iters_last =
        solve_u_step(u, v, g, p.mu_f, p.kappa_reg, p.cg_tol, p.cg_max_iter);
    refresh_u_caches();
    total = total_now();
    for (int k = 0; k < p.vw_steps_per_u; ++k) {
      ms_gradient_v(sp, u, v, w, gradu2, phi, mp, r, G);
      if (try_substep(v, a_v, dt_v, total)) dt_v = std::min(dt_v * 1.25, p.dt);
      ms_gradient_w(sp, v, w, mp, G);
      if (try_substep(w, a_w, dt_w, total)) dt_w = std::min(dt_w * 1.25, p.dt);
    }
    res.cycles_taken = cyc;
    EnergyBreakdown eb = ms_energy(u, v, w, phi, mp);
    res.trace.push_back({cyc, eb, fid, total});
    if (!std::isfinite(total)) {
      res.status = FlowStatus::diverged;
      break;
    }
    bad = total <= prev + p.slack ? 0 : bad + 1;
    if (bad >= p.max_bad_cycles) {
      res.status = FlowStatus::diverged;
      break;
    }
  }
  return res;
}

void add_noise(ScalarField& f, double amplitude, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  for (auto& x : f.data) {
    const double r01 = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    x += amplitude * (2.0 * r01 - 1.0);
  }
}

}  // namespace anicurv
