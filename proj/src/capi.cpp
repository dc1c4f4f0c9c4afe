#include "anicurv/anicurv.h"

#include <exception>
#include <stdexcept>
#include <string>
#include <utility>

#include "anicurv/anisotropy.hpp"
#include "anicurv/curves.hpp"
#include "anicurv/field.hpp"
#include "anicurv/minimize.hpp"
#include "anicurv/phase_energy.hpp"
#include "anicurv/profiles.hpp"
#include "anicurv/recovery.hpp"
#include "anicurv/varifold.hpp"

struct anicurv_grid {
  anicurv::Grid g;
};
struct anicurv_field {
  anicurv::ScalarField f;
};
struct anicurv_aniso {
  anicurv::Anisotropy a;
};
struct anicurv_network {
  anicurv::CurveNetwork n;
};
struct anicurv_varifold {
  anicurv::DiscreteVarifold v;
};
struct anicurv_ms_state {
  anicurv::SharpMsState s;
};

namespace {

thread_local std::string g_error;

void record(const std::exception& e) { g_error = e.what(); }

template <typename F>
int guarded(F&& body) {
  try {
    body();
    return ANICURV_OK;
  } catch (const std::invalid_argument& e) {
    record(e);
    return ANICURV_EINVAL;
  } catch (const std::exception& e) {
    record(e);
    return ANICURV_EFAIL;
  }
}

template <typename T, typename F>
T* guarded_new(F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    record(e);
    return nullptr;
  }
}

int require(bool ok, const char* msg) {
  if (!ok) {
    g_error = msg;
    return ANICURV_EINVAL;
  }
  return ANICURV_OK;
}

anicurv_breakdown to_c(const anicurv::EnergyBreakdown& b) {
  return {b.bulk,      b.anisotropic, b.curvature, b.point,
          b.penalty_v, b.penalty_w,   b.total,     b.under_resolved ? 1 : 0};
}

anicurv_breakdown to_c(const anicurv::SharpBreakdown& b) {
  return {b.bulk,
          b.anisotropic,
          b.curvature,
          b.point,
          0.0,
          0.0,
          b.bulk + b.anisotropic + b.curvature + b.point,
          0};
}

anicurv::MsParams to_ms(const anicurv_ms_params& p) {
  return anicurv::MsParams(p.eps, p.beta, p.eta, p.gamma, p.lambda, p.r_eps);
}

int to_c_status(anicurv::FlowStatus s) {
  switch (s) {
    case anicurv::FlowStatus::stationary:
      return ANICURV_FLOW_STATIONARY;
    case anicurv::FlowStatus::diverged:
      return ANICURV_FLOW_DIVERGED;
    default:
      return ANICURV_FLOW_DONE;
  }
}

}  // namespace

extern "C" {

const char* anicurv_last_error(void) { return g_error.c_str(); }

double anicurv_c0(void) { return anicurv::c0_constant(); }

int anicurv_c0_quadrature(double* out) {
  if (int rc = require(out != nullptr, "null output"); rc) return rc;
  return guarded([&] { *out = anicurv::c0_quadrature(); });
}

int anicurv_truncated_profile(double t, double eps, double lambda, double* value,
                              double* d1, double* d2) {
  return guarded([&] {
    const anicurv::ProfileParams pp(eps, lambda);
    if (value) *value = anicurv::truncated_profile(t, pp);
    if (d1) *d1 = anicurv::truncated_profile_d1(t, pp);
    if (d2) *d2 = anicurv::truncated_profile_d2(t, pp);
  });
}

int anicurv_profile_mass(double eps, double lambda, double* kinetic, double* potential,
                         double* tail) {
  return guarded([&] {
    const anicurv::ProfileMass m = anicurv::profile_mass(anicurv::ProfileParams(eps, lambda));
    if (kinetic) *kinetic = m.kinetic;
    if (potential) *potential = m.potential;
    if (tail) *tail = m.tail;
  });
}

int anicurv_profile_residual(double eps, double lambda, double* out) {
  if (int rc = require(out != nullptr, "null output"); rc) return rc;
  return guarded(
      [&] { *out = anicurv::profile_residual(anicurv::ProfileParams(eps, lambda)); });
}

anicurv_grid* anicurv_grid_new_2d(double ox, double oy, double ex, double ey, int nx,
                                  int ny, int boundary) {
  return guarded_new<anicurv_grid>([&] {
    const anicurv::Boundary b = boundary == ANICURV_BOUNDARY_NEUMANN
                                    ? anicurv::Boundary::neumann
                                    : anicurv::Boundary::periodic;
    if (boundary != ANICURV_BOUNDARY_PERIODIC && boundary != ANICURV_BOUNDARY_NEUMANN)
      throw std::invalid_argument("grid: unknown boundary mode");
    return new anicurv_grid{anicurv::Grid(2, {ox, oy, 0.0}, {ex, ey, 0.0}, {nx, ny, 1}, b)};
  });
}

void anicurv_grid_free(anicurv_grid* g) { delete g; }

int anicurv_grid_shape(const anicurv_grid* g, int* nx, int* ny) {
  if (int rc = require(g != nullptr, "null grid"); rc) return rc;
  if (nx) *nx = g->g.n[0];
  if (ny) *ny = g->g.n[1];
  return ANICURV_OK;
}

int anicurv_grid_spacing(const anicurv_grid* g, double* hx, double* hy) {
  if (int rc = require(g != nullptr, "null grid"); rc) return rc;
  if (hx) *hx = g->g.h(0);
  if (hy) *hy = g->g.h(1);
  return ANICURV_OK;
}

anicurv_field* anicurv_field_new(const anicurv_grid* g) {
  return guarded_new<anicurv_field>([&] {
    if (!g) throw std::invalid_argument("null grid");
    return new anicurv_field{anicurv::ScalarField(g->g)};
  });
}

anicurv_field* anicurv_field_clone(const anicurv_field* f) {
  return guarded_new<anicurv_field>([&] {
    if (!f) throw std::invalid_argument("null field");
    return new anicurv_field{f->f};
  });
}

void anicurv_field_free(anicurv_field* f) { delete f; }

double* anicurv_field_data(anicurv_field* f) { return f ? f->f.data.data() : nullptr; }

int64_t anicurv_field_size(const anicurv_field* f) {
  return f ? static_cast<int64_t>(f->f.data.size()) : 0;
}

int anicurv_field_coord(const anicurv_field* f, int64_t idx, double* x, double* y) {
  if (int rc = require(f != nullptr, "null field"); rc) return rc;
  if (int rc = require(idx >= 0 && idx < anicurv_field_size(f), "index out of range"); rc)
    return rc;
  const int i = static_cast<int>(idx % f->f.grid.n[0]);
  const int j = static_cast<int>(idx / f->f.grid.n[0]);
  if (x) *x = f->f.grid.coord(0, i);
  if (y) *y = f->f.grid.coord(1, j);
  return ANICURV_OK;
}

int anicurv_field_integrate(const anicurv_field* f, double* out) {
  if (int rc = require(f && out, "null argument"); rc) return rc;
  return guarded([&] { *out = anicurv::integrate(f->f); });
}

int anicurv_field_write(const anicurv_field* f, const char* path) {
  if (int rc = require(f && path, "null argument"); rc) return rc;
  return guarded([&] { anicurv::write_field(f->f, path); });
}

anicurv_field* anicurv_field_read(const char* path) {
  return guarded_new<anicurv_field>([&] {
    if (!path) throw std::invalid_argument("null path");
    return new anicurv_field{anicurv::read_field(path)};
  });
}

int anicurv_field_write_csv(const anicurv_field* f, const char* path) {
  if (int rc = require(f && path, "null argument"); rc) return rc;
  return guarded([&] { anicurv::write_field_csv(f->f, path); });
}

int anicurv_field_add_noise(anicurv_field* f, double amplitude, uint64_t seed) {
  if (int rc = require(f != nullptr, "null field"); rc) return rc;
  return guarded([&] { anicurv::add_noise(f->f, amplitude, seed); });
}

anicurv_aniso* anicurv_aniso_isotropic(void) {
  return guarded_new<anicurv_aniso>(
      [&] { return new anicurv_aniso{anicurv::Anisotropy::isotropic()}; });
}

anicurv_aniso* anicurv_aniso_fourfold(double beta) {
  return guarded_new<anicurv_aniso>(
      [&] { return new anicurv_aniso{anicurv::Anisotropy::fourfold(beta)}; });
}

anicurv_aniso* anicurv_aniso_smoothed_l1(double rho) {
  return guarded_new<anicurv_aniso>(
      [&] { return new anicurv_aniso{anicurv::Anisotropy::smoothed_l1(rho)}; });
}

anicurv_aniso* anicurv_aniso_load_table(const char* path) {
  return guarded_new<anicurv_aniso>([&] {
    if (!path) throw std::invalid_argument("null path");
    return new anicurv_aniso{anicurv::Anisotropy::load_table(path)};
  });
}

void anicurv_aniso_free(anicurv_aniso* a) { delete a; }

int anicurv_aniso_save_table(const anicurv_aniso* a, const char* path) {
  if (int rc = require(a && path, "null argument"); rc) return rc;
  return guarded([&] { a->a.save_table(path); });
}

int anicurv_aniso_at_angle(const anicurv_aniso* a, double theta, double* out) {
  if (int rc = require(a && out, "null argument"); rc) return rc;
  return guarded([&] { *out = a->a.at_angle(theta); });
}

int anicurv_aniso_extend(const anicurv_aniso* a, double zx, double zy, double r_eps,
                         double* out) {
  if (int rc = require(a && out, "null argument"); rc) return rc;
  return guarded([&] {
    const double z[2] = {zx, zy};
    *out = a->a.extend(z, 2, r_eps);
  });
}

int anicurv_aniso_range(const anicurv_aniso* a, double* min, double* max) {
  if (int rc = require(a != nullptr, "null anisotropy"); rc) return rc;
  if (min) *min = a->a.min_on_sphere();
  if (max) *max = a->a.max_on_sphere();
  return ANICURV_OK;
}

anicurv_aniso* anicurv_aniso_convex_envelope(const anicurv_aniso* a, int n_dirs) {
  return guarded_new<anicurv_aniso>([&] {
    if (!a) throw std::invalid_argument("null anisotropy");
    return new anicurv_aniso{a->a.convex_envelope(n_dirs)};
  });
}

anicurv_network* anicurv_network_circle(double radius, double cx, double cy) {
  return guarded_new<anicurv_network>(
      [&] { return new anicurv_network{anicurv::make_circle(radius, {cx, cy})}; });
}

anicurv_network* anicurv_network_ellipse(double a, double b, double cx, double cy) {
  return guarded_new<anicurv_network>(
      [&] { return new anicurv_network{anicurv::make_ellipse(a, b, {cx, cy})}; });
}

anicurv_network* anicurv_network_star(int arms, double arm_length, double cx, double cy) {
  return guarded_new<anicurv_network>(
      [&] { return new anicurv_network{anicurv::make_star(arms, arm_length, {cx, cy})}; });
}

anicurv_network* anicurv_network_limacon(double a, double b, double cx, double cy) {
  return guarded_new<anicurv_network>(
      [&] { return new anicurv_network{anicurv::make_limacon(a, b, {cx, cy})}; });
}

anicurv_network* anicurv_network_square(double side, double cx, double cy) {
  return guarded_new<anicurv_network>(
      [&] { return new anicurv_network{anicurv::make_square(side, {cx, cy})}; });
}

anicurv_network* anicurv_network_segment(double px, double py, double qx, double qy) {
  return guarded_new<anicurv_network>(
      [&] { return new anicurv_network{anicurv::make_segment({px, py}, {qx, qy})}; });
}

anicurv_network* anicurv_network_load_csv(const char* path, int closed) {
  return guarded_new<anicurv_network>([&] {
    if (!path) throw std::invalid_argument("null path");
    return new anicurv_network{anicurv::load_polyline_csv(path, closed != 0)};
  });
}

void anicurv_network_free(anicurv_network* n) { delete n; }

int anicurv_network_length(const anicurv_network* n, double* out) {
  if (int rc = require(n && out, "null argument"); rc) return rc;
  return guarded([&] { *out = n->n.length(); });
}

int anicurv_network_max_curvature(const anicurv_network* n, double* out) {
  if (int rc = require(n && out, "null argument"); rc) return rc;
  return guarded([&] { *out = n->n.max_curvature_norm(); });
}

int anicurv_network_junction_count(const anicurv_network* n, int* total, int* nonzero) {
  if (int rc = require(n != nullptr, "null network"); rc) return rc;
  int nz = 0;
  for (const auto& j : n->n.junctions())
    if (j.v.norm() > 1e-12) ++nz;
  if (total) *total = static_cast<int>(n->n.junctions().size());
  if (nonzero) *nonzero = nz;
  return ANICURV_OK;
}

int anicurv_sharp_set_energy(const anicurv_network* n, const anicurv_aniso* a,
                             anicurv_breakdown* out) {
  if (int rc = require(n && a && out, "null argument"); rc) return rc;
  return guarded([&] { *out = to_c(anicurv::sharp_set_energy(n->n, a->a)); });
}

int anicurv_set_energy(const anicurv_field* v, const anicurv_aniso* a, double eps,
                       double r_eps, anicurv_breakdown* out) {
  if (int rc = require(v && a && out, "null argument"); rc) return rc;
  return guarded([&] { *out = to_c(anicurv::set_energy(v->f, a->a, eps, r_eps)); });
}

int anicurv_point_phase_energy(const anicurv_field* w, double eps, double beta,
                               anicurv_breakdown* out) {
  if (int rc = require(w && out, "null argument"); rc) return rc;
  return guarded([&] { *out = to_c(anicurv::point_phase_energy(w->f, eps, beta)); });
}

int anicurv_radial_point_energy(double eps, double beta, double lambda, double* mm_half,
                                double* willmore_half, double* total) {
  return guarded([&] {
    const double t = anicurv::radial_point_energy(eps, beta, lambda, mm_half, willmore_half);
    if (total) *total = t;
  });
}

int anicurv_ms_energy(const anicurv_field* u, const anicurv_field* v,
                      const anicurv_field* w, const anicurv_aniso* a,
                      const anicurv_ms_params* p, anicurv_breakdown* out) {
  if (int rc = require(u && v && w && a && p && out, "null argument"); rc) return rc;
  return guarded(
      [&] { *out = to_c(anicurv::ms_energy(u->f, v->f, w->f, a->a, to_ms(*p))); });
}

anicurv_field* anicurv_recover_set(const anicurv_network* boundary, const anicurv_grid* g,
                                   double eps, double lambda) {
  return guarded_new<anicurv_field>([&] {
    if (!boundary || !g) throw std::invalid_argument("null argument");
    return new anicurv_field{anicurv::recover_set(boundary->n, g->g, eps, lambda)};
  });
}

anicurv_ms_state* anicurv_ms_state_new(const anicurv_network* jump, anicurv_scalar_fn u,
                                       anicurv_grad_fn grad_u, void* ctx, double gamma) {
  return guarded_new<anicurv_ms_state>([&] {
    if (!jump || !u || !grad_u) throw std::invalid_argument("null argument");
    anicurv::SharpMsState st{
        jump->n,
        [u, ctx](anicurv::Vec2 x) { return u(x.x, x.y, ctx); },
        [grad_u, ctx](anicurv::Vec2 x) {
          double out[2];
          grad_u(x.x, x.y, ctx, out);
          return anicurv::Vec2{out[0], out[1]};
        },
        gamma};
    return new anicurv_ms_state{std::move(st)};
  });
}

void anicurv_ms_state_free(anicurv_ms_state* s) { delete s; }

int anicurv_sharp_ms_energy(const anicurv_ms_state* s, const anicurv_aniso* a,
                            const anicurv_grid* g, anicurv_breakdown* out) {
  if (int rc = require(s && a && g && out, "null argument"); rc) return rc;
  return guarded([&] { *out = to_c(anicurv::sharp_ms_energy(s->s, a->a, g->g)); });
}

int anicurv_recover_ms(const anicurv_ms_state* s, const anicurv_grid* g,
                       const anicurv_ms_params* p, anicurv_field** u, anicurv_field** v,
                       anicurv_field** w) {
  if (int rc = require(s && g && p && u && v && w, "null argument"); rc) return rc;
  *u = *v = *w = nullptr;
  return guarded([&] {
    anicurv::MsRecovery r = anicurv::recover_ms(s->s, g->g, to_ms(*p));
    *u = new anicurv_field{std::move(r.u)};
    *v = new anicurv_field{std::move(r.v)};
    *w = new anicurv_field{std::move(r.w)};
  });
}

anicurv_varifold* anicurv_varifold_discretize(const anicurv_network* n, double h) {
  return guarded_new<anicurv_varifold>([&] {
    if (!n) throw std::invalid_argument("null network");
    return new anicurv_varifold{anicurv::discretize(n->n, h)};
  });
}

void anicurv_varifold_free(anicurv_varifold* v) { delete v; }

int anicurv_varifold_mass(const anicurv_varifold* v, double* out) {
  if (int rc = require(v && out, "null argument"); rc) return rc;
  return guarded([&] { *out = v->v.mass(); });
}

int anicurv_varifold_total_curvature(const anicurv_varifold* v, double* out) {
  if (int rc = require(v && out, "null argument"); rc) return rc;
  return guarded([&] { *out = v->v.total_curvature(); });
}

int anicurv_varifold_atom_count(const anicurv_varifold* v, int* atoms, int* zeroed) {
  if (int rc = require(v != nullptr, "null varifold"); rc) return rc;
  if (atoms) *atoms = static_cast<int>(v->v.atoms.size());
  if (zeroed) *zeroed = v->v.zero_junctions;
  return ANICURV_OK;
}

int anicurv_varifold_variation_identity(const anicurv_varifold* v, double* tangential,
                                        double* curvature_route) {
  if (int rc = require(v != nullptr, "null varifold"); rc) return rc;
  return guarded([&] {
    if (tangential)
      *tangential = v->v.first_variation([](anicurv::Vec2, anicurv::Vec2* rows) {
        rows[0] = {1.0, 0.0};
        rows[1] = {0.0, 1.0};
      });
    if (curvature_route)
      *curvature_route = v->v.first_variation_curvature([](anicurv::Vec2 x) { return x; });
  });
}

int anicurv_varifold_monotonicity_gap(const anicurv_varifold* v, double x0, double y0,
                                      double r, double* out) {
  if (int rc = require(v && out, "null argument"); rc) return rc;
  return guarded([&] { *out = v->v.monotonicity_gap({x0, y0}, r); });
}

int anicurv_varifold_gauss_bonnet_deficit(const anicurv_varifold* v, double* out) {
  if (int rc = require(v && out, "null argument"); rc) return rc;
  return guarded([&] { *out = v->v.gauss_bonnet_deficit(); });
}

int anicurv_varifold_density(const anicurv_varifold* v, double x0, double y0,
                             const double* rhos, int n_rhos, double* theta, int* k_class) {
  if (int rc = require(v && rhos && theta && n_rhos > 0, "null argument"); rc) return rc;
  return guarded([&] {
    const std::vector<double> rr(rhos, rhos + n_rhos);
    *theta = v->v.density({x0, y0}, rr, k_class);
  });
}

int anicurv_varifold_write_csv(const anicurv_varifold* v, const char* samples_path,
                               const char* atoms_path) {
  if (int rc = require(v && samples_path && atoms_path, "null argument"); rc) return rc;
  return guarded([&] { v->v.write_csv(samples_path, atoms_path); });
}

void anicurv_flow_params_default(anicurv_flow_params* p) {
  if (!p) return;
  *p = {0.02, -1.0, 1e-4, 200, 1, 0.0, 1e-10, 30, 5};
}

void anicurv_ms_flow_params_default(anicurv_ms_flow_params* p) {
  if (!p) return;
  *p = {10.0, 1e-6, 1e-4, 20, 10, 1e-8, 20000, 1e-10, 30, 5};
}

int anicurv_flow_set_energy(anicurv_field* v, const anicurv_aniso* a,
                            const anicurv_flow_params* p, anicurv_trace_fn trace,
                            void* ctx, int* flow_status, double* grad_norm) {
  if (int rc = require(v && a && p, "null argument"); rc) return rc;
  return guarded([&] {
    anicurv::FlowParams fp;
    fp.eps = p->eps;
    fp.r_eps = p->r_eps;
    fp.dt = p->dt;
    fp.steps = p->steps;
    fp.record_every = p->record_every > 0 ? p->record_every : 1;
    fp.grad_tol = p->grad_tol;
    fp.slack = p->slack;
    fp.max_halvings = p->max_halvings;
    fp.max_bad_steps = p->max_bad_steps;
    const anicurv::FlowResult res = anicurv::flow_set_energy(v->f, a->a, fp);
    if (trace)
      for (const auto& rec : res.trace) trace(rec.step, rec.dt, rec.energy, ctx);
    if (flow_status) *flow_status = to_c_status(res.status);
    if (grad_norm) *grad_norm = res.grad_norm;
  });
}

int anicurv_alternate_ms(anicurv_field* u, anicurv_field* v, anicurv_field* w,
                         const anicurv_field* g, const anicurv_aniso* a,
                         const anicurv_ms_params* ep, const anicurv_ms_flow_params* fp,
                         anicurv_ms_trace_fn trace, void* ctx, int* flow_status) {
  if (int rc = require(u && v && w && g && a && ep && fp, "null argument"); rc) return rc;
  return guarded([&] {
    anicurv::MsFlowParams mfp{to_ms(*ep), fp->mu_f,      fp->kappa_reg, fp->dt,
                              fp->cycles, fp->vw_steps_per_u,           fp->cg_tol,
                              fp->cg_max_iter,           fp->slack,     fp->max_halvings,
                              fp->max_bad_cycles};
    const anicurv::MsFlowResult res =
        anicurv::alternate_ms(u->f, v->f, w->f, g->f, a->a, mfp);
    if (trace)
      for (const auto& rec : res.trace) {
        const anicurv_breakdown b = to_c(rec.ms);
        trace(rec.cycle, &b, rec.fidelity, rec.total, ctx);
      }
    if (flow_status) *flow_status = to_c_status(res.status);
  });
}

int anicurv_solve_u_step(anicurv_field* u, const anicurv_field* v, const anicurv_field* g,
                         double mu_f, double kappa_reg, double tol, int max_iter,
                         int* iterations) {
  if (int rc = require(u && v && g, "null argument"); rc) return rc;
  return guarded([&] {
    const int it = anicurv::solve_u_step(u->f, v->f, g->f, mu_f, kappa_reg, tol, max_iter);
    if (iterations) *iterations = it;
  });
}

}  // extern "C"
