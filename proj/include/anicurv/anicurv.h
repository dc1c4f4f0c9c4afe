/* C interface to the anisotropic curvature energy library. All entry points
 * return ANICURV_OK or an error code; anicurv_last_error() describes the most
 * recent failure on the calling thread. Handles are freed with the matching
 * _free function; every factory returns NULL on failure. */
#ifndef ANICURV_H
#define ANICURV_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define ANICURV_OK 0
#define ANICURV_EINVAL 1 /* bad arguments or violated precondition */
#define ANICURV_EFAIL 2  /* runtime failure (I/O, non-convergence) */

#define ANICURV_BOUNDARY_PERIODIC 0
#define ANICURV_BOUNDARY_NEUMANN 1

#define ANICURV_FLOW_DONE 0
#define ANICURV_FLOW_STATIONARY 1
#define ANICURV_FLOW_DIVERGED 2

typedef struct anicurv_grid anicurv_grid;
typedef struct anicurv_field anicurv_field;
typedef struct anicurv_aniso anicurv_aniso;
typedef struct anicurv_network anicurv_network;
typedef struct anicurv_varifold anicurv_varifold;
typedef struct anicurv_ms_state anicurv_ms_state;

const char* anicurv_last_error(void);

/* ---- profiles ---- */

double anicurv_c0(void);
int anicurv_c0_quadrature(double* out);
int anicurv_truncated_profile(double t, double eps, double lambda, double* value,
                              double* d1, double* d2);
int anicurv_profile_mass(double eps, double lambda, double* kinetic, double* potential,
                         double* tail);
int anicurv_profile_residual(double eps, double lambda, double* out);

/* ---- grids and fields ---- */

anicurv_grid* anicurv_grid_new_2d(double ox, double oy, double ex, double ey, int nx,
                                  int ny, int boundary);
void anicurv_grid_free(anicurv_grid* g);
int anicurv_grid_shape(const anicurv_grid* g, int* nx, int* ny);
int anicurv_grid_spacing(const anicurv_grid* g, double* hx, double* hy);

anicurv_field* anicurv_field_new(const anicurv_grid* g);
anicurv_field* anicurv_field_clone(const anicurv_field* f);
void anicurv_field_free(anicurv_field* f);
double* anicurv_field_data(anicurv_field* f);
int64_t anicurv_field_size(const anicurv_field* f);
int anicurv_field_coord(const anicurv_field* f, int64_t idx, double* x, double* y);
int anicurv_field_integrate(const anicurv_field* f, double* out);
int anicurv_field_write(const anicurv_field* f, const char* path);
anicurv_field* anicurv_field_read(const char* path);
int anicurv_field_write_csv(const anicurv_field* f, const char* path);
int anicurv_field_add_noise(anicurv_field* f, double amplitude, uint64_t seed);

/* ---- anisotropies ---- */

anicurv_aniso* anicurv_aniso_isotropic(void);
anicurv_aniso* anicurv_aniso_fourfold(double beta);
anicurv_aniso* anicurv_aniso_smoothed_l1(double rho);
anicurv_aniso* anicurv_aniso_load_table(const char* path);
void anicurv_aniso_free(anicurv_aniso* a);
int anicurv_aniso_save_table(const anicurv_aniso* a, const char* path);
int anicurv_aniso_at_angle(const anicurv_aniso* a, double theta, double* out);
int anicurv_aniso_extend(const anicurv_aniso* a, double zx, double zy, double r_eps,
                         double* out);
int anicurv_aniso_range(const anicurv_aniso* a, double* min, double* max);
anicurv_aniso* anicurv_aniso_convex_envelope(const anicurv_aniso* a, int n_dirs);

/* ---- curve networks ---- */

anicurv_network* anicurv_network_circle(double radius, double cx, double cy);
anicurv_network* anicurv_network_ellipse(double a, double b, double cx, double cy);
anicurv_network* anicurv_network_star(int arms, double arm_length, double cx, double cy);
anicurv_network* anicurv_network_limacon(double a, double b, double cx, double cy);
anicurv_network* anicurv_network_square(double side, double cx, double cy);
anicurv_network* anicurv_network_segment(double px, double py, double qx, double qy);
anicurv_network* anicurv_network_load_csv(const char* path, int closed);
void anicurv_network_free(anicurv_network* n);
int anicurv_network_length(const anicurv_network* n, double* out);
int anicurv_network_max_curvature(const anicurv_network* n, double* out);
int anicurv_network_junction_count(const anicurv_network* n, int* total, int* nonzero);

/* ---- energies ---- */

typedef struct {
  double bulk;
  double anisotropic;
  double curvature;
  double point;
  double penalty_v;
  double penalty_w;
  double total;
  int under_resolved;
} anicurv_breakdown;

typedef struct {
  double eps;
  double beta;
  double eta;
  double gamma;
  double lambda; /* profile truncation factor, > 1 */
  double r_eps;  /* anisotropy regularization scale; < 0 selects eps */
} anicurv_ms_params;

int anicurv_sharp_set_energy(const anicurv_network* n, const anicurv_aniso* a,
                             anicurv_breakdown* out);
int anicurv_set_energy(const anicurv_field* v, const anicurv_aniso* a, double eps,
                       double r_eps, anicurv_breakdown* out);
int anicurv_point_phase_energy(const anicurv_field* w, double eps, double beta,
                               anicurv_breakdown* out);
int anicurv_radial_point_energy(double eps, double beta, double lambda, double* mm_half,
                                double* willmore_half, double* total);
int anicurv_ms_energy(const anicurv_field* u, const anicurv_field* v,
                      const anicurv_field* w, const anicurv_aniso* a,
                      const anicurv_ms_params* p, anicurv_breakdown* out);

/* ---- recovery ---- */

anicurv_field* anicurv_recover_set(const anicurv_network* boundary, const anicurv_grid* g,
                                   double eps, double lambda);

typedef double (*anicurv_scalar_fn)(double x, double y, void* ctx);

/* grad_fn writes (du/dx, du/dy) into out[0..1] */
typedef void (*anicurv_grad_fn)(double x, double y, void* ctx, double* out);

anicurv_ms_state* anicurv_ms_state_new(const anicurv_network* jump, anicurv_scalar_fn u,
                                       anicurv_grad_fn grad_u, void* ctx, double gamma);
void anicurv_ms_state_free(anicurv_ms_state* s);
int anicurv_sharp_ms_energy(const anicurv_ms_state* s, const anicurv_aniso* a,
                            const anicurv_grid* g, anicurv_breakdown* out);
int anicurv_recover_ms(const anicurv_ms_state* s, const anicurv_grid* g,
                       const anicurv_ms_params* p, anicurv_field** u, anicurv_field** v,
                       anicurv_field** w);

/* ---- varifolds ---- */

anicurv_varifold* anicurv_varifold_discretize(const anicurv_network* n, double h);
void anicurv_varifold_free(anicurv_varifold* v);
int anicurv_varifold_mass(const anicurv_varifold* v, double* out);
int anicurv_varifold_total_curvature(const anicurv_varifold* v, double* out);
int anicurv_varifold_atom_count(const anicurv_varifold* v, int* atoms, int* zeroed);
/* first variation of identity/translation test fields along both routes */
int anicurv_varifold_variation_identity(const anicurv_varifold* v, double* tangential,
                                        double* curvature_route);
int anicurv_varifold_monotonicity_gap(const anicurv_varifold* v, double x0, double y0,
                                      double r, double* out);
int anicurv_varifold_gauss_bonnet_deficit(const anicurv_varifold* v, double* out);
int anicurv_varifold_density(const anicurv_varifold* v, double x0, double y0,
                             const double* rhos, int n_rhos, double* theta, int* k_class);
int anicurv_varifold_write_csv(const anicurv_varifold* v, const char* samples_path,
                               const char* atoms_path);

/* ---- descent ---- */

typedef struct {
  double eps;
  double r_eps; /* < 0 selects eps */
  double dt;
  int steps;
  int record_every;
  double grad_tol; /* 0 disables */
  double slack;
  int max_halvings;
  int max_bad_steps;
} anicurv_flow_params;

typedef struct {
  double mu_f;
  double kappa_reg;
  double dt;
  int cycles;
  int vw_steps_per_u;
  double cg_tol;
  int cg_max_iter;
  double slack;
  int max_halvings;
  int max_bad_cycles;
} anicurv_ms_flow_params;

void anicurv_flow_params_default(anicurv_flow_params* p);
void anicurv_ms_flow_params_default(anicurv_ms_flow_params* p);

typedef void (*anicurv_trace_fn)(int step, double dt, double energy, void* ctx);
typedef void (*anicurv_ms_trace_fn)(int cycle, const anicurv_breakdown* ms, double fidelity,
                                    double total, void* ctx);

int anicurv_flow_set_energy(anicurv_field* v, const anicurv_aniso* a,
                            const anicurv_flow_params* p, anicurv_trace_fn trace,
                            void* ctx, int* flow_status, double* grad_norm);
int anicurv_alternate_ms(anicurv_field* u, anicurv_field* v, anicurv_field* w,
                         const anicurv_field* g, const anicurv_aniso* a,
                         const anicurv_ms_params* ep, const anicurv_ms_flow_params* fp,
                         anicurv_ms_trace_fn trace, void* ctx, int* flow_status);
int anicurv_solve_u_step(anicurv_field* u, const anicurv_field* v, const anicurv_field* g,
                         double mu_f, double kappa_reg, double tol, int max_iter,
                         int* iterations);

#ifdef __cplusplus
}
#endif

#endif /* ANICURV_H */
