#pragma once

#include <cstdint>
#include <vector>

#include "anicurv/phase_energy.hpp"

namespace anicurv {

enum class FlowStatus {
  done,        // ran the requested number of steps
  stationary,  // gradient norm fell below grad_tol
  diverged,    // energy kept rising or became non-finite
};

struct FlowParams {
  double eps;
  double r_eps = -1.0;  // -1 selects eps
  double dt;
  int steps;
  int record_every = 1;
  double grad_tol = 0.0;  // 0 disables the stationarity stop
  double slack = 1e-10;   // tolerated per-step energy increase
  int max_halvings = 30;
  int max_bad_steps = 5;  // consecutive non-decreasing steps before abort
};

struct FlowRecord {
  int step;
  double dt;
  double energy;
};

struct FlowResult {
  std::vector<FlowRecord> trace;  // step 0 entry plus each recorded step
  FlowStatus status = FlowStatus::done;
  double grad_norm = 0.0;  // L2 norm of the last evaluated gradient
  int steps_taken = 0;
};

// Semi-implicit L2 gradient flow of set_energy on a periodic grid. The
// constant-coefficient stiffness (2 eps/c0) lap^2 - (maxW''/eps) lap is folded
// into the implicit factor in frequency space; everything else is explicit.
// Steps that raise the energy beyond slack are retried with halved dt.
FlowResult flow_set_energy(ScalarField& v, const Anisotropy& phi, const FlowParams& p);

struct MsFlowParams {
  MsParams energy;
  double mu_f;  // fidelity weight, > 0
  double kappa_reg = 1e-6;
  double dt;  // shared v/w step
  int cycles;
  int vw_steps_per_u = 10;
  double cg_tol = 1e-8;
  int cg_max_iter = 20000;
  double slack = 1e-10;
  int max_halvings = 30;
  int max_bad_cycles = 5;
};

struct MsFlowRecord {
  int cycle;
  EnergyBreakdown ms;
  double fidelity;  // mu_f int (u-g)^2 + kappa_reg int |grad u|^2
  double total;     // ms.total + fidelity
};

struct MsFlowResult {
  std::vector<MsFlowRecord> trace;
  FlowStatus status = FlowStatus::done;
  int cycles_taken = 0;
  int cg_iters_last = 0;
};

// Alternating minimization of ms_energy plus a quadratic fidelity term on a
// periodic grid. Each cycle runs one exact u-solve (conjugate gradients on
// -div(((1+v)^2/4 + kappa_reg) grad u) + mu_f (u - g) = 0) followed by
// vw_steps_per_u semi-implicit v and w descent steps with dt halving.
MsFlowResult alternate_ms(ScalarField& u, ScalarField& v, ScalarField& w,
                          const ScalarField& g, const Anisotropy& phi,
                          const MsFlowParams& p);

// Solves the u-subproblem alone (v, w frozen); exposed for oracle tests.
int solve_u_step(ScalarField& u, const ScalarField& v, const ScalarField& g, double mu_f,
                 double kappa_reg, double tol, int max_iter);

// Uniform perturbation in [-amplitude, amplitude], reproducible from the seed.
void add_noise(ScalarField& f, double amplitude, std::uint64_t seed);

}  // namespace anicurv
