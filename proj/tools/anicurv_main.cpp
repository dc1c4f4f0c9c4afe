// Command line driver for the anicurv shared library.
//
// Subcommands:
//   profile-check    1D profile masses and residual over an eps sweep
//   convexify        convex envelope of a surface tension
//   recovery-energy  phase energy of a recovered set vs the sharp value
//   point-energy     radial point construction vs its 4*pi target
//   ms-recovery      free-discontinuity recovery vs the sharp functional
//   varifold-check   first variation, monotonicity and density checks
//   minimize         semi-implicit descent on the set energy
//   ms-minimize      alternating descent on the free-discontinuity energy
//
// Outputs land under <root>/<name> where <root> is --out, else $ANICURV_OUT,
// else ./runs. CSV outputs are bit-identical across reruns with the same
// config and seed; manifest.txt carries the resolved options and the timing.
// Options can come from an INI file via --config, with one [section] per
// subcommand; the subcommand itself is still chosen on the command line.
//
// Exit codes: 0 ok, 1 bad arguments or config, 2 numeric failure or a missed
// check, 3 divergence.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "anicurv/anicurv.h"

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr double kPi = 3.14159265358979323846;

struct CliError {
  int code;
  std::string msg;
};

void check(int rc) {
  if (rc == ANICURV_OK) return;
  throw CliError{rc == ANICURV_EINVAL ? 1 : 2, anicurv_last_error()};
}

template <class T>
T* require(T* p) {
  if (!p) throw CliError{1, anicurv_last_error()};
  return p;
}

std::string g17(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

std::string gshort(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%g", v);
  return b;
}

struct Csv {
  std::ofstream f;
  Csv(const std::filesystem::path& p, const std::string& header) : f(p) {
    if (!f) throw CliError{2, "cannot open " + p.string()};
    f << header << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) f << (i ? "," : "") << cells[i];
    f << "\n";
  }
};

// RAII for the C handles so error paths do not leak.
template <class T, void (*F)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  explicit Handle(T* q) : p(q) {}
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() {
    if (p) F(p);
  }
  operator T*() const { return p; }
  T** out() { return &p; }
};
using GridH = Handle<anicurv_grid, anicurv_grid_free>;
using FieldH = Handle<anicurv_field, anicurv_field_free>;
using AnisoH = Handle<anicurv_aniso, anicurv_aniso_free>;
using NetH = Handle<anicurv_network, anicurv_network_free>;
using VarH = Handle<anicurv_varifold, anicurv_varifold_free>;
using StateH = Handle<anicurv_ms_state, anicurv_ms_state_free>;

struct PhiOpts {
  std::string kind = "iso";
  double beta = 0.3;
  double rho = 0.2;
  std::string table;
};

void add_phi_opts(CLI::App* sub, PhiOpts& o) {
  sub->add_option("--phi", o.kind, "surface tension: iso, fourfold, l1, table")
      ->check(CLI::IsMember({"iso", "fourfold", "l1", "table"}));
  sub->add_option("--phi-beta", o.beta, "fourfold strength");
  sub->add_option("--phi-rho", o.rho, "l1 smoothing scale");
  sub->add_option("--phi-table", o.table, "csv table for --phi table");
}

anicurv_aniso* make_phi(const PhiOpts& o) {
  if (o.kind == "iso") return require(anicurv_aniso_isotropic());
  if (o.kind == "fourfold") return require(anicurv_aniso_fourfold(o.beta));
  if (o.kind == "l1") return require(anicurv_aniso_smoothed_l1(o.rho));
  if (o.table.empty()) throw CliError{1, "--phi table needs --phi-table"};
  return require(anicurv_aniso_load_table(o.table.c_str()));
}

struct ShapeOpts {
  std::string shape = "circle";
  double radius = 1.0;
  double a = 1.3;
  double b = 0.8;
  int arms = 3;
  double side = 1.6;
};

void add_shape_opts(CLI::App* sub, ShapeOpts& o, const char* def) {
  o.shape = def;
  sub->add_option("--shape", o.shape,
                  "circle, ellipse, limacon, square, star, segment")
      ->check(CLI::IsMember({"circle", "ellipse", "limacon", "square", "star", "segment"}));
  sub->add_option("--radius", o.radius, "circle radius");
  sub->add_option("--a", o.a, "ellipse/limacon first parameter");
  sub->add_option("--b", o.b, "ellipse/limacon second parameter");
  sub->add_option("--arms", o.arms, "star arm count");
  sub->add_option("--side", o.side, "square side");
}

anicurv_network* make_network(const ShapeOpts& o) {
  if (o.shape == "circle") return require(anicurv_network_circle(o.radius, 0, 0));
  if (o.shape == "ellipse") return require(anicurv_network_ellipse(o.a, o.b, 0, 0));
  if (o.shape == "limacon") return require(anicurv_network_limacon(o.a, o.b, 0, 0));
  if (o.shape == "square") return require(anicurv_network_square(o.side, 0, 0));
  if (o.shape == "star") return require(anicurv_network_star(o.arms, o.radius, 0, 0));
  return require(anicurv_network_segment(-0.5, 0, 0.5, 0));
}

// Crack-opening data function used by ms-recovery and ms-minimize. Jumps
// across the unit segment on the x axis, vanishes near the box edge so the
// periodic grid sees smooth data, and has bounded gradient at the tips.
// A smooth hill away from the segment keeps the Dirichlet energy from
// concentrating in the gated band around the jump.
double smooth01(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double smooth01_d(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const double t = s * (1.0 - s);
  return 30.0 * t * t;
}

constexpr double kCrackHalf = 0.5;
constexpr double kCrackSpan = 0.7;
constexpr double kHillY = 0.55;
constexpr double kHillR = 0.3;

double crack_u(double x, double y, void*) {
  const double ramp = 1.0 - smooth01(std::fabs(x) / kCrackHalf);
  const double bump = 1.0 - smooth01(std::fabs(y) / kCrackSpan);
  const double r = std::hypot(x, y - kHillY);
  const double hill = 1.0 - smooth01(r / kHillR);
  return (y < 0.0 ? -1.0 : 1.0) * ramp * bump + hill;
}

void crack_grad(double x, double y, void*, double* out) {
  const double sgn = y < 0.0 ? -1.0 : 1.0;
  const double ramp = 1.0 - smooth01(std::fabs(x) / kCrackHalf);
  const double bump = 1.0 - smooth01(std::fabs(y) / kCrackSpan);
  const double dramp = -smooth01_d(std::fabs(x) / kCrackHalf) / kCrackHalf *
                       (x < 0.0 ? -1.0 : 1.0);
  const double dbump = -smooth01_d(std::fabs(y) / kCrackSpan) / kCrackSpan;
  out[0] = sgn * dramp * bump;
  out[1] = ramp * dbump;
  const double r = std::hypot(x, y - kHillY);
  if (r > 0.0) {
    const double dh = -smooth01_d(r / kHillR) / (kHillR * r);
    out[0] += dh * x;
    out[1] += dh * (y - kHillY);
  }
}

struct Breakout {
  static std::vector<std::pair<std::string, double>> rows(const anicurv_breakdown& b) {
    return {{"bulk", b.bulk},           {"anisotropic", b.anisotropic},
            {"curvature", b.curvature}, {"point", b.point},
            {"penalty_v", b.penalty_v}, {"penalty_w", b.penalty_w},
            {"total", b.total}};
  }
};

std::filesystem::path g_dir;

// ---------------------------------------------------------------- profile

int run_profile_check(std::vector<double> eps, double lambda) {
  std::sort(eps.begin(), eps.end(), std::greater<>());
  const double half = 0.5 * anicurv_c0();
  Csv csv(g_dir / "profile_check.csv",
          "eps,lambda,kinetic,potential,kinetic_err,potential_err,tail,residual,eps_sq");
  int code = 0;
  double prev_err = -1.0;
  std::printf("%12s %14s %14s %12s %12s\n", "eps", "kinetic_err", "potential_err",
              "tail", "residual");
  for (double e : eps) {
    double kin, pot, tail, res;
    check(anicurv_profile_mass(e, lambda, &kin, &pot, &tail));
    check(anicurv_profile_residual(e, lambda, &res));
    const double ke = std::fabs(kin - half), pe = std::fabs(pot - half);
    csv.row({g17(e), g17(lambda), g17(kin), g17(pot), g17(ke), g17(pe), g17(tail),
             g17(res), g17(e * e)});
    std::printf("%12g %14.6e %14.6e %12.4e %12.4e\n", e, ke, pe, tail, res);
    if (prev_err >= 0.0 && ke >= prev_err) code = 2;
    prev_err = ke;
    if (e <= 1e-4 && (ke >= 1e-3 || tail >= 1e-6)) code = 2;
    if (e <= 1e-3 && res > e * e) code = 2;
  }
  if (code) std::fprintf(stderr, "profile-check: mass or residual check missed\n");
  return code;
}

// ---------------------------------------------------------------- convexify

int run_convexify(const PhiOpts& phi, int n_dirs) {
  AnisoH a(make_phi(phi));
  AnisoH env(require(anicurv_aniso_convex_envelope(a, n_dirs)));
  check(anicurv_aniso_save_table(env, (g_dir / "envelope.csv").string().c_str()));
  Csv csv(g_dir / "compare.csv", "theta,phi,envelope,gap");
  double max_gap = 0.0, arg = 0.0, min_gap = 0.0;
  for (int i = 0; i < n_dirs; ++i) {
    const double th = 2.0 * kPi * i / n_dirs;
    double p, q;
    check(anicurv_aniso_at_angle(a, th, &p));
    check(anicurv_aniso_at_angle(env, th, &q));
    const double gap = p - q;
    csv.row({g17(th), g17(p), g17(q), g17(gap)});
    if (gap > max_gap) max_gap = gap, arg = th;
    if (gap < min_gap) min_gap = gap;
  }
  std::printf("max gap %.12g at theta %.6f (min gap %.3e)\n", max_gap, arg, min_gap);
  if (min_gap < -1e-9) {
    std::fprintf(stderr, "convexify: envelope exceeds the input\n");
    return 2;
  }
  return 0;
}

// ---------------------------------------------------------------- recovery

int run_recovery_energy(const ShapeOpts& shape, const PhiOpts& phi,
                        std::vector<double> eps, int n, double box, double lambda,
                        double tol, bool save_fields, int jobs) {
  std::sort(eps.begin(), eps.end(), std::greater<>());
  NetH net(make_network(shape));
  AnisoH a(make_phi(phi));
  anicurv_breakdown sharp;
  check(anicurv_sharp_set_energy(net, a, &sharp));

  struct Row {
    double h = 0.0;
    anicurv_breakdown b{};
    int err_code = 0;
    std::string err;
  };
  std::vector<Row> rows(eps.size());
  auto work = [&](size_t i) {
    try {
      GridH grid(require(
          anicurv_grid_new_2d(-0.5 * box, -0.5 * box, box, box, n, n,
                              ANICURV_BOUNDARY_PERIODIC)));
      double hx, hy;
      check(anicurv_grid_spacing(grid, &hx, &hy));
      rows[i].h = hx;
      FieldH v(require(anicurv_recover_set(net, grid, eps[i], lambda)));
      check(anicurv_set_energy(v, a, eps[i], -1.0, &rows[i].b));
      if (save_fields)
        check(anicurv_field_write(
            v, (g_dir / ("v_" + gshort(eps[i]) + ".f64")).string().c_str()));
    } catch (const CliError& e) {
      rows[i].err_code = e.code;
      rows[i].err = e.msg;
    }
  };
  if (jobs > 1) {
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (int t = 0; t < jobs; ++t)
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < eps.size(); i = next.fetch_add(1)) work(i);
      });
    for (auto& t : pool) t.join();
  } else {
    for (size_t i = 0; i < eps.size(); ++i) work(i);
  }
  for (const auto& r : rows)
    if (r.err_code) throw CliError{r.err_code, r.err};

  Csv csv(g_dir / "recovery_energy.csv",
          "eps,h,anisotropic,curvature,total,sharp_total,rel_err,under_resolved");
  std::printf("sharp total %.12g\n", sharp.total);
  double last_err = 0.0;
  for (size_t i = 0; i < eps.size(); ++i) {
    const auto& b = rows[i].b;
    last_err = std::fabs(b.total - sharp.total) / sharp.total;
    csv.row({g17(eps[i]), g17(rows[i].h), g17(b.anisotropic), g17(b.curvature),
             g17(b.total), g17(sharp.total), g17(last_err),
             std::to_string(b.under_resolved)});
    std::printf("eps %-8g total %.10g rel_err %.4e%s\n", eps[i], b.total, last_err,
                b.under_resolved ? "  [under-resolved]" : "");
  }
  if (last_err > tol) {
    std::fprintf(stderr, "recovery-energy: final error %.3e above tol %.3e\n", last_err,
                 tol);
    return 2;
  }
  return 0;
}

// ---------------------------------------------------------------- point

int run_point_energy(double eps, double beta, double lambda, double tol) {
  double mm, will, total;
  check(anicurv_radial_point_energy(eps, beta, lambda, &mm, &will, &total));
  const double target = 4.0 * kPi;
  const double rel = std::fabs(total - target) / target;
  Csv csv(g_dir / "point_energy.csv",
          "eps,beta,lambda,mm_half,willmore_half,total,target,rel_err");
  csv.row({g17(eps), g17(beta), g17(lambda), g17(mm), g17(will), g17(total),
           g17(target), g17(rel)});
  std::printf("mm %.10g willmore %.10g total %.10g target %.10g rel %.3e\n", mm, will,
              total, target, rel);
  const double two_pi = 2.0 * kPi;
  if (rel > tol || std::fabs(mm - two_pi) / two_pi > tol ||
      std::fabs(will - two_pi) / two_pi > tol) {
    std::fprintf(stderr, "point-energy: off target by more than %.3g\n", tol);
    return 2;
  }
  return 0;
}

// ---------------------------------------------------------------- ms recovery

int run_ms_recovery(const PhiOpts& phi, const anicurv_ms_params& mp, int n, double box,
                    double tol, bool save_fields) {
  AnisoH a(make_phi(phi));
  NetH net(require(anicurv_network_segment(-0.5, 0, 0.5, 0)));
  StateH state(require(anicurv_ms_state_new(net, crack_u, crack_grad, nullptr, mp.gamma)));
  GridH grid(require(anicurv_grid_new_2d(-0.5 * box, -0.5 * box, box, box, n, n,
                                         ANICURV_BOUNDARY_PERIODIC)));
  anicurv_breakdown sharp;
  check(anicurv_sharp_ms_energy(state, a, grid, &sharp));
  FieldH u, v, w;
  check(anicurv_recover_ms(state, grid, &mp, u.out(), v.out(), w.out()));
  anicurv_breakdown b;
  check(anicurv_ms_energy(u, v, w, a, &mp, &b));

  Csv csv(g_dir / "ms_recovery.csv", "term,phase,sharp");
  auto ph = Breakout::rows(b), sh = Breakout::rows(sharp);
  for (size_t i = 0; i < ph.size(); ++i) {
    csv.row({ph[i].first, g17(ph[i].second), g17(sh[i].second)});
    std::printf("%-12s phase %14.8g sharp %14.8g\n", ph[i].first.c_str(), ph[i].second,
                sh[i].second);
  }
  if (save_fields) {
    check(anicurv_field_write(u, (g_dir / "u.f64").string().c_str()));
    check(anicurv_field_write(v, (g_dir / "v.f64").string().c_str()));
    check(anicurv_field_write(w, (g_dir / "w.f64").string().c_str()));
  }
  const double rel = std::fabs(b.total - sharp.total) / sharp.total;
  std::printf("total phase %.10g sharp %.10g rel %.4e\n", b.total, sharp.total, rel);
  if (rel > tol) {
    std::fprintf(stderr, "ms-recovery: total off by %.3e (tol %.3e)\n", rel, tol);
    return 2;
  }
  return 0;
}

// ---------------------------------------------------------------- varifold

int run_varifold_check(const ShapeOpts& shape, double h, double ring, double r0,
                       double r_factor, int nx0, int nr,
                       const std::vector<std::string>& density_at,
                       std::vector<double> rhos, bool save_samples) {
  NetH net(make_network(shape));
  VarH vf(require(anicurv_varifold_discretize(net, h)));
  int atoms = 0, zeroed = 0;
  check(anicurv_varifold_atom_count(vf, &atoms, &zeroed));
  double mass, totcurv, tang, curv_route;
  check(anicurv_varifold_mass(vf, &mass));
  check(anicurv_varifold_total_curvature(vf, &totcurv));
  check(anicurv_varifold_variation_identity(vf, &tang, &curv_route));
  const double route_diff = std::fabs(tang - curv_route);

  int code = 0;
  Csv summary(g_dir / "varifold_check.csv", "check,value");
  summary.row({"mass", g17(mass)});
  summary.row({"total_curvature", g17(totcurv)});
  summary.row({"variation_tangential_route", g17(tang)});
  summary.row({"variation_curvature_route", g17(curv_route)});
  summary.row({"route_diff", g17(route_diff)});
  summary.row({"curvature_atoms", std::to_string(atoms)});
  std::printf("mass %.10g total curvature %.10g atoms %d\n", mass, totcurv, atoms);
  std::printf("first variation routes: %.10g vs %.10g (diff %.3e)\n", tang, curv_route,
              route_diff);
  if (route_diff > 1e-6 * (1.0 + std::fabs(tang))) {
    std::fprintf(stderr, "varifold-check: first variation routes disagree\n");
    code = 2;
  }

  double gb = 0.0;
  const int gb_rc = anicurv_varifold_gauss_bonnet_deficit(vf, &gb);
  if (atoms == 0) {
    check(gb_rc);
    summary.row({"gauss_bonnet_deficit", g17(gb)});
    std::printf("gauss-bonnet deficit %.6e\n", gb);
    if (gb < -1e-4) {
      std::fprintf(stderr, "varifold-check: negative deficit\n");
      code = 2;
    }
    Csv mono(g_dir / "monotonicity.csv", "x0,y0,r,gap");
    double min_gap = HUGE_VAL;
    for (int i = 0; i < nx0; ++i) {
      const double th = 2.0 * kPi * i / nx0;
      const double x0 = ring * std::cos(th), y0 = ring * std::sin(th);
      for (int j = 0; j < nr; ++j) {
        const double r = r0 * std::pow(r_factor, j);
        double gap;
        check(anicurv_varifold_monotonicity_gap(vf, x0, y0, r, &gap));
        mono.row({g17(x0), g17(y0), g17(r), g17(gap)});
        min_gap = std::min(min_gap, gap);
      }
    }
    summary.row({"min_monotonicity_gap", g17(min_gap)});
    std::printf("min monotonicity gap %.6e over %dx%d sweep\n", min_gap, nx0, nr);
    if (min_gap < -1e-6) {
      std::fprintf(stderr, "varifold-check: monotonicity violated\n");
      code = 2;
    }
  } else {
    if (gb_rc == ANICURV_OK) {
      std::fprintf(stderr, "varifold-check: deficit computed despite atoms\n");
      code = 2;
    } else {
      std::printf("gauss-bonnet refused: %s\n", anicurv_last_error());
      summary.row({"gauss_bonnet_deficit", "refused"});
    }
  }

  if (!density_at.empty()) {
    Csv dens(g_dir / "density.csv", "x,y,theta,k_class");
    for (const auto& s : density_at) {
      const auto colon = s.find(':');
      if (colon == std::string::npos) throw CliError{1, "--density-at wants x:y"};
      const double x = std::stod(s.substr(0, colon)), y = std::stod(s.substr(colon + 1));
      double theta;
      int k;
      check(anicurv_varifold_density(vf, x, y, rhos.data(), (int)rhos.size(), &theta, &k));
      dens.row({g17(x), g17(y), g17(theta), std::to_string(k)});
      std::printf("density at (%g, %g): theta %.6g class %d\n", x, y, theta, k);
    }
  }
  if (save_samples)
    check(anicurv_varifold_write_csv(vf, (g_dir / "samples.csv").string().c_str(),
                                     (g_dir / "atoms.csv").string().c_str()));
  return code;
}

// ---------------------------------------------------------------- flows

struct TraceRow {
  int step;
  double dt, energy;
};

void trace_cb(int step, double dt, double energy, void* ctx) {
  static_cast<std::vector<TraceRow>*>(ctx)->push_back({step, dt, energy});
}

int run_minimize(const ShapeOpts& shape, const PhiOpts& phi, bool uniform,
                 const anicurv_flow_params& fp, double lambda, int n, double box,
                 double noise, std::uint64_t seed, bool save_fields,
                 bool report_radius) {
  AnisoH a(make_phi(phi));
  GridH grid(require(anicurv_grid_new_2d(-0.5 * box, -0.5 * box, box, box, n, n,
                                         ANICURV_BOUNDARY_PERIODIC)));
  FieldH v;
  if (uniform) {
    v.p = require(anicurv_field_new(grid));
    double* d = anicurv_field_data(v);
    for (std::int64_t i = 0; i < anicurv_field_size(v); ++i) d[i] = 1.0;
  } else {
    NetH net(make_network(shape));
    v.p = require(anicurv_recover_set(net, grid, fp.eps, lambda));
  }
  if (noise > 0.0) check(anicurv_field_add_noise(v, noise, seed));

  std::vector<TraceRow> tr;
  int status = ANICURV_FLOW_DONE;
  double gnorm = 0.0;
  check(anicurv_flow_set_energy(v, a, &fp, trace_cb, &tr, &status, &gnorm));

  Csv csv(g_dir / "trace.csv", "step,dt,energy");
  for (const auto& r : tr) csv.row({std::to_string(r.step), g17(r.dt), g17(r.energy)});
  if (save_fields) {
    check(anicurv_field_write(v, (g_dir / "v_final.f64").string().c_str()));
    check(anicurv_field_write_csv(v, (g_dir / "v_final.csv").string().c_str()));
  }
  std::printf("steps %zu final energy %.10g grad norm %.3e status %s\n", tr.size(),
              tr.empty() ? 0.0 : tr.back().energy, gnorm,
              status == ANICURV_FLOW_DONE         ? "done"
              : status == ANICURV_FLOW_STATIONARY ? "stationary"
                                                  : "diverged");
  if (report_radius) {
    // zero crossing of v along the +x axis through the center row
    double* d = anicurv_field_data(v);
    const int j = n / 2;
    double r = 0.0;
    for (int i = n / 2; i + 1 < n; ++i) {
      const double f0 = d[(std::int64_t)j * n + i], f1 = d[(std::int64_t)j * n + i + 1];
      if (f0 < 0.0 && f1 >= 0.0) {
        const double hx = box / n;
        const double x0 = -0.5 * box + (i + 0.5) * hx;
        r = x0 + hx * (0.0 - f0) / (f1 - f0);
        break;
      }
    }
    std::printf("zero level radius %.6g\n", r);
  }
  if (status == ANICURV_FLOW_DIVERGED) return 3;
  for (size_t i = 1; i < tr.size(); ++i) {
    const double gate = 1e-8 * (1.0 + std::fabs(tr[i - 1].energy));
    if (tr[i].energy > tr[i - 1].energy + gate) {
      std::fprintf(stderr, "minimize: trace not monotone at step %d\n", tr[i].step);
      return 2;
    }
  }
  return 0;
}

struct MsTraceRow {
  int cycle;
  anicurv_breakdown b;
  double fidelity, total;
};

void ms_trace_cb(int cycle, const anicurv_breakdown* b, double fidelity, double total,
                 void* ctx) {
  static_cast<std::vector<MsTraceRow>*>(ctx)->push_back({cycle, *b, fidelity, total});
}

int run_ms_minimize(const PhiOpts& phi, const anicurv_ms_params& mp,
                    const anicurv_ms_flow_params& fp, const std::string& gfn,
                    double g_value, double g_scale, bool init_recover, int n, double box,
                    double noise, std::uint64_t seed, bool save_fields,
                    bool report_jump) {
  AnisoH a(make_phi(phi));
  GridH grid(require(anicurv_grid_new_2d(-0.5 * box, -0.5 * box, box, box, n, n,
                                         ANICURV_BOUNDARY_PERIODIC)));
  FieldH g(require(anicurv_field_new(grid)));
  {
    double* d = anicurv_field_data(g);
    for (std::int64_t i = 0; i < anicurv_field_size(g); ++i) {
      double x, y;
      check(anicurv_field_coord(g, i, &x, &y));
      d[i] = gfn == "const" ? g_value : g_scale * crack_u(x, y, nullptr);
    }
  }
  FieldH u, v, w;
  if (init_recover) {
    if (gfn != "crack") throw CliError{1, "--init recover needs --g crack"};
    NetH net(require(anicurv_network_segment(-0.5, 0, 0.5, 0)));
    StateH state(require(anicurv_ms_state_new(net, crack_u, crack_grad, nullptr, mp.gamma)));
    check(anicurv_recover_ms(state, grid, &mp, u.out(), v.out(), w.out()));
  } else {
    u.p = require(anicurv_field_new(grid));
    v.p = require(anicurv_field_new(grid));
    w.p = require(anicurv_field_new(grid));
    double* dv = anicurv_field_data(v);
    double* dw = anicurv_field_data(w);
    for (std::int64_t i = 0; i < anicurv_field_size(v); ++i) dv[i] = dw[i] = 1.0;
  }
  if (noise > 0.0) check(anicurv_field_add_noise(v, noise, seed));

  std::vector<MsTraceRow> tr;
  int status = ANICURV_FLOW_DONE;
  check(anicurv_alternate_ms(u, v, w, g, a, &mp, &fp, ms_trace_cb, &tr, &status));

  Csv csv(g_dir / "trace.csv",
          "cycle,bulk,anisotropic,curvature,point,penalty_v,penalty_w,ms_total,"
          "fidelity,total");
  for (const auto& r : tr)
    csv.row({std::to_string(r.cycle), g17(r.b.bulk), g17(r.b.anisotropic),
             g17(r.b.curvature), g17(r.b.point), g17(r.b.penalty_v), g17(r.b.penalty_w),
             g17(r.b.total), g17(r.fidelity), g17(r.total)});
  if (save_fields) {
    check(anicurv_field_write(u, (g_dir / "u_final.f64").string().c_str()));
    check(anicurv_field_write(v, (g_dir / "v_final.f64").string().c_str()));
    check(anicurv_field_write(w, (g_dir / "w_final.f64").string().c_str()));
  }
  std::printf("cycles %zu final total %.10g status %s\n", tr.size(),
              tr.empty() ? 0.0 : tr.back().total,
              status == ANICURV_FLOW_DONE         ? "done"
              : status == ANICURV_FLOW_STATIONARY ? "stationary"
                                                  : "diverged");
  if (report_jump) {
    double* dv = anicurv_field_data(v);
    double drop = 0.0;
    for (std::int64_t i = 0; i < anicurv_field_size(v); ++i) {
      double x, y;
      check(anicurv_field_coord(v, i, &x, &y));
      if (std::fabs(y) < 0.1 && std::fabs(x) < 0.45) drop = std::max(drop, 1.0 - dv[i]);
    }
    std::printf("max phase drop along the jump %.6g\n", drop);
  }
  if (status == ANICURV_FLOW_DIVERGED) return 3;
  for (size_t i = 1; i < tr.size(); ++i) {
    const double gate = 1e-8 * (1.0 + std::fabs(tr[i - 1].total));
    if (tr[i].total > tr[i - 1].total + gate) {
      std::fprintf(stderr, "ms-minimize: trace not monotone at cycle %d\n", tr[i].cycle);
      return 2;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anisotropic curvature energies: recovery, checks and descent"};
  app.require_subcommand(1);
  std::string out_root, run_name;
  int jobs = 1;
  app.add_option("--out", out_root, "output root (default $ANICURV_OUT or ./runs)");
  app.add_option("--name", run_name, "run directory name (default: subcommand)");
  app.add_option("--jobs", jobs, "worker threads for parameter sweeps")
      ->check(CLI::PositiveNumber);
  app.set_config("--config", "", "INI config with one [section] per subcommand");

  // profile-check
  auto* pc = app.add_subcommand("profile-check", "profile masses and residual");
  std::vector<double> pc_eps{1e-2, 1e-3, 1e-4};
  double pc_lambda = 2.0;
  pc->add_option("--eps", pc_eps, "eps sweep")->delimiter(',');
  pc->add_option("--lambda", pc_lambda, "truncation factor, > 1");

  // convexify
  auto* cv = app.add_subcommand("convexify", "convex envelope of a surface tension");
  PhiOpts cv_phi;
  int cv_dirs = 2048;
  add_phi_opts(cv, cv_phi);
  cv->get_option("--phi")->default_str("fourfold");
  cv_phi.kind = "fourfold";
  cv_phi.beta = 0.9;
  cv->get_option("--phi-beta")->default_str("0.9");
  cv->add_option("--n-dirs", cv_dirs, "direction grid size");

  // recovery-energy
  auto* re = app.add_subcommand("recovery-energy", "recovered set vs sharp energy");
  ShapeOpts re_shape;
  PhiOpts re_phi;
  std::vector<double> re_eps{0.02, 0.01};
  int re_n = 1024;
  double re_box = 4.0, re_lambda = 2.0, re_tol = 0.05;
  bool re_save = false;
  add_shape_opts(re, re_shape, "circle");
  add_phi_opts(re, re_phi);
  re->add_option("--eps", re_eps, "eps sweep")->delimiter(',');
  re->add_option("--n", re_n, "grid size per axis");
  re->add_option("--box", re_box, "box side, centered at the origin");
  re->add_option("--lambda", re_lambda, "truncation factor");
  re->add_option("--tol", re_tol, "relative error bound at the smallest eps");
  re->add_flag("--save-fields", re_save, "write recovered fields");

  // point-energy
  auto* pe = app.add_subcommand("point-energy", "radial point construction");
  double pe_eps = 1e-4, pe_beta = 1e-2, pe_lambda = 2.0, pe_tol = 0.03;
  pe->add_option("--eps", pe_eps, "interface scale");
  pe->add_option("--beta", pe_beta, "point scale, > profile band");
  pe->add_option("--lambda", pe_lambda, "truncation factor");
  pe->add_option("--tol", pe_tol, "relative error bound");

  // ms-recovery
  auto* mr = app.add_subcommand("ms-recovery", "free-discontinuity recovery");
  PhiOpts mr_phi;
  anicurv_ms_params mr_p{5e-3, 0.12, 10.0, 0.1, 1.05, -1.0};
  int mr_n = 1024;
  double mr_box = 2.0, mr_tol = 0.10;
  bool mr_save = false;
  add_phi_opts(mr, mr_phi);
  mr->add_option("--eps", mr_p.eps, "interface scale");
  mr->add_option("--beta", mr_p.beta, "junction scale");
  mr->add_option("--eta", mr_p.eta, "penalty weight");
  mr->add_option("--gamma", mr_p.gamma, "junction weight");
  mr->add_option("--lambda", mr_p.lambda, "truncation factor");
  mr->add_option("--r-eps", mr_p.r_eps, "tension regularization scale, < 0 uses eps");
  mr->add_option("--n", mr_n, "grid size per axis");
  mr->add_option("--box", mr_box, "box side");
  mr->add_option("--tol", mr_tol, "relative bound on the total");
  mr->add_flag("--save-fields", mr_save, "write u, v, w");

  // varifold-check
  auto* vc = app.add_subcommand("varifold-check", "varifold identities and sweeps");
  ShapeOpts vc_shape;
  double vc_h = 1e-3, vc_ring = 0.4, vc_r0 = 0.15, vc_rf = 1.35;
  int vc_nx0 = 10, vc_nr = 10;
  std::vector<std::string> vc_density;
  std::vector<double> vc_rhos{0.04, 0.02, 0.01};
  bool vc_save = false;
  add_shape_opts(vc, vc_shape, "circle");
  vc->add_option("--spacing", vc_h, "sample spacing");
  vc->add_option("--ring", vc_ring, "radius of the sweep center ring");
  vc->add_option("--r0", vc_r0, "smallest sweep radius");
  vc->add_option("--r-factor", vc_rf, "sweep radius growth factor");
  vc->add_option("--nx0", vc_nx0, "sweep centers");
  vc->add_option("--nr", vc_nr, "sweep radii");
  vc->add_option("--density-at", vc_density, "x:y points for density estimates");
  vc->add_option("--rhos", vc_rhos, "density extrapolation radii")->delimiter(',');
  vc->add_flag("--save-samples", vc_save, "write sample and atom tables");

  // minimize
  auto* mn = app.add_subcommand("minimize", "semi-implicit set energy descent");
  ShapeOpts mn_shape;
  PhiOpts mn_phi;
  bool mn_uniform = false;
  anicurv_flow_params mn_fp;
  anicurv_flow_params_default(&mn_fp);
  double mn_lambda = 2.0, mn_box = 4.0, mn_noise = 0.0;
  int mn_n = 256;
  std::uint64_t mn_seed = 1234;
  bool mn_save = false, mn_radius = false;
  add_shape_opts(mn, mn_shape, "circle");
  mn->get_option("--radius")->default_str("1.4");
  mn_shape.radius = 1.4;
  add_phi_opts(mn, mn_phi);
  mn->add_flag("--uniform", mn_uniform, "start from the constant phase 1");
  mn->add_option("--eps", mn_fp.eps, "interface scale");
  mn->add_option("--r-eps", mn_fp.r_eps, "tension regularization scale");
  mn->add_option("--dt", mn_fp.dt, "time step");
  mn->add_option("--steps", mn_fp.steps, "step count");
  mn->add_option("--record", mn_fp.record_every, "trace recording stride");
  mn->add_option("--grad-tol", mn_fp.grad_tol, "stationarity tolerance, 0 disables");
  mn->add_option("--lambda", mn_lambda, "truncation factor for the start");
  mn->add_option("--n", mn_n, "grid size per axis");
  mn->add_option("--box", mn_box, "box side");
  mn->add_option("--noise", mn_noise, "uniform noise amplitude on the start");
  mn->add_option("--seed", mn_seed, "noise seed");
  mn->add_flag("--save-fields", mn_save, "write the final phase");
  mn->add_flag("--report-radius", mn_radius, "print the zero level radius");

  // ms-minimize
  auto* mm = app.add_subcommand("ms-minimize", "alternating descent");
  PhiOpts mm_phi;
  anicurv_ms_params mm_p{0.015, 0.1, 10.0, 0.01, 1.05, -1.0};
  anicurv_ms_flow_params mm_fp;
  anicurv_ms_flow_params_default(&mm_fp);
  std::string mm_g = "const", mm_init = "flat";
  double mm_gv = 0.7, mm_gs = 1.0, mm_box = 2.0, mm_noise = 0.0;
  int mm_n = 256;
  std::uint64_t mm_seed = 1234;
  bool mm_save = false, mm_jump = false;
  add_phi_opts(mm, mm_phi);
  mm->add_option("--g", mm_g, "data: const or crack")
      ->check(CLI::IsMember({"const", "crack"}));
  mm->add_option("--g-value", mm_gv, "constant data value");
  mm->add_option("--g-scale", mm_gs, "crack data amplitude");
  mm->add_option("--init", mm_init, "start: flat or recover")
      ->check(CLI::IsMember({"flat", "recover"}));
  mm->add_option("--eps", mm_p.eps, "interface scale");
  mm->add_option("--beta", mm_p.beta, "junction scale");
  mm->add_option("--eta", mm_p.eta, "penalty weight");
  mm->add_option("--gamma", mm_p.gamma, "junction weight");
  mm->add_option("--lambda", mm_p.lambda, "truncation factor");
  mm->add_option("--r-eps", mm_p.r_eps, "tension regularization scale");
  mm->add_option("--mu-f", mm_fp.mu_f, "fidelity weight");
  mm->add_option("--kappa-reg", mm_fp.kappa_reg, "u-step conductivity floor");
  mm->add_option("--dt", mm_fp.dt, "phase step");
  mm->add_option("--cycles", mm_fp.cycles, "alternation cycles");
  mm->add_option("--vw-steps", mm_fp.vw_steps_per_u, "phase steps per cycle");
  mm->add_option("--cg-tol", mm_fp.cg_tol, "u-step relative residual");
  mm->add_option("--cg-iters", mm_fp.cg_max_iter, "u-step iteration cap");
  mm->add_option("--n", mm_n, "grid size per axis");
  mm->add_option("--box", mm_box, "box side");
  mm->add_option("--noise", mm_noise, "noise amplitude on the start phase");
  mm->add_option("--seed", mm_seed, "noise seed");
  mm->add_flag("--save-fields", mm_save, "write final u, v, w");
  mm->add_flag("--report-jump", mm_jump, "print the phase drop along the jump");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  const auto t0 = std::chrono::steady_clock::now();
  CLI::App* sub = app.get_subcommands().front();
  if (run_name.empty()) run_name = sub->get_name();
  if (out_root.empty()) {
    const char* env = std::getenv("ANICURV_OUT");
    out_root = env && *env ? env : "runs";
  }
  int code = 0;
  try {
    g_dir = std::filesystem::path(out_root) / run_name;
    std::filesystem::create_directories(g_dir);

    if (sub == pc) code = run_profile_check(pc_eps, pc_lambda);
    else if (sub == cv) code = run_convexify(cv_phi, cv_dirs);
    else if (sub == re)
      code = run_recovery_energy(re_shape, re_phi, re_eps, re_n, re_box, re_lambda,
                                 re_tol, re_save, jobs);
    else if (sub == pe) code = run_point_energy(pe_eps, pe_beta, pe_lambda, pe_tol);
    else if (sub == mr) code = run_ms_recovery(mr_phi, mr_p, mr_n, mr_box, mr_tol, mr_save);
    else if (sub == vc)
      code = run_varifold_check(vc_shape, vc_h, vc_ring, vc_r0, vc_rf, vc_nx0, vc_nr,
                                vc_density, vc_rhos, vc_save);
    else if (sub == mn)
      code = run_minimize(mn_shape, mn_phi, mn_uniform, mn_fp, mn_lambda, mn_n, mn_box,
                          mn_noise, mn_seed, mn_save, mn_radius);
    else
      code = run_ms_minimize(mm_phi, mm_p, mm_fp, mm_g, mm_gv, mm_gs,
                             mm_init == "recover", mm_n, mm_box, mm_noise, mm_seed,
                             mm_save, mm_jump);
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.msg.c_str());
    code = e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    code = 2;
  }

  try {
    std::ofstream cfg(g_dir / "config.ini");
    cfg << app.config_to_str(true, false);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ofstream man(g_dir / "manifest.txt");
    man << "version " << kVersion << "\n";
    man << "command " << sub->get_name() << "\n";
    man << "exit " << code << "\n";
    man << "elapsed_seconds " << g17(elapsed) << "\n";
  } catch (...) {
    if (code == 0) code = 2;
  }
  return code;
}
