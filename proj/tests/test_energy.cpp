#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <vector>

#include "anicurv/curves.hpp"
#include "anicurv/field.hpp"
#include "anicurv/phase_energy.hpp"
#include "anicurv/profiles.hpp"
#include "anicurv/recovery.hpp"
#include "doctest.h"

using namespace anicurv;

namespace {

constexpr double kPi = std::numbers::pi;

Grid box(double half, int n) {
  return Grid(2, {-half, -half, 0.0}, {2.0 * half, 2.0 * half, 0.0}, {n, n, 1},
              Boundary::periodic);
}

ScalarField constant_field(const Grid& g, double c) {
  ScalarField f(g);
  for (auto& x : f.data) x = c;
  return f;
}

// exact distance to the horizontal segment (-1/2,0)-(1/2,0)
double segment_dist(double x, double y) {
  const double dx = std::max(std::fabs(x) - 0.5, 0.0);
  return std::hypot(dx, y);
}

}  // namespace

TEST_CASE("constant phases have closed-form functionals") {
  Grid g = box(1.0, 64);
  const double eps = 0.05, c = 0.3, area = 4.0;
  ScalarField v = constant_field(g, c);

  double mm_total = 0.0;
  mm_measure(v, eps, &mm_total);
  CHECK(mm_total ==
        doctest::Approx(area * double_well(c) / (eps * c0_constant())).epsilon(1e-12));

  double alpha = 0.0;
  ScalarField f = willmore_residual(v, eps, &alpha);
  const double fr = double_well_d1(c) / eps;
  for (auto x : f.data) CHECK(x == doctest::Approx(fr).epsilon(1e-11));
  CHECK(alpha == doctest::Approx(area * fr * fr / (c0_constant() * eps)).epsilon(1e-10));

  double l1 = 0.0;
  discrepancy(v, eps, &l1);
  CHECK(l1 == doctest::Approx(area * double_well(c) / eps).epsilon(1e-11));

  // both wells are exactly stationary and free
  double zero_total = -1.0;
  mm_measure(constant_field(g, 1.0), eps, &zero_total);
  CHECK(zero_total == 0.0);
}

TEST_CASE("circle recovery set energy approaches the boundary oracle") {
  const double eps = 0.02;
  Grid g = box(2.0, 1024);
  ScalarField v = recover_set(make_circle(1.0), g, eps, 2.0);
  EnergyBreakdown b = set_energy(v, Anisotropy::isotropic(), eps, eps);
  const double sharp = 4.0 * kPi;  // 2 pi R + 2 pi / R at R = 1
  CHECK(std::fabs(b.total - sharp) / sharp < 5e-3);
  CHECK(std::fabs(b.anisotropic - 2.0 * kPi) / (2.0 * kPi) < 5e-3);
  CHECK(std::fabs(b.curvature - 2.0 * kPi) / (2.0 * kPi) < 2e-2);
  CHECK(!b.under_resolved);
  // equipartition diagnostic stays small relative to the mass
  double l1 = 0.0;
  discrepancy(v, eps, &l1);
  CHECK(l1 < 0.05 * 2.0 * kPi * c0_constant());
}

TEST_CASE("under-resolution advisory flag") {
  Grid coarse = box(2.0, 128);  // h = 1/32
  ScalarField v = recover_set(make_circle(1.0), coarse, 0.05, 2.0);
  EnergyBreakdown b = set_energy(v, Anisotropy::isotropic(), 0.05, 0.05);
  CHECK(b.under_resolved);  // h > eps/4

  Grid fine = box(2.0, 1024);
  ScalarField w = recover_set(make_circle(1.0), fine, 0.05, 2.0);
  EnergyBreakdown c = set_energy(w, Anisotropy::isotropic(), 0.05, 0.05);
  CHECK(!c.under_resolved);
}

TEST_CASE("recovery entry points agree and guard the tube") {
  Grid g = box(2.0, 256);
  CurveNetwork circ = make_circle(1.0);
  const double spacing = 0.5 * std::min(g.h(0), g.h(1));
  ScalarField dist = distance_to_segments(g, circ.polylines(spacing));
  for (const auto& loop : circ.loops(spacing)) apply_sign_by_parity(dist, loop);
  ScalarField a = recover_set(circ, g, 0.03, 2.0);
  ScalarField b = recover_set_from_distance(dist, 0.03, 2.0);
  for (size_t i = 0; i < a.data.size(); ++i) CHECK(a.data[i] == b.data[i]);
  // +-1 outside the band, sign change across the boundary
  CHECK(a.at(128, 128) == -1.0);
  CHECK(a.at(2, 2) == 1.0);

  // band wider than the curvature radius is refused
  CHECK_THROWS_AS(recover_set(make_circle(0.05), g, 0.02, 2.0), std::invalid_argument);
  // band leaving the box is refused
  Grid tight(2, {-1.05, -1.05, 0.0}, {2.1, 2.1, 0.0}, {64, 64, 1}, Boundary::periodic);
  CHECK_THROWS_AS(recover_set(make_circle(1.0), tight, 0.02, 2.0), std::invalid_argument);
}

TEST_CASE("ms params validation and diagnostics") {
  CHECK_THROWS_AS(MsParams(-1.0, 0.1, 10.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(MsParams(0.01, -0.1, 10.0, 0.1), std::invalid_argument);
  const MsParams p(0.01, 0.2, 5.0, 0.1, 1.5);
  CHECK(p.eps_log_over_beta() ==
        doctest::Approx(0.01 * std::log(100.0) / 0.2).epsilon(1e-12));
  CHECK(p.beta_over_eta() == doctest::Approx(0.04).epsilon(1e-12));
}

TEST_CASE("ms energy of trivial states") {
  Grid g = box(1.0, 64);
  const MsParams p(0.05, 0.2, 10.0, 0.1, 1.5);
  ScalarField u = constant_field(g, 0.0);
  ScalarField v = constant_field(g, 1.0);
  ScalarField w = constant_field(g, 1.0);
  EnergyBreakdown b = ms_energy(u, v, w, Anisotropy::isotropic(), p);
  CHECK(b.total == 0.0);

  // penalty terms are exact quadratics
  ScalarField v2 = constant_field(g, 0.75);
  EnergyBreakdown c = ms_energy(u, v2, w, Anisotropy::isotropic(), p);
  CHECK(c.penalty_v == doctest::Approx(4.0 * 0.0625 / p.eta).epsilon(1e-10));
  CHECK(c.penalty_w == 0.0);

  // the point block scales linearly in gamma
  ScalarField w2(g);
  for (int j = 0; j < 64; ++j)
    for (int i = 0; i < 64; ++i)
      w2.at(i, j) = std::tanh((std::hypot(g.coord(0, i), g.coord(1, j)) - 0.3) / p.eps);
  EnergyBreakdown e1 = ms_energy(u, v, w2, Anisotropy::isotropic(), p);
  MsParams p2(0.05, 0.2, 10.0, 0.2, 1.5);
  EnergyBreakdown e2 = ms_energy(u, v, w2, Anisotropy::isotropic(), p2);
  CHECK(e2.point == doctest::Approx(2.0 * e1.point).epsilon(1e-12));
}

TEST_CASE("grid point energy matches the radial quadrature") {
  const double eps = 0.008, beta = 0.1, lambda = 1.05;
  double mm_ref = 0.0, will_ref = 0.0;
  radial_point_energy(eps, beta, lambda, &mm_ref, &will_ref);

  Grid g = box(0.5, 512);
  const ProfileParams pp(eps, lambda);
  ScalarField w(g);
  for (int j = 0; j < 512; ++j)
    for (int i = 0; i < 512; ++i)
      w.at(i, j) = truncated_profile(std::hypot(g.coord(0, i), g.coord(1, j)) - beta, pp);
  EnergyBreakdown b = point_phase_energy(w, eps, beta);
  CHECK(std::fabs(b.anisotropic - mm_ref) / mm_ref < 5e-3);
  CHECK(std::fabs(b.curvature - will_ref) / will_ref < 5e-3);
}

TEST_CASE("radial point energy concentrates two half masses") {
  double mm = 0.0, will = 0.0;
  const double total = radial_point_energy(1e-4, 0.01, 2.0, &mm, &will);
  CHECK(std::fabs(total - 4.0 * kPi) / (4.0 * kPi) < 1e-3);
  CHECK(std::fabs(mm - 2.0 * kPi) / (2.0 * kPi) < 1e-2);
  CHECK(std::fabs(will - 2.0 * kPi) / (2.0 * kPi) < 1e-2);
  CHECK_THROWS_AS(radial_point_energy(0.01, 0.01, 2.0), std::invalid_argument);
}

TEST_CASE("piecewise-smooth recovery follows the written construction") {
  // straight crack: every piece of the triple has a closed form
  const MsParams p(0.03, 0.3, 10.0, 0.1, 1.05);
  const ProfileParams pp(p.eps, p.lambda);
  const double delta = pp.delta();
  Grid g = box(1.0, 128);

  SharpMsState st{make_segment({-0.5, 0.0}, {0.5, 0.0}),
                  [](Vec2 x) { return x.y > 0.0 ? 1.0 : -1.0; },
                  [](Vec2) { return Vec2{0.0, 0.0}; }, 0.1};
  MsRecovery rec = recover_ms(st, g, p);

  double worst_v = 0.0, worst_u = 0.0, worst_w = 0.0;
  for (int j = 0; j < 128; ++j)
    for (int i = 0; i < 128; ++i) {
      const double x = g.coord(0, i), y = g.coord(1, j);
      const double de = segment_dist(x, y) - 2.0 * delta;
      // junction mollification touches a few cells near the tips; skip those
      const bool near_tip = std::min(std::hypot(x - 0.5, y), std::hypot(x + 0.5, y)) <
                            4.5 * g.h_max();
      if (!near_tip)
        worst_v = std::max(worst_v,
                           std::fabs(rec.v.at(i, j) - truncated_profile(de, pp)));
      double ramp;
      if (de <= -1.5 * delta)
        ramp = 0.0;
      else if (de < -delta)
        ramp = (2.0 * de + 3.0 * delta) / delta;
      else
        ramp = 1.0;
      worst_u = std::max(worst_u, std::fabs(rec.u.at(i, j) - ramp * (y > 0 ? 1.0 : -1.0)));
      const double wref =
          std::min(truncated_profile(std::hypot(x - 0.5, y) - p.beta, pp),
                   truncated_profile(std::hypot(x + 0.5, y) - p.beta, pp));
      worst_w = std::max(worst_w, std::fabs(rec.w.at(i, j) - wref));
    }
  CHECK(worst_v < 1e-12);
  CHECK(worst_u < 1e-12);
  CHECK(worst_w < 1e-12);

  // u vanishes inside the tube and matches the trace outside it
  CHECK(rec.u.at(64, 64) == 0.0);
  CHECK(rec.v.at(64, 64) == -1.0);

  // junction-ball overlap guard
  MsParams wide(0.03, 0.55, 10.0, 0.1, 1.05);
  CHECK_THROWS_AS(recover_ms(st, g, wide), std::invalid_argument);
  // beta below the band width is refused
  CHECK_THROWS_AS(recover_ms(st, g, MsParams(0.03, 0.05, 10.0, 0.1, 1.05)),
                  std::invalid_argument);
}

TEST_CASE("tube mass doubles the crack length") {
  // the phase wall encloses the crack, so its mass counts both sides
  const double eps = 4e-3, lambda = 1.01;
  const ProfileParams pp(eps, lambda);
  const double delta = pp.delta();
  Grid g = box(1.0, 1024);
  ScalarField v(g);
  for (int j = 0; j < 1024; ++j)
    for (int i = 0; i < 1024; ++i)
      v.at(i, j) = truncated_profile(segment_dist(g.coord(0, i), g.coord(1, j)) - 2.0 * delta,
                                     pp);
  double total = 0.0;
  mm_measure(v, eps, &total);
  // stadium boundary length: 2 L + 2 pi (2 delta)
  const double expected = 2.0 + 4.0 * kPi * delta;
  CHECK(std::fabs(total - expected) / expected < 5e-3);
}
