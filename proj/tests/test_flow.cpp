#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <vector>

#include "anicurv/curves.hpp"
#include "anicurv/field.hpp"
#include "anicurv/minimize.hpp"
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

// linear interpolation of the v = 0 crossing along the center row, x > 0
double zero_radius(const ScalarField& v) {
  const int n = v.grid.n[0];
  const int j = n / 2;
  for (int i = n / 2; i + 1 < n; ++i) {
    const double f0 = v.at(i, j), f1 = v.at(i + 1, j);
    if (f0 < 0.0 && f1 >= 0.0) {
      const double x0 = v.grid.coord(0, i);
      return x0 + v.grid.h(0) * (0.0 - f0) / (f1 - f0);
    }
  }
  return 0.0;
}

}  // namespace

TEST_CASE("uniform phase is a fixed point with zero energy") {
  Grid g = box(1.0, 64);
  ScalarField v = constant_field(g, 1.0);
  FlowParams p{0.05, -1.0, 1e-4, 40, 1};
  FlowResult r = flow_set_energy(v, Anisotropy::isotropic(), p);
  REQUIRE(!r.trace.empty());
  for (const auto& rec : r.trace) CHECK(rec.energy == 0.0);
  for (auto x : v.data) CHECK(x == 1.0);
  CHECK(r.status == FlowStatus::done);
}

TEST_CASE("descent on the circle recovery is monotone") {
  Grid g = box(2.0, 128);
  ScalarField v = recover_set(make_circle(1.0), g, 0.06, 2.0);
  FlowParams p{0.06, -1.0, 1e-4, 300, 1};
  FlowResult r = flow_set_energy(v, Anisotropy::isotropic(), p);
  CHECK(r.status == FlowStatus::done);
  REQUIRE(r.trace.size() >= 100);
  for (size_t i = 1; i < r.trace.size(); ++i)
    CHECK(r.trace[i].energy <= r.trace[i - 1].energy + 1e-8);
}

TEST_CASE("large circle shrinks toward the unit-radius minimizer") {
  // the perimeter+bending oracle 2 pi (R + 1/R) decreases toward R = 1
  Grid g = box(2.0, 128);
  ScalarField v = recover_set(make_circle(1.4), g, 0.1, 2.0);
  const double r0 = zero_radius(v);
  CHECK(r0 == doctest::Approx(1.4).epsilon(2e-3));
  FlowParams p{0.1, -1.0, 1e-3, 1500, 50};
  FlowResult r = flow_set_energy(v, Anisotropy::isotropic(), p);
  CHECK(r.status == FlowStatus::done);
  const double r1 = zero_radius(v);
  CHECK(r1 < r0 - 2e-4);  // measurable drift toward 1
  CHECK(r1 > 1.0);
  for (size_t i = 1; i < r.trace.size(); ++i)
    CHECK(r.trace[i].energy <= r.trace[i - 1].energy + 1e-8);
}

TEST_CASE("refused steps are counted and abort the flow") {
  Grid g = box(1.0, 32);
  ScalarField v(g);
  for (int j = 0; j < 32; ++j)
    for (int i = 0; i < 32; ++i)
      v.at(i, j) = std::sin(2.0 * kPi * g.coord(0, i)) * std::cos(2.0 * kPi * g.coord(1, j));
  FlowParams p{0.05, -1.0, 1e6, 100, 1};
  p.max_halvings = 0;  // no rescue, every oversized step goes through
  FlowResult r = flow_set_energy(v, Anisotropy::isotropic(), p);
  CHECK(r.status == FlowStatus::diverged);
  CHECK(r.steps_taken <= 10);
}

TEST_CASE("stationarity stop triggers on the flat phase") {
  Grid g = box(1.0, 32);
  ScalarField v = constant_field(g, 1.0);
  FlowParams p{0.05, -1.0, 1e-4, 100, 1, 1e-6};
  FlowResult r = flow_set_energy(v, Anisotropy::isotropic(), p);
  CHECK(r.status == FlowStatus::stationary);
  CHECK(r.steps_taken <= 1);
}

TEST_CASE("u-step reproduces the screened single-mode solution") {
  Grid g = box(1.0, 128);
  const double mu = 25.0, kreg = 1e-6;
  ScalarField v = constant_field(g, 1.0);
  ScalarField gdat(g), u(g);
  const double kx = 2.0 * kPi * 3 / 2.0, ky = 2.0 * kPi * 1 / 2.0;
  for (int j = 0; j < 128; ++j)
    for (int i = 0; i < 128; ++i)
      gdat.at(i, j) = std::sin(kx * g.coord(0, i)) * std::sin(ky * g.coord(1, j));
  const int it = solve_u_step(u, v, gdat, mu, kreg, 1e-10, 20000);
  CHECK(it > 0);
  // -(1+kreg) lap u + mu (u - g) = 0 with a single mode:
  const double factor = mu / ((1.0 + kreg) * (kx * kx + ky * ky) + mu);
  double worst = 0.0;
  for (size_t i = 0; i < u.data.size(); ++i)
    worst = std::max(worst, std::fabs(u.data[i] - factor * gdat.data[i]));
  CHECK(worst < 1e-6);
}

TEST_CASE("u-step preserves mirror symmetry") {
  Grid g = box(1.0, 64);
  ScalarField v = constant_field(g, 1.0);
  ScalarField gdat(g), u(g);
  for (int j = 0; j < 64; ++j)
    for (int i = 0; i < 64; ++i) {
      const double x = g.coord(0, i), y = g.coord(1, j);
      gdat.at(i, j) = std::exp(std::cos(kPi * x)) * std::cos(kPi * y) +
                      0.3 * std::cos(2.0 * kPi * x);
    }
  solve_u_step(u, v, gdat, 10.0, 1e-6, 1e-10, 20000);
  // x -> -x maps cell i to n-1-i
  double worst = 0.0;
  for (int j = 0; j < 64; ++j)
    for (int i = 0; i < 64; ++i)
      worst = std::max(worst, std::fabs(u.at(i, j) - u.at(63 - i, j)));
  CHECK(worst < 1e-9);
}

TEST_CASE("u-step rejects non-positive fidelity") {
  Grid g = box(1.0, 16);
  ScalarField v = constant_field(g, 1.0), u(g), gd(g);
  CHECK_THROWS_AS(solve_u_step(u, v, gd, 0.0, 1e-6, 1e-8, 100), std::invalid_argument);
}

TEST_CASE("alternating descent drains constant data") {
  Grid g = box(1.0, 64);
  ScalarField u(g);
  ScalarField v = constant_field(g, 1.0);
  ScalarField w = constant_field(g, 1.0);
  ScalarField gdat = constant_field(g, 0.37);
  MsFlowParams p{MsParams(0.05, 0.2, 10.0, 0.1, 1.5), 10.0, 1e-6, 1e-4, 6, 10};
  MsFlowResult r = alternate_ms(u, v, w, gdat, Anisotropy::isotropic(), p);
  CHECK(r.status == FlowStatus::done);
  CHECK(r.trace.back().total < 1e-20);
  for (auto x : u.data) CHECK(x == doctest::Approx(0.37).epsilon(1e-9));
  for (auto x : v.data) CHECK(x == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("crack tube survives alternating descent") {
  // data jumping across the segment, start from the recovery triple
  const MsParams mp(0.03, 0.3, 10.0, 0.01, 1.05);
  Grid g = box(1.0, 128);
  SharpMsState st{make_segment({-0.5, 0.0}, {0.5, 0.0}),
                  [](Vec2 x) { return x.y > 0.0 ? 1.0 : -1.0; },
                  [](Vec2) { return Vec2{0.0, 0.0}; }, mp.gamma};
  MsRecovery rec = recover_ms(st, g, mp);
  ScalarField gdat = rec.u;

  MsFlowParams p{mp, 10.0, 1e-6, 1e-5, 6, 10};
  MsFlowResult r = alternate_ms(rec.u, rec.v, rec.w, gdat, Anisotropy::isotropic(), p);
  CHECK(r.status == FlowStatus::done);
  for (size_t i = 1; i < r.trace.size(); ++i)
    CHECK(r.trace[i].total <= r.trace[i - 1].total + 1e-8 * (1.0 + r.trace[i - 1].total));
  double drop = 0.0;
  for (int j = 0; j < 128; ++j)
    for (int i = 0; i < 128; ++i)
      if (std::fabs(g.coord(1, j)) < 0.1 && std::fabs(g.coord(0, i)) < 0.45)
        drop = std::max(drop, 1.0 - rec.v.at(i, j));
  CHECK(drop > 0.9);
}

TEST_CASE("noise injection is reproducible and bounded") {
  Grid g = box(1.0, 32);
  ScalarField a = constant_field(g, 0.0);
  ScalarField b = constant_field(g, 0.0);
  add_noise(a, 0.25, 99);
  add_noise(b, 0.25, 99);
  for (size_t i = 0; i < a.data.size(); ++i) CHECK(a.data[i] == b.data[i]);
  double hi = 0.0, lo = 0.0;
  for (auto x : a.data) {
    hi = std::max(hi, x);
    lo = std::min(lo, x);
  }
  CHECK(hi <= 0.25);
  CHECK(lo >= -0.25);
  CHECK(hi > 0.1);
  CHECK(lo < -0.1);
  ScalarField c = constant_field(g, 0.0);
  add_noise(c, 0.25, 100);
  bool same = true;
  for (size_t i = 0; i < a.data.size(); ++i) same = same && a.data[i] == c.data[i];
  CHECK(!same);
}
