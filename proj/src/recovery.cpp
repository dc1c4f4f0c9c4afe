#include "anicurv/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "anicurv/profiles.hpp"
#include "anicurv/quadrature.hpp"

namespace anicurv {

namespace {

void check_tube(const CurveNetwork& net, const Grid& g, double delta) {
  const double maxk = net.max_curvature_norm();
  if (maxk > 0.0 && delta >= 1.0 / maxk)
    throw std::invalid_argument("recovery: transition band exceeds the curvature radius");
  Vec2 lo, hi;
  net.bounding_box(lo, hi);
  if (lo.x - delta < g.origin[0] || lo.y - delta < g.origin[1] ||
      hi.x + delta > g.origin[0] + g.extent[0] || hi.y + delta > g.origin[1] + g.extent[1])
    throw std::invalid_argument("recovery: transition band leaves the grid box");
}

// One pass of the normalized 3x3 binomial stencil on cells within 4h of a
// junction point. Restores H^2 regularity where the distance function has a
// ridge through the junction.
void mollify_near(ScalarField& v, const std::vector<Vec2>& points) {
  const Grid& g = v.grid;
  const double reach = 4.0 * g.h_max();
  auto fold = [&](int i, int m) {
    if (g.boundary == Boundary::periodic) return ((i % m) + m) % m;
    return std::clamp(i, 0, m - 1);
  };
  std::vector<std::pair<std::int64_t, double>> patch;
  for (const Vec2& p : points) {
    const int i0 = static_cast<int>(std::floor((p.x - reach - g.origin[0]) / g.h(0)));
    const int i1 = static_cast<int>(std::ceil((p.x + reach - g.origin[0]) / g.h(0)));
    const int j0 = static_cast<int>(std::floor((p.y - reach - g.origin[1]) / g.h(1)));
    const int j1 = static_cast<int>(std::ceil((p.y + reach - g.origin[1]) / g.h(1)));
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) {
        const int iw = fold(i, g.n[0]), jw = fold(j, g.n[1]);
        const Vec2 x{g.coord(0, iw), g.coord(1, jw)};
        if ((x - p).norm() > reach) continue;
        double s = 0.0;
        static const double wgt[3] = {0.25, 0.5, 0.25};
        for (int dj = -1; dj <= 1; ++dj)
          for (int di = -1; di <= 1; ++di)
            s += wgt[di + 1] * wgt[dj + 1] *
                 v.at(fold(iw + di, g.n[0]), fold(jw + dj, g.n[1]));
        patch.emplace_back(v.index(iw, jw), s);
      }
  }
  for (const auto& [idx, s] : patch) v.data[idx] = s;
}

}  // namespace

ScalarField recover_set_from_distance(const ScalarField& signed_dist, double eps,
                                      double lambda) {
  const ProfileParams pp(eps, lambda);
  ScalarField v(signed_dist.grid);
  const std::int64_t n = v.grid.size();
  for (std::int64_t i = 0; i < n; ++i)
    v.data[i] = truncated_profile(signed_dist.data[i], pp);
  return v;
}

ScalarField recover_set(const CurveNetwork& boundary, const Grid& g, double eps,
                        double lambda) {
  if (g.dim != 2) throw std::invalid_argument("recover_set: 2D grids only");
  if (!boundary.all_loops())
    throw std::invalid_argument("recover_set: boundary must consist of closed curves");
  const ProfileParams pp(eps, lambda);
  check_tube(boundary, g, pp.delta());
  const double spacing = 0.5 * std::min(g.h(0), g.h(1));
  ScalarField dist = distance_to_segments(g, boundary.polylines(spacing));
  for (const auto& loop : boundary.loops(spacing)) apply_sign_by_parity(dist, loop);
  return recover_set_from_distance(dist, eps, lambda);
}

MsRecovery recover_ms(const SharpMsState& state, const Grid& g, const MsParams& p) {
  if (g.dim != 2) throw std::invalid_argument("recover_ms: 2D grids only");
  const ProfileParams pp(p.eps, p.lambda);
  const double delta = pp.delta();
  check_tube(state.jump, g, 3.0 * delta);
  if (!(p.beta > delta))
    throw std::invalid_argument("recover_ms: beta must exceed the transition band width");

  const auto& junctions = state.jump.junctions();
  const double r_plus = p.beta + delta;
  for (size_t a = 0; a < junctions.size(); ++a) {
    const Vec2 pa = junctions[a].p;
    if (pa.x - r_plus < g.origin[0] || pa.y - r_plus < g.origin[1] ||
        pa.x + r_plus > g.origin[0] + g.extent[0] ||
        pa.y + r_plus > g.origin[1] + g.extent[1])
      throw std::invalid_argument("recover_ms: junction ball leaves the grid box");
    for (size_t b = a + 1; b < junctions.size(); ++b)
      if ((pa - junctions[b].p).norm() < 2.0 * r_plus)
        throw std::invalid_argument("recover_ms: junction balls overlap");
  }

  const double spacing = 0.5 * std::min(g.h(0), g.h(1));
  ScalarField dist = distance_to_segments(g, state.jump.polylines(spacing));

  MsRecovery out{ScalarField(g), ScalarField(g), ScalarField(g)};
  const std::int64_t n = g.size();
  for (int j = 0; j < g.n[1]; ++j)
    for (int i = 0; i < g.n[0]; ++i) {
      const std::int64_t idx = out.v.index(i, j);
      const Vec2 x{g.coord(0, i), g.coord(1, j)};
      const double de = dist.data[idx] - 2.0 * delta;
      out.v.data[idx] = truncated_profile(de, pp);
      double ramp;
      if (de <= -1.5 * delta)
        ramp = 0.0;
      else if (de < -delta)
        ramp = (2.0 * de + 3.0 * delta) / delta;
      else
        ramp = 1.0;
      out.u.data[idx] = ramp == 0.0 ? 0.0 : ramp * state.u(x);
      double w = 1.0;
      for (const auto& jn : junctions)
        w = std::min(w, truncated_profile((x - jn.p).norm() - p.beta, pp));
      out.w.data[idx] = w;
    }
  (void)n;
  std::vector<Vec2> jp;
  for (const auto& jn : junctions) jp.push_back(jn.p);
  mollify_near(out.v, jp);
  return out;
}

double radial_point_energy(double eps, double beta, double lambda, double* mm_half,
                           double* willmore_half) {
  const ProfileParams pp(eps, lambda);
  const double delta = pp.delta();
  if (!(beta > delta))
    throw std::invalid_argument("radial_point_energy: beta must exceed the band width");
  const double c0 = c0_constant();
  auto mm_density = [&](double s) {
    const double dq = truncated_profile_d1(s, pp);
    return 0.5 * eps * dq * dq + double_well(truncated_profile(s, pp)) / eps;
  };
  auto will_density = [&](double s) {
    const double r = s + beta;
    const double f = -eps * (truncated_profile_d2(s, pp) + truncated_profile_d1(s, pp) / r) +
                     double_well_d1(truncated_profile(s, pp)) / eps;
    return f * f * r;
  };
  const double two_pi = 2.0 * std::numbers::pi;
  double mm = 0.0, will = 0.0;
  for (const auto [a, b] : {std::pair{-delta, -0.5 * delta}, std::pair{-0.5 * delta, 0.5 * delta},
                            std::pair{0.5 * delta, delta}}) {
    mm += integrate_1d([&](double s) { return mm_density(s) * (s + beta); }, a, b, 1e-13);
    will += integrate_1d(will_density, a, b, 1e-13);
  }
  const double term_mm = two_pi * mm / (c0 * beta);
  const double term_will = two_pi * beta * will / (c0 * eps);
  if (mm_half) *mm_half = term_mm;
  if (willmore_half) *willmore_half = term_will;
  return term_mm + term_will;
}

}  // namespace anicurv
