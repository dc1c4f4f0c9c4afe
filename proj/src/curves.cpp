#include "anicurv/curves.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "anicurv/quadrature.hpp"

namespace anicurv {

namespace {
constexpr int kKnots = 2048;
constexpr double kMergeTol = 1e-9;
constexpr double kPi = std::numbers::pi;
}  // namespace

Curve::Curve(std::function<Vec2(double)> pos, std::function<Vec2(double)> d1,
             std::function<Vec2(double)> d2)
    : pos_(std::move(pos)), d1_(std::move(d1)), d2_(std::move(d2)) {
  cum_.resize(kKnots + 1);
  cum_[0] = 0.0;
  auto speed = [this](double t) { return d1_(t).norm(); };
  for (int i = 0; i < kKnots; ++i) {
    const double a = static_cast<double>(i) / kKnots;
    const double b = static_cast<double>(i + 1) / kKnots;
    cum_[i + 1] = cum_[i] + integrate_1d(speed, a, b, 1e-13);
  }
  length_ = cum_[kKnots];
  if (!(length_ > 0.0)) throw std::invalid_argument("Curve: zero length");
  loop_ = (pos_(0.0) - pos_(1.0)).norm() <= kMergeTol;
}

double Curve::arclength(double t) const {
  t = std::clamp(t, 0.0, 1.0);
  const double x = t * kKnots;
  const int i = std::min(static_cast<int>(x), kKnots - 1);
  const double a = static_cast<double>(i) / kKnots;
  auto speed = [this](double s) { return d1_(s).norm(); };
  return cum_[i] + integrate_1d(speed, a, t, 1e-13);
}

double Curve::t_at_arclength(double s) const {
  s = std::clamp(s, 0.0, length_);
  const auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
  int i = std::max(0, static_cast<int>(it - cum_.begin()) - 1);
  if (i >= kKnots) i = kKnots - 1;
  double t = (i + (s - cum_[i]) / std::max(cum_[i + 1] - cum_[i], 1e-300)) / kKnots;
  // Newton polish on arclength(t) = s
  for (int it2 = 0; it2 < 8; ++it2) {
    const double g = arclength(t) - s;
    const double sp = d1_(t).norm();
    if (sp <= 0.0) break;
    const double step = g / sp;
    t = std::clamp(t - step, 0.0, 1.0);
    if (std::abs(step) < 1e-14) break;
  }
  return t;
}

Vec2 Curve::curvature(double t) const {
  const Vec2 v = d1_(t);
  const Vec2 a = d2_(t);
  const double sp2 = v.norm2();
  if (sp2 <= 0.0) throw std::runtime_error("Curve::curvature: vanishing speed");
  const Vec2 tau = v / std::sqrt(sp2);
  const Vec2 an = a - tau * tau.dot(a);
  return an / sp2;
}

double Curve::max_curvature_norm() const {
  double m = 0.0;
  const int n = 4096;
  for (int i = 0; i <= n; ++i) m = std::max(m, curvature(static_cast<double>(i) / n).norm());
  return m;
}

Curve spline_curve(const std::vector<Vec2>& points, bool closed) {
  const int n = static_cast<int>(points.size());
  if (n < (closed ? 3 : 2)) throw std::invalid_argument("spline_curve: too few points");
  // chord-length knots normalized to [0,1]
  std::vector<double> knots(closed ? n + 1 : n, 0.0);
  const int nseg = closed ? n : n - 1;
  for (int i = 1; i <= nseg; ++i)
    knots[i] = knots[i - 1] + (points[i % n] - points[i - 1]).norm();
  const double total = knots[nseg];
  if (!(total > 0.0)) throw std::invalid_argument("spline_curve: coincident points");
  for (double& k : knots) k /= total;

  // second derivatives from the tridiagonal C^2 conditions, per component
  auto solve_m = [&](auto value) {
    std::vector<double> m(n, 0.0);
    if (!closed) {
      // natural spline
      std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
      b[0] = b[n - 1] = 1.0;
      for (int i = 1; i < n - 1; ++i) {
        const double hi = knots[i] - knots[i - 1];
        const double hi1 = knots[i + 1] - knots[i];
        a[i] = hi / 6.0;
        b[i] = (hi + hi1) / 3.0;
        c[i] = hi1 / 6.0;
        d[i] = (value(i + 1) - value(i)) / hi1 - (value(i) - value(i - 1)) / hi;
      }
      for (int i = 1; i < n; ++i) {
        const double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        d[i] -= w * d[i - 1];
      }
      m[n - 1] = d[n - 1] / b[n - 1];
      for (int i = n - 2; i >= 0; --i) m[i] = (d[i] - c[i] * m[i + 1]) / b[i];
    } else {
      // periodic spline via the Sherman-Morrison correction
      auto h = [&](int i) { return knots[i + 1] - knots[i]; };
      std::vector<double> b(n), d(n), al(n), cu(n);
      for (int i = 0; i < n; ++i) {
        const double hprev = h((i - 1 + n) % n);
        const double hcur = h(i);
        al[i] = hprev / 6.0;
        b[i] = (hprev + hcur) / 3.0;
        cu[i] = hcur / 6.0;
        const double vprev = value((i - 1 + n) % n), vcur = value(i), vnext = value((i + 1) % n);
        d[i] = (vnext - vcur) / hcur - (vcur - vprev) / hprev;
      }
      auto tridiag = [&](std::vector<double> rhs) {
        std::vector<double> bb = b, dd = std::move(rhs);
        for (int i = 1; i < n - 1; ++i) {
          const double w = al[i] / bb[i - 1];
          bb[i] -= w * cu[i - 1];
          dd[i] -= w * dd[i - 1];
        }
        std::vector<double> x(n - 1);
        x[n - 2] = dd[n - 2] / bb[n - 2];
        for (int i = n - 3; i >= 0; --i) x[i] = (dd[i] - cu[i] * x[i + 1]) / bb[i];
        return x;
      };
      // unknowns 0..n-2 with wraparound couplings folded via correction vector
      std::vector<double> rhs(d.begin(), d.end() - 1), u(n - 1, 0.0);
      u[0] = al[0];
      u[n - 2] = cu[n - 2];
      const std::vector<double> y = tridiag(rhs);
      const std::vector<double> q = tridiag(u);
      // last unknown m[n-1]
      const double denom = b[n - 1] - cu[n - 1] * q[0] - al[n - 1] * q[n - 2];
      const double mn = (d[n - 1] - cu[n - 1] * y[0] - al[n - 1] * y[n - 2]) / denom;
      for (int i = 0; i < n - 1; ++i) m[i] = y[i] - q[i] * mn;
      m[n - 1] = mn;
    }
    return m;
  };
  const std::vector<double> mx = solve_m([&](int i) { return points[i % n].x; });
  const std::vector<double> my = solve_m([&](int i) { return points[i % n].y; });

  struct Data {
    std::vector<Vec2> p;
    std::vector<double> mx, my, knots;
    int nseg;
    bool closed;
  };
  auto data = std::make_shared<Data>(Data{points, mx, my, knots, nseg, closed});

  auto locate = [data](double t) {
    t = std::clamp(t, 0.0, 1.0);
    int lo = 0, hi = data->nseg;
    while (hi - lo > 1) {
      const int mid = (lo + hi) / 2;
      (data->knots[mid] <= t ? lo : hi) = mid;
    }
    return lo;
  };
  auto eval = [data, locate](double t, int deriv) -> Vec2 {
    const int np = static_cast<int>(data->p.size());
    const int i = locate(t);
    const int i1 = (i + 1) % np;
    const double h = data->knots[i + 1] - data->knots[i];
    const double A = (data->knots[i + 1] - t) / h;
    const double B = (t - data->knots[i]) / h;
    const Vec2 p0 = data->p[i];
    const Vec2 p1 = data->p[i1];
    const Vec2 m0{data->mx[i], data->my[i]};
    const Vec2 m1{data->mx[i1], data->my[i1]};
    if (deriv == 0)
      return A * p0 + B * p1 +
             ((A * A * A - A) * m0 + (B * B * B - B) * m1) * (h * h / 6.0);
    if (deriv == 1)
      return (p1 - p0) / h + ((3.0 * B * B - 1.0) * m1 - (3.0 * A * A - 1.0) * m0) * (h / 6.0);
    return A * m0 + B * m1;
  };
  return Curve([eval](double t) { return eval(t, 0); }, [eval](double t) { return eval(t, 1); },
               [eval](double t) { return eval(t, 2); });
}

CurveNetwork::CurveNetwork(std::vector<Curve> curves) : curves_(std::move(curves)) {
  if (curves_.empty()) throw std::invalid_argument("CurveNetwork: no curves");
  // collect endpoint classes
  struct End {
    Vec2 p;
    int curve, side;
  };
  std::vector<End> ends;
  for (int c = 0; c < static_cast<int>(curves_.size()); ++c) {
    if (curves_[c].is_loop()) continue;
    ends.push_back({curves_[c].pos(0.0), c, 0});
    ends.push_back({curves_[c].pos(1.0), c, 1});
  }
  std::vector<bool> used(ends.size(), false);
  for (size_t i = 0; i < ends.size(); ++i) {
    if (used[i]) continue;
    Junction j;
    j.p = ends[i].p;
    for (size_t k = i; k < ends.size(); ++k) {
      if (used[k]) continue;
      if ((ends[k].p - j.p).norm() <= kMergeTol) {
        used[k] = true;
        j.arms.emplace_back(ends[k].curve, ends[k].side);
      }
    }
    Vec2 v{0.0, 0.0};
    for (const auto& [c, side] : j.arms) {
      const Vec2 tgt = curves_[c].d1(side == 0 ? 0.0 : 1.0).normalized();
      v += side == 0 ? tgt : -tgt;
    }
    j.v = v;
    junctions_.push_back(std::move(j));
  }
}

double CurveNetwork::length() const {
  double s = 0.0;
  for (const auto& c : curves_) s += c.length();
  return s;
}

double CurveNetwork::max_curvature_norm() const {
  double m = 0.0;
  for (const auto& c : curves_) m = std::max(m, c.max_curvature_norm());
  return m;
}

bool CurveNetwork::all_loops() const {
  return std::all_of(curves_.begin(), curves_.end(),
                     [](const Curve& c) { return c.is_loop(); });
}

void CurveNetwork::validate() const {
  const int n = 1024;
  for (const auto& c : curves_) {
    for (int i = 0; i <= n; ++i) {
      const double sp = c.d1(static_cast<double>(i) / n).norm();
      if (!(sp > 1e-12 * std::max(1.0, c.length())))
        throw std::invalid_argument("CurveNetwork: curve is not an immersion");
    }
  }
  // sampled pairwise separation away from shared junctions
  std::vector<std::vector<Vec2>> pts(curves_.size());
  std::vector<double> spacing(curves_.size());
  for (size_t c = 0; c < curves_.size(); ++c) {
    const int m = 512;
    spacing[c] = curves_[c].length() / m;
    for (int i = 0; i <= m; ++i)
      pts[c].push_back(curves_[c].pos(curves_[c].t_at_arclength(curves_[c].length() * i / m)));
  }
  auto near_junction = [&](Vec2 x, double r) {
    for (const auto& j : junctions_)
      if ((x - j.p).norm() < r) return true;
    return false;
  };
  for (size_t a = 0; a < curves_.size(); ++a)
    for (size_t b = a; b < curves_.size(); ++b) {
      const double guard = 4.0 * std::max(spacing[a], spacing[b]);
      const double tol = 0.25 * std::min(spacing[a], spacing[b]);
      for (size_t i = 0; i < pts[a].size(); ++i)
        for (size_t k = a == b ? i + 8 : 0; k < pts[b].size(); ++k) {
          if (a == b && (k + 8 >= pts[a].size() && i < 8) &&
              curves_[a].is_loop())
            continue;  // loop closure neighborhood
          const double d = (pts[a][i] - pts[b][k]).norm();
          if (d < tol && !(near_junction(pts[a][i], guard)))
            throw std::invalid_argument("CurveNetwork: curves intersect away from junctions");
        }
    }
}

std::vector<Vec2> CurveNetwork::sample_points(double spacing) const {
  if (!(spacing > 0.0)) throw std::invalid_argument("sample_points: spacing must be positive");
  std::vector<Vec2> out;
  for (const auto& c : curves_) {
    const int m = std::max(8, static_cast<int>(std::ceil(c.length() / spacing)));
    for (int i = 0; i <= m; ++i)
      out.push_back(c.pos(c.t_at_arclength(c.length() * i / m)));
  }
  return out;
}

std::vector<std::vector<Vec2>> CurveNetwork::polylines(double spacing) const {
  if (!(spacing > 0.0)) throw std::invalid_argument("polylines: spacing must be positive");
  std::vector<std::vector<Vec2>> out;
  for (const auto& c : curves_) {
    const int m = std::max(8, static_cast<int>(std::ceil(c.length() / spacing)));
    std::vector<Vec2> poly;
    poly.reserve(m + 1);
    for (int i = 0; i <= m; ++i)
      poly.push_back(c.pos(c.t_at_arclength(c.length() * i / m)));
    out.push_back(std::move(poly));
  }
  return out;
}

std::vector<std::vector<Vec2>> CurveNetwork::loops(double spacing) const {
  std::vector<std::vector<Vec2>> out;
  for (const auto& c : curves_) {
    if (!c.is_loop()) continue;
    const int m = std::max(16, static_cast<int>(std::ceil(c.length() / spacing)));
    std::vector<Vec2> loop;
    loop.reserve(m);
    for (int i = 0; i < m; ++i) loop.push_back(c.pos(c.t_at_arclength(c.length() * i / m)));
    out.push_back(std::move(loop));
  }
  return out;
}

double CurveNetwork::arc_in_ball(Vec2 x0, double rho) const {
  if (!(rho > 0.0)) throw std::invalid_argument("arc_in_ball: rho must be positive");
  double total = 0.0;
  const int n = 8192;
  for (const auto& c : curves_) {
    auto inside = [&](double t) { return (c.pos(t) - x0).norm() < rho; };
    // locate sign changes of the indicator on a fine grid, bisect each crossing
    std::vector<double> cuts{0.0};
    bool prev = inside(0.0);
    std::vector<bool> state{prev};
    for (int i = 1; i <= n; ++i) {
      const double t = static_cast<double>(i) / n;
      const bool cur = inside(t);
      if (cur != prev) {
        double lo = static_cast<double>(i - 1) / n, hi = t;
        for (int b = 0; b < 60; ++b) {
          const double mid = 0.5 * (lo + hi);
          (inside(mid) == prev ? lo : hi) = mid;
        }
        cuts.push_back(0.5 * (lo + hi));
        state.push_back(cur);
        prev = cur;
      }
    }
    cuts.push_back(1.0);
    for (size_t s = 0; s + 1 < cuts.size(); ++s)
      if (state[s]) total += c.arclength(cuts[s + 1]) - c.arclength(cuts[s]);
  }
  return total;
}

void CurveNetwork::bounding_box(Vec2& lo, Vec2& hi) const {
  lo = {1e300, 1e300};
  hi = {-1e300, -1e300};
  for (const auto& c : curves_)
    for (int i = 0; i <= 1024; ++i) {
      const Vec2 p = c.pos(i / 1024.0);
      lo.x = std::min(lo.x, p.x);
      lo.y = std::min(lo.y, p.y);
      hi.x = std::max(hi.x, p.x);
      hi.y = std::max(hi.y, p.y);
    }
}

double CurveNetwork::tube_area(double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("tube_area: width must be positive");
  Vec2 lo, hi;
  bounding_box(lo, hi);
  const double cell = t / 8.0;
  const double pad = t + 2.0 * cell;
  lo = lo - Vec2{pad, pad};
  hi = hi + Vec2{pad, pad};
  const int nx = static_cast<int>(std::ceil((hi.x - lo.x) / cell));
  const int ny = static_cast<int>(std::ceil((hi.y - lo.y) / cell));
  std::vector<uint8_t> mark(static_cast<size_t>(nx) * ny, 0);
  const std::vector<Vec2> pts = sample_points(t / 64.0);
  const int reach = static_cast<int>(std::ceil(t / cell)) + 1;
  const double t2 = t * t;
  for (const Vec2& p : pts) {
    const int ci = static_cast<int>((p.x - lo.x) / cell);
    const int cj = static_cast<int>((p.y - lo.y) / cell);
    for (int j = std::max(0, cj - reach); j <= std::min(ny - 1, cj + reach); ++j)
      for (int i = std::max(0, ci - reach); i <= std::min(nx - 1, ci + reach); ++i) {
        if (mark[static_cast<size_t>(j) * nx + i]) continue;
        const double cx = lo.x + (i + 0.5) * cell;
        const double cy = lo.y + (j + 0.5) * cell;
        const double dx = cx - p.x, dy = cy - p.y;
        if (dx * dx + dy * dy < t2) mark[static_cast<size_t>(j) * nx + i] = 1;
      }
  }
  std::int64_t count = 0;
  for (uint8_t m : mark) count += m;
  return static_cast<double>(count) * cell * cell;
}

namespace {

CurveNetwork one_curve(std::function<Vec2(double)> p, std::function<Vec2(double)> d1,
                       std::function<Vec2(double)> d2) {
  std::vector<Curve> cs;
  cs.emplace_back(std::move(p), std::move(d1), std::move(d2));
  return CurveNetwork(std::move(cs));
}

}  // namespace

CurveNetwork make_circle(double radius, Vec2 center) {
  if (!(radius > 0.0)) throw std::invalid_argument("make_circle: radius must be positive");
  const double w = 2.0 * kPi;
  return one_curve(
      [=](double t) {
        return center + radius * Vec2{std::cos(w * t), std::sin(w * t)};
      },
      [=](double t) {
        return radius * w * Vec2{-std::sin(w * t), std::cos(w * t)};
      },
      [=](double t) {
        return radius * w * w * Vec2{-std::cos(w * t), -std::sin(w * t)};
      });
}

CurveNetwork make_ellipse(double a, double b, Vec2 center) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("make_ellipse: bad semiaxes");
  const double w = 2.0 * kPi;
  return one_curve(
      [=](double t) {
        return center + Vec2{a * std::cos(w * t), b * std::sin(w * t)};
      },
      [=](double t) {
        return Vec2{-a * w * std::sin(w * t), b * w * std::cos(w * t)};
      },
      [=](double t) {
        return Vec2{-a * w * w * std::cos(w * t), -b * w * w * std::sin(w * t)};
      });
}

CurveNetwork make_segment(Vec2 p, Vec2 q) {
  if ((q - p).norm() <= 0.0) throw std::invalid_argument("make_segment: degenerate");
  return one_curve([=](double t) { return p + t * (q - p); }, [=](double) { return q - p; },
                   [=](double) { return Vec2{0.0, 0.0}; });
}

CurveNetwork make_arc(double radius, double theta0, double theta1, Vec2 center) {
  if (!(radius > 0.0) || !(theta1 > theta0)) throw std::invalid_argument("make_arc: bad arc");
  const double w = theta1 - theta0;
  return one_curve(
      [=](double t) {
        const double a = theta0 + w * t;
        return center + radius * Vec2{std::cos(a), std::sin(a)};
      },
      [=](double t) {
        const double a = theta0 + w * t;
        return radius * w * Vec2{-std::sin(a), std::cos(a)};
      },
      [=](double t) {
        const double a = theta0 + w * t;
        return radius * w * w * Vec2{-std::cos(a), -std::sin(a)};
      });
}

CurveNetwork make_star(int k, double arm_length, Vec2 center) {
  if (k < 1) throw std::invalid_argument("make_star: need at least one arm");
  if (!(arm_length > 0.0)) throw std::invalid_argument("make_star: bad length");
  std::vector<Curve> arms;
  for (int i = 0; i < k; ++i) {
    const double a = 2.0 * kPi * i / k;
    const Vec2 dir{std::cos(a), std::sin(a)};
    arms.emplace_back([=](double t) { return center + (t * arm_length) * dir; },
                      [=](double) { return arm_length * dir; },
                      [=](double) { return Vec2{0.0, 0.0}; });
  }
  return CurveNetwork(std::move(arms));
}

CurveNetwork make_limacon(double a, double b, Vec2 center) {
  if (!(a > 0.0) || !(b > 0.0) || !(a > b))
    throw std::invalid_argument("make_limacon: need a > b > 0 for a simple loop");
  const double w = 2.0 * kPi;
  auto r = [=](double th) { return a + b * std::cos(th); };
  auto dr = [=](double th) { return -b * std::sin(th); };
  auto ddr = [=](double th) { return -b * std::cos(th); };
  return one_curve(
      [=](double t) {
        const double th = w * t;
        return center + r(th) * Vec2{std::cos(th), std::sin(th)};
      },
      [=](double t) {
        const double th = w * t;
        const Vec2 er{std::cos(th), std::sin(th)}, et{-std::sin(th), std::cos(th)};
        return w * (dr(th) * er + r(th) * et);
      },
      [=](double t) {
        const double th = w * t;
        const Vec2 er{std::cos(th), std::sin(th)}, et{-std::sin(th), std::cos(th)};
        return w * w * ((ddr(th) - r(th)) * er + 2.0 * dr(th) * et);
      });
}

CurveNetwork make_square(double side, Vec2 center) {
  if (!(side > 0.0)) throw std::invalid_argument("make_square: bad side");
  const double s = side / 2.0;
  const Vec2 c0{center.x - s, center.y - s}, c1{center.x + s, center.y - s},
      c2{center.x + s, center.y + s}, c3{center.x - s, center.y + s};
  std::vector<Curve> edges;
  auto seg = [](Vec2 p, Vec2 q) {
    return Curve([=](double t) { return p + t * (q - p); }, [=](double) { return q - p; },
                 [=](double) { return Vec2{0.0, 0.0}; });
  };
  edges.push_back(seg(c0, c1));
  edges.push_back(seg(c1, c2));
  edges.push_back(seg(c2, c3));
  edges.push_back(seg(c3, c0));
  return CurveNetwork(std::move(edges));
}

CurveNetwork make_polyline(const std::vector<Vec2>& points, bool closed) {
  std::vector<Curve> cs;
  cs.push_back(spline_curve(points, closed));
  return CurveNetwork(std::move(cs));
}

CurveNetwork load_polyline_csv(const std::string& path, bool closed) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_polyline_csv: cannot open " + path);
  std::vector<Vec2> pts;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || std::isalpha(static_cast<unsigned char>(line[0]))) continue;
    std::istringstream ls(line);
    double x, y;
    char comma;
    if (!(ls >> x >> comma >> y))
      throw std::runtime_error("load_polyline_csv: malformed row: " + line);
    pts.push_back({x, y});
  }
  return make_polyline(pts, closed);
}

namespace {

double curve_integral(const Curve& c, const std::function<double(double)>& density) {
  // integrate density(t) |gamma'(t)| dt in arc-length-friendly chunks
  double total = 0.0;
  const int chunks = 32;
  for (int i = 0; i < chunks; ++i)
    total += integrate_1d(
        [&](double t) { return density(t) * c.d1(t).norm(); },
        static_cast<double>(i) / chunks, static_cast<double>(i + 1) / chunks, 1e-11);
  return total;
}

}  // namespace

SharpBreakdown sharp_set_energy(const CurveNetwork& net, const Anisotropy& phi) {
  if (!net.all_loops())
    throw std::invalid_argument("sharp_set_energy: boundary must consist of closed curves");
  SharpBreakdown out;
  for (const auto& c : net.curves()) {
    out.anisotropic += curve_integral(c, [&](double t) {
      const Vec2 nu = c.d1(t).normalized().perp();
      return phi.at_angle(nu.angle());
    });
    out.curvature += curve_integral(c, [&](double t) { return c.curvature(t).norm2(); });
  }
  out.total = out.anisotropic + out.curvature;
  return out;
}

SharpBreakdown sharp_ms_energy(const SharpMsState& st, const Anisotropy& phi, const Grid& grid) {
  if (grid.dim != 2) throw std::invalid_argument("sharp_ms_energy: 2D grids only");
  SharpBreakdown out;
  ScalarField e2(grid);
  for (int j = 0; j < grid.n[1]; ++j)
    for (int i = 0; i < grid.n[0]; ++i) {
      const Vec2 g = st.grad_u({grid.coord(0, i), grid.coord(1, j)});
      e2.at(i, j) = g.norm2();
    }
  out.bulk = integrate(e2);
  for (const auto& c : st.jump.curves()) {
    out.anisotropic += curve_integral(c, [&](double t) {
      const Vec2 nu = c.d1(t).normalized().perp();
      return phi.at_angle(nu.angle());
    });
    out.curvature += curve_integral(c, [&](double t) { return c.curvature(t).norm2(); });
  }
  out.points_all = static_cast<int>(st.jump.junctions().size());
  for (const auto& j : st.jump.junctions())
    if (j.v.norm() > 1e-12) ++out.points_nonzero;
  out.point = st.gamma * out.points_all;
  out.total = out.bulk + out.anisotropic + out.curvature + out.point;
  return out;
}

bool taylor_bound_holds(const CurveNetwork& net, Vec2 x0, const std::vector<double>& rhos,
                        double slack) {
  const Junction* jn = nullptr;
  for (const auto& j : net.junctions())
    if ((j.p - x0).norm() <= kMergeTol) jn = &j;
  if (!jn) throw std::invalid_argument("taylor_bound_holds: x0 is not a junction");
  const double theta = 0.5 * jn->arms.size();
  const double sup_h = net.max_curvature_norm();
  for (double rho : rhos) {
    if (!(rho > 0.0)) throw std::invalid_argument("taylor_bound_holds: rho must be positive");
    const double len = net.arc_in_ball(x0, rho);
    if (len > 2.0 * rho * theta + rho * rho * theta * sup_h + slack) return false;
  }
  return true;
}

}  // namespace anicurv
