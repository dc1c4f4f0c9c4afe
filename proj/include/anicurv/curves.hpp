#pragma once

#include <functional>
#include <string>
#include <vector>

#include "anicurv/anisotropy.hpp"
#include "anicurv/field.hpp"
#include "anicurv/vec.hpp"

namespace anicurv {

// C^2 curve parametrized over [0,1], immersed (|d1| > 0). Carries a cumulative
// arc-length table for inversion and resampling.
class Curve {
 public:
  Curve(std::function<Vec2(double)> pos, std::function<Vec2(double)> d1,
        std::function<Vec2(double)> d2);

  Vec2 pos(double t) const { return pos_(t); }
  Vec2 d1(double t) const { return d1_(t); }
  Vec2 d2(double t) const { return d2_(t); }

  double length() const { return length_; }
  // cumulative arc length from 0 to t
  double arclength(double t) const;
  double t_at_arclength(double s) const;
  bool is_loop() const { return loop_; }

  // curvature vector dtau/ds at parameter t
  Vec2 curvature(double t) const;
  double max_curvature_norm() const;

 private:
  std::function<Vec2(double)> pos_, d1_, d2_;
  std::vector<double> cum_;  // arc length at knots i/kKnots
  double length_ = 0.0;
  bool loop_ = false;
};

// Natural (open) or periodic (closed) C^2 cubic spline through the points,
// chord-length parametrized.
Curve spline_curve(const std::vector<Vec2>& points, bool closed);

struct Junction {
  Vec2 p;
  Vec2 v;                                 // sum of outgoing unit tangents
  std::vector<std::pair<int, int>> arms;  // (curve index, endpoint 0/1)
};

// Curves meeting only at endpoint junctions (endpoints merged within 1e-9).
class CurveNetwork {
 public:
  explicit CurveNetwork(std::vector<Curve> curves);

  const std::vector<Curve>& curves() const { return curves_; }
  const std::vector<Junction>& junctions() const { return junctions_; }

  double length() const;
  double max_curvature_norm() const;
  bool all_loops() const;

  // sampled immersion/intersection checks; throws on violation
  void validate() const;

  // arc-length-uniform point cloud at roughly the given spacing
  std::vector<Vec2> sample_points(double spacing) const;
  // every curve as an ordered polyline (endpoints included; loops closed)
  std::vector<std::vector<Vec2>> polylines(double spacing) const;
  // closed curves as ordered polylines (for parity sign tests)
  std::vector<std::vector<Vec2>> loops(double spacing) const;

  // total curve length inside the open ball B_rho(x0)
  double arc_in_ball(Vec2 x0, double rho) const;
  // area of the tube {dist < t} by disk-stamped cell counting at resolution t/8
  double tube_area(double t) const;
  // axis-aligned bounding box of sampled positions
  void bounding_box(Vec2& lo, Vec2& hi) const;

 private:
  std::vector<Curve> curves_;
  std::vector<Junction> junctions_;
};

// catalog
CurveNetwork make_circle(double radius, Vec2 center = {0, 0});
CurveNetwork make_ellipse(double a, double b, Vec2 center = {0, 0});
CurveNetwork make_segment(Vec2 p, Vec2 q);
CurveNetwork make_arc(double radius, double theta0, double theta1, Vec2 center = {0, 0});
// k straight arms of the given length from the center, equally spaced angles
CurveNetwork make_star(int k, double arm_length, Vec2 center = {0, 0});
// r(t) = a + b cos t in polar form; nonconvex for b > a/... (b > a gives the
// inner loop; use b in (a/2, a) for a simple nonconvex loop)
CurveNetwork make_limacon(double a, double b, Vec2 center = {0, 0});
CurveNetwork make_square(double side, Vec2 center = {0, 0});
CurveNetwork make_polyline(const std::vector<Vec2>& points, bool closed);
CurveNetwork load_polyline_csv(const std::string& path, bool closed);

struct SharpBreakdown {
  double bulk = 0.0;
  double anisotropic = 0.0;  // int phi(nu) dH^1
  double curvature = 0.0;    // int |H|^2 dH^1
  double point = 0.0;        // gamma * H^0(junctions)
  int points_all = 0;
  int points_nonzero = 0;  // junctions with |v_p| > 0
  double total = 0.0;
};

// int over a closed boundary of phi(nu) + |H|^2; requires all curves loops
SharpBreakdown sharp_set_energy(const CurveNetwork& net, const Anisotropy& phi);

// Piecewise-smooth function with jump set carried by a network.
struct SharpMsState {
  CurveNetwork jump;
  std::function<double(Vec2)> u;        // evaluable off the jump set
  std::function<Vec2(Vec2)> grad_u;     // evaluable off the jump set
  double gamma = 0.0;
};

// bulk by midpoint quadrature on the grid; jump and point terms by arc-length
// quadrature. The point term counts every junction; the nonzero-v count is
// reported alongside.
SharpBreakdown sharp_ms_energy(const SharpMsState& st, const Anisotropy& phi, const Grid& grid);

// H^1(Gamma cap B_rho(x0)) <= 2 rho Theta + rho^2 Theta sup|H| with
// Theta = (arm count)/2; checked for a junction point over the given radii.
bool taylor_bound_holds(const CurveNetwork& net, Vec2 x0, const std::vector<double>& rhos,
                        double slack = 1e-9);

}  // namespace anicurv
