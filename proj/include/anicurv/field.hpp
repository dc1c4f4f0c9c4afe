#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "anicurv/vec.hpp"

namespace anicurv {

enum class Boundary { periodic, neumann };

// Uniform cell-centered grid on an axis-aligned box, dim 2 or 3.
struct Grid {
  int dim = 2;
  std::array<double, 3> origin{};
  std::array<double, 3> extent{};
  std::array<int, 3> n{1, 1, 1};
  Boundary boundary = Boundary::periodic;

  Grid() = default;
  Grid(int dim_, std::array<double, 3> origin_, std::array<double, 3> extent_,
       std::array<int, 3> n_, Boundary b);

  double h(int axis) const { return extent[axis] / n[axis]; }
  double coord(int axis, int i) const { return origin[axis] + (i + 0.5) * h(axis); }
  std::int64_t size() const;
  double cell_volume() const;
  // resolution used in the h <= eps/4 advisory check
  double h_max() const;
  bool same_layout(const Grid& o) const;
};

struct ScalarField {
  Grid grid;
  std::vector<double> data;  // row-major, x fastest

  ScalarField() = default;
  explicit ScalarField(const Grid& g);

  double& at(int i, int j, int k = 0);
  double at(int i, int j, int k = 0) const;
  std::int64_t index(int i, int j, int k = 0) const;
};

struct VectorField {
  Grid grid;
  std::array<std::vector<double>, 3> comp;

  explicit VectorField(const Grid& g);
};

// Deterministic midpoint-rule integral (pairwise summation).
double integrate(const ScalarField& f);

// Second-order central differences honoring the boundary mode.
VectorField gradient_fd(const ScalarField& f);
ScalarField laplacian_fd(const ScalarField& f);

// Spectral derivatives; periodic grids only.
VectorField gradient_spectral(const ScalarField& f);
ScalarField laplacian_spectral(const ScalarField& f);

// Dispatch on the grid's boundary mode: spectral when periodic, FD otherwise.
VectorField gradient(const ScalarField& f);
ScalarField laplacian(const ScalarField& f);

// Per-node distance to a point cloud (unsigned). Brute force by design.
ScalarField distance_to_samples(const Grid& g, const std::vector<Vec2>& samples);

// Per-node distance to polylines (unsigned). Unlike the point cloud version
// this has no spacing/2 floor between nodes, so composed profiles stay free
// of sampling-frequency ripple.
ScalarField distance_to_segments(const Grid& g,
                                 const std::vector<std::vector<Vec2>>& polylines);

// Flip distance sign inside the region enclosed by the closed polyline
// (positive outside, negative inside, matching a phase that is +1 outside).
void apply_sign_by_parity(ScalarField& dist, const std::vector<Vec2>& loop);

// 64-byte ASCII header (dim, n, h, boundary) followed by row-major
// little-endian float64.
void write_field(const ScalarField& f, const std::string& path);
ScalarField read_field(const std::string& path);
void write_field_csv(const ScalarField& f, const std::string& path);

}  // namespace anicurv
