#include "anicurv/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "anicurv/quadrature.hpp"

namespace anicurv {

Grid::Grid(int dim_, std::array<double, 3> origin_, std::array<double, 3> extent_,
           std::array<int, 3> n_, Boundary b)
    : dim(dim_), origin(origin_), extent(extent_), n(n_), boundary(b) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("Grid: dim must be 2 or 3");
  for (int a = 0; a < dim; ++a) {
    if (n[a] < 4) throw std::invalid_argument("Grid: need at least 4 nodes per axis");
    if (!(extent[a] > 0.0)) throw std::invalid_argument("Grid: extent must be positive");
  }
  for (int a = dim; a < 3; ++a) {
    n[a] = 1;
    extent[a] = 0.0;
    origin[a] = 0.0;
  }
}

std::int64_t Grid::size() const {
  std::int64_t s = 1;
  for (int a = 0; a < dim; ++a) s *= n[a];
  return s;
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= h(a);
  return v;
}

double Grid::h_max() const {
  double m = 0.0;
  for (int a = 0; a < dim; ++a) m = std::max(m, h(a));
  return m;
}

bool Grid::same_layout(const Grid& o) const {
  if (dim != o.dim || boundary != o.boundary) return false;
  for (int a = 0; a < dim; ++a)
    if (n[a] != o.n[a] || std::abs(origin[a] - o.origin[a]) > 1e-12 ||
        std::abs(extent[a] - o.extent[a]) > 1e-12)
      return false;
  return true;
}

ScalarField::ScalarField(const Grid& g) : grid(g), data(g.size(), 0.0) {}

std::int64_t ScalarField::index(int i, int j, int k) const {
  return (static_cast<std::int64_t>(k) * grid.n[1] + j) * grid.n[0] + i;
}

double& ScalarField::at(int i, int j, int k) { return data[index(i, j, k)]; }
double ScalarField::at(int i, int j, int k) const { return data[index(i, j, k)]; }

VectorField::VectorField(const Grid& g) : grid(g) {
  for (int a = 0; a < g.dim; ++a) comp[a].assign(g.size(), 0.0);
}

double integrate(const ScalarField& f) {
  return pairwise_sum(f.data) * f.grid.cell_volume();
}

namespace {

// index shift with boundary handling; returns the source index along one axis
inline int shifted(int i, int di, int n, Boundary b) {
  int j = i + di;
  if (b == Boundary::periodic) {
    if (j < 0) j += n;
    if (j >= n) j -= n;
  } else {
    // cell-centered mirror: ghost value equals the nearest interior value
    if (j < 0) j = -j - 1;
    if (j >= n) j = 2 * n - 1 - j;
  }
  return j;
}

}  // namespace

VectorField gradient_fd(const ScalarField& f) {
  const Grid& g = f.grid;
  VectorField out(g);
  const int nx = g.n[0], ny = g.n[1], nz = g.n[2];
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const std::int64_t idx = f.index(i, j, k);
        const int ip = shifted(i, 1, nx, g.boundary), im = shifted(i, -1, nx, g.boundary);
        out.comp[0][idx] = (f.at(ip, j, k) - f.at(im, j, k)) / (2.0 * g.h(0));
        const int jp = shifted(j, 1, ny, g.boundary), jm = shifted(j, -1, ny, g.boundary);
        out.comp[1][idx] = (f.at(i, jp, k) - f.at(i, jm, k)) / (2.0 * g.h(1));
        if (g.dim == 3) {
          const int kp = shifted(k, 1, nz, g.boundary), km = shifted(k, -1, nz, g.boundary);
          out.comp[2][idx] = (f.at(i, j, kp) - f.at(i, j, km)) / (2.0 * g.h(2));
        }
      }
  return out;
}

ScalarField laplacian_fd(const ScalarField& f) {
  const Grid& g = f.grid;
  ScalarField out(g);
  const int nx = g.n[0], ny = g.n[1], nz = g.n[2];
  const double ix2 = 1.0 / (g.h(0) * g.h(0));
  const double iy2 = 1.0 / (g.h(1) * g.h(1));
  const double iz2 = g.dim == 3 ? 1.0 / (g.h(2) * g.h(2)) : 0.0;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const double c = f.at(i, j, k);
        double v = (f.at(shifted(i, 1, nx, g.boundary), j, k) - 2.0 * c +
                    f.at(shifted(i, -1, nx, g.boundary), j, k)) *
                   ix2;
        v += (f.at(i, shifted(j, 1, ny, g.boundary), k) - 2.0 * c +
              f.at(i, shifted(j, -1, ny, g.boundary), k)) *
             iy2;
        if (g.dim == 3)
          v += (f.at(i, j, shifted(k, 1, nz, g.boundary)) - 2.0 * c +
                f.at(i, j, shifted(k, -1, nz, g.boundary))) *
               iz2;
        out.data[f.index(i, j, k)] = v;
      }
  return out;
}

VectorField gradient(const ScalarField& f) {
  return f.grid.boundary == Boundary::periodic ? gradient_spectral(f) : gradient_fd(f);
}

ScalarField laplacian(const ScalarField& f) {
  return f.grid.boundary == Boundary::periodic ? laplacian_spectral(f) : laplacian_fd(f);
}

ScalarField distance_to_samples(const Grid& g, const std::vector<Vec2>& samples) {
  if (g.dim != 2) throw std::invalid_argument("distance_to_samples: 2D grids only");
  if (samples.empty()) throw std::invalid_argument("distance_to_samples: no samples");
  ScalarField out(g);
  const int nx = g.n[0], ny = g.n[1];
  std::vector<double> sx(samples.size()), sy(samples.size());
  for (size_t s = 0; s < samples.size(); ++s) {
    sx[s] = samples[s].x;
    sy[s] = samples[s].y;
  }
  const size_t m = samples.size();
  for (int j = 0; j < ny; ++j) {
    const double y = g.coord(1, j);
    for (int i = 0; i < nx; ++i) {
      const double x = g.coord(0, i);
      double best = std::numeric_limits<double>::infinity();
      for (size_t s = 0; s < m; ++s) {
        const double dx = x - sx[s], dy = y - sy[s];
        const double d2 = dx * dx + dy * dy;
        if (d2 < best) best = d2;
      }
      out.data[out.index(i, j)] = std::sqrt(best);
    }
  }
  return out;
}

ScalarField distance_to_segments(const Grid& g,
                                 const std::vector<std::vector<Vec2>>& polylines) {
  if (g.dim != 2) throw std::invalid_argument("distance_to_segments: 2D grids only");
  // flatten to (anchor, direction, 1/|direction|^2) triples
  struct Seg {
    double ax, ay, dx, dy, inv;
  };
  std::vector<Seg> segs;
  for (const auto& poly : polylines)
    for (size_t s = 0; s + 1 < poly.size(); ++s) {
      const double dx = poly[s + 1].x - poly[s].x, dy = poly[s + 1].y - poly[s].y;
      const double len2 = dx * dx + dy * dy;
      if (len2 > 0.0) segs.push_back({poly[s].x, poly[s].y, dx, dy, 1.0 / len2});
    }
  if (segs.empty()) throw std::invalid_argument("distance_to_segments: no segments");
  ScalarField out(g);
  const int nx = g.n[0], ny = g.n[1];
  for (int j = 0; j < ny; ++j) {
    const double y = g.coord(1, j);
    for (int i = 0; i < nx; ++i) {
      const double x = g.coord(0, i);
      double best = std::numeric_limits<double>::infinity();
      for (const Seg& s : segs) {
        const double px = x - s.ax, py = y - s.ay;
        double t = (px * s.dx + py * s.dy) * s.inv;
        t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
        const double ex = px - t * s.dx, ey = py - t * s.dy;
        const double d2 = ex * ex + ey * ey;
        if (d2 < best) best = d2;
      }
      out.data[out.index(i, j)] = std::sqrt(best);
    }
  }
  return out;
}

void apply_sign_by_parity(ScalarField& dist, const std::vector<Vec2>& loop) {
  const Grid& g = dist.grid;
  if (g.dim != 2) throw std::invalid_argument("apply_sign_by_parity: 2D grids only");
  if (loop.size() < 3) throw std::invalid_argument("apply_sign_by_parity: degenerate loop");
  const int nx = g.n[0], ny = g.n[1];
  const size_t m = loop.size();
  for (int j = 0; j < ny; ++j) {
    const double y = g.coord(1, j);
    for (int i = 0; i < nx; ++i) {
      const double x = g.coord(0, i);
      bool inside = false;
      for (size_t s = 0; s < m; ++s) {
        const Vec2& a = loop[s];
        const Vec2& b = loop[(s + 1) % m];
        if ((a.y > y) != (b.y > y)) {
          const double xc = a.x + (y - a.y) / (b.y - a.y) * (b.x - a.x);
          if (x < xc) inside = !inside;
        }
      }
      if (inside) dist.data[dist.index(i, j)] *= -1.0;
    }
  }
}

namespace {
constexpr char kMagic[] = "ACFLD1";
}

void write_field(const ScalarField& f, const std::string& path) {
  if (f.grid.dim != 2) throw std::invalid_argument("write_field: 2D fields only");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_field: cannot open " + path);
  char header[64];
  std::memset(header, ' ', sizeof header);
  const Grid& g = f.grid;
  // %.17g round-trips the spacings exactly; the origin is not stored, fields
  // come back anchored at zero
  const int written = std::snprintf(
      header, sizeof header, "%s %d %d %d %.17g %.17g %c", kMagic, g.dim, g.n[0], g.n[1],
      g.h(0), g.h(1), g.boundary == Boundary::periodic ? 'P' : 'N');
  if (written < 0 || written >= static_cast<int>(sizeof header))
    throw std::runtime_error("write_field: header overflow");
  header[written] = ' ';
  header[63] = '\n';
  os.write(header, sizeof header);
  static_assert(sizeof(double) == 8);
  os.write(reinterpret_cast<const char*>(f.data.data()),
           static_cast<std::streamsize>(f.data.size() * sizeof(double)));
  if (!os) throw std::runtime_error("write_field: write failed for " + path);
}

ScalarField read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_field: cannot open " + path);
  char header[65] = {};
  is.read(header, 64);
  if (!is) throw std::runtime_error("read_field: truncated header in " + path);
  char magic[16] = {};
  int dim = 0, nx = 0, ny = 0;
  double hx = 0, hy = 0;
  char bmode = 0;
  if (std::sscanf(header, "%15s %d %d %d %lf %lf %c", magic, &dim, &nx, &ny, &hx, &hy,
                  &bmode) != 7 ||
      std::strcmp(magic, kMagic) != 0 || dim != 2)
    throw std::runtime_error("read_field: bad header in " + path);
  Grid g(2, {0.0, 0.0, 0.0}, {hx * nx, hy * ny, 0.0}, {nx, ny, 1},
         bmode == 'P' ? Boundary::periodic : Boundary::neumann);
  ScalarField f(g);
  is.read(reinterpret_cast<char*>(f.data.data()),
          static_cast<std::streamsize>(f.data.size() * sizeof(double)));
  if (!is) throw std::runtime_error("read_field: truncated data in " + path);
  return f;
}

void write_field_csv(const ScalarField& f, const std::string& path) {
  if (f.grid.dim != 2) throw std::invalid_argument("write_field_csv: 2D fields only");
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_field_csv: cannot open " + path);
  os << "x,y,value\n";
  char buf[96];
  for (int j = 0; j < f.grid.n[1]; ++j)
    for (int i = 0; i < f.grid.n[0]; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", f.grid.coord(0, i),
                    f.grid.coord(1, j), f.at(i, j));
      os << buf;
    }
}

}  // namespace anicurv
