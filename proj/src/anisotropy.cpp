#include "anicurv/anisotropy.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace anicurv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t;
}

// linear ramp 0 on [0,1/4], 1 on [1/2,inf), slope 4 in between
inline double ramp(double s) {
  if (s <= 0.25) return 0.0;
  if (s >= 0.5) return 1.0;
  return 4.0 * (s - 0.25);
}

inline double ramp_d(double s) { return (s > 0.25 && s < 0.5) ? 4.0 : 0.0; }

}  // namespace

void Anisotropy::finalize() {
  const int n = 1 << 13;
  double mn = std::numeric_limits<double>::infinity();
  double mx = -mn, lip = 0.0;
  for (int j = 0; j < n; ++j) {
    const double th = kTwoPi * j / n;
    const double v = at_angle(th);
    if (!(v > 0.0)) throw std::invalid_argument("Anisotropy: values must be positive");
    mn = std::min(mn, v);
    mx = std::max(mx, v);
    lip = std::max(lip, std::abs(dtheta_at(th)));
    // evenness spot check
    if ((j & 63) == 0) {
      const double w = at_angle(th + std::numbers::pi);
      if (std::abs(v - w) > 1e-9 * std::max(1.0, std::abs(v)))
        throw std::invalid_argument("Anisotropy: not even");
    }
  }
  min_ = mn;
  max_ = mx;
  lipschitz_ = lip;
}

Anisotropy Anisotropy::from_function(std::function<double(double)> value,
                                     std::function<double(double)> dtheta) {
  Anisotropy a;
  a.value_ = std::move(value);
  a.dtheta_ = std::move(dtheta);
  a.finalize();
  return a;
}

Anisotropy Anisotropy::isotropic() {
  return from_function([](double) { return 1.0; }, [](double) { return 0.0; });
}

Anisotropy Anisotropy::fourfold(double beta) {
  if (!(beta > -1.0)) throw std::invalid_argument("fourfold: beta must exceed -1");
  return from_function(
      [beta](double th) {
        const double c = std::cos(2.0 * th);
        return 1.0 + beta * c * c;
      },
      [beta](double th) { return -2.0 * beta * std::sin(4.0 * th); });
}

Anisotropy Anisotropy::smoothed_l1(double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("smoothed_l1: rho must be positive");
  const double r2 = rho * rho;
  return from_function(
      [r2](double th) {
        const double c = std::cos(th), s = std::sin(th);
        return std::sqrt(c * c + r2) + std::sqrt(s * s + r2);
      },
      [r2](double th) {
        const double c = std::cos(th), s = std::sin(th);
        return -c * s / std::sqrt(c * c + r2) + s * c / std::sqrt(s * s + r2);
      });
}

Anisotropy Anisotropy::from_samples(std::vector<double> values) {
  if (values.size() < 8 || values.size() % 2 != 0)
    throw std::invalid_argument("from_samples: need an even count of at least 8 samples");
  const int n = static_cast<int>(values.size());
  for (int j = 0; j < n / 2; ++j)
    if (std::abs(values[j] - values[j + n / 2]) > 1e-9 * std::max(1.0, std::abs(values[j])))
      throw std::invalid_argument("from_samples: samples are not even under nu -> -nu");
  Anisotropy a;
  a.samples_ = std::move(values);
  a.finalize();
  return a;
}

double Anisotropy::at_angle(double theta) const {
  if (!samples_.empty()) {
    const int n = static_cast<int>(samples_.size());
    const double x = wrap_angle(theta) / kTwoPi * n;
    const int j = std::min(static_cast<int>(x), n - 1);
    const double f = x - j;
    return samples_[j] * (1.0 - f) + samples_[(j + 1) % n] * f;
  }
  return value_(theta);
}

double Anisotropy::dtheta_at(double theta) const {
  if (!samples_.empty()) {
    const int n = static_cast<int>(samples_.size());
    const double x = wrap_angle(theta) / kTwoPi * n;
    const int j = std::min(static_cast<int>(x), n - 1);
    return (samples_[(j + 1) % n] - samples_[j]) * n / kTwoPi;
  }
  return dtheta_(theta);
}

double Anisotropy::evaluate(const double* z, int dim) const {
  if (dim != 2 && dim != 3) throw std::invalid_argument("evaluate: dim must be 2 or 3");
  return at_angle(std::atan2(z[1], z[0]));
}

double Anisotropy::extend(const double* z, int dim, double r_eps) const {
  if (!(r_eps > 0.0)) throw std::invalid_argument("extend: r_eps must be positive");
  double n2 = 0.0;
  for (int k = 0; k < dim; ++k) n2 += z[k] * z[k];
  const double s = std::sqrt(n2 / (r_eps * r_eps + n2));
  const double xi = ramp(s);
  const double floor_val = 0.25 * min_;
  if (xi == 0.0) return floor_val;
  return xi * evaluate(z, dim) + (1.0 - xi) * floor_val;
}

Vec2 Anisotropy::extend_grad(Vec2 z, double r_eps) const {
  const double n2 = z.norm2();
  if (n2 == 0.0) return {0.0, 0.0};
  const double denom = r_eps * r_eps + n2;
  const double s = std::sqrt(n2 / denom);
  const double xi = ramp(s);
  const double nrm = std::sqrt(n2);
  Vec2 g{0.0, 0.0};
  const double theta = z.angle();
  if (xi > 0.0) {
    // tangential part
    g += xi * dtheta_at(theta) / n2 * z.perp();
  }
  const double dxi = ramp_d(s);
  if (dxi != 0.0) {
    // radial part through the ramp
    const double ds_dn = r_eps * r_eps / (denom * std::sqrt(denom));
    const double dphi = at_angle(theta) - 0.25 * min_;
    g += dxi * ds_dn * dphi / nrm * z;
  }
  return g;
}

double Anisotropy::bound() const { return std::max(max_, 1.0 / min_); }

double Anisotropy::lipschitz() const { return lipschitz_; }

namespace {

// Support of the polygon cut out by the sampled constraints x . u_j <= phi_j,
// i.e. the exact polar of the sampled polar: pol(alpha) = max_j
// |cos(alpha - theta_j)| / phi_j (evenness folds in the absolute value).
struct SampledPolar {
  const std::vector<double>& phi;
  int n;

  double operator()(double alpha) const {
    double best = 0.0;
    for (int j = 0; j < n; ++j) {
      const double c = std::abs(std::cos(alpha - kTwoPi * j / n));
      best = std::max(best, c / phi[j]);
    }
    return best;
  }
};

}  // namespace

Anisotropy Anisotropy::convex_envelope(int n_dirs) const {
  if (n_dirs < 16) throw std::invalid_argument("convex_envelope: n_dirs must be at least 16");
  if (n_dirs % 2 != 0) throw std::invalid_argument("convex_envelope: n_dirs must be even");
  const int n = n_dirs;
  std::vector<double> phi(n);
  for (int j = 0; j < n; ++j) phi[j] = at_angle(kTwoPi * j / n);

  // polar on the shared grid; |cos| depends only on the index difference
  std::vector<double> ctab(n);
  for (int d = 0; d < n; ++d) ctab[d] = std::abs(std::cos(kTwoPi * d / n));
  std::vector<double> pol(n, 0.0);
  for (int k = 0; k < n; ++k) {
    double best = 0.0;
    for (int j = 0; j < n; ++j) {
      const double v = ctab[(k - j + n) % n] / phi[j];
      if (v > best) best = v;
    }
    pol[k] = best;
  }

  SampledPolar exact_pol{phi, n};

  std::vector<double> out(n);
  const double dth = kTwoPi / n;
  for (int i = 0; i < n; ++i) {
    const double nu = kTwoPi * i / n;
    // coarse pass over the grid
    int kb = 0;
    double best = 0.0;
    for (int k = 0; k < n; ++k) {
      const double v = ctab[(i - k + n) % n] / pol[k];
      if (v > best) {
        best = v;
        kb = k;
      }
    }
    // local refinement against the exact sampled polar
    auto g = [&](double w) { return std::abs(std::cos(nu - w)) / exact_pol(w); };
    double lo = kTwoPi * kb / n - dth, hi = kTwoPi * kb / n + dth;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = g(x1), f2 = g(x2);
    for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + gr * (hi - lo);
        f2 = g(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - gr * (hi - lo);
        f1 = g(x1);
      }
    }
    out[i] = std::max(best, std::max(f1, f2));
  }
  return from_samples(std::move(out));
}

void Anisotropy::save_table(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_table: cannot open " + path);
  os << "theta,value\n";
  const int n = sampled() ? static_cast<int>(samples_.size()) : 1024;
  char buf[64];
  for (int j = 0; j < n; ++j) {
    const double th = kTwoPi * j / n;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", th, at_angle(th));
    os << buf;
  }
}

Anisotropy Anisotropy::load_table(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_table: cannot open " + path);
  std::string line;
  std::vector<double> thetas, values;
  while (std::getline(is, line)) {
    if (line.empty() || std::isalpha(static_cast<unsigned char>(line[0]))) continue;
    std::istringstream ls(line);
    double th, v;
    char comma;
    if (!(ls >> th >> comma >> v)) throw std::runtime_error("load_table: malformed row: " + line);
    thetas.push_back(th);
    values.push_back(v);
  }
  const int n = static_cast<int>(values.size());
  if (n < 8) throw std::runtime_error("load_table: too few rows");
  for (int j = 0; j < n; ++j)
    if (std::abs(thetas[j] - kTwoPi * j / n) > 1e-9)
      throw std::runtime_error("load_table: angles must form the uniform grid 2*pi*j/n");
  return from_samples(std::move(values));
}

}  // namespace anicurv
