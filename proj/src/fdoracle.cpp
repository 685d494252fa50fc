#include "aimspec/fdoracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "aimspec/errors.hpp"

namespace aimspec {

void FdGrid::validate() const {
  if (n_points < 200) throw ConfigError("FD grid needs at least 200 points");
  if (!(r_min > 0.0) || !std::isfinite(r_max)) throw ConfigError("FD grid needs 0 < r_min");
  if (!(r_min <= 1e-4 * r_max)) throw ConfigError("FD grid needs r_min <= 1e-4 r_max");
}

namespace {

double coulomb_length(const PotentialSpec& spec, const PhysicalContext& ctx) {
  const CentralPart v1 = decompose_potential(spec, ctx).v1;
  return v1.coulomb > 0.0 ? ctx.hbar * ctx.hbar / (ctx.m0 * v1.coulomb) : 1.0;
}

double energy_scale(const PotentialSpec& spec, const PhysicalContext& ctx) {
  const CentralPart v1 = decompose_potential(spec, ctx).v1;
  const double s = ctx.m0 * v1.coulomb * v1.coulomb / (ctx.hbar * ctx.hbar);
  return s > 0.0 ? s : 1.0;
}

/// -y'' + Q y = E W y on x = ln r, with R = sqrt(r) y.
struct Pencil {
  std::vector<double> Q, W;
  double dx = 0.0;
  double x_min = 0.0;
};

Pencil build_pencil(const RadialEquation& eq, double L2, double r_min, double r_max, int n) {
  Pencil p;
  const double x0 = std::log(r_min), x1 = std::log(r_max);
  p.dx = (x1 - x0) / (n + 1);
  p.x_min = x0;
  p.Q.resize(n);
  p.W.resize(n);
  for (int i = 0; i < n; ++i) {
    const double r = std::exp(x0 + (i + 1) * p.dx);
    const double f = eq.f(r);
    // R'' + (g (E - V1)/f^2 - U0) R = 0, U0 the E-independent rest.
    const double U = eq.g * eq.v1(r) / (f * f) + L2 / (r * r) + eq.rf_coeff / (r * f) +
                     eq.ff_coeff / (f * f);
    p.Q[i] = 0.25 + r * r * U;
    p.W[i] = eq.g * r * r / (f * f);
  }
  return p;
}

/// Number of eigenvalues below E (negative LDL^T pivots of T - E W).
int count_below(const Pencil& p, double E) {
  const double inv = 1.0 / (p.dx * p.dx);
  int c = 0;
  double piv = 1.0;
  for (std::size_t i = 0; i < p.Q.size(); ++i) {
    double d = 2.0 * inv + p.Q[i] - E * p.W[i];
    if (i > 0) d -= inv * inv / piv;
    if (d == 0.0) d = -1e-300;
    if (d < 0.0) ++c;
    piv = d;
  }
  return c;
}

double kth_eigenvalue(const Pencil& p, int k, double lo, double hi) {
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(p, mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi - lo <= 4e-16 * std::max(1e-300, std::abs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

double lower_bound(const Pencil& p) {
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.Q.size(); ++i) lo = std::min(lo, p.Q[i] / p.W[i]);
  return lo - 1.0 - std::abs(lo);
}

/// Inverse iteration for the eigenvector at E; returns (nodes, tail fraction).
std::pair<int, double> eigenvector_shape(const Pencil& p, double E) {
  const std::size_t n = p.Q.size();
  const double inv = 1.0 / (p.dx * p.dx);
  const double shift = E * (1.0 + 1e-13) + 1e-300;
  std::vector<double> y(n, 1.0), c(n), d(n);
  for (int it = 0; it < 3; ++it) {
    // Thomas algorithm on (T - shift W) z = W y.
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = p.W[i] * y[i];
    double prev_c = 0.0, prev_d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double b = 2.0 * inv + p.Q[i] - shift * p.W[i];
      const double a = i > 0 ? -inv : 0.0;
      double m = b - a * prev_c;
      if (m == 0.0) m = 1e-300;
      c[i] = -inv / m;
      d[i] = (rhs[i] - a * prev_d) / m;
      prev_c = c[i];
      prev_d = d[i];
    }
    y[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) y[i] = d[i] - c[i] * y[i + 1];
    double big = 0.0;
    for (double v : y) big = std::max(big, std::abs(v));
    for (double& v : y) v /= big;
  }
  int nodes = 0;
  int last = 0;
  double total = 0.0, tail = 0.0;
  const std::size_t tail_start = n - n / 20;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = p.W[i] * y[i] * y[i];
    total += w;
    if (i >= tail_start) tail += w;
    if (std::abs(y[i]) < 1e-8) continue;
    const int s = y[i] < 0.0 ? -1 : 1;
    if (last != 0 && s != last) ++nodes;
    last = s;
  }
  return {nodes, total > 0.0 ? tail / total : 0.0};
}

std::vector<double> grid_eigenvalues(const Pencil& p, int count, double threshold) {
  const double lo = lower_bound(p);
  const int available = std::min(count, count_below(p, threshold));
  std::vector<double> out;
  for (int k = 0; k < available; ++k) out.push_back(kth_eigenvalue(p, k, lo, threshold));
  return out;
}

}  // namespace

FdGrid default_fd_grid(const PotentialSpec& spec, const PhysicalContext& ctx) {
  const double a0 = coulomb_length(spec, ctx);
  return {1e-12 * a0, 1e10 * a0, 10000};
}

double continuum_threshold(const PotentialSpec& spec, const PhysicalContext& ctx, double ell) {
  const RadialEquation eq = build_separated(spec, ctx).radial;
  const double e = ctx.epsilon;
  if (e == 0.0) return eq.v1.shift;
  // Limit of Q/W as r -> infinity.
  const double Qinf = 0.25 + ell * (ell + 1.0) + eq.rf_coeff / e + eq.ff_coeff / (e * e) +
                      eq.g * eq.v1.shift / (e * e);
  return Qinf * e * e / eq.g;
}

std::vector<double> fd_raw_eigenvalues(const PotentialSpec& spec, const PhysicalContext& ctx,
                                       double ell, int count, const FdGrid& grid) {
  grid.validate();
  ctx.validate();
  const RadialEquation eq = build_separated(spec, ctx).radial;
  const Pencil p = build_pencil(eq, ell * (ell + 1.0), grid.r_min, grid.r_max, grid.n_points);
  return grid_eigenvalues(p, count, continuum_threshold(spec, ctx, ell));
}

std::vector<FdLevel> fd_radial_levels(const PotentialSpec& spec, const PhysicalContext& ctx,
                                      double ell, int count, const FdGrid& grid) {
  grid.validate();
  ctx.validate();
  if (count < 1) throw ConfigError("FD level count must be >= 1");
  const RadialEquation eq = build_separated(spec, ctx).radial;
  const double L2 = ell * (ell + 1.0);
  const double threshold = continuum_threshold(spec, ctx, ell);
  const double scale = energy_scale(spec, ctx);
  constexpr int kMaxPoints = 320000;
  constexpr int kMaxExpansions = 4;

  FdGrid g = grid;
  for (int expand = 0;; ++expand) {
    int n = g.n_points;
    std::vector<FdLevel> out;
    bool tail_ok = true;
    for (;;) {
      const Pencil coarse = build_pencil(eq, L2, g.r_min, g.r_max, n);
      const Pencil fine = build_pencil(eq, L2, g.r_min, g.r_max, 2 * n + 1);
      const std::vector<double> ec = grid_eigenvalues(coarse, count, threshold);
      const std::vector<double> ef = grid_eigenvalues(fine, count, threshold);
      const std::size_t m = std::min(ec.size(), ef.size());
      double worst = 0.0;
      out.clear();
      for (std::size_t k = 0; k < m; ++k) {
        FdLevel lv;
        lv.E_coarse = ec[k];
        lv.E_fine = ef[k];
        lv.E = (4.0 * ef[k] - ec[k]) / 3.0;
        lv.n_points = n;
        lv.r_max = g.r_max;
        worst = std::max(worst, std::abs(ef[k] - ec[k]) / std::max(std::abs(lv.E), 1e-2 * scale));
        out.push_back(lv);
      }
      if (worst <= 1e-7 || 2 * n > kMaxPoints) {
        if (worst > 1e-5) {
          throw UnresolvedStateError("FD grids disagree by " + std::to_string(worst) +
                                     " relative at n = " + std::to_string(n));
        }
        tail_ok = true;
        for (FdLevel& lv : out) {
          const auto [nodes, tail] = eigenvector_shape(fine, lv.E_fine);
          lv.nodes = nodes;
          lv.tail = tail;
          if (tail >= 1e-10) tail_ok = false;
        }
        break;
      }
      n *= 2;
    }
    if (tail_ok || expand >= kMaxExpansions) return out;
    g.r_max *= 1e3;
  }
}

std::vector<double> fd_radial_eigenvalues(const PotentialSpec& spec, const PhysicalContext& ctx,
                                          double ell, int count, const FdGrid& grid) {
  std::vector<double> out;
  for (const FdLevel& lv : fd_radial_levels(spec, ctx, ell, count, grid)) out.push_back(lv.E);
  return out;
}

}  // namespace aimspec
