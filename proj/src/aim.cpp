#include "aimspec/aim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "aimspec/errors.hpp"
#include "aimspec/specfun.hpp"

namespace aimspec {

AimProblem AimProblem::from(const RationalFn<double>& lambda0, const RationalFn<double>& s0,
                            double lo, double hi) {
  AimProblem p;
  if (lambda0.den() == s0.den()) {
    p.lambda_num = lambda0.num();
    p.s_num = s0.num();
    p.den = lambda0.den();
  } else {
    p.lambda_num = lambda0.num() * s0.den();
    p.s_num = s0.num() * lambda0.den();
    p.den = lambda0.den() * s0.den();
  }
  if (p.lambda_num.is_zero()) throw ParameterError("lambda0 vanishes identically");
  p.lo = lo;
  p.hi = hi;
  return p;
}

namespace {

template <class T>
struct Lifted {
  Poly<T> L, S, D;
};

Lifted<double> lift(const AimProblem& p, double*) { return {p.lambda_num, p.s_num, p.den}; }

Lifted<mpz_class> lift(const AimProblem& p, mpz_class*) {
  // Every finite double is m * 2^e; scale all three by the largest 2^-e.
  mpz_class scale = 1;
  for (const Poly<double>* poly : {&p.lambda_num, &p.s_num, &p.den}) {
    for (double c : poly->coeffs()) {
      mpq_class q(c);
      q.canonicalize();
      if (q.get_den() > scale) scale = q.get_den();
    }
  }
  auto conv = [&](double c) {
    mpq_class q = mpq_class(c) * scale;
    q.canonicalize();
    return mpz_class(q.get_num());
  };
  return {p.lambda_num.map<mpz_class>(conv), p.s_num.map<mpz_class>(conv),
          p.den.map<mpz_class>(conv)};
}

template <class T>
void check_degree(const Poly<T>& p, int cap, int k) {
  if (p.degree() > cap) {
    throw DegreeOverflowError("AIM iterate " + std::to_string(k) + " has degree " +
                              std::to_string(p.degree()) + " above cap " +
                              std::to_string(cap));
  }
}

}  // namespace

template <class T>
AimIterates<T> aim_iterate(const AimProblem& problem, int k_max, int degree_cap) {
  if (k_max < 1) throw ParameterError("k_max must be at least 1");
  auto [L, S, D] = lift(problem, static_cast<T*>(nullptr));
  const Poly<T> dD = D.derivative();
  AimIterates<T> it;
  it.den = D;
  it.lam.push_back(L);
  it.s.push_back(S);
  for (int k = 1; k <= k_max; ++k) {
    const Poly<T>& P = it.lam.back();
    const Poly<T>& Q = it.s.back();
    const T kk(k);
    Poly<T> Pn = P.derivative() * D - (P * dD) * kk + Q * D + L * P;
    Poly<T> Qn = Q.derivative() * D - (Q * dD) * kk + S * P;
    check_degree(Pn, degree_cap, k);
    check_degree(Qn, degree_cap, k);
    it.lam.push_back(std::move(Pn));
    it.s.push_back(std::move(Qn));
  }
  return it;
}

template AimIterates<double> aim_iterate<double>(const AimProblem&, int, int);
template AimIterates<mpz_class> aim_iterate<mpz_class>(const AimProblem&, int, int);

namespace {

template <class T, class X>
double residual_impl(const AimProblem& problem, int k, const X& x, int cap) {
  const AimIterates<T> it = aim_iterate<T>(problem, k, cap);
  const X a = it.lam[k](x) * it.s[k - 1](x);
  const X b = it.lam[k - 1](x) * it.s[k](x);
  using std::abs;
  const X m = abs(a) > abs(b) ? X(abs(a)) : X(abs(b));
  if (is_zero(m)) return 0.0;
  return to_double(X((a - b) / m));
}

}  // namespace

double quantization_residual(const AimProblem& problem, int k, double x0, ScalarMode mode,
                             int degree_cap) {
  if (k < 1) throw ParameterError("quantization residual needs k >= 1");
  if (!(x0 > problem.lo && x0 < problem.hi)) {
    throw DomainError("x0 = " + std::to_string(x0) + " outside the problem domain");
  }
  if (problem.den(x0) == 0.0) throw PoleError("x0 is a zero of the AIM denominator");
  if (mode == ScalarMode::float64) return residual_impl<double>(problem, k, x0, degree_cap);
  return residual_impl<mpz_class>(problem, k, mpq_class(x0), degree_cap);
}

namespace {

struct Evaluator {
  const SpectralFamily& fam;
  const AimConfig& cfg;

  double operator()(double p, int k, double x0) const {
    try {
      return quantization_residual(fam.build(p), k, x0, cfg.mode, cfg.degree_cap);
    } catch (const DomainError&) {
    } catch (const PoleError&) {
    } catch (const NegativeDiscriminantError&) {
    }
    return std::numeric_limits<double>::quiet_NaN();
  }
};

double root_tol(double p) { return 1e-14 * std::max(1.0, std::abs(p)); }

/// Sign change of the residual closest to p inside [p - hw, p + hw].
std::optional<double> refine_near(const Evaluator& ev, double p, double hw, int k, double x0) {
  const double lo = std::max(ev.fam.lo, p - hw);
  const double hi = std::min(ev.fam.hi, p + hw);
  constexpr int m = 8;
  std::vector<double> xs, fs;
  for (int i = 0; i <= m; ++i) xs.push_back(lo + (hi - lo) * i / m);
  xs.push_back(p);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  for (double x : xs) fs.push_back(ev(x, k, x0));
  std::optional<double> best;
  auto consider = [&](double r) {
    if (!best || std::abs(r - p) < std::abs(*best - p)) best = r;
  };
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (fs[i] == 0.0) consider(xs[i]);
    if (i + 1 < xs.size() && std::isfinite(fs[i]) && std::isfinite(fs[i + 1]) &&
        fs[i] * fs[i + 1] < 0.0) {
      consider(find_root([&](double x) { return ev(x, k, x0); }, xs[i], xs[i + 1],
                         root_tol(p)));
    }
  }
  return best;
}

void check_clearance(const SpectralFamily& fam, double p, const AimConfig& cfg) {
  AimProblem prob;
  try {
    prob = fam.build(p);
  } catch (const Error&) {
    return;
  }
  const double c = cfg.lambda0_clearance;
  for (double x0 : fam.x0_candidates) {
    const double a = prob.lambda_num(x0 - c), b = prob.lambda_num(x0 + c);
    if (prob.lambda_num(x0) == 0.0 || a * b <= 0.0) {
      throw ConfigError("x0 = " + std::to_string(x0) + " lies within " + std::to_string(c) +
                        " of a zero of lambda0");
    }
    if (prob.den(x0) == 0.0) {
      throw ConfigError("x0 = " + std::to_string(x0) + " is a pole of lambda0");
    }
  }
}

/// Root refined at every x0 candidate; stationary roots count as unmoved.
double spread_at(const Evaluator& ev, double p, double hw, int k) {
  double mn = p, mx = p;
  bool first = true;
  for (double x0 : ev.fam.x0_candidates) {
    std::optional<double> r = refine_near(ev, p, hw, k, x0);
    if (!r) {
      const double res = ev(p, k, x0);
      if (std::isfinite(res) && std::abs(res) <= ev.cfg.stationary_tol) r = p;
    }
    if (!r) return std::numeric_limits<double>::infinity();
    if (first) {
      mn = mx = *r;
      first = false;
    } else {
      mn = std::min(mn, *r);
      mx = std::max(mx, *r);
    }
  }
  return mx - mn;
}

double primary_x0(const SpectralFamily& fam) {
  if (fam.x0_candidates.empty()) throw ConfigError("spectral family has no x0 candidates");
  return fam.x0_candidates[fam.x0_candidates.size() / 2];
}

}  // namespace

QuantizationResult solve_quantization(const SpectralFamily& family, int n_roots,
                                      const AimConfig& cfg) {
  if (n_roots < 1) throw ParameterError("n_roots must be positive");
  if (cfg.k_schedule.empty()) throw ConfigError("empty k schedule");
  if (cfg.scan_points < 2) throw ConfigError("scan needs at least two points");
  if (!(family.hi > family.lo)) {
    throw MissingBracketError("empty search range for " + family.param_name);
  }
  const Evaluator ev{family, cfg};
  const double x0 = primary_x0(family);
  const int k0 = cfg.k_schedule.front();
  const double step = (family.hi - family.lo) / (cfg.scan_points - 1);

  std::vector<double> grid(cfg.scan_points), vals(cfg.scan_points);
  for (int i = 0; i < cfg.scan_points; ++i) {
    grid[i] = family.lo + step * i;
    vals[i] = ev(grid[i], k0, x0);
  }
  std::vector<double> seeds;
  for (int i = 0; i < cfg.scan_points; ++i) {
    if (vals[i] == 0.0) {
      seeds.push_back(grid[i]);
    } else if (i + 1 < cfg.scan_points && std::isfinite(vals[i]) &&
               std::isfinite(vals[i + 1]) && vals[i] * vals[i + 1] < 0.0) {
      seeds.push_back(find_root([&](double p) { return ev(p, k0, x0); }, grid[i], grid[i + 1],
                                root_tol(grid[i])));
    }
  }
  // Double roots touch zero without crossing: bracket the extremum instead.
  for (int i = 1; i + 1 < cfg.scan_points; ++i) {
    const double a = vals[i - 1], b = vals[i], c = vals[i + 1];
    if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(c)) || b == 0.0) continue;
    if (a * b <= 0.0 || b * c <= 0.0 || std::abs(b) > std::abs(a) || std::abs(b) > std::abs(c)) continue;
    const double h = 1e-6 * step;
    auto slope = [&](double p) { return ev(p + h, k0, x0) - ev(p - h, k0, x0); };
    const double lo = grid[i - 1] + h, hi = grid[i + 1] - h;
    if (!(slope(lo) * slope(hi) < 0.0)) continue;
    const double p = find_root(slope, lo, hi, root_tol(grid[i]));
    if (std::abs(ev(p, k0, x0)) <= cfg.stationary_tol) seeds.push_back(p);
  }
  std::sort(seeds.begin(), seeds.end());
  std::vector<double> merged;
  for (double s : seeds) {
    if (merged.empty() || s - merged.back() > 1e-12 * step) merged.push_back(s);
  }
  if (static_cast<int>(merged.size()) < n_roots) {
    throw MissingBracketError("found " + std::to_string(merged.size()) +
                              " roots of the " + family.param_name +
                              " quantization residual, need " + std::to_string(n_roots));
  }

  QuantizationResult out;
  int drifted = 0;
  for (double seed : merged) {
    if (static_cast<int>(out.roots.size()) == n_roots) break;
    double p = seed;
    int k_conv = 0;
    for (std::size_t j = 1; j < cfg.k_schedule.size(); ++j) {
      const int k = cfg.k_schedule[j];
      out.iterations_used = std::max(out.iterations_used, k);
      std::optional<double> np = refine_near(ev, p, step, k, x0);
      if (!np) {
        const double res = ev(p, k, x0);
        if (std::isfinite(res) && std::abs(res) <= cfg.stationary_tol) np = p;
      }
      if (!np) break;
      const bool still = std::abs(*np - p) < cfg.eigen_tol * std::max(1.0, std::abs(p));
      p = *np;
      if (still) {
        k_conv = k;
        break;
      }
    }
    if (cfg.k_schedule.size() == 1) k_conv = k0;
    if (k_conv == 0) {
      ++drifted;
      continue;
    }
    check_clearance(family, p, cfg);
    AimRoot root;
    root.value = p;
    root.k = k_conv;
    root.residual = ev(p, k_conv, x0);
    root.spread = spread_at(ev, p, step, k_conv);
    out.roots.push_back(root);
  }
  if (static_cast<int>(out.roots.size()) < n_roots) {
    throw NonConvergenceError(std::to_string(drifted) + " " + family.param_name +
                              " roots drifted with k; only " +
                              std::to_string(out.roots.size()) + " of " +
                              std::to_string(n_roots) + " converged");
  }
  out.iterations_used = std::max(out.iterations_used, k0);
  return out;
}

double x0_independence_check(const SpectralFamily& family, double p_star, int k,
                             const AimConfig& cfg) {
  if (family.x0_candidates.size() <= 1) return 0.0;
  const Evaluator ev{family, cfg};
  const double hw = (family.hi - family.lo) / std::max(1, cfg.scan_points - 1);
  return spread_at(ev, p_star, hw, k);
}

}  // namespace aimspec
