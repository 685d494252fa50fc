#pragma once

#include <functional>
#include <string>
#include <vector>

#include "aimspec/polyrat.hpp"

namespace aimspec {

enum class ScalarMode { exact, float64 };

/// y'' = lambda0 y' + s0 y with lambda0 = L/D and s0 = S/D over one shared
/// denominator. The open interval (lo, hi) is where the problem lives.
struct AimProblem {
  Poly<double> lambda_num;
  Poly<double> s_num;
  Poly<double> den;
  double lo = 0.0;
  double hi = 0.0;

  /// Brings two rational functions over a common denominator (product of
  /// the two when they differ). Throws ParameterError if lambda0 == 0.
  static AimProblem from(const RationalFn<double>& lambda0, const RationalFn<double>& s0,
                         double lo, double hi);

  RationalFn<double> lambda0() const { return {lambda_num, den}; }
  RationalFn<double> s0() const { return {s_num, den}; }
};

/// lambda_k = lam[k] / den^(k+1), s_k = s[k] / den^(k+1).
template <class T>
struct AimIterates {
  Poly<T> den;
  std::vector<Poly<T>> lam;
  std::vector<Poly<T>> s;

  RationalFn<T> lambda(std::size_t k) const { return {lam.at(k), poly_pow(den, k + 1)}; }
  RationalFn<T> s_fn(std::size_t k) const { return {s.at(k), poly_pow(den, k + 1)}; }
};

/// Runs the recurrence up to k_max. In exact mode the double coefficients are
/// lifted to integers under a shared power-of-two scale (ratios unchanged).
/// Throws DegreeOverflowError once a numerator degree exceeds degree_cap.
template <class T>
AimIterates<T> aim_iterate(const AimProblem& problem, int k_max, int degree_cap = 400);

/// (lambda_k s_{k-1} - lambda_{k-1} s_k)(x0) divided by the larger of the two
/// products' magnitudes; 0 when both products vanish.
double quantization_residual(const AimProblem& problem, int k, double x0,
                             ScalarMode mode = ScalarMode::exact, int degree_cap = 400);

struct SpectralFamily {
  std::function<AimProblem(double)> build;
  std::string param_name;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> x0_candidates;
};

struct AimConfig {
  ScalarMode mode = ScalarMode::exact;
  double eigen_tol = 1e-10;
  std::vector<int> k_schedule{4, 8, 16, 24, 32, 40};
  int scan_points = 400;
  int degree_cap = 400;
  double x0_tol = 1e-8;
  /// A root whose sign change disappears at higher k is kept if the
  /// residual there is still this small (coincident double roots).
  double stationary_tol = 1e-9;
  double lambda0_clearance = 1e-6;
};

struct AimRoot {
  double value = 0.0;
  int k = 0;
  double residual = 0.0;
  double spread = 0.0;
};

struct QuantizationResult {
  std::vector<AimRoot> roots;
  int iterations_used = 0;
};

/// Lowest n_roots converged roots in ascending order. Throws
/// MissingBracketError or NonConvergenceError when fewer are available.
QuantizationResult solve_quantization(const SpectralFamily& family, int n_roots,
                                      const AimConfig& cfg = {});

/// Max minus min of the root near p_star refined at each x0 candidate.
double x0_independence_check(const SpectralFamily& family, double p_star, int k,
                             const AimConfig& cfg = {});

}  // namespace aimspec
