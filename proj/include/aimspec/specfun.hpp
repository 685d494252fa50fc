#pragma once

#include <functional>
#include <vector>

namespace aimspec {

/// ln|Gamma(x)| with the sign of Gamma(x) carried separately.
struct LogGamma {
  double value;
  int sign;
};

/// Throws PoleError at non-positive integers.
LogGamma ln_gamma(double x);

/// Gamma(x) rebuilt from ln_gamma; may overflow to +-inf for large x.
double gamma_fn(double x);

/// Rising factorial (a)_i as a direct product, so negative integers are exact.
double pochhammer(double a, unsigned i);

/// 2F1(-n, b; c; z) as the finite sum over m = 0..n. Valid for every real z.
/// Throws ParameterError when some (c)_m with m <= n vanishes.
double hyp2f1_terminating(unsigned n, double b, double c, double z);

/// Gauss-Legendre nodes/weights on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadratureRule gauss_legendre(unsigned n);

/// The 32-node rule shared by default integrations.
const QuadratureRule& default_rule();

/// Composite rule over `panels` equal panels. Throws NonFiniteSampleError.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureRule& rule, unsigned panels);

/// 32-node, 16 panels; if 32 panels disagree by more than 1e-9 relative,
/// one more doubling is made and that value returned.
double integrate_default(const std::function<double(double)>& f, double a, double b);

/// Brent's method with a bisection fallback. Requires f(lo) f(hi) <= 0
/// (NoBracketError otherwise); returns when the bracket is narrower than tol.
double find_root(const std::function<double(double)>& f, double lo, double hi, double tol);

}  // namespace aimspec
