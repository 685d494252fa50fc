#include "aimspec/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "aimspec/errors.hpp"

namespace aimspec {

LogGamma ln_gamma(double x) {
  if (!std::isfinite(x)) throw ParameterError("ln_gamma of non-finite argument");
  if (x <= 0.0 && x == std::floor(x)) {
    throw PoleError("Gamma pole at " + std::to_string(x));
  }
  if (x > 0.0) return {std::lgamma(x), 1};
  // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
  const double s = std::sin(std::numbers::pi * x);
  return {std::log(std::numbers::pi) - std::log(std::abs(s)) - std::lgamma(1.0 - x),
          s > 0.0 ? 1 : -1};
}

double gamma_fn(double x) {
  const LogGamma lg = ln_gamma(x);
  return lg.sign * std::exp(lg.value);
}

double pochhammer(double a, unsigned i) {
  double p = 1.0;
  for (unsigned m = 0; m < i; ++m) p *= a + m;
  return p;
}

double hyp2f1_terminating(unsigned n, double b, double c, double z) {
  double term = 1.0;
  double sum = 1.0;
  for (unsigned m = 0; m < n; ++m) {
    const double cm = c + m;
    if (cm == 0.0) {
      throw ParameterError("2F1 denominator Pochhammer (c)_" + std::to_string(m + 1) +
                           " vanishes for c = " + std::to_string(c));
    }
    term *= (-static_cast<double>(n) + m) * (b + m) / (cm * (m + 1.0)) * z;
    sum += term;
  }
  return sum;
}

QuadratureRule gauss_legendre(unsigned n) {
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (unsigned i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-like initial guess for the i-th largest root, then Newton.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (unsigned k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0, p1 = x;
    for (unsigned k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) {
      p1 = x;
      p0 = 1.0;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

const QuadratureRule& default_rule() {
  static const QuadratureRule rule = gauss_legendre(32);
  return rule;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureRule& rule, unsigned panels) {
  if (panels == 0) throw ParameterError("integrate needs at least one panel");
  const double h = (b - a) / panels;
  double total = 0.0;
  for (unsigned p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double x = mid + 0.5 * h * rule.nodes[i];
      const double y = f(x);
      if (!std::isfinite(y)) {
        throw NonFiniteSampleError("integrand is not finite at x = " + std::to_string(x));
      }
      s += rule.weights[i] * y;
    }
    total += 0.5 * h * s;
  }
  return total;
}

double integrate_default(const std::function<double(double)>& f, double a, double b) {
  const QuadratureRule& rule = default_rule();
  const double coarse = integrate(f, a, b, rule, 16);
  const double fine = integrate(f, a, b, rule, 32);
  if (std::abs(fine - coarse) <= 1e-9 * std::abs(fine)) return fine;
  return integrate(f, a, b, rule, 64);
}

double find_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (!(fa * fb < 0.0)) {
    throw NoBracketError("no sign change on [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
  }
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < 500; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      // Inverse quadratic interpolation, or secant when only two points.
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
      const double min2 = std::abs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
  }
  return b;
}

}  // namespace aimspec
