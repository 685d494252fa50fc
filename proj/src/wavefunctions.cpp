#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "aimspec/errors.hpp"
#include "aimspec/potentials.hpp"
#include "aimspec/specfun.hpp"

namespace aimspec {

namespace {

constexpr double kPi = std::numbers::pi;

enum class ThetaKind { pt, makarov, nad };

ThetaKind theta_kind(const PotentialSpec& spec) {
  if (std::holds_alternative<Makarov>(spec)) return ThetaKind::makarov;
  if (std::holds_alternative<NadCoulomb>(spec)) return ThetaKind::nad;
  return ThetaKind::pt;
}

/// log|x| and sign, so products of many factors never overflow.
struct Signed {
  double log_abs = 0.0;
  int sign = 1;
  double value() const { return sign * std::exp(log_abs); }
};

Signed signed_log(double x) {
  if (x == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
  return {std::log(std::abs(x)), x < 0.0 ? -1 : 1};
}

/// 2F1(-n, b; c; z) for large z, as z^n times a polynomial in 1/z.
Signed hyp2f1_log(unsigned n, double b, double c, double z) {
  if (std::abs(z) <= 1.0 || n == 0) return signed_log(hyp2f1_terminating(n, b, c, z));
  // Term m is t_m z^m; accumulate t_m z^(m-n) from the top down.
  std::vector<double> t(n + 1);
  t[0] = 1.0;
  for (unsigned m = 0; m < n; ++m) {
    const double den = (c + m) * (m + 1.0);
    if (den == 0.0) throw ParameterError("2F1 denominator Pochhammer vanishes");
    t[m + 1] = t[m] * (-double(n) + m) * (b + m) / den;
  }
  const double w = 1.0 / z;
  double acc = 0.0;
  for (int m = 0; m <= int(n); ++m) acc = acc * w + t[m];
  Signed s = signed_log(acc);
  const Signed zn = signed_log(z);
  s.log_abs += n * zn.log_abs;
  if (zn.sign < 0 && n % 2 == 1) s.sign = -s.sign;
  return s;
}

void require_radial(const PhysicalContext& ctx, const LevelSolution& lv) {
  if (!(ctx.epsilon > 0.0)) {
    throw ParameterError("radial wavefunction needs eps > 0 (undefined at eps = 0)");
  }
  if (!std::isfinite(lv.radial.u) || !std::isfinite(lv.radial.v)) {
    throw ParameterError("radial exponents are not available for this level");
  }
}

Signed radial_log(const PhysicalContext& ctx, const LevelSolution& lv, double r) {
  if (!(r > 0.0)) throw DomainError("radial factor needs r > 0");
  const double u = lv.radial.u, v = lv.radial.v, e = ctx.epsilon;
  const unsigned n = lv.qn.n_r;
  Signed F = hyp2f1_log(n, n + 2.0 * v + 2.0 * u - 1.0, 2.0 * v, 1.0 + e * r);
  F.log_abs += u * std::log(r) + v * std::log1p(e * r);
  return F;
}

void require_theta(const LevelSolution& lv) {
  if (lv.radial_only || !std::isfinite(lv.theta.first) || !std::isfinite(lv.theta.second)) {
    throw ParameterError("angular exponents are not available (l was given directly)");
  }
}

/// Theta factor as a function of y = cos(theta), with om = 1 - y and op = 1 + y
/// supplied separately to keep precision near the poles.
double theta_of_y(ThetaKind kind, const LevelSolution& lv, double y, double om, double op) {
  const double a = lv.theta.first, b = lv.theta.second;
  const unsigned k = lv.qn.idx;
  switch (kind) {
    case ThetaKind::pt: {
      const double y2 = y * y;
      return std::pow(std::abs(y), a) * std::pow(om * op, b) *
             hyp2f1_terminating(k, k + a + 2.0 * b + 0.5, a + 0.5, y2);
    }
    case ThetaKind::makarov: {
      const double t = op / 2.0;
      return std::pow(t, a) * std::pow(om / 2.0, b) *
             hyp2f1_terminating(k, 2.0 * a + 2.0 * b + k + 1.0, 2.0 * a + 1.0, t);
    }
    case ThetaKind::nad: {
      const double x = y * y;
      return std::pow(x, a) * std::pow(om * op, b) *
             hyp2f1_terminating(k, k + 2.0 * a + 2.0 * b + 0.5, 2.0 * a + 0.5, x);
    }
  }
  return kNaN;
}

/// PTDRSC azimuthal factor as a function of z = cos(alpha phi) and |sin(alpha phi)|.
double phi_of_z(const LevelSolution& lv, double z, double sabs) {
  const unsigned q = lv.qn.q;
  const double mu = lv.mu, nu = lv.nu;
  return std::pow(std::abs(z), mu) * std::pow(sabs, 2.0 * nu) *
         hyp2f1_terminating(q, mu + 2.0 * nu + q, mu + 0.5, z * z);
}

/// Maps (0, 1) onto itself with algebraic clustering at both ends.
struct Sigmoid {
  double m;
  double x(double t) const {
    const double a = std::pow(t, m), b = std::pow(1.0 - t, m);
    return a / (a + b);
  }
  double one_minus_x(double t) const {
    const double a = std::pow(t, m), b = std::pow(1.0 - t, m);
    return b / (a + b);
  }
  double dx(double t) const {
    const double a = std::pow(t, m), b = std::pow(1.0 - t, m);
    return m * std::pow(t * (1.0 - t), m - 1.0) / ((a + b) * (a + b));
  }
};

/// Integral over y in (-1, 1) of g(y, 1-y, 1+y).
double integrate_y(const std::function<double(double, double, double)>& g, double m) {
  const Sigmoid s{m};
  auto upper = [&](double t) {
    const double y = s.x(t);
    return g(y, s.one_minus_x(t), 1.0 + y) * s.dx(t);
  };
  auto lower = [&](double t) {
    const double y = s.x(t);
    return g(-y, 1.0 + y, s.one_minus_x(t)) * s.dx(t);
  };
  return integrate_default(upper, 0.0, 1.0) + integrate_default(lower, 0.0, 1.0);
}

/// Integral over phi in (0, 2 pi) of the product of two PTDRSC phi factors,
/// via 4 * int_0^1 (...) dz / sqrt(1 - z^2).
double integrate_phi(const LevelSolution& a, const LevelSolution& b, double m) {
  const Sigmoid s{m};
  auto f = [&](double t) {
    const double z = s.x(t), om = s.one_minus_x(t);
    const double sabs = std::sqrt(om * (1.0 + z));
    if (sabs == 0.0) return 0.0;
    return phi_of_z(a, z, sabs) * phi_of_z(b, z, sabs) / sabs * s.dx(t);
  };
  return 4.0 * integrate_default(f, 0.0, 1.0);
}

double integrate_cos_phi(double La, double Lb) {
  auto f = [&](double ph) { return std::cos(La * ph) * std::cos(Lb * ph); };
  return integrate(f, 0.0, 2.0 * kPi, default_rule(), 32);
}

struct RadialWindow {
  double x_lo, x_hi;
};

RadialWindow radial_window(const PotentialSpec& spec, const PhysicalContext& ctx,
                           const LevelSolution& a, const LevelSolution& b,
                           RadialMeasure measure) {
  const CentralPart v1 = decompose_potential(spec, ctx).v1;
  const double a0 = v1.coulomb > 0.0 ? ctx.hbar * ctx.hbar / (ctx.m0 * v1.coulomb) : 1.0;
  const double lead = a.radial.u + b.radial.u + 1.0;
  double kappa = -((a.radial.u + a.radial.v + a.qn.n_r) + (b.radial.u + b.radial.v + b.qn.n_r) + 1.0);
  if (measure == RadialMeasure::dr_over_f2) kappa += 2.0;
  if (!(kappa > 0.0)) {
    throw NoBoundStateError("radial integrand is not integrable at infinity");
  }
  return {std::log(a0) - 42.0 / lead - 5.0,
          std::max(std::log(1.0 / ctx.epsilon), std::log(a0)) + 5.0 + 42.0 / kappa};
}

/// Integral over r of R_a R_b (times 1/f^2) in x = ln r, panels of width `w`
/// offset by `shift`, with an n-node rule.
double radial_integral(const PotentialSpec& spec, const PhysicalContext& ctx,
                       const LevelSolution& a, const LevelSolution& b, RadialMeasure measure,
                       double w, double shift, const QuadratureRule& rule) {
  require_radial(ctx, a);
  require_radial(ctx, b);
  const RadialWindow win = radial_window(spec, ctx, a, b, measure);
  const double e = ctx.epsilon;
  auto f = [&](double x) {
    const double r = std::exp(x);
    const Signed ra = radial_log(ctx, a, r), rb = radial_log(ctx, b, r);
    double lg = ra.log_abs + rb.log_abs + x;
    if (measure == RadialMeasure::dr_over_f2) lg -= 2.0 * std::log1p(e * r);
    return ra.sign * rb.sign * std::exp(lg);
  };
  double total = 0.0;
  double x = win.x_lo - shift;
  while (x < win.x_hi) {
    total += integrate(f, x, x + w, rule, 1);
    x += w;
  }
  return total;
}

const QuadratureRule& rule24() {
  static const QuadratureRule r = gauss_legendre(24);
  return r;
}

double theta_integral(ThetaKind kind, const LevelSolution& a, const LevelSolution& b, double m) {
  return integrate_y(
      [&](double y, double om, double op) {
        return theta_of_y(kind, a, y, om, op) * theta_of_y(kind, b, y, om, op);
      },
      m);
}

Signed lg(double x) {
  const LogGamma g = ln_gamma(x);
  return {g.value, g.sign};
}

double exp_signed(double log_abs, int sign) { return sign * std::exp(log_abs); }

/// Closed-form radial constant in its published form (not unit norm in general).
double printed_radial_constant(const PhysicalContext& ctx, const LevelSolution& lv) {
  const double u = lv.radial.u, v = lv.radial.v, e = ctx.epsilon;
  const unsigned n = lv.qn.n_r;
  double Q = 0.0;
  for (unsigned k = 0; k <= n; ++k) {
    const double ck = pochhammer(-double(n), k) * pochhammer(1.0 - 2.0 * v - n, k) /
                      (std::tgamma(k + 1.0) * pochhammer(2.0 - 2.0 * v - 2.0 * u - 2.0 * n, k));
    for (unsigned j = 0; j <= n; ++j) {
      const double cj = pochhammer(-double(n), j) * pochhammer(1.0 - 2.0 * v - n, j) /
                        (std::tgamma(j + 1.0) * pochhammer(2.0 - 2.0 * v - 2.0 * u - 2.0 * n, j));
      const Signed g1 = lg(k + j + 3.0 - 2.0 * v - 2.0 * u - 2.0 * n);
      const Signed g2 = lg(j + k + 4.0 - 2.0 * n - 2.0 * v);
      Q += ck * cj * exp_signed(g1.log_abs - g2.log_abs, g1.sign * g2.sign);
    }
  }
  const double G = gamma_fn(2.0 * u + 1.0);
  if (!(G * Q > 0.0)) {
    throw ParameterError("Gamma(2u+1) Q = " + std::to_string(G * Q) + " is not positive");
  }
  return std::pow(e, u + 0.5) * pochhammer(2.0 * v, n) /
         pochhammer(n + 2.0 * v + 2.0 * u - 1.0, n) / std::sqrt(G * Q);
}

double sqrt_from_log(double log_c2) { return std::exp(0.5 * log_c2); }

double printed_theta_constant(ThetaKind kind, const LevelSolution& lv) {
  const double a = lv.theta.first, b = lv.theta.second, k = lv.qn.idx;
  const double lk = std::lgamma(k + 1.0);
  switch (kind) {
    case ThetaKind::pt:
      return sqrt_from_log(std::log(2.0 * k + a + 2.0 * b + 0.5) - lk +
                           lg(k + a + 2.0 * b + 0.5).log_abs + lg(k + a + 0.5).log_abs -
                           2.0 * lg(a + 0.5).log_abs - lg(k + 2.0 * b + 1.0).log_abs);
    case ThetaKind::makarov:
      return sqrt_from_log(std::log(a + b + k + 0.5) - lk + lg(2.0 * a + 2.0 * b + k + 1.0).log_abs +
                           lg(2.0 * a + k + 1.0).log_abs - 2.0 * lg(2.0 * a + 1.0).log_abs -
                           lg(2.0 * b + k + 1.0).log_abs);
    case ThetaKind::nad:
      return sqrt_from_log(std::log(a + b + k + 0.25) - lk + lg(2.0 * a + 2.0 * b + k + 0.5).log_abs +
                           lg(2.0 * a + k + 0.5).log_abs - 2.0 * lg(2.0 * a + 0.5).log_abs -
                           lg(2.0 * b + k + 1.0).log_abs);
  }
  return kNaN;
}

double printed_phi_constant(const LevelSolution& lv) {
  const double mu = lv.mu, nu = lv.nu, q = lv.qn.q;
  return sqrt_from_log(std::log(mu + 2.0 * nu + 2.0 * q) - std::log(2.0) - std::lgamma(q + 1.0) +
                       lg(mu + 2.0 * nu + q).log_abs + lg(nu + q + 0.5).log_abs -
                       2.0 * lg(mu + 0.5).log_abs - lg(2.0 * nu + q + 0.5).log_abs);
}

double stage_integral(const PotentialSpec& spec, const PhysicalContext& ctx,
                      const LevelSolution& a, const LevelSolution& b, Stage stage,
                      RadialMeasure measure, bool alternate) {
  switch (stage) {
    case Stage::radial:
      return alternate ? radial_integral(spec, ctx, a, b, measure, 0.75, 0.3, rule24())
                       : radial_integral(spec, ctx, a, b, measure, 1.0, 0.0, default_rule());
    case Stage::theta:
      require_theta(a);
      require_theta(b);
      return theta_integral(theta_kind(spec), a, b, alternate ? 5.0 : 4.0);
    case Stage::phi:
      if (std::holds_alternative<Ptdrsc>(spec)) {
        if (a.radial_only || b.radial_only) {
          throw ParameterError("phi exponents are not available (l was given directly)");
        }
        return integrate_phi(a, b, alternate ? 5.0 : 4.0);
      }
      return integrate_cos_phi(a.Lambda, b.Lambda);
  }
  return kNaN;
}

}  // namespace

double wavefunction_factor(const PotentialSpec& spec, const PhysicalContext& ctx,
                           const LevelSolution& level, Stage stage, double coord) {
  switch (stage) {
    case Stage::radial:
      require_radial(ctx, level);
      return radial_log(ctx, level, coord).value();
    case Stage::theta: {
      require_theta(level);
      if (!(coord > 0.0 && coord < kPi)) throw DomainError("theta must lie in (0, pi)");
      const double y = std::cos(coord);
      const double h = coord / 2.0;
      // 1 - cos = 2 sin^2(theta/2), 1 + cos = 2 cos^2(theta/2)
      const double om = 2.0 * std::sin(h) * std::sin(h), op = 2.0 * std::cos(h) * std::cos(h);
      return theta_of_y(theta_kind(spec), level, y, om, op);
    }
    case Stage::phi: {
      if (!(coord > 0.0 && coord < 2.0 * kPi)) throw DomainError("phi must lie in (0, 2 pi)");
      if (const auto* p = std::get_if<Ptdrsc>(&spec)) {
        if (level.radial_only) throw ParameterError("phi exponents are not available");
        const double w = p->alpha * coord;
        return phi_of_z(level, std::cos(w), std::abs(std::sin(w)));
      }
      return std::cos(level.Lambda * coord);
    }
  }
  return kNaN;
}

NormalizationReport normalization(const PotentialSpec& spec, const PhysicalContext& ctx,
                                  const LevelSolution& level, Stage stage,
                                  RadialMeasure measure) {
  NormalizationReport rep;
  const double I = stage_integral(spec, ctx, level, level, stage, measure, false);
  rep.quadrature_constant = 1.0 / std::sqrt(I);
  const double I_alt = stage_integral(spec, ctx, level, level, stage, measure, true);
  rep.self_norm = rep.quadrature_constant * rep.quadrature_constant * I_alt;
  try {
    switch (stage) {
      case Stage::radial:
        if (measure != RadialMeasure::dr) {
          rep.note = "printed constant refers to the dr measure";
        } else {
          rep.printed_constant = printed_radial_constant(ctx, level);
        }
        break;
      case Stage::theta:
        rep.printed_constant = printed_theta_constant(theta_kind(spec), level);
        break;
      case Stage::phi:
        if (std::holds_alternative<Ptdrsc>(spec)) {
          rep.printed_constant = printed_phi_constant(level);
        } else {
          rep.note = "no printed constant: the azimuthal factor is exp(i Lambda phi)/sqrt(2 pi)";
        }
        break;
    }
  } catch (const Error& e) {
    rep.note = std::string("printed constant not evaluable: ") + e.what();
  }
  if (std::isfinite(rep.printed_constant)) {
    rep.printed_norm = rep.printed_constant * rep.printed_constant * I;
  }
  return rep;
}

double factor_overlap(const PotentialSpec& spec, const PhysicalContext& ctx,
                      const LevelSolution& a, const LevelSolution& b, Stage stage,
                      RadialMeasure measure) {
  return stage_integral(spec, ctx, a, b, stage, measure, false);
}

namespace {

// 8th-order central stencils.
constexpr double kD1[9] = {1.0 / 280, -4.0 / 105, 1.0 / 5, -4.0 / 5, 0.0,
                           4.0 / 5,   -1.0 / 5,   4.0 / 105, -1.0 / 280};
constexpr double kD2[9] = {-1.0 / 560, 8.0 / 315, -1.0 / 5, 8.0 / 5, -205.0 / 72,
                           8.0 / 5,    -1.0 / 5,  8.0 / 315, -1.0 / 560};

double relative_residual(const std::function<double(double)>& y, double x, double h, double P,
                         double Q) {
  double d1 = 0.0, d2 = 0.0, ymax = 0.0;
  for (int i = 0; i < 9; ++i) {
    const double yi = y(x + (i - 4) * h);
    d1 += kD1[i] * yi;
    d2 += kD2[i] * yi;
    ymax = std::max(ymax, std::abs(yi));
  }
  d1 /= h;
  d2 /= h * h;
  const double y0 = y(x);
  const double scale = std::abs(d2) + std::abs(P * d1) + std::abs(Q * y0);
  // Stencil roundoff; a scale below it means every term vanishes.
  const double noise = 1e3 * std::numeric_limits<double>::epsilon() * ymax * (1.0 / (h * h) + std::abs(P) / h);
  if (scale <= noise) return 0.0;
  return std::abs(d2 + P * d1 + Q * y0) / scale;
}

}  // namespace

double ode_residual(const PotentialSpec& spec, const PhysicalContext& ctx,
                    const LevelSolution& level, Stage stage, double coord) {
  const SeparatedSystem sys = build_separated(spec, ctx);
  auto factor = [&](double x) { return wavefunction_factor(spec, ctx, level, stage, x); };
  switch (stage) {
    case Stage::radial: {
      require_radial(ctx, level);
      if (!(coord > 0.0)) throw DomainError("radial residual needs r > 0");
      return relative_residual(factor, coord, 5e-3 * coord, 0.0,
                               sys.radial.bracket(coord, level.E, level.L2));
    }
    case Stage::theta: {
      double d = std::min(coord, kPi - coord);
      if (theta_kind(spec) != ThetaKind::makarov) d = std::min(d, std::abs(coord - kPi / 2.0));
      if (!(d > 0.0)) throw DomainError("theta residual at a singular point");
      return relative_residual(factor, coord, 5e-3 * d, 1.0 / std::tan(coord),
                               sys.theta.bracket(coord, level.L2, level.Lambda * level.Lambda));
    }
    case Stage::phi: {
      double d = std::min(coord, 2.0 * kPi - coord);
      if (const auto* p = std::get_if<Ptdrsc>(&spec)) {
        const double cell = kPi / (2.0 * p->alpha);
        const double rem = std::fmod(coord, cell);
        d = std::min(rem, cell - rem);
      }
      if (!(d > 0.0)) throw DomainError("phi residual at a singular point");
      return relative_residual(factor, coord, 5e-3 * d, 0.0,
                               sys.phi.bracket(coord, level.Lambda * level.Lambda));
    }
  }
  return kNaN;
}

}  // namespace aimspec
