#include "aimspec/potentials.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "aimspec/errors.hpp"

namespace aimspec {

namespace {

template <class... Fs>
struct Overload : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overload(Fs...) -> Overload<Fs...>;

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

bool finite_all(std::initializer_list<double> xs) {
  for (double x : xs) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

double checked_sqrt(double x, const char* what) {
  if (x < 0.0) {
    throw NegativeDiscriminantError(std::string("negative square-root argument in ") + what +
                                    ": " + std::to_string(x));
  }
  return std::sqrt(x);
}

const std::vector<double> kAngularX0{0.25, 0.5, 0.75};

}  // namespace

std::string family_name(const PotentialSpec& spec) {
  return std::visit(Overload{[](const Ptdrsc&) { return std::string("ptdrsc"); },
                             [](const Kratzer&) { return std::string("kratzer"); },
                             [](const ModifiedKratzer&) { return std::string("mkp"); },
                             [](const Makarov&) { return std::string("makarov"); },
                             [](const NadCoulomb&) { return std::string("nad"); }},
                    spec);
}

bool azimuthal_free(const PotentialSpec& spec) { return !std::holds_alternative<Ptdrsc>(spec); }

SpecCheck validate(const PotentialSpec& spec) {
  SpecCheck out;
  auto flag = [&](bool cond, const std::string& note) {
    if (cond) {
      out.reduction = true;
      out.notes.push_back(note);
    }
  };
  std::visit(
      Overload{
          [&](const Ptdrsc& p) {
            require(finite_all({p.beta, p.b, p.A, p.C, p.D}), "ptdrsc couplings must be finite");
            require(p.beta > 0.0, "ptdrsc requires beta > 0");
            require(p.b >= 0.0, "ptdrsc requires b >= 0");
            require(p.A >= 1.0 && p.C >= 1.0 && p.D >= 1.0,
                    "ptdrsc requires A, C, D > 1 (A = C = D = 1 accepted as a reduction)");
            require(p.alpha >= 1, "ptdrsc requires a positive integer alpha");
            flag(p.A == 1.0, "A = 1 reduction");
            flag(p.C == 1.0, "C = 1 reduction");
            flag(p.D == 1.0, "D = 1 reduction");
            flag(p.b == 0.0, "b = 0 reduction");
          },
          [&](const Kratzer& p) {
            require(finite_all({p.De, p.re, p.a, p.b}), "kratzer couplings must be finite");
            require(p.De >= 0.0, "kratzer requires De > 0 (De = 0 accepted as a reduction)");
            require(p.re > 0.0, "kratzer requires re > 0");
            require(p.a >= 0.0 && p.b >= 0.0, "kratzer requires a >= 0 and b >= 0");
            flag(p.De == 0.0, "De = 0 reduction");
          },
          [&](const ModifiedKratzer& p) {
            require(finite_all({p.De, p.re, p.a, p.b}), "mkp couplings must be finite");
            require(p.De >= 0.0, "mkp requires De > 0 (De = 0 accepted as a reduction)");
            require(p.re > 0.0, "mkp requires re > 0");
            require(p.a >= 0.0 && p.b >= 0.0, "mkp requires a >= 0 and b >= 0");
            flag(p.De == 0.0, "De = 0 reduction");
          },
          [&](const Makarov& p) {
            require(finite_all({p.beta, p.alphaM, p.gammaM}), "makarov couplings must be finite");
            require(p.beta > 0.0, "makarov requires beta > 0");
          },
          [&](const NadCoulomb& p) {
            require(finite_all({p.beta, p.gammaN, p.kappaN, p.etaN}),
                    "nad couplings must be finite");
            require(p.beta > 0.0, "nad requires beta > 0");
            require(p.variant == 1 || p.variant == 2, "nad variant must be 1 or 2");
          },
      },
      spec);
  return out;
}

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::radial:
      return "radial";
    case Stage::theta:
      return "theta";
    case Stage::phi:
      return "phi";
  }
  return "?";
}

PhiSolution phi_closed_lambda(const PotentialSpec& spec, int q, const PhysicalContext& ctx) {
  if (q < 0) throw ConfigError("q must be >= 0");
  PhiSolution out;
  if (const auto* p = std::get_if<Ptdrsc>(&spec)) {
    const double g = ctx.g();
    out.mu = 0.5 + checked_sqrt(1.0 + 4.0 * g * p->C * (p->C - 1.0), "mu") / 2.0;
    out.nu = 0.25 + checked_sqrt(1.0 + 4.0 * g * p->D * (p->D - 1.0), "nu") / 4.0;
    out.Lambda = p->alpha * (out.mu + 2.0 * out.nu + 2.0 * q);
    return out;
  }
  out.Lambda = q;
  out.free = true;
  return out;
}

namespace {

struct PtTheta {
  double eta, rho;
};

PtTheta pt_theta(double inv_cos2_coeff, double b, double Lambda, const PhysicalContext& ctx) {
  const double g = ctx.g();
  return {0.5 + checked_sqrt(1.0 + 4.0 * g * inv_cos2_coeff, "eta") / 2.0,
          checked_sqrt(Lambda * Lambda + g * b, "rho") / 2.0};
}

struct MakTheta {
  double u, v;
};

MakTheta makarov_theta(const Makarov& p, double Lambda, const PhysicalContext& ctx) {
  const double g = ctx.g(), L2 = Lambda * Lambda;
  return {0.5 * checked_sqrt(L2 + g * (p.alphaM - p.gammaM), "u"),
          0.5 * checked_sqrt(L2 + g * (p.alphaM + p.gammaM), "v")};
}

struct NadTheta {
  double p, q;
};

NadTheta nad_theta(const NadCoulomb& n, double Lambda) {
  const double L2 = Lambda * Lambda;
  if (n.variant == 1) {
    return {0.25 + 0.25 * checked_sqrt(1.0 + 4.0 * (n.gammaN + n.etaN + n.kappaN), "p"),
            0.5 * checked_sqrt(L2 + n.gammaN, "q")};
  }
  return {0.25 + 0.25 * checked_sqrt(1.0 + 4.0 * n.gammaN, "p"),
          0.5 * checked_sqrt(L2 + n.etaN + n.kappaN + n.gammaN, "q")};
}

double ell_from_L2(double L2) { return (-1.0 + checked_sqrt(1.0 + 4.0 * L2, "l(l+1)")) / 2.0; }

}  // namespace

ThetaSolution theta_closed_ell(const PotentialSpec& spec, double Lambda, int idx,
                               const PhysicalContext& ctx) {
  if (idx < 0) throw ConfigError("angular index must be >= 0");
  ThetaSolution out;
  const double g = ctx.g();
  auto from_pt = [&](double inv_cos2_coeff, double b) {
    const PtTheta t = pt_theta(inv_cos2_coeff, b, Lambda, ctx);
    // Same as (1 + sqrt(1 + 8 m0 A(A-1)/hbar^2))/2 + sqrt(Lambda^2 + 2 m0 b/hbar^2) + 2k
    out.ell = (1.0 + std::sqrt(1.0 + 4.0 * g * inv_cos2_coeff)) / 2.0 +
              std::sqrt(Lambda * Lambda + g * b) + 2.0 * idx;
    out.exponents = {"eta", "rho", t.eta, t.rho};
  };
  std::visit(
      Overload{
          [&](const Ptdrsc& p) { from_pt(p.A * (p.A - 1.0), p.b); },
          [&](const Kratzer& p) { from_pt(p.a, p.b); },
          [&](const ModifiedKratzer& p) { from_pt(p.a, p.b); },
          [&](const Makarov& p) {
            const MakTheta t = makarov_theta(p, Lambda, ctx);
            out.ell = t.u + t.v + idx;
            out.exponents = {"u", "v", t.u, t.v};
          },
          [&](const NadCoulomb& n) {
            const NadTheta t = nad_theta(n, Lambda);
            const double i = idx, L2 = Lambda * Lambda;
            double value;
            if (n.variant == 1) {
              const double sq = std::sqrt(L2 + n.gammaN);
              value = 1.0 + 4.0 * i * (i + 1.0) + n.kappaN + 2.0 * n.gammaN + L2 +
                      2.0 * (2.0 * i + 1.0) * sq +
                      (1.0 + 2.0 * i + sq) * std::sqrt(1.0 + 4.0 * (n.gammaN + n.etaN + n.kappaN));
            } else {
              const double sg = std::sqrt(1.0 + 4.0 * n.gammaN);
              value = 1.0 + 4.0 * i * (i + 1.0) + n.kappaN + 2.0 * n.gammaN + L2 +
                      (2.0 * i + 1.0) * sg +
                      (2.0 + 4.0 * i + sg) * std::sqrt(L2 + n.etaN + n.kappaN + n.gammaN);
            }
            out.ell = ell_from_L2(value);
            out.exponents = {"p", "q", t.p, t.q};
          },
      },
      spec);
  out.L2 = out.ell * (out.ell + 1.0);
  return out;
}

double radial_u(const PotentialSpec& spec, const PhysicalContext& ctx, double L2) {
  const CentralPart v1 = decompose_potential(spec, ctx).v1;
  return (1.0 + checked_sqrt(1.0 + 4.0 * (L2 + ctx.g() * v1.inverse_square), "u")) / 2.0;
}

namespace {

struct RadialCoeffs {
  CentralPart v1;
  double g, eps, L2, u, sigma, tau_shift;
};

RadialCoeffs radial_coeffs(const PotentialSpec& spec, const PhysicalContext& ctx, double ell) {
  RadialCoeffs c;
  c.v1 = decompose_potential(spec, ctx).v1;
  c.g = ctx.g();
  c.eps = ctx.epsilon;
  c.L2 = ell * (ell + 1.0);
  c.u = radial_u(spec, ctx, c.L2);
  const double d = ctx.delta, l = ctx.lambda;
  c.sigma = c.g * c.v1.coulomb + (d + l - 2.0 * (1.0 + c.L2)) * c.eps;
  c.tau_shift = (1.5 * (d + l) - (2.0 + c.L2 + d * l)) * c.eps * c.eps;
  return c;
}

bool uses_eq32(const PotentialSpec& spec) {
  return std::holds_alternative<Ptdrsc>(spec) || std::holds_alternative<Makarov>(spec) ||
         std::holds_alternative<NadCoulomb>(spec);
}

}  // namespace

double radial_v_quantized(const PotentialSpec& spec, const PhysicalContext& ctx, double ell,
                          int n_r) {
  const RadialCoeffs c = radial_coeffs(spec, ctx, ell);
  if (c.eps == 0.0) return kNaN;
  const double u = c.u, n = n_r;
  return -(2.0 * c.eps * (u * u + (n - 1.0) * u + n * (n - 1.0) / 2.0) + c.sigma) /
         (2.0 * c.eps * (u + n));
}

double radial_closed_energy(const PotentialSpec& spec, const PhysicalContext& ctx, int n_r,
                            double ell) {
  if (n_r < 0) throw ConfigError("n_r must be >= 0");
  ctx.validate();
  const RadialCoeffs c = radial_coeffs(spec, ctx, ell);
  const double n = n_r;
  if (c.eps == 0.0) {
    if (!(c.v1.coulomb > 0.0)) throw NoBoundStateError("no attractive Coulomb term");
    const double N = n + c.u;
    return c.v1.shift - ctx.m0 * c.v1.coulomb * c.v1.coulomb / (2.0 * ctx.hbar * ctx.hbar * N * N);
  }
  if (uses_eq32(spec)) {
    const double h2 = ctx.hbar * ctx.hbar, m0 = ctx.m0, e = c.eps;
    const double d = ctx.delta, l = ctx.lambda, K = ctx.kinetic();
    const double beta = c.v1.coulomb;
    const double N = n + ell + 1.0;
    const double t1 = beta - K * (c.L2 + 2.0 - d - l) * e;
    return -t1 * t1 * m0 / (2.0 * h2 * N * N) - h2 * e * e / (8.0 * m0) * N * N +
           e / 2.0 * (beta + K * (c.L2 + d + l) * e) +
           K * (1.0 - d - l + (0.5 - d) * (0.5 - l)) * e * e + c.v1.shift;
  }
  // Implicit route: v(E) must equal the polynomial-solution exponent.
  const double v = radial_v_quantized(spec, ctx, ell, n_r);
  if (!(v <= 0.5)) {
    throw NoBoundStateError("n_r = " + std::to_string(n_r) +
                            " has no decaying radial branch (v = " + std::to_string(v) + ")");
  }
  const double e = c.eps, w = e * (1.0 - 2.0 * v);
  const double tau = (e * e * (2.0 * c.u - 1.0) * (2.0 * c.u - 1.0) + 4.0 * e * c.sigma - w * w) / 4.0;
  return c.v1.shift + (tau - c.tau_shift) / c.g;
}

double kratzer_printed_energy(const PotentialSpec& spec, const PhysicalContext& ctx, int n_r,
                              double ell) {
  double De, re, shift = 0.0;
  if (const auto* k = std::get_if<Kratzer>(&spec)) {
    De = k->De;
    re = k->re;
  } else if (const auto* m = std::get_if<ModifiedKratzer>(&spec)) {
    De = m->De;
    re = m->re;
    shift = m->De;
  } else {
    throw ParameterError("printed Kratzer energy requested for another family");
  }
  const double h2 = ctx.hbar * ctx.hbar, m0 = ctx.m0, e = ctx.epsilon, K = ctx.kinetic();
  const double d = ctx.delta, l = ctx.lambda, L2 = ell * (ell + 1.0), n = n_r;
  const double u = 0.5 + std::sqrt(1.0 + 4.0 * L2 + 16.0 * m0 * De * re * re / h2) / 2.0;
  const double nu = n + u;
  const double w = 2.0 * De * re - K * (2.0 * L2 + 2.0 - d - l) * e;
  const double w2 = 2.0 * De * re - K * (2.0 * L2 + 2.0 - d - l);
  return -w * w * m0 / (2.0 * h2 * nu * nu) -
         h2 / (2.0 * m0 * nu * nu) *
             (n * (n + 1.0) * (u + n / 2.0) * (u + (n - 1.0) / 2.0) * e * e +
              2.0 * h2 * e / m0 * u * (u - 1.0) * w2) +
         (K * (1.0 - d) * (1.0 - l) * e + De * re) * e + shift;
}

RadialExponents radial_exponents(const PotentialSpec& spec, const PhysicalContext& ctx,
                                 double ell, double E) {
  const RadialCoeffs c = radial_coeffs(spec, ctx, ell);
  RadialExponents out;
  out.u = c.u;
  out.sigma = c.sigma;
  out.tau = c.g * (E - c.v1.shift) + c.tau_shift;
  if (c.eps > 0.0) {
    const double e = c.eps;
    const double arg =
        e * e * (2.0 * c.u - 1.0) * (2.0 * c.u - 1.0) + 4.0 * (e * c.sigma - out.tau);
    out.v = 0.5 - checked_sqrt(arg, "radial v") / (2.0 * e);
  }
  return out;
}

bool is_bound(double u, double v, int n_r) { return 2.0 * (u + v + n_r) < -1.0; }

namespace {

double coulomb_scale(const PotentialSpec& spec, const PhysicalContext& ctx) {
  const CentralPart v1 = decompose_potential(spec, ctx).v1;
  if (!(v1.coulomb > 0.0)) throw NoBoundStateError("no attractive Coulomb term");
  return ctx.hbar * ctx.hbar / (ctx.m0 * v1.coulomb);
}

SpectralFamily radial_family_impl(const PotentialSpec& spec, const PhysicalContext& ctx,
                                  double ell, double lo, double hi) {
  if (!(ctx.epsilon > 0.0)) {
    throw ParameterError("the radial AIM family needs eps > 0 (v diverges at eps = 0)");
  }
  const double a0 = coulomb_scale(spec, ctx);
  SpectralFamily fam;
  fam.param_name = "E";
  fam.lo = lo;
  fam.hi = hi;
  fam.x0_candidates = {0.5 * a0, a0, 2.0 * a0};
  fam.build = [spec, ctx, ell](double E) {
    const RadialExponents x = radial_exponents(spec, ctx, ell, E);
    const double e = ctx.epsilon, u = x.u, v = x.v;
    const Poly<double> den{0.0, 1.0, e};
    return AimProblem::from(
        RationalFn<double>(Poly<double>{-2.0 * u, -2.0 * e * (u + v)}, den),
        RationalFn<double>(Poly<double>{-(2.0 * e * u * (u + v - 1.0) + x.sigma)}, den), 0.0,
        std::numeric_limits<double>::infinity());
  };
  return fam;
}

/// (lambda0, s0) on (0, 1) from a linear-over-cubic lambda0 and a constant
/// s0 numerator over the same or a smaller denominator.
SpectralFamily angular_family(std::string name, Poly<double> lam_num, Poly<double> den,
                              std::function<Poly<double>(double)> s_num, double lo,
                              double hi) {
  SpectralFamily fam;
  fam.param_name = std::move(name);
  fam.lo = lo;
  fam.hi = hi;
  fam.x0_candidates = kAngularX0;
  fam.build = [lam_num, den, s_num](double p) {
    return AimProblem::from(RationalFn<double>(lam_num, den), RationalFn<double>(s_num(p), den),
                            0.0, 1.0);
  };
  return fam;
}

}  // namespace

SpectralFamily radial_aim_family(const PotentialSpec& spec, const PhysicalContext& ctx,
                                 double ell, double lo, double hi) {
  return radial_family_impl(spec, ctx, ell, lo, hi);
}

SpectralFamily aim_family(const PotentialSpec& spec, const PhysicalContext& ctx, Stage stage,
                          double fixed, int max_index) {
  ctx.validate();
  if (max_index < 0) throw ConfigError("max_index must be >= 0");
  const double top = max_index + 0.5;
  if (stage == Stage::radial) {
    const double ell = fixed;
    const RadialCoeffs c = radial_coeffs(spec, ctx, ell);
    const double a = c.v1.coulomb, e = c.eps;
    // Edge of the real-v region, and a floor below the deepest level.
    const double tau_top = (e * e * (2.0 * c.u - 1.0) * (2.0 * c.u - 1.0) + 4.0 * e * c.sigma) / 4.0;
    const double E_top = c.v1.shift + (tau_top - c.tau_shift) / c.g;
    const double E_floor = c.v1.shift - ctx.m0 * a * a / (ctx.hbar * ctx.hbar * c.u * c.u) -
                           std::abs(e * a) - ctx.kinetic() * e * e * (c.L2 + 4.0) - 1e-3;
    return radial_family_impl(spec, ctx, ell, E_floor, E_top - 1e-9 * (1.0 + std::abs(E_top)));
  }
  if (stage == Stage::phi) {
    const auto* p = std::get_if<Ptdrsc>(&spec);
    if (!p) throw ParameterError("phi stage is not defined for " + family_name(spec) + " (V3 = 0)");
    const PhiSolution s = phi_closed_lambda(spec, 0, ctx);
    const double mu = s.mu, nu = s.nu, w0 = mu + 2.0 * nu;
    const double wl = std::max(0.0, w0 - 1.0), wh = w0 + 2.0 * top;
    return angular_family(
        "eps2", Poly<double>{-2.0 * mu, 0.0, 2.0 * mu + 4.0 * nu + 1.0}, Poly<double>{0.0, 1.0, 0.0, -1.0},
        [w0](double e2) { return Poly<double>{0.0, w0 * w0 - e2}; }, wl * wl, wh * wh);
  }
  const double Lambda = fixed;
  auto pt = [&](double inv_cos2_coeff, double b) {
    const PtTheta t = pt_theta(inv_cos2_coeff, b, Lambda, ctx);
    const double w0 = t.eta + 2.0 * t.rho, wl = w0 - 1.0, wh = w0 + 2.0 * top;
    return angular_family(
        "L2", Poly<double>{-2.0 * t.eta, 0.0, 2.0 * (w0 + 1.0)}, Poly<double>{0.0, 1.0, 0.0, -1.0},
        [w0](double L2) { return Poly<double>{0.0, (w0 + 1.0) * w0 - L2}; },
        std::max(-0.25, wl * (wl + 1.0)), wh * (wh + 1.0));
  };
  return std::visit(
      Overload{
          [&](const Ptdrsc& p) { return pt(p.A * (p.A - 1.0), p.b); },
          [&](const Kratzer& p) { return pt(p.a, p.b); },
          [&](const ModifiedKratzer& p) { return pt(p.a, p.b); },
          [&](const Makarov& p) {
            const MakTheta t = makarov_theta(p, Lambda, ctx);
            const double w0 = t.u + t.v, wl = w0 - 0.5, wh = w0 + top;
            return angular_family(
                "L2", Poly<double>{-2.0 * t.u - 1.0, 2.0 * (w0 + 1.0)}, Poly<double>{0.0, 1.0, -1.0},
                [w0](double L2) { return Poly<double>{(w0 + 1.0) * w0 - L2}; },
                std::max(-0.25, wl * (wl + 1.0)), wh * (wh + 1.0));
          },
          [&](const NadCoulomb& n) {
            const NadTheta t = nad_theta(n, Lambda);
            const double w0 = t.p + t.q, eta = n.etaN;
            auto L2_of = [eta](double w) { return 4.0 * w * w + 2.0 * w - eta; };
            return angular_family(
                "L2", Poly<double>{-(2.0 * t.p + 0.5), 2.0 * w0 + 1.5}, Poly<double>{0.0, 1.0, -1.0},
                [w0, eta](double L2) {
                  return Poly<double>{(w0 + 0.5) * w0 - (L2 + eta) / 4.0};
                },
                L2_of(std::max(-0.25, w0 - 0.25)), L2_of(w0 + top));
          },
      },
      spec);
}

double family_root_to_value(const PotentialSpec& spec, Stage stage, double root) {
  switch (stage) {
    case Stage::radial:
      return root;
    case Stage::theta:
      return ell_from_L2(root);
    case Stage::phi: {
      const auto* p = std::get_if<Ptdrsc>(&spec);
      const double alpha = p ? p->alpha : 1.0;
      return alpha * checked_sqrt(root, "Lambda^2");
    }
  }
  return root;
}

LevelSolution closed_level(const PotentialSpec& spec, const PhysicalContext& ctx,
                           const QuantumNumbers& qn, const double* ell_override) {
  validate(spec);
  ctx.validate();
  if (qn.q < 0 || qn.idx < 0 || qn.n_r < 0) throw ConfigError("quantum numbers must be >= 0");
  LevelSolution lv;
  lv.family = family_name(spec);
  lv.qn = qn;
  lv.epsilon = ctx.epsilon;
  if (ell_override) {
    if (!(*ell_override > -0.5)) throw ConfigError("l must be > -1/2");
    lv.ell = *ell_override;
    lv.radial_only = true;
  } else {
    const PhiSolution phi = phi_closed_lambda(spec, qn.q, ctx);
    lv.Lambda = phi.Lambda;
    lv.Lambda_sign = phi.sign;
    lv.mu = phi.mu;
    lv.nu = phi.nu;
    const ThetaSolution th = theta_closed_ell(spec, lv.Lambda, qn.idx, ctx);
    lv.ell = th.ell;
    lv.theta = th.exponents;
  }
  lv.L2 = lv.ell * (lv.ell + 1.0);
  lv.radial.u = radial_u(spec, ctx, lv.L2);
  if (std::holds_alternative<Kratzer>(spec) || std::holds_alternative<ModifiedKratzer>(spec)) {
    lv.E_printed = kratzer_printed_energy(spec, ctx, qn.n_r, lv.ell);
  }
  try {
    lv.E = radial_closed_energy(spec, ctx, qn.n_r, lv.ell);
  } catch (const NoBoundStateError& e) {
    lv.bound = false;
    lv.note = e.what();
    return lv;
  }
  if (ctx.epsilon > 0.0) {
    const double vq = radial_v_quantized(spec, ctx, lv.ell, qn.n_r);
    lv.radial.v = vq;
    const RadialCoeffs c = radial_coeffs(spec, ctx, lv.ell);
    lv.radial.sigma = c.sigma;
    lv.radial.tau = c.g * (lv.E - c.v1.shift) + c.tau_shift;
    lv.bound = is_bound(lv.radial.u, vq, qn.n_r);
    if (!lv.bound) {
      lv.note = "2(u+v+n_r) = " + std::to_string(2.0 * (lv.radial.u + vq + qn.n_r)) +
                " is not below -1";
    }
  } else {
    const RadialExponents x = radial_exponents(spec, ctx, lv.ell, lv.E);
    lv.radial.sigma = x.sigma;
    lv.radial.tau = x.tau;
  }
  return lv;
}

}  // namespace aimspec
