#include "aimspec/separation.hpp"

#include <cmath>
#include <string>

#include "aimspec/errors.hpp"

namespace aimspec {

void PhysicalContext::validate() const {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ConfigError("hbar must be positive");
  if (!(m0 > 0.0) || !std::isfinite(m0)) throw ConfigError("m0 must be positive");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw ConfigError("epsilon must be finite and >= 0");
  }
  if (!std::isfinite(delta) || !std::isfinite(lambda)) {
    throw ConfigError("ambiguity parameters must be finite");
  }
}

double effective_potential_correction(const PhysicalContext& ctx, const Deformation& def,
                                      double r) {
  if (!(r > 0.0)) throw DomainError("correction needs r > 0");
  const double d = ctx.delta, l = ctx.lambda;
  const double fp = def.df(r);
  return ctx.kinetic() *
         (0.5 * (1.0 - d - l) * def.f(r) * def.laplacian(r) + (0.5 - d) * (0.5 - l) * fp * fp);
}

namespace {

constexpr double kPoleTol = 1e-12;

double inv_sin2(double x, double coeff, const char* what) {
  const double s = std::sin(x);
  if (std::abs(s) < kPoleTol) {
    if (coeff == 0.0) return 0.0;
    throw DomainError(std::string(what) + " diverges where sin vanishes");
  }
  return coeff / (s * s);
}

double inv_cos2(double x, double coeff, const char* what) {
  const double c = std::cos(x);
  if (std::abs(c) < kPoleTol) {
    if (coeff == 0.0) return 0.0;
    throw DomainError(std::string(what) + " diverges where cos vanishes");
  }
  return coeff / (c * c);
}

template <class... Fs>
struct Overload : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overload(Fs...) -> Overload<Fs...>;

double nad_angular(const NadCoulomb& p, double theta) {
  const double s2 = std::sin(theta) * std::sin(theta);
  const double c2 = std::cos(theta) * std::cos(theta);
  // Variant 2 is variant 1 with the angle shifted by pi/2.
  const double w = p.variant == 1 ? s2 : c2;
  const double num = p.gammaN + p.kappaN * w + p.etaN * w * w;
  if (std::abs(std::sin(theta)) < kPoleTol || std::abs(std::cos(theta)) < kPoleTol) {
    if (num == 0.0) return 0.0;
    throw DomainError("NAD angular term diverges at a pole or the equator");
  }
  return num / (s2 * c2);
}

}  // namespace

PotentialComponents decompose_potential(const PotentialSpec& spec, const PhysicalContext& ctx) {
  PotentialComponents out;
  auto zero = [](double) { return 0.0; };
  std::visit(
      Overload{
          [&](const Ptdrsc& p) {
            out.v1 = {0.0, p.beta, 0.0};
            const double cb = p.b, ca = p.A * (p.A - 1.0);
            out.v2 = [cb, ca](double th) {
              return inv_sin2(th, cb, "b/sin^2") + inv_cos2(th, ca, "A(A-1)/cos^2");
            };
            out.v2_zero = cb == 0.0 && ca == 0.0;
            const double al = p.alpha;
            const double cd = al * al * p.D * (p.D - 1.0), cc = al * al * p.C * (p.C - 1.0);
            out.v3 = [al, cd, cc](double ph) {
              return inv_sin2(al * ph, cd, "D term") + inv_cos2(al * ph, cc, "C term");
            };
            out.v3_zero = cd == 0.0 && cc == 0.0;
          },
          [&](const Kratzer& p) {
            out.v1 = {0.0, 2.0 * p.De * p.re, p.De * p.re * p.re};
            const double cb = p.b, ca = p.a;
            out.v2 = [cb, ca](double th) {
              return inv_sin2(th, cb, "b/sin^2") + inv_cos2(th, ca, "a/cos^2");
            };
            out.v2_zero = cb == 0.0 && ca == 0.0;
            out.v3 = zero;
            out.v3_zero = true;
          },
          [&](const ModifiedKratzer& p) {
            out.v1 = {p.De, 2.0 * p.De * p.re, p.De * p.re * p.re};
            const double cb = p.b, ca = p.a;
            out.v2 = [cb, ca](double th) {
              return inv_sin2(th, cb, "b/sin^2") + inv_cos2(th, ca, "a/cos^2");
            };
            out.v2_zero = cb == 0.0 && ca == 0.0;
            out.v3 = zero;
            out.v3_zero = true;
          },
          [&](const Makarov& p) {
            out.v1 = {0.0, p.beta, 0.0};
            const double am = p.alphaM, gm = p.gammaM;
            out.v2 = [am, gm](double th) {
              const double num = am + gm * std::cos(th);
              return inv_sin2(th, num, "Makarov term");
            };
            out.v2_zero = am == 0.0 && gm == 0.0;
            out.v3 = zero;
            out.v3_zero = true;
          },
          [&](const NadCoulomb& p) {
            out.v1 = {0.0, p.beta, 0.0};
            const double k = ctx.kinetic();
            out.v2 = [p, k](double th) { return k * nad_angular(p, th); };
            out.v2_zero = p.gammaN == 0.0 && p.kappaN == 0.0 && p.etaN == 0.0;
            out.v3 = zero;
            out.v3_zero = true;
          },
      },
      spec);
  return out;
}

double potential_value(const PotentialSpec& spec, const PhysicalContext& ctx, double r,
                       double theta, double phi) {
  if (!(r > 0.0)) throw DomainError("potential needs r > 0");
  const double f = 1.0 + ctx.epsilon * r;
  const double w = f * f / (r * r);
  const double s = std::sin(theta), c = std::cos(theta);
  return std::visit(
      Overload{
          [&](const Ptdrsc& p) {
            const double al = p.alpha;
            const double sa = std::sin(al * phi), ca = std::cos(al * phi);
            return -p.beta / r + w * (p.b / (s * s) + p.A * (p.A - 1.0) / (c * c)) +
                   w / (s * s) *
                       (al * al * p.D * (p.D - 1.0) / (sa * sa) +
                        al * al * p.C * (p.C - 1.0) / (ca * ca));
          },
          [&](const Kratzer& p) {
            return -2.0 * p.De * (p.re / r - p.re * p.re / (2.0 * r * r)) +
                   w * (p.b / (s * s) + p.a / (c * c));
          },
          [&](const ModifiedKratzer& p) {
            const double t = (r - p.re) / r;
            return p.De * t * t + w * (p.b / (s * s) + p.a / (c * c));
          },
          [&](const Makarov& p) {
            return -p.beta / r + w * (p.alphaM / (s * s) + p.gammaM * c / (s * s));
          },
          [&](const NadCoulomb& p) {
            const double s2 = s * s, c2 = c * c;
            const double num = p.variant == 1
                                   ? p.gammaN + p.kappaN * s2 + p.etaN * s2 * s2
                                   : p.gammaN + p.kappaN * c2 + p.etaN * c2 * c2;
            return -p.beta / r + ctx.kinetic() * w * num / (s2 * c2);
          },
      },
      spec);
}

double recompose(const PotentialComponents& c, const Deformation& def, double r, double theta,
                 double phi) {
  const double f = def.f(r);
  const double s = std::sin(theta);
  return c.v1(r) + f * f / (r * r) * c.v2(theta) + f * f / (r * r * s * s) * c.v3(phi);
}

double RadialEquation::bracket(double r, double E, double L2) const {
  const double fr = f(r);
  return g * (E - v1(r)) / (fr * fr) - L2 / (r * r) - rf_coeff / (r * fr) -
         ff_coeff / (fr * fr);
}

double ThetaEquation::bracket(double theta, double L2, double Lambda2) const {
  const double s = std::sin(theta);
  return L2 - Lambda2 / (s * s) - g * v2(theta);
}

double PhiEquation::bracket(double phi, double Lambda2) const { return Lambda2 - g * v3(phi); }

SeparatedSystem build_separated(const PotentialSpec& spec, const PhysicalContext& ctx) {
  ctx.validate();
  const PotentialComponents c = decompose_potential(spec, ctx);
  const double e = ctx.epsilon, d = ctx.delta, l = ctx.lambda;
  SeparatedSystem sys;
  sys.radial.v1 = c.v1;
  sys.radial.g = ctx.g();
  sys.radial.epsilon = e;
  sys.radial.rf_coeff = e * (2.0 - d - l);
  sys.radial.ff_coeff = e * e * ((1.0 - 2.0 * d) * (1.0 - 2.0 * l) - 1.0) / 4.0;
  sys.theta = {c.v2, ctx.g()};
  sys.phi = {c.v3, ctx.g()};
  return sys;
}

RadialEquation constant_mass_radial(const PotentialSpec& spec, const PhysicalContext& ctx) {
  RadialEquation eq;
  eq.v1 = decompose_potential(spec, ctx).v1;
  eq.g = ctx.g();
  return eq;
}

}  // namespace aimspec
