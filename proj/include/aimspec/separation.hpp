#pragma once

#include <functional>
#include <memory>

#include "aimspec/families.hpp"

namespace aimspec {

struct PhysicalContext {
  double hbar = 1.0;
  double m0 = 1.0;
  double delta = 0.0;
  double lambda = 0.0;
  double epsilon = 0.0;

  /// From delta + kappa + lambda = 2.
  double kappa() const { return 2.0 - delta - lambda; }
  /// 2 m0 / hbar^2
  double g() const { return 2.0 * m0 / (hbar * hbar); }
  /// hbar^2 / 2 m0
  double kinetic() const { return hbar * hbar / (2.0 * m0); }
  /// Throws ConfigError for hbar, m0 <= 0 or epsilon < 0.
  void validate() const;
};

class Deformation {
 public:
  virtual ~Deformation() = default;
  virtual double f(double r) const = 0;
  virtual double df(double r) const = 0;
  virtual double d2f(double r) const = 0;
  /// Radial Laplacian f'' + 2 f'/r.
  double laplacian(double r) const { return d2f(r) + 2.0 * df(r) / r; }
};

/// f(r) = 1 + eps r
class LinearDeformation final : public Deformation {
 public:
  explicit LinearDeformation(double eps) : eps_(eps) {}
  double f(double r) const override { return 1.0 + eps_ * r; }
  double df(double) const override { return eps_; }
  double d2f(double) const override { return 0.0; }
  double epsilon() const { return eps_; }

 private:
  double eps_;
};

/// Ordering-induced addition to the bare potential.
double effective_potential_correction(const PhysicalContext& ctx, const Deformation& def,
                                      double r);

/// V1(r) = shift - coulomb / r + inverse_square / r^2
struct CentralPart {
  double shift = 0.0;
  double coulomb = 0.0;
  double inverse_square = 0.0;

  double operator()(double r) const { return shift - coulomb / r + inverse_square / (r * r); }
  friend bool operator==(const CentralPart&, const CentralPart&) = default;
};

struct PotentialComponents {
  CentralPart v1;
  /// Energy x length^2, evaluated on (0, pi) and (0, 2 pi). Throw DomainError
  /// where the component diverges.
  std::function<double(double)> v2;
  std::function<double(double)> v3;
  bool v2_zero = false;
  bool v3_zero = false;
};

PotentialComponents decompose_potential(const PotentialSpec& spec, const PhysicalContext& ctx);

/// The family formula evaluated directly, angular blocks scaled by f(r)^2.
double potential_value(const PotentialSpec& spec, const PhysicalContext& ctx, double r,
                       double theta, double phi);

/// V1 + f^2/r^2 V2 + f^2/(r^2 sin^2) V3
double recompose(const PotentialComponents& c, const Deformation& def, double r, double theta,
                 double phi);

/// R'' + bracket(r) R = 0 with
/// bracket = g (E - V1)/f^2 - L2/r^2 - rf_coeff/(r f) - ff_coeff/f^2.
struct RadialEquation {
  CentralPart v1;
  double g = 2.0;
  double epsilon = 0.0;
  double rf_coeff = 0.0;
  double ff_coeff = 0.0;

  double f(double r) const { return 1.0 + epsilon * r; }
  double bracket(double r, double E, double L2) const;
  friend bool operator==(const RadialEquation&, const RadialEquation&) = default;
};

/// Theta'' + cot Theta' + (L2 - Lambda^2/sin^2 - g V2) Theta = 0
struct ThetaEquation {
  std::function<double(double)> v2;
  double g = 2.0;
  double bracket(double theta, double L2, double Lambda2) const;
};

/// Phi'' + (Lambda^2 - g V3) Phi = 0
struct PhiEquation {
  std::function<double(double)> v3;
  double g = 2.0;
  double bracket(double phi, double Lambda2) const;
};

struct SeparatedSystem {
  RadialEquation radial;
  ThetaEquation theta;
  PhiEquation phi;
};

SeparatedSystem build_separated(const PotentialSpec& spec, const PhysicalContext& ctx);

/// The ordinary radial equation, built without any deformation terms.
RadialEquation constant_mass_radial(const PotentialSpec& spec, const PhysicalContext& ctx);

}  // namespace aimspec
