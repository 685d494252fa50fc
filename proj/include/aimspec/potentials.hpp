#pragma once

#include <limits>
#include <string>

#include "aimspec/aim.hpp"
#include "aimspec/families.hpp"
#include "aimspec/separation.hpp"

namespace aimspec {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

enum class Stage { radial, theta, phi };
const char* stage_name(Stage s);

/// Azimuthal separation constant. For V3 == 0 families Lambda is the
/// caller's integer and mu, nu are NaN.
struct PhiSolution {
  double Lambda = 0.0;
  double mu = kNaN;
  double nu = kNaN;
  int sign = 1;
  bool free = false;
};

/// Labeled pair of theta-stage exponents: (eta, rho), (u, v) or (p, q).
struct ThetaExponents {
  std::string first_name;
  std::string second_name;
  double first = kNaN;
  double second = kNaN;
};

struct ThetaSolution {
  double ell = 0.0;
  double L2 = 0.0;
  ThetaExponents exponents;
};

struct RadialExponents {
  double u = kNaN;
  double v = kNaN;
  double sigma = kNaN;
  double tau = kNaN;
};

struct QuantumNumbers {
  int q = 0;
  int idx = 0;
  int n_r = 0;
  friend bool operator==(const QuantumNumbers&, const QuantumNumbers&) = default;
};

struct LevelSolution {
  std::string family;
  QuantumNumbers qn;
  double Lambda = 0.0;
  int Lambda_sign = 1;
  double ell = 0.0;
  double L2 = 0.0;
  double E = kNaN;
  /// Kratzer families only: the energy formula as printed, for comparison.
  double E_printed = kNaN;
  RadialExponents radial;
  ThetaExponents theta;
  double mu = kNaN;
  double nu = kNaN;
  double epsilon = 0.0;
  /// Decaying and square integrable: 2(u + v + n_r) < -1 for eps > 0.
  bool bound = true;
  std::string note;
  /// l was supplied directly; the angular stages were not solved.
  bool radial_only = false;
};

PhiSolution phi_closed_lambda(const PotentialSpec& spec, int q, const PhysicalContext& ctx);

/// Throws NegativeDiscriminantError for unphysical couplings.
ThetaSolution theta_closed_ell(const PotentialSpec& spec, double Lambda, int idx,
                               const PhysicalContext& ctx);

/// u(u - 1) = L2 + g c, c the inverse-square coefficient of V1.
double radial_u(const PotentialSpec& spec, const PhysicalContext& ctx, double L2);

/// v of the n_r-th polynomial solution, before any energy is known.
double radial_v_quantized(const PotentialSpec& spec, const PhysicalContext& ctx, double ell,
                          int n_r);

/// Closed-form energy. eps = 0 uses the constant-mass limit. Throws
/// NoBoundStateError when no decaying solution exists.
double radial_closed_energy(const PotentialSpec& spec, const PhysicalContext& ctx, int n_r,
                            double ell);

/// The printed Kratzer energy formula (with its own u). ParameterError for
/// other families.
double kratzer_printed_energy(const PotentialSpec& spec, const PhysicalContext& ctx, int n_r,
                              double ell);

/// u, decaying-branch v, sigma, tau at energy E. v is NaN at eps = 0.
RadialExponents radial_exponents(const PotentialSpec& spec, const PhysicalContext& ctx,
                                 double ell, double E);

bool is_bound(double u, double v, int n_r);

/// Spectral family for one stage. `fixed` is l for the radial stage and
/// Lambda for the theta stage (ignored for phi). Angular search ranges cover
/// indices 0..max_index; the radial range is [lo, hi] when given.
SpectralFamily aim_family(const PotentialSpec& spec, const PhysicalContext& ctx, Stage stage,
                          double fixed, int max_index = 2);
SpectralFamily radial_aim_family(const PotentialSpec& spec, const PhysicalContext& ctx,
                                 double ell, double lo, double hi);

/// Converts a stage root (E, L2 or Lambda^2/alpha^2) to the natural constant.
double family_root_to_value(const PotentialSpec& spec, Stage stage, double root);

/// Assembles the closed-form chain for one level. ell_override skips the
/// angular stages.
LevelSolution closed_level(const PotentialSpec& spec, const PhysicalContext& ctx,
                           const QuantumNumbers& qn, const double* ell_override = nullptr);

/// Un-normalized factor. Radial needs eps > 0; coordinates are r, theta,
/// phi. For V3 == 0 families the phi factor is the real part cos(Lambda phi).
double wavefunction_factor(const PotentialSpec& spec, const PhysicalContext& ctx,
                           const LevelSolution& level, Stage stage, double coord);

enum class RadialMeasure { dr, dr_over_f2 };

struct NormalizationReport {
  /// Constant printed in the closed form; NaN when it cannot be evaluated.
  double printed_constant = kNaN;
  /// 1 / sqrt(integral of factor^2) under the stage measure.
  double quadrature_constant = kNaN;
  /// printed_constant^2 times the integral.
  double printed_norm = kNaN;
  /// quadrature_constant^2 times an independently mapped integral.
  double self_norm = kNaN;
  std::string note;
};

NormalizationReport normalization(const PotentialSpec& spec, const PhysicalContext& ctx,
                                  const LevelSolution& level, Stage stage,
                                  RadialMeasure measure = RadialMeasure::dr);

/// Integral of a * b under the stage measure (un-normalized factors).
double factor_overlap(const PotentialSpec& spec, const PhysicalContext& ctx,
                      const LevelSolution& a, const LevelSolution& b, Stage stage,
                      RadialMeasure measure = RadialMeasure::dr);

/// |y'' + P y' + Q y| / (|y''| + |P y'| + |Q y|) of the stage equation, with
/// derivatives from an 8th-order central stencil.
double ode_residual(const PotentialSpec& spec, const PhysicalContext& ctx,
                    const LevelSolution& level, Stage stage, double coord);

}  // namespace aimspec
