#pragma once

#include <string>
#include <variant>
#include <vector>

namespace aimspec {

/// Poschl-Teller double-ring-shaped Coulomb potential.
struct Ptdrsc {
  double beta = 1.0;
  double b = 0.0;
  double A = 1.0;
  double C = 1.0;
  double D = 1.0;
  int alpha = 1;
};

/// Double ring-shaped Kratzer potential.
struct Kratzer {
  double De = 1.0;
  double re = 1.0;
  double a = 0.0;
  double b = 0.0;
};

/// Kratzer with the dissociation energy added to the radial part.
struct ModifiedKratzer {
  double De = 1.0;
  double re = 1.0;
  double a = 0.0;
  double b = 0.0;
};

/// Coulomb plus the Makarov ring-shaped terms (alphaM + gammaM cos)/sin^2.
struct Makarov {
  double beta = 1.0;
  double alphaM = 0.0;
  double gammaM = 0.0;
};

/// Coulomb plus the novel angle-dependent term, variant 1 or 2. The angular
/// couplings are dimensionless: the hbar^2/2m0 factor sits in the potential.
struct NadCoulomb {
  double beta = 1.0;
  double gammaN = 0.0;
  double kappaN = 0.0;
  double etaN = 0.0;
  int variant = 1;
};

using PotentialSpec = std::variant<Ptdrsc, Kratzer, ModifiedKratzer, Makarov, NadCoulomb>;

/// "ptdrsc", "kratzer", "mkp", "makarov" or "nad".
std::string family_name(const PotentialSpec& spec);

struct SpecCheck {
  /// A boundary coupling (A = 1, C = 1, D = 1, b = 0, De = 0) was accepted.
  bool reduction = false;
  std::vector<std::string> notes;
};

/// Enforces each family's printed constraints; throws ConfigError.
SpecCheck validate(const PotentialSpec& spec);

/// V3 == 0: the azimuthal quantum number is a free integer.
bool azimuthal_free(const PotentialSpec& spec);

}  // namespace aimspec
