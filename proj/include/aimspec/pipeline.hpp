#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "aimspec/aim.hpp"
#include "aimspec/potentials.hpp"

namespace aimspec {

enum class Method { closed_form, aim, fd, all };

/// "closed_form", "aim", "fd", "all"; ConfigError otherwise.
Method parse_method(const std::string& s);
const char* method_name(Method m);
inline bool uses_aim(Method m) { return m == Method::aim || m == Method::all; }
inline bool uses_fd(Method m) { return m == Method::fd || m == Method::all; }

struct Checks {
  bool residual = false;
  bool normalization = false;
  bool orthogonality = false;
  bool x0 = false;
  bool limit = false;

  static Checks all() { return {true, true, true, true, true}; }
  /// "all", "none" or a comma list of check names.
  static Checks parse(const std::string& s);
  /// Canonical comma list ("none" when empty).
  std::string to_string() const;
  friend bool operator==(const Checks&, const Checks&) = default;
};

/// Every check tolerance, in one place.
struct Tolerances {
  double aim_energy = 1e-8;
  double fd_energy = 1e-5;
  double angular = 1e-8;
  double x0_spread = 1e-8;
  double residual = 1e-6;
  double normalization = 1e-6;
  double psi_norm = 1e-5;
  double orthogonality = 1e-6;
  double limit = 1e-8;
  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

/// Inclusive index ranges; expand() orders levels by (q, idx, n_r).
struct LevelRange {
  int q_lo = 0, q_hi = 0;
  int k_lo = 0, k_hi = 0;
  int n_lo = 0, n_hi = 0;
  /// ConfigError for negative or empty ranges.
  std::vector<QuantumNumbers> expand() const;
  friend bool operator==(const LevelRange&, const LevelRange&) = default;
};

struct SolveRequest {
  PotentialSpec spec;
  PhysicalContext ctx;
  QuantumNumbers qn;
  Method method = Method::closed_form;
  Checks checks;
  /// Radial-only solve at this l; the angular stages are skipped.
  std::optional<double> ell;
  AimConfig aim;
  Tolerances tol;
  std::vector<double> limit_eps{1e-2, 1e-3, 1e-4};
};

/// Independent values for one level. NaN where not computed.
struct OracleValues {
  double E_aim = kNaN;
  double E_aim_spread = kNaN;
  double ell_aim = kNaN;
  double ell_aim_spread = kNaN;
  double Lambda_aim = kNaN;
  double Lambda_aim_spread = kNaN;
  double E_fd = kNaN;
  int fd_nodes = -1;
  double fd_tail = kNaN;
  std::string note;
};

/// Closed-form chain phi -> theta -> radial. Stage failures are rethrown as
/// StageError naming the stage; ConfigError passes through unchanged.
LevelSolution solve_level(const SolveRequest& req);

/// AIM and/or FD values for a solved level, per req.method. AIM also runs
/// when the x0 check is requested. Oracle failures land in `note`.
OracleValues run_oracles(const SolveRequest& req, const LevelSolution& level);

struct LevelResult {
  PhysicalContext ctx;
  LevelSolution level;
  OracleValues oracles;
  /// "ok", "unbound", "invalid" (bad input), "error" (stage failure) or
  /// "oracle_error" (closed form fine, an oracle failed).
  std::string status;
  std::string message;
};

/// solve_level + run_oracles with every error recorded in the row.
LevelResult solve_row(const SolveRequest& req);

/// Rows in the order of `levels`. threads = 0 picks worker_count().
std::vector<LevelResult> solve_levels(const SolveRequest& base,
                                      const std::vector<QuantumNumbers>& levels, int threads = 0);

/// AIM_SPECTRA_THREADS if set (>= 1), else hardware concurrency.
int worker_count();

struct CheckEntry {
  std::string name;
  /// "PASS", "FAIL" or "SKIP".
  std::string status;
  double value = kNaN;
  double tolerance = kNaN;
  std::string detail;
};

struct StageNorm {
  Stage stage;
  NormalizationReport report;
};

struct LevelVerification {
  LevelSolution level;
  OracleValues oracles;
  double residual_max = kNaN;
  double x0_spread = kNaN;
  std::vector<StageNorm> norms;
  std::vector<CheckEntry> entries;
  bool pass = true;
};

struct VerificationReport {
  std::vector<LevelVerification> levels;
  bool pass = true;
};

/// Runs req.checks (plus oracle comparisons per req.method) against `level`.
/// Never throws for solver failures; they become FAIL entries.
LevelVerification verify_level(const SolveRequest& req, const LevelSolution& level);

VerificationReport verify_levels(const SolveRequest& base, const std::vector<QuantumNumbers>& levels);

struct LimitReport {
  std::vector<double> eps;
  std::vector<double> energies;
  double E0 = kNaN;
  double c1 = kNaN;
  double E_constant_mass = kNaN;
  double difference = kNaN;
  bool pass = false;
};

/// Extrapolates E(eps) to eps = 0 through every point and compares with the
/// constant-mass value. ConfigError unless eps_list has >= 2 strictly
/// decreasing positive entries.
LimitReport epsilon_limit_check(const PotentialSpec& spec, const PhysicalContext& ctx,
                                const QuantumNumbers& qn, const std::vector<double>& eps_list,
                                std::optional<double> ell = std::nullopt, double tol = 1e-8);

/// Normalized psi = R/(r f) Theta Phi, each factor with its quadrature
/// constant; Phi = exp(i Lambda phi)/sqrt(2 pi) for V3 == 0 families.
class Psi {
 public:
  /// ParameterError at eps = 0 or for radial-only levels.
  Psi(const PotentialSpec& spec, const PhysicalContext& ctx, const LevelSolution& level);
  std::complex<double> operator()(double r, double theta, double phi) const;
  /// Integral of |psi|^2 over space, as the product of the factor norms
  /// (radial under dr/f^2), each from an independent quadrature.
  double norm() const { return norm_; }

 private:
  PotentialSpec spec_;
  PhysicalContext ctx_;
  LevelSolution level_;
  double c_radial_ = 0.0, c_theta_ = 0.0, c_phi_ = 0.0;
  double norm_ = 0.0;
};

/// Keys accepted by apply_parameter.
const std::vector<std::string>& sweep_keys();

/// Sets one context or coupling value; ConfigError for unknown keys or keys
/// the family doesn't have.
void apply_parameter(SolveRequest& req, const std::string& key, double value);
double get_parameter(const SolveRequest& req, const std::string& key);

struct SweepSpec {
  std::string key;
  std::vector<double> values;
  bool lambda_follows_delta = false;
  /// Radius at which the ordering correction is reported.
  double r_ref = 1.0;
};

struct SweepRow {
  double value = 0.0;
  double correction = kNaN;
  LevelResult result;
};

/// Rows ordered by sweep value, then (q, idx, n_r). Row errors are recorded
/// in the row status. ConfigError only for an unknown key.
std::vector<SweepRow> sweep(const SolveRequest& base, const std::vector<QuantumNumbers>& levels,
                            const SweepSpec& spec, int threads = 0);

}  // namespace aimspec
