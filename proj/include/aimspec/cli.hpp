#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "aimspec/pipeline.hpp"
#include "json.hpp"

namespace aimspec {

/// Everything one CLI invocation needs, minus the subcommand.
struct RunConfig {
  std::string family = "ptdrsc";
  /// Family couplings; normalize() fills the defaults.
  std::map<std::string, double> couplings;
  int alpha = 1;
  int variant = 1;
  double hbar = 1.0;
  double m0 = 1.0;
  double delta = 0.0;
  double lambda = 0.0;
  double epsilon = 0.0;
  LevelRange levels;
  std::optional<double> ell;
  std::string method = "closed_form";
  std::string checks = "none";
  std::string format = "csv";
  std::string out;
  /// AIM scalar mode: "exact" or "float64".
  std::string mode = "exact";
  /// Wavefunction stage: "radial", "theta" or "phi".
  std::string stage = "radial";
  std::string grid;
  std::string sweep;
  bool lambda_follows_delta = false;
  double r_ref = 1.0;
  Tolerances tol;

  /// Checks couplings against the family and fills missing ones.
  void normalize();
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Every key a config file or flag may set.
const std::vector<std::string>& config_keys();

/// ConfigError for unknown keys or badly typed values.
void set_config_value(RunConfig& cfg, const std::string& key, const nlohmann::json& value);

/// Applies a flat JSON object on top of cfg (not normalized).
void apply_config_json(RunConfig& cfg, const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);

PotentialSpec make_spec(const RunConfig& cfg);
SolveRequest make_request(const RunConfig& cfg);

/// "start:stop:count", count >= 1, evenly spaced and inclusive.
std::vector<double> parse_grid(const std::string& s);
/// "lo..hi" or a single integer.
std::pair<int, int> parse_range(const std::string& s);

/// Exit codes: 0 ok, 1 verification failure, 2 config error, 3 solver error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace aimspec
