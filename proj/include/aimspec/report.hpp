#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "aimspec/pipeline.hpp"
#include "json.hpp"

namespace aimspec {

/// %.12g, or "n/a" for NaN.
std::string format_number(double x);

/// 12 significant digits; null for NaN or inf.
nlohmann::json json_number(double x);

void write_spectrum_csv(std::ostream& os, const std::vector<LevelResult>& rows);
nlohmann::json spectrum_json(const std::vector<LevelResult>& rows);

/// Spectrum columns prefixed by sweep_key, sweep_value, correction.
void write_sweep_csv(std::ostream& os, const std::string& key, const std::vector<SweepRow>& rows);
nlohmann::json sweep_json(const std::string& key, const std::vector<SweepRow>& rows);

nlohmann::json verification_json(const VerificationReport& report);

struct WavefunctionSample {
  Stage stage;
  double coordinate;
  double value;
  double normalized;
};

void write_wavefunction_csv(std::ostream& os, const std::vector<WavefunctionSample>& rows);

/// Two-space indented JSON with a trailing newline.
void write_json(std::ostream& os, const nlohmann::json& j);

}  // namespace aimspec
