#include "aimspec/report.hpp"

#include <cmath>
#include <cstdio>

namespace aimspec {

namespace {

constexpr const char* kSpectrumHeader =
    "family,delta,lambda,epsilon,q,k_idx,n_r,Lambda,ell,L2,E_closed,E_aim,E_fd,status";

void spectrum_fields(std::ostream& os, const LevelResult& r) {
  const LevelSolution& lv = r.level;
  const bool solved = r.status != "error" && r.status != "invalid";
  auto num = [&](double x) { return format_number(solved ? x : kNaN); };
  os << lv.family << ',' << format_number(r.ctx.delta) << ',' << format_number(r.ctx.lambda) << ','
     << format_number(r.ctx.epsilon) << ',' << lv.qn.q << ',' << lv.qn.idx << ',' << lv.qn.n_r << ','
     << num(lv.radial_only ? kNaN : lv.Lambda) << ',' << num(lv.ell) << ',' << num(lv.L2) << ','
     << num(lv.E) << ',' << format_number(r.oracles.E_aim) << ',' << format_number(r.oracles.E_fd)
     << ',' << r.status;
}

nlohmann::json spectrum_object(const LevelResult& r) {
  const LevelSolution& lv = r.level;
  const bool solved = r.status != "error" && r.status != "invalid";
  auto num = [&](double x) { return json_number(solved ? x : kNaN); };
  return {{"family", lv.family},
          {"delta", json_number(r.ctx.delta)},
          {"lambda", json_number(r.ctx.lambda)},
          {"epsilon", json_number(r.ctx.epsilon)},
          {"q", lv.qn.q},
          {"k_idx", lv.qn.idx},
          {"n_r", lv.qn.n_r},
          {"Lambda", num(lv.radial_only ? kNaN : lv.Lambda)},
          {"ell", num(lv.ell)},
          {"L2", num(lv.L2)},
          {"E_closed", num(lv.E)},
          {"E_aim", json_number(r.oracles.E_aim)},
          {"E_fd", json_number(r.oracles.E_fd)},
          {"status", r.status}};
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "n/a";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

nlohmann::json json_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

void write_spectrum_csv(std::ostream& os, const std::vector<LevelResult>& rows) {
  os << kSpectrumHeader << '\n';
  for (const LevelResult& r : rows) {
    spectrum_fields(os, r);
    os << '\n';
  }
}

nlohmann::json spectrum_json(const std::vector<LevelResult>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const LevelResult& r : rows) arr.push_back(spectrum_object(r));
  return {{"schema", 1}, {"rows", arr}};
}

void write_sweep_csv(std::ostream& os, const std::string& key, const std::vector<SweepRow>& rows) {
  os << "sweep_key,sweep_value,correction," << kSpectrumHeader << '\n';
  for (const SweepRow& r : rows) {
    os << key << ',' << format_number(r.value) << ',' << format_number(r.correction) << ',';
    spectrum_fields(os, r.result);
    os << '\n';
  }
}

nlohmann::json sweep_json(const std::string& key, const std::vector<SweepRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const SweepRow& r : rows) {
    nlohmann::json o = spectrum_object(r.result);
    o["sweep_key"] = key;
    o["sweep_value"] = json_number(r.value);
    o["correction"] = json_number(r.correction);
    arr.push_back(std::move(o));
  }
  return {{"schema", 1}, {"rows", arr}};
}

nlohmann::json verification_json(const VerificationReport& report) {
  nlohmann::json levels = nlohmann::json::array();
  for (const LevelVerification& v : report.levels) {
    const LevelSolution& lv = v.level;
    nlohmann::json norms = nlohmann::json::array();
    for (const StageNorm& n : v.norms) {
      norms.push_back({{"stage", stage_name(n.stage)},
                       {"printed_constant", json_number(n.report.printed_constant)},
                       {"quadrature_constant", json_number(n.report.quadrature_constant)},
                       {"printed_norm", json_number(n.report.printed_norm)},
                       {"self_norm", json_number(n.report.self_norm)},
                       {"note", n.report.note}});
    }
    nlohmann::json checks = nlohmann::json::array();
    for (const CheckEntry& e : v.entries) {
      checks.push_back({{"name", e.name},
                        {"status", e.status},
                        {"value", json_number(e.value)},
                        {"tolerance", json_number(e.tolerance)},
                        {"detail", e.detail}});
    }
    levels.push_back({{"family", lv.family},
                      {"epsilon", json_number(lv.epsilon)},
                      {"q", lv.qn.q},
                      {"k_idx", lv.qn.idx},
                      {"n_r", lv.qn.n_r},
                      {"Lambda", json_number(lv.radial_only ? kNaN : lv.Lambda)},
                      {"ell", json_number(lv.ell)},
                      {"L2", json_number(lv.L2)},
                      {"E_closed", json_number(lv.E)},
                      {"E_printed", json_number(lv.E_printed)},
                      {"E_aim", json_number(v.oracles.E_aim)},
                      {"E_fd", json_number(v.oracles.E_fd)},
                      {"bound", lv.bound},
                      {"residual_max", json_number(v.residual_max)},
                      {"x0_spread", json_number(v.x0_spread)},
                      {"normalization", norms},
                      {"checks", checks},
                      {"pass", v.pass}});
  }
  return {{"schema", 1}, {"pass", report.pass}, {"levels", levels}};
}

void write_wavefunction_csv(std::ostream& os, const std::vector<WavefunctionSample>& rows) {
  os << "stage,coordinate,value_unnormalized,value_normalized\n";
  for (const WavefunctionSample& s : rows) {
    os << stage_name(s.stage) << ',' << format_number(s.coordinate) << ',' << format_number(s.value)
       << ',' << format_number(s.normalized) << '\n';
  }
}

void write_json(std::ostream& os, const nlohmann::json& j) { os << j.dump(2) << '\n'; }

}  // namespace aimspec
