#include "aimspec/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "CLI11.hpp"
#include "aimspec/errors.hpp"
#include "aimspec/report.hpp"

namespace aimspec {

namespace {

enum class Kind { number, integer, text, flag, range, optional_number };

struct KeyInfo {
  const char* name;
  Kind kind;
  const char* help;
};

const std::vector<KeyInfo>& key_table() {
  static const std::vector<KeyInfo> keys{
      {"family", Kind::text, "ptdrsc, kratzer, mkp, makarov or nad"},
      {"beta", Kind::number, "Coulomb strength"},
      {"b", Kind::number, "inverse-square coupling (ptdrsc) or angular coupling (kratzer, mkp)"},
      {"A", Kind::number, "ring coupling, > 1"},
      {"C", Kind::number, "azimuthal coupling, > 1"},
      {"D", Kind::number, "azimuthal coupling, > 1"},
      {"alpha", Kind::integer, "azimuthal frequency"},
      {"De", Kind::number, "dissociation energy"},
      {"re", Kind::number, "equilibrium distance"},
      {"a", Kind::number, "ring coupling (kratzer, mkp)"},
      {"alphaM", Kind::number, "Makarov 1/sin^2 coupling"},
      {"gammaM", Kind::number, "Makarov cos/sin^2 coupling"},
      {"gammaN", Kind::number, "NAD coupling"},
      {"kappaN", Kind::number, "NAD coupling"},
      {"etaN", Kind::number, "NAD coupling"},
      {"variant", Kind::integer, "NAD variant, 1 or 2"},
      {"hbar", Kind::number, "reduced Planck constant"},
      {"m0", Kind::number, "reference mass"},
      {"delta", Kind::number, "ordering parameter"},
      {"lambda", Kind::number, "ordering parameter"},
      {"epsilon", Kind::number, "deformation, f(r) = 1 + epsilon r"},
      {"q", Kind::range, "azimuthal index range, lo..hi"},
      {"k", Kind::range, "polar index range, lo..hi"},
      {"nr", Kind::range, "radial index range, lo..hi"},
      {"ell", Kind::optional_number, "solve the radial stage only, at this l"},
      {"method", Kind::text, "closed_form, aim, fd or all"},
      {"checks", Kind::text, "all, none or a list of residual,normalization,orthogonality,x0,limit"},
      {"format", Kind::text, "csv or json"},
      {"out", Kind::text, "output path (default stdout)"},
      {"mode", Kind::text, "AIM arithmetic: exact or float64"},
      {"stage", Kind::text, "wavefunction stage: radial, theta or phi"},
      {"grid", Kind::text, "wavefunction grid start:stop:count"},
      {"sweep", Kind::text, "key=start:stop:count"},
      {"lambda_follows_delta", Kind::flag, "set lambda = 1 - delta"},
      {"r_ref", Kind::number, "radius for the ordering correction column"},
      {"tol_aim_energy", Kind::number, "|E_closed - E_aim|"},
      {"tol_fd_energy", Kind::number, "|E_closed - E_fd|"},
      {"tol_angular", Kind::number, "|l - l_aim|, |Lambda - Lambda_aim|"},
      {"tol_x0_spread", Kind::number, "AIM root spread over x0"},
      {"tol_residual", Kind::number, "relative ODE residual"},
      {"tol_normalization", Kind::number, "|self norm - 1|"},
      {"tol_psi_norm", Kind::number, "|psi norm - 1|"},
      {"tol_orthogonality", Kind::number, "|cos| between levels"},
      {"tol_limit", Kind::number, "eps -> 0 extrapolation"},
  };
  return keys;
}

const KeyInfo& key_info(const std::string& key) {
  for (const KeyInfo& k : key_table())
    if (key == k.name) return k;
  throw ConfigError("unknown key '" + key + "'");
}

const std::map<std::string, std::vector<std::pair<std::string, double>>>& family_couplings() {
  static const std::map<std::string, std::vector<std::pair<std::string, double>>> m{
      {"ptdrsc", {{"beta", 1.0}, {"b", 0.0}, {"A", 1.0}, {"C", 1.0}, {"D", 1.0}}},
      {"kratzer", {{"De", 1.0}, {"re", 1.0}, {"a", 0.0}, {"b", 0.0}}},
      {"mkp", {{"De", 1.0}, {"re", 1.0}, {"a", 0.0}, {"b", 0.0}}},
      {"makarov", {{"beta", 1.0}, {"alphaM", 0.0}, {"gammaM", 0.0}}},
      {"nad", {{"beta", 1.0}, {"gammaN", 0.0}, {"kappaN", 0.0}, {"etaN", 0.0}}},
  };
  return m;
}

double as_number(const std::string& key, const nlohmann::json& v) {
  if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError("'" + key + "' must be finite");
  return x;
}

int as_integer(const std::string& key, const nlohmann::json& v) {
  const double x = as_number(key, v);
  if (x != std::floor(x) || std::abs(x) > 1e9) throw ConfigError("'" + key + "' must be an integer");
  return static_cast<int>(x);
}

std::string as_text(const std::string& key, const nlohmann::json& v) {
  if (!v.is_string()) throw ConfigError("'" + key + "' must be a string");
  return v.get<std::string>();
}

double parse_double(const std::string& key, const std::string& s) {
  try {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used == s.size()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("'" + key + "' expects a number, got '" + s + "'");
}

int parse_int(const std::string& what, const std::string& s) {
  try {
    std::size_t used = 0;
    const long x = std::stol(s, &used);
    if (used == s.size() && x >= -1000000000L && x <= 1000000000L) return static_cast<int>(x);
  } catch (const std::exception&) {
  }
  throw ConfigError(what + " expects an integer, got '" + s + "'");
}

std::string range_text(int lo, int hi) { return std::to_string(lo) + ".." + std::to_string(hi); }

/// Flag text to the JSON value the config file would hold.
nlohmann::json flag_value(const KeyInfo& k, const std::string& s) {
  switch (k.kind) {
    case Kind::number:
    case Kind::optional_number:
      return parse_double(k.name, s);
    case Kind::integer:
      return parse_int(std::string("'") + k.name + "'", s);
    case Kind::flag:
      return true;
    case Kind::text:
    case Kind::range:
      return s;
  }
  return s;
}

double* tolerance_field(Tolerances& t, const std::string& key) {
  if (key == "tol_aim_energy") return &t.aim_energy;
  if (key == "tol_fd_energy") return &t.fd_energy;
  if (key == "tol_angular") return &t.angular;
  if (key == "tol_x0_spread") return &t.x0_spread;
  if (key == "tol_residual") return &t.residual;
  if (key == "tol_normalization") return &t.normalization;
  if (key == "tol_psi_norm") return &t.psi_norm;
  if (key == "tol_orthogonality") return &t.orthogonality;
  if (key == "tol_limit") return &t.limit;
  return nullptr;
}

void write_output(const RunConfig& cfg, std::ostream& out, const std::function<void(std::ostream&)>& fn) {
  if (cfg.out.empty()) {
    fn(out);
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + cfg.out + "' for writing");
  fn(f);
}

int report_row_errors(const std::vector<const LevelResult*>& rows, std::ostream& err) {
  int code = 0;
  for (const LevelResult* r : rows) {
    if (r->status == "ok" || r->status == "unbound") continue;
    err << "level (" << r->level.qn.q << ", " << r->level.qn.idx << ", " << r->level.qn.n_r
        << "): " << r->status << ": " << r->message << '\n';
    code = 3;
  }
  return code;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SolveRequest req = make_request(cfg);
  const auto rows = solve_levels(req, cfg.levels.expand());
  write_output(cfg, out, [&](std::ostream& os) {
    if (cfg.format == "json") {
      write_json(os, spectrum_json(rows));
    } else {
      write_spectrum_csv(os, rows);
    }
  });
  std::vector<const LevelResult*> ptrs;
  for (const auto& r : rows) ptrs.push_back(&r);
  return report_row_errors(ptrs, err);
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SolveRequest req = make_request(cfg);
  const VerificationReport rep = verify_levels(req, cfg.levels.expand());
  write_output(cfg, out, [&](std::ostream& os) { write_json(os, verification_json(rep)); });
  if (!rep.pass) err << "verification failed\n";
  return rep.pass ? 0 : 1;
}

int cmd_wavefunction(const RunConfig& cfg, std::ostream& out) {
  const std::vector<double> grid = parse_grid(cfg.grid);
  const auto levels = cfg.levels.expand();
  if (levels.size() != 1) throw ConfigError("wavefunction needs exactly one level");
  const Stage stage = cfg.stage == "radial" ? Stage::radial
                      : cfg.stage == "theta" ? Stage::theta
                                             : Stage::phi;
  if (stage == Stage::radial && !(cfg.epsilon > 0.0)) {
    throw ConfigError("the radial wavefunction is undefined at epsilon = 0");
  }
  if (stage != Stage::radial && cfg.ell) throw ConfigError("--ell gives no angular factors");
  SolveRequest req = make_request(cfg);
  req.qn = levels[0];
  const LevelSolution lv = solve_level(req);
  if (stage == Stage::radial && !lv.bound) throw NoBoundStateError("level is not bound: " + lv.note);
  const double c = normalization(req.spec, req.ctx, lv, stage).quadrature_constant;
  std::vector<WavefunctionSample> rows;
  for (double x : grid) {
    double v = kNaN;
    try {
      v = wavefunction_factor(req.spec, req.ctx, lv, stage, x);
    } catch (const DomainError&) {
    } catch (const PoleError&) {
    }
    rows.push_back({stage, x, v, c * v});
  }
  write_output(cfg, out, [&](std::ostream& os) { write_wavefunction_csv(os, rows); });
  return 0;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const auto eq = cfg.sweep.find('=');
  if (cfg.sweep.empty() || eq == std::string::npos) throw ConfigError("--sweep expects key=start:stop:count");
  SweepSpec spec;
  spec.key = cfg.sweep.substr(0, eq);
  spec.values = parse_grid(cfg.sweep.substr(eq + 1));
  spec.lambda_follows_delta = cfg.lambda_follows_delta;
  spec.r_ref = cfg.r_ref;
  const auto rows = sweep(make_request(cfg), cfg.levels.expand(), spec);
  write_output(cfg, out, [&](std::ostream& os) {
    if (cfg.format == "json") {
      write_json(os, sweep_json(spec.key, rows));
    } else {
      write_sweep_csv(os, spec.key, rows);
    }
  });
  return 0;
}

}  // namespace

void RunConfig::normalize() {
  const auto& fams = family_couplings();
  const auto it = fams.find(family);
  if (it == fams.end()) throw ConfigError("unknown family '" + family + "'");
  for (const auto& [key, value] : couplings) {
    const bool known = std::any_of(it->second.begin(), it->second.end(),
                                   [&](const auto& p) { return p.first == key; });
    if (!known) throw ConfigError("'" + key + "' is not a coupling of " + family);
  }
  for (const auto& [key, value] : it->second) couplings.emplace(key, value);
  if (family != "ptdrsc" && alpha != 1) throw ConfigError("'alpha' applies to ptdrsc only");
  if (family != "nad" && variant != 1) throw ConfigError("'variant' applies to nad only");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const KeyInfo& i : key_table()) k.push_back(i.name);
    return k;
  }();
  return keys;
}

void set_config_value(RunConfig& cfg, const std::string& key, const nlohmann::json& v) {
  const KeyInfo& info = key_info(key);
  if (double* t = tolerance_field(cfg.tol, key)) {
    *t = as_number(key, v);
    if (!(*t > 0.0)) throw ConfigError("'" + key + "' must be > 0");
    return;
  }
  if (key == "family") {
    cfg.family = as_text(key, v);
    if (!family_couplings().count(cfg.family)) throw ConfigError("unknown family '" + cfg.family + "'");
  } else if (key == "alpha") {
    cfg.alpha = as_integer(key, v);
  } else if (key == "variant") {
    cfg.variant = as_integer(key, v);
  } else if (key == "hbar") {
    cfg.hbar = as_number(key, v);
  } else if (key == "m0") {
    cfg.m0 = as_number(key, v);
  } else if (key == "delta") {
    cfg.delta = as_number(key, v);
  } else if (key == "lambda") {
    cfg.lambda = as_number(key, v);
  } else if (key == "epsilon") {
    cfg.epsilon = as_number(key, v);
  } else if (info.kind == Kind::range) {
    const auto [lo, hi] = v.is_number() ? std::pair{as_integer(key, v), as_integer(key, v)}
                                        : parse_range(as_text(key, v));
    if (key == "q") {
      cfg.levels.q_lo = lo, cfg.levels.q_hi = hi;
    } else if (key == "k") {
      cfg.levels.k_lo = lo, cfg.levels.k_hi = hi;
    } else {
      cfg.levels.n_lo = lo, cfg.levels.n_hi = hi;
    }
  } else if (key == "ell") {
    if (v.is_null()) {
      cfg.ell.reset();
    } else {
      cfg.ell = as_number(key, v);
    }
  } else if (key == "method") {
    cfg.method = method_name(parse_method(as_text(key, v)));
  } else if (key == "checks") {
    cfg.checks = Checks::parse(as_text(key, v)).to_string();
  } else if (key == "format") {
    cfg.format = as_text(key, v);
    if (cfg.format != "csv" && cfg.format != "json") throw ConfigError("format must be csv or json");
  } else if (key == "out") {
    cfg.out = as_text(key, v);
  } else if (key == "mode") {
    cfg.mode = as_text(key, v);
    if (cfg.mode != "exact" && cfg.mode != "float64") throw ConfigError("mode must be exact or float64");
  } else if (key == "stage") {
    cfg.stage = as_text(key, v);
    if (cfg.stage != "radial" && cfg.stage != "theta" && cfg.stage != "phi") {
      throw ConfigError("stage must be radial, theta or phi");
    }
  } else if (key == "grid") {
    cfg.grid = as_text(key, v);
  } else if (key == "sweep") {
    cfg.sweep = as_text(key, v);
  } else if (key == "lambda_follows_delta") {
    if (!v.is_boolean()) throw ConfigError("'lambda_follows_delta' must be true or false");
    cfg.lambda_follows_delta = v.get<bool>();
  } else if (key == "r_ref") {
    cfg.r_ref = as_number(key, v);
  } else {
    cfg.couplings[key] = as_number(key, v);
  }
}

void apply_config_json(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  // Family first so its couplings are checked against the right list.
  if (j.contains("family")) set_config_value(cfg, "family", j.at("family"));
  for (const auto& [key, value] : j.items()) {
    if (key != "family") set_config_value(cfg, key, value);
  }
}

nlohmann::json config_to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["family"] = cfg.family;
  for (const auto& [key, value] : cfg.couplings) j[key] = value;
  if (cfg.family == "ptdrsc") j["alpha"] = cfg.alpha;
  if (cfg.family == "nad") j["variant"] = cfg.variant;
  j["hbar"] = cfg.hbar;
  j["m0"] = cfg.m0;
  j["delta"] = cfg.delta;
  j["lambda"] = cfg.lambda;
  j["epsilon"] = cfg.epsilon;
  j["q"] = range_text(cfg.levels.q_lo, cfg.levels.q_hi);
  j["k"] = range_text(cfg.levels.k_lo, cfg.levels.k_hi);
  j["nr"] = range_text(cfg.levels.n_lo, cfg.levels.n_hi);
  j["ell"] = cfg.ell ? nlohmann::json(*cfg.ell) : nlohmann::json(nullptr);
  j["method"] = cfg.method;
  j["checks"] = cfg.checks;
  j["format"] = cfg.format;
  j["out"] = cfg.out;
  j["mode"] = cfg.mode;
  j["stage"] = cfg.stage;
  j["grid"] = cfg.grid;
  j["sweep"] = cfg.sweep;
  j["lambda_follows_delta"] = cfg.lambda_follows_delta;
  j["r_ref"] = cfg.r_ref;
  Tolerances t = cfg.tol;
  for (const KeyInfo& k : key_table()) {
    if (double* f = tolerance_field(t, k.name)) j[k.name] = *f;
  }
  return j;
}

PotentialSpec make_spec(const RunConfig& cfg) {
  RunConfig c = cfg;
  c.normalize();
  const auto& m = c.couplings;
  if (c.family == "ptdrsc") return Ptdrsc{m.at("beta"), m.at("b"), m.at("A"), m.at("C"), m.at("D"), c.alpha};
  if (c.family == "kratzer") return Kratzer{m.at("De"), m.at("re"), m.at("a"), m.at("b")};
  if (c.family == "mkp") return ModifiedKratzer{m.at("De"), m.at("re"), m.at("a"), m.at("b")};
  if (c.family == "makarov") return Makarov{m.at("beta"), m.at("alphaM"), m.at("gammaM")};
  return NadCoulomb{m.at("beta"), m.at("gammaN"), m.at("kappaN"), m.at("etaN"), c.variant};
}

SolveRequest make_request(const RunConfig& cfg) {
  SolveRequest req;
  req.spec = make_spec(cfg);
  validate(req.spec);
  req.ctx.hbar = cfg.hbar;
  req.ctx.m0 = cfg.m0;
  req.ctx.delta = cfg.lambda_follows_delta ? cfg.delta : cfg.delta;
  req.ctx.lambda = cfg.lambda_follows_delta ? 1.0 - cfg.delta : cfg.lambda;
  req.ctx.epsilon = cfg.epsilon;
  req.ctx.validate();
  req.method = parse_method(cfg.method);
  req.checks = Checks::parse(cfg.checks);
  req.ell = cfg.ell;
  req.tol = cfg.tol;
  req.aim.mode = cfg.mode == "float64" ? ScalarMode::float64 : ScalarMode::exact;
  return req;
}

std::vector<double> parse_grid(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw ConfigError("grid expects start:stop:count, got '" + s + "'");
  const double a = parse_double("grid start", parts[0]);
  const double b = parse_double("grid stop", parts[1]);
  const int n = parse_int("grid count", parts[2]);
  if (n < 1) throw ConfigError("grid count must be >= 1");
  if (!std::isfinite(a) || !std::isfinite(b)) throw ConfigError("grid ends must be finite");
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  return out;
}

std::pair<int, int> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) {
    const int v = parse_int("range", s);
    return {v, v};
  }
  return {parse_int("range", s.substr(0, dots)), parse_int("range", s.substr(dots + 2))};
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bound-state spectra of deformed non-central potentials", "aim-spectra"};
  app.require_subcommand(0, 1);
  std::map<std::string, std::string> raw;
  std::map<std::string, CLI::Option*> opts;
  for (const KeyInfo& k : key_table()) {
    std::string flag = "--" + std::string(k.name);
    std::replace(flag.begin() + 2, flag.end(), '_', '-');
    if (k.kind == Kind::flag) {
      opts[k.name] = app.add_flag(flag, k.help);
    } else {
      opts[k.name] = app.add_option(flag, raw[k.name], k.help);
    }
  }
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file; flags override its values");
  bool dump = false;
  app.add_flag("--dump-config", dump, "print the effective config as JSON and exit");
  CLI::App* spectrum = app.add_subcommand("spectrum", "tabulate levels");
  CLI::App* verify = app.add_subcommand("verify", "run the verification battery");
  CLI::App* wavefunction = app.add_subcommand("wavefunction", "sample one factor on a grid");
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "sweep one parameter");
  for (CLI::App* s : {spectrum, verify, wavefunction, sweep_cmd}) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, x;
    const int code = app.exit(e, o, x);
    out << o.str();
    err << x.str();
    return code == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ConfigError("cannot read config '" + config_path + "'");
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(f);
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
      }
      apply_config_json(cfg, j);
    }
    if (opts["family"]->count() > 0) set_config_value(cfg, "family", raw["family"]);
    for (const KeyInfo& k : key_table()) {
      if (std::string(k.name) == "family" || opts[k.name]->count() == 0) continue;
      set_config_value(cfg, k.name, flag_value(k, raw[k.name]));
    }
    cfg.normalize();
    if (dump) {
      write_output(RunConfig{}, out, [&](std::ostream& os) { write_json(os, config_to_json(cfg)); });
      return 0;
    }
    if (spectrum->parsed()) return cmd_spectrum(cfg, out, err);
    if (verify->parsed()) return cmd_verify(cfg, out, err);
    if (wavefunction->parsed()) return cmd_wavefunction(cfg, out);
    if (sweep_cmd->parsed()) return cmd_sweep(cfg, out);
    throw ConfigError("a subcommand is required: spectrum, verify, wavefunction or sweep");
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "solver error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace aimspec
