#include "aimspec/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <thread>

#include "aimspec/errors.hpp"
#include "aimspec/fdoracle.hpp"

namespace aimspec {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

template <class F>
void parallel_for(std::size_t n, int threads, F&& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

double coulomb_length(const PotentialSpec& spec, const PhysicalContext& ctx) {
  const double a = decompose_potential(spec, ctx).v1.coulomb;
  return a > 0.0 ? ctx.hbar * ctx.hbar / (ctx.m0 * a) : 1.0;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

/// Window around E holding only this root of the radial family.
std::pair<double, double> radial_window(const SolveRequest& req, const LevelSolution& lv) {
  const SpectralFamily full = aim_family(req.spec, req.ctx, Stage::radial, lv.ell);
  double gap = std::numeric_limits<double>::infinity();
  for (int n = 0; n <= lv.qn.n_r + 3; ++n) {
    if (n == lv.qn.n_r) continue;
    try {
      const double En = radial_closed_energy(req.spec, req.ctx, n, lv.ell);
      const double d = std::abs(En - lv.E);
      if (d > 1e-12 * (1.0 + std::abs(lv.E))) gap = std::min(gap, d);
    } catch (const NoBoundStateError&) {
    }
  }
  if (!std::isfinite(gap)) gap = 0.4 * (1.0 + std::abs(lv.E));
  const double hw = 0.25 * gap;
  return {std::max(full.lo, lv.E - hw), std::min(full.hi, lv.E + hw)};
}

void add_note(std::string& note, const std::string& s) {
  if (!note.empty()) note += "; ";
  note += s;
}

}  // namespace

Method parse_method(const std::string& s) {
  if (s == "closed_form") return Method::closed_form;
  if (s == "aim") return Method::aim;
  if (s == "fd") return Method::fd;
  if (s == "all") return Method::all;
  throw ConfigError("unknown method '" + s + "' (closed_form, aim, fd, all)");
}

const char* method_name(Method m) {
  switch (m) {
    case Method::closed_form:
      return "closed_form";
    case Method::aim:
      return "aim";
    case Method::fd:
      return "fd";
    case Method::all:
      return "all";
  }
  return "?";
}

Checks Checks::parse(const std::string& s) {
  if (s == "all") return all();
  Checks c;
  if (s == "none" || s.empty()) return c;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item == "residual") {
      c.residual = true;
    } else if (item == "normalization") {
      c.normalization = true;
    } else if (item == "orthogonality") {
      c.orthogonality = true;
    } else if (item == "x0") {
      c.x0 = true;
    } else if (item == "limit") {
      c.limit = true;
    } else {
      throw ConfigError("unknown check '" + item + "'");
    }
  }
  return c;
}

std::string Checks::to_string() const {
  std::string out;
  auto put = [&](bool on, const char* name) {
    if (!on) return;
    if (!out.empty()) out += ',';
    out += name;
  };
  put(residual, "residual");
  put(normalization, "normalization");
  put(orthogonality, "orthogonality");
  put(x0, "x0");
  put(limit, "limit");
  return out.empty() ? "none" : out;
}

std::vector<QuantumNumbers> LevelRange::expand() const {
  for (int v : {q_lo, q_hi, k_lo, k_hi, n_lo, n_hi}) {
    if (v < 0) throw ConfigError("quantum-number ranges must be nonnegative");
  }
  if (q_lo > q_hi || k_lo > k_hi || n_lo > n_hi) throw ConfigError("empty quantum-number range");
  std::vector<QuantumNumbers> out;
  for (int q = q_lo; q <= q_hi; ++q)
    for (int k = k_lo; k <= k_hi; ++k)
      for (int n = n_lo; n <= n_hi; ++n) out.push_back({q, k, n});
  return out;
}

LevelSolution solve_level(const SolveRequest& req) {
  validate(req.spec);
  req.ctx.validate();
  const QuantumNumbers& qn = req.qn;
  if (qn.q < 0 || qn.idx < 0 || qn.n_r < 0) throw ConfigError("quantum numbers must be >= 0");
  if (!req.ell) {
    double Lambda = 0.0;
    try {
      Lambda = phi_closed_lambda(req.spec, qn.q, req.ctx).Lambda;
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw StageError("phi", e.what());
    }
    try {
      theta_closed_ell(req.spec, Lambda, qn.idx, req.ctx);
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw StageError("theta", e.what());
    }
  }
  try {
    return closed_level(req.spec, req.ctx, qn, req.ell ? &*req.ell : nullptr);
  } catch (const ConfigError&) {
    throw;
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError("radial", e.what());
  }
}

OracleValues run_oracles(const SolveRequest& req, const LevelSolution& lv) {
  OracleValues o;
  const bool want_aim = uses_aim(req.method) || req.checks.x0;
  if (want_aim && !lv.radial_only) {
    if (!azimuthal_free(req.spec)) {
      try {
        const QuantizationResult res =
            solve_quantization(aim_family(req.spec, req.ctx, Stage::phi, 0.0, lv.qn.q), lv.qn.q + 1, req.aim);
        const AimRoot& root = res.roots.at(lv.qn.q);
        o.Lambda_aim = family_root_to_value(req.spec, Stage::phi, root.value);
        o.Lambda_aim_spread = root.spread;
      } catch (const Error& e) {
        add_note(o.note, std::string("phi AIM: ") + e.what());
      }
    }
    try {
      const QuantizationResult res = solve_quantization(
          aim_family(req.spec, req.ctx, Stage::theta, lv.Lambda, lv.qn.idx), lv.qn.idx + 1, req.aim);
      const AimRoot& root = res.roots.at(lv.qn.idx);
      o.ell_aim = family_root_to_value(req.spec, Stage::theta, root.value);
      o.ell_aim_spread = root.spread;
    } catch (const Error& e) {
      add_note(o.note, std::string("theta AIM: ") + e.what());
    }
  }
  if (want_aim && std::isfinite(lv.E)) {
    if (!(req.ctx.epsilon > 0.0)) {
      add_note(o.note, "radial AIM undefined at eps = 0");
    } else {
      try {
        const auto [lo, hi] = radial_window(req, lv);
        if (!(lo < lv.E && lv.E < hi)) throw NoBracketError("level lies outside the real-v region");
        const QuantizationResult res =
            solve_quantization(radial_aim_family(req.spec, req.ctx, lv.ell, lo, hi), 1, req.aim);
        o.E_aim = res.roots.at(0).value;
        o.E_aim_spread = res.roots.at(0).spread;
      } catch (const Error& e) {
        add_note(o.note, std::string("radial AIM: ") + e.what());
      }
    }
  }
  if (uses_fd(req.method) && std::isfinite(lv.E)) {
    if (!lv.bound) {
      add_note(o.note, "FD skipped: level not bound");
    } else {
      try {
        const auto levels = fd_radial_levels(req.spec, req.ctx, lv.ell, lv.qn.n_r + 1,
                                             default_fd_grid(req.spec, req.ctx));
        if (static_cast<int>(levels.size()) <= lv.qn.n_r) {
          throw NoBoundStateError("FD finds only " + std::to_string(levels.size()) + " levels");
        }
        o.E_fd = levels[lv.qn.n_r].E;
        o.fd_nodes = levels[lv.qn.n_r].nodes;
        o.fd_tail = levels[lv.qn.n_r].tail;
      } catch (const Error& e) {
        add_note(o.note, std::string("FD: ") + e.what());
      }
    }
  }
  return o;
}

LevelResult solve_row(const SolveRequest& req) {
  LevelResult r;
  r.ctx = req.ctx;
  r.level.qn = req.qn;
  r.level.family = family_name(req.spec);
  r.level.epsilon = req.ctx.epsilon;
  try {
    r.level = solve_level(req);
  } catch (const ConfigError& e) {
    r.status = "invalid";
    r.message = e.what();
    return r;
  } catch (const Error& e) {
    r.status = "error";
    r.message = e.what();
    return r;
  }
  r.status = r.level.bound ? "ok" : "unbound";
  r.message = r.level.note;
  r.oracles = run_oracles(req, r.level);
  const bool aim_missing = uses_aim(req.method) && req.ctx.epsilon > 0.0 && r.level.bound &&
                           std::isnan(r.oracles.E_aim);
  const bool fd_missing = uses_fd(req.method) && r.level.bound && std::isnan(r.oracles.E_fd);
  if (aim_missing || fd_missing) r.status = "oracle_error";
  if (!r.oracles.note.empty()) add_note(r.message, r.oracles.note);
  return r;
}

int worker_count() {
  if (const char* env = std::getenv("AIM_SPECTRA_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<LevelResult> solve_levels(const SolveRequest& base,
                                      const std::vector<QuantumNumbers>& levels, int threads) {
  std::vector<LevelResult> out(levels.size());
  parallel_for(levels.size(), threads > 0 ? threads : worker_count(), [&](std::size_t i) {
    SolveRequest req = base;
    req.qn = levels[i];
    out[i] = solve_row(req);
  });
  return out;
}

// ---------------------------------------------------------------- verify

namespace {

struct Recorder {
  LevelVerification& v;

  void add(std::string name, std::string status, double value, double tol, std::string detail) {
    if (status == "FAIL") v.pass = false;
    v.entries.push_back({std::move(name), std::move(status), value, tol, std::move(detail)});
  }
  void skip(std::string name, std::string why) { add(std::move(name), "SKIP", kNaN, kNaN, std::move(why)); }
  void judge(std::string name, double value, double tol, std::string detail = {}) {
    add(std::move(name), std::isfinite(value) && value <= tol ? "PASS" : "FAIL", value, tol,
        std::move(detail));
  }
  template <class F>
  void guarded(const std::string& name, double tol, F&& f) {
    try {
      f();
    } catch (const std::exception& e) {
      add(name, "FAIL", kNaN, tol, e.what());
    }
  }
};

std::vector<double> residual_grid(Stage stage, double a0) {
  std::vector<double> g;
  constexpr int n = 50;
  for (int i = 0; i < n; ++i) {
    switch (stage) {
      case Stage::radial:
        g.push_back(a0 * 0.05 * std::pow(1000.0, i / double(n - 1)));
        break;
      case Stage::theta:
        g.push_back(kPi * (i + 0.5) / n);
        break;
      case Stage::phi:
        g.push_back(2.0 * kPi * (i + 0.5) / n + 0.0123);
        break;
    }
  }
  return g;
}

double max_cosine(const PotentialSpec& spec, const PhysicalContext& ctx, const LevelSolution& a,
                  const std::vector<LevelSolution>& others, Stage stage) {
  const RadialMeasure m = RadialMeasure::dr_over_f2;
  const double aa = factor_overlap(spec, ctx, a, a, stage, m);
  double worst = 0.0;
  for (const LevelSolution& b : others) {
    const double ab = factor_overlap(spec, ctx, a, b, stage, m);
    const double bb = factor_overlap(spec, ctx, b, b, stage, m);
    worst = std::max(worst, std::abs(ab) / std::sqrt(aa * bb));
  }
  return worst;
}

}  // namespace

LevelVerification verify_level(const SolveRequest& req, const LevelSolution& lv) {
  LevelVerification v;
  v.level = lv;
  Recorder rec{v};
  const PotentialSpec& spec = req.spec;
  const PhysicalContext& ctx = req.ctx;
  const Tolerances& tol = req.tol;
  const bool deformed = ctx.epsilon > 0.0;
  const bool has_phi = !azimuthal_free(spec);
  const bool radial_ok = deformed && std::isfinite(lv.E);
  const char* eps0 = "wavefunction undefined at eps = 0";

  v.oracles = run_oracles(req, lv);
  const OracleValues& o = v.oracles;

  if (uses_aim(req.method)) {
    if (!deformed) {
      rec.skip("aim_energy", "radial AIM family undefined at eps = 0");
    } else {
      rec.judge("aim_energy", std::abs(o.E_aim - lv.E), tol.aim_energy,
                "E_aim = " + fmt(o.E_aim) + (o.note.empty() ? "" : "; " + o.note));
    }
    if (lv.radial_only) {
      rec.skip("aim_ell", "l supplied directly");
    } else {
      rec.judge("aim_ell", std::abs(o.ell_aim - lv.ell), tol.angular, "l_aim = " + fmt(o.ell_aim));
    }
    if (lv.radial_only || !has_phi) {
      rec.skip("aim_Lambda", "Lambda supplied by the caller");
    } else {
      rec.judge("aim_Lambda", std::abs(o.Lambda_aim - lv.Lambda), tol.angular,
                "Lambda_aim = " + fmt(o.Lambda_aim));
    }
  }
  if (uses_fd(req.method)) {
    if (!lv.bound || !std::isfinite(lv.E)) {
      rec.skip("fd_energy", "level not bound");
    } else {
      rec.judge("fd_energy", std::abs(o.E_fd - lv.E), tol.fd_energy, "E_fd = " + fmt(o.E_fd));
    }
  }

  if (req.checks.x0) {
    double worst = kNaN;
    for (double s : {o.E_aim_spread, o.ell_aim_spread, o.Lambda_aim_spread}) {
      if (std::isfinite(s)) worst = std::isfinite(worst) ? std::max(worst, s) : s;
    }
    v.x0_spread = worst;
    if (std::isnan(worst)) {
      rec.skip("x0_spread", "no AIM root available");
    } else {
      rec.judge("x0_spread", worst, tol.x0_spread);
    }
  }

  if (req.checks.residual) {
    double all_max = 0.0;
    auto stage_residual = [&](Stage s, const char* name) {
      rec.guarded(name, tol.residual, [&] {
        double worst = 0.0;
        for (double x : residual_grid(s, coulomb_length(spec, ctx))) {
          worst = std::max(worst, ode_residual(spec, ctx, lv, s, x));
        }
        all_max = std::max(all_max, worst);
        rec.judge(name, worst, tol.residual, "max over 50 interior points");
      });
    };
    if (radial_ok) {
      stage_residual(Stage::radial, "residual_radial");
    } else {
      rec.skip("residual_radial", deformed ? "no energy" : eps0);
    }
    if (lv.radial_only) {
      rec.skip("residual_theta", "l supplied directly");
      rec.skip("residual_phi", "l supplied directly");
    } else {
      stage_residual(Stage::theta, "residual_theta");
      stage_residual(Stage::phi, "residual_phi");
    }
    v.residual_max = all_max;
  }

  if (req.checks.normalization) {
    auto stage_norm = [&](Stage s, const char* name) {
      rec.guarded(name, tol.normalization, [&] {
        const NormalizationReport r = normalization(spec, ctx, lv, s);
        v.norms.push_back({s, r});
        std::string detail = "printed_norm = " + fmt(r.printed_norm);
        if (!r.note.empty()) detail += "; " + r.note;
        rec.judge(name, std::abs(r.self_norm - 1.0), tol.normalization, detail);
      });
    };
    if (!radial_ok) {
      rec.skip("normalization_radial", deformed ? "no energy" : eps0);
    } else if (!lv.bound) {
      rec.skip("normalization_radial", "level not square integrable");
    } else {
      stage_norm(Stage::radial, "normalization_radial");
    }
    if (lv.radial_only) {
      rec.skip("normalization_theta", "l supplied directly");
      rec.skip("normalization_phi", "l supplied directly");
      rec.skip("normalization_psi", "l supplied directly");
    } else {
      stage_norm(Stage::theta, "normalization_theta");
      stage_norm(Stage::phi, "normalization_phi");
      if (radial_ok && lv.bound) {
        rec.guarded("normalization_psi", tol.psi_norm, [&] {
          const Psi psi(spec, ctx, lv);
          rec.judge("normalization_psi", std::abs(psi.norm() - 1.0), tol.psi_norm,
                    "product of factor norms, radial under dr/f^2");
        });
      } else {
        rec.skip("normalization_psi", deformed ? "level not bound" : eps0);
      }
    }
  }

  if (req.checks.orthogonality) {
    const double* ell = lv.radial_only ? &lv.ell : nullptr;
    auto partners = [&](auto qn_of, int self, int top) {
      std::vector<LevelSolution> out;
      for (int j = 0; j <= top; ++j) {
        if (j == self) continue;
        out.push_back(closed_level(spec, ctx, qn_of(j), ell));
      }
      return out;
    };
    if (!radial_ok || !lv.bound) {
      rec.skip("orthogonality_radial", deformed ? "level not bound" : eps0);
    } else {
      rec.guarded("orthogonality_radial", tol.orthogonality, [&] {
        std::vector<LevelSolution> others;
        for (const LevelSolution& b :
             partners([&](int j) { return QuantumNumbers{lv.qn.q, lv.qn.idx, j}; }, lv.qn.n_r,
                      std::max(2, lv.qn.n_r + 1))) {
          if (b.bound && std::isfinite(b.E)) others.push_back(b);
        }
        if (others.empty()) {
          rec.skip("orthogonality_radial", "no other bound level at this l");
          return;
        }
        rec.judge("orthogonality_radial", max_cosine(spec, ctx, lv, others, Stage::radial),
                  tol.orthogonality, "|cos| under dr/f^2");
      });
    }
    if (lv.radial_only) {
      rec.skip("orthogonality_theta", "l supplied directly");
      rec.skip("orthogonality_phi", "l supplied directly");
    } else {
      rec.guarded("orthogonality_theta", tol.orthogonality, [&] {
        const auto others = partners([&](int j) { return QuantumNumbers{lv.qn.q, j, lv.qn.n_r}; },
                                     lv.qn.idx, std::max(2, lv.qn.idx + 1));
        rec.judge("orthogonality_theta", max_cosine(spec, ctx, lv, others, Stage::theta),
                  tol.orthogonality, "|cos| under sin(theta) d(theta)");
      });
      rec.guarded("orthogonality_phi", tol.orthogonality, [&] {
        const auto others = partners([&](int j) { return QuantumNumbers{j, lv.qn.idx, lv.qn.n_r}; },
                                     lv.qn.q, std::max(2, lv.qn.q + 1));
        rec.judge("orthogonality_phi", max_cosine(spec, ctx, lv, others, Stage::phi),
                  tol.orthogonality, "|cos| under d(phi)");
      });
    }
  }

  if (req.checks.limit) {
    rec.guarded("limit", tol.limit, [&] {
      const std::optional<double> ell = lv.radial_only ? std::optional<double>(lv.ell) : std::nullopt;
      const LimitReport r = epsilon_limit_check(spec, ctx, lv.qn, req.limit_eps, ell, tol.limit);
      rec.judge("limit", r.difference, tol.limit,
                "E0 = " + fmt(r.E0) + ", constant mass " + fmt(r.E_constant_mass) +
                    ", c1 = " + fmt(r.c1));
    });
  }
  return v;
}

VerificationReport verify_levels(const SolveRequest& base, const std::vector<QuantumNumbers>& levels) {
  validate(base.spec);
  base.ctx.validate();
  VerificationReport rep;
  rep.levels.resize(levels.size());
  parallel_for(levels.size(), worker_count(), [&](std::size_t i) {
    SolveRequest req = base;
    req.qn = levels[i];
    LevelVerification& v = rep.levels[i];
    try {
      v = verify_level(req, solve_level(req));
    } catch (const std::exception& e) {
      v.level.qn = levels[i];
      v.level.family = family_name(req.spec);
      v.pass = false;
      v.entries.push_back({"solve", "FAIL", kNaN, kNaN, e.what()});
    }
  });
  for (const auto& v : rep.levels) rep.pass = rep.pass && v.pass;
  return rep;
}

// ---------------------------------------------------------------- limit

LimitReport epsilon_limit_check(const PotentialSpec& spec, const PhysicalContext& ctx,
                                const QuantumNumbers& qn, const std::vector<double>& eps_list,
                                std::optional<double> ell, double tol) {
  if (eps_list.size() < 2) throw ConfigError("extrapolation needs >= 2 epsilon values");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw ConfigError("epsilon values must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) {
      throw ConfigError("epsilon values must be strictly decreasing");
    }
  }
  const double* ell_ptr = ell ? &*ell : nullptr;
  LimitReport r;
  r.eps = eps_list;
  for (double e : eps_list) {
    PhysicalContext c = ctx;
    c.epsilon = e;
    r.energies.push_back(closed_level(spec, c, qn, ell_ptr).E);
  }
  // Newton divided differences, then value and slope at 0.
  const std::size_t n = eps_list.size();
  std::vector<double> d = r.energies;
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = n - 1; i >= j; --i) d[i] = (d[i] - d[i - 1]) / (eps_list[i] - eps_list[i - j]);
  double p = d[n - 1], dp = 0.0;
  for (std::size_t i = n - 1; i-- > 0;) {
    dp = dp * (0.0 - eps_list[i]) + p;
    p = p * (0.0 - eps_list[i]) + d[i];
  }
  r.E0 = p;
  r.c1 = dp;
  PhysicalContext c0 = ctx;
  c0.epsilon = 0.0;
  r.E_constant_mass = closed_level(spec, c0, qn, ell_ptr).E;
  r.difference = std::abs(r.E0 - r.E_constant_mass);
  r.pass = r.difference <= tol;
  return r;
}

// ---------------------------------------------------------------- psi

Psi::Psi(const PotentialSpec& spec, const PhysicalContext& ctx, const LevelSolution& level)
    : spec_(spec), ctx_(ctx), level_(level) {
  if (!(ctx.epsilon > 0.0)) throw ParameterError("psi is undefined at eps = 0");
  if (level.radial_only) throw ParameterError("psi needs the angular stages");
  if (!level.bound) throw NoBoundStateError("psi of an unbound level");
  const NormalizationReport rr = normalization(spec, ctx, level, Stage::radial, RadialMeasure::dr_over_f2);
  const NormalizationReport rt = normalization(spec, ctx, level, Stage::theta);
  c_radial_ = rr.quadrature_constant;
  c_theta_ = rt.quadrature_constant;
  norm_ = rr.self_norm * rt.self_norm;
  if (azimuthal_free(spec)) {
    c_phi_ = 1.0 / std::sqrt(2.0 * kPi);
  } else {
    const NormalizationReport rp = normalization(spec, ctx, level, Stage::phi);
    c_phi_ = rp.quadrature_constant;
    norm_ *= rp.self_norm;
  }
}

std::complex<double> Psi::operator()(double r, double theta, double phi) const {
  const double R = c_radial_ * wavefunction_factor(spec_, ctx_, level_, Stage::radial, r);
  const double T = c_theta_ * wavefunction_factor(spec_, ctx_, level_, Stage::theta, theta);
  std::complex<double> P;
  if (azimuthal_free(spec_)) {
    P = c_phi_ * std::exp(std::complex<double>(0.0, level_.Lambda_sign * level_.Lambda * phi));
  } else {
    P = c_phi_ * wavefunction_factor(spec_, ctx_, level_, Stage::phi, phi);
  }
  return R / (r * (1.0 + ctx_.epsilon * r)) * T * P;
}

// ---------------------------------------------------------------- sweep

namespace {

double* coupling(PotentialSpec& spec, const std::string& key) {
  return std::visit(
      Overloaded{
          [&](Ptdrsc& p) -> double* {
            if (key == "beta") return &p.beta;
            if (key == "b") return &p.b;
            if (key == "A") return &p.A;
            if (key == "C") return &p.C;
            if (key == "D") return &p.D;
            return nullptr;
          },
          [&](Kratzer& p) -> double* {
            if (key == "De") return &p.De;
            if (key == "re") return &p.re;
            if (key == "a") return &p.a;
            if (key == "b") return &p.b;
            return nullptr;
          },
          [&](ModifiedKratzer& p) -> double* {
            if (key == "De") return &p.De;
            if (key == "re") return &p.re;
            if (key == "a") return &p.a;
            if (key == "b") return &p.b;
            return nullptr;
          },
          [&](Makarov& p) -> double* {
            if (key == "beta") return &p.beta;
            if (key == "alphaM") return &p.alphaM;
            if (key == "gammaM") return &p.gammaM;
            return nullptr;
          },
          [&](NadCoulomb& p) -> double* {
            if (key == "beta") return &p.beta;
            if (key == "gammaN") return &p.gammaN;
            if (key == "kappaN") return &p.kappaN;
            if (key == "etaN") return &p.etaN;
            return nullptr;
          },
      },
      spec);
}

double* context_field(PhysicalContext& ctx, const std::string& key) {
  if (key == "hbar") return &ctx.hbar;
  if (key == "m0") return &ctx.m0;
  if (key == "delta") return &ctx.delta;
  if (key == "lambda") return &ctx.lambda;
  if (key == "epsilon") return &ctx.epsilon;
  return nullptr;
}

double* parameter(SolveRequest& req, const std::string& key) {
  if (double* p = context_field(req.ctx, key)) return p;
  const auto& keys = sweep_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    throw ConfigError("unknown parameter '" + key + "'");
  }
  double* p = coupling(req.spec, key);
  if (!p) throw ConfigError("'" + key + "' is not a coupling of " + family_name(req.spec));
  return p;
}

}  // namespace

const std::vector<std::string>& sweep_keys() {
  static const std::vector<std::string> keys{
      "hbar", "m0",     "delta",  "lambda", "epsilon", "beta",   "b",      "A",     "C",
      "D",    "De",     "re",     "a",      "alphaM",  "gammaM", "gammaN", "kappaN", "etaN"};
  return keys;
}

void apply_parameter(SolveRequest& req, const std::string& key, double value) {
  *parameter(req, key) = value;
}

double get_parameter(const SolveRequest& req, const std::string& key) {
  SolveRequest copy = req;
  return *parameter(copy, key);
}

std::vector<SweepRow> sweep(const SolveRequest& base, const std::vector<QuantumNumbers>& levels,
                            const SweepSpec& spec, int threads) {
  {
    SolveRequest probe = base;
    parameter(probe, spec.key);
  }
  if (!(spec.r_ref > 0.0)) throw ConfigError("r_ref must be > 0");
  std::vector<SweepRow> rows(spec.values.size() * levels.size());
  parallel_for(rows.size(), threads > 0 ? threads : worker_count(), [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.value = spec.values[i / levels.size()];
    SolveRequest req = base;
    apply_parameter(req, spec.key, row.value);
    if (spec.lambda_follows_delta) req.ctx.lambda = 1.0 - req.ctx.delta;
    req.qn = levels[i % levels.size()];
    row.result = solve_row(req);
    if (req.ctx.epsilon >= 0.0) {
      row.correction =
          effective_potential_correction(req.ctx, LinearDeformation(req.ctx.epsilon), spec.r_ref);
    }
  });
  return rows;
}

}  // namespace aimspec
