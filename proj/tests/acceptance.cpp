// Acceptance suite: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aimspec/cli.hpp"
#include "aimspec/errors.hpp"
#include "aimspec/fdoracle.hpp"
#include "aimspec/pipeline.hpp"

using namespace aimspec;

namespace {

constexpr double kPi = std::numbers::pi;
const PotentialSpec kCoulomb = Ptdrsc{1.0, 0.0, 1.0, 1.0, 1.0, 1};

struct Outcome {
  bool pass = true;
  std::string summary;
  std::vector<std::string> details;

  void fail_if(bool bad, const std::string& why) {
    if (bad) {
      pass = false;
      details.push_back(why);
    }
  }
};

std::string fmt(const char* f, auto... xs) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, xs...);
  return buf;
}

PhysicalContext eps_ctx(double eps) {
  PhysicalContext c;
  c.epsilon = eps;
  return c;
}

/// AIM root spreads gathered by criteria 2-4 for criterion 8.
struct SpreadLog {
  double worst = 0.0;
  int count = 0;
  std::vector<std::string> over;
  void add(const std::string& what, double s) {
    ++count;
    if (!std::isfinite(s) || s > 1e-8) over.push_back(what + fmt(" spread %.3g", s));
    if (std::isfinite(s)) worst = std::max(worst, s);
  }
};

SpreadLog g_spreads;

Outcome hydrogen() {
  Outcome o;
  const double want[] = {-0.5, -0.125, -1.0 / 18.0};
  double worst = 0.0;
  for (int n = 0; n < 3; ++n) {
    SolveRequest req;
    req.spec = kCoulomb;
    req.qn = {0, 0, n};
    req.ell = 0.0;
    const double E = solve_level(req).E;
    worst = std::max(worst, std::abs(E - want[n]));
    o.fail_if(std::abs(E - want[n]) > 1e-12, fmt("n = %d: E = %.17g", n + 1, E));
  }
  o.summary = fmt("max |E - (-1/2n^2)| = %.3g over n = 1..3", worst);
  return o;
}

Outcome triple_oracle() {
  Outcome o;
  int aim_ok = 0, fd_ok = 0, fd_missing = 0, bound_levels = 0, bound_ok = 0;
  double aim_worst = 0.0, fd_worst = 0.0;
  std::vector<std::string> unmatched;
  for (double eps : {0.05, 0.1}) {
    const PhysicalContext ctx = eps_ctx(eps);
    for (double ell : {0.0, 1.0, 2.0}) {
      const auto fd = fd_radial_levels(kCoulomb, ctx, ell, 4, default_fd_grid(kCoulomb, ctx));
      for (int n = 0; n < 4; ++n) {
        SolveRequest req;
        req.spec = kCoulomb;
        req.ctx = ctx;
        req.qn = {0, 0, n};
        req.ell = ell;
        req.method = Method::aim;
        const LevelSolution lv = solve_level(req);
        const OracleValues ov = run_oracles(req, lv);
        const std::string tag = fmt("eps=%g l=%g n_r=%d", eps, ell, n);
        g_spreads.add("radial " + tag, ov.E_aim_spread);
        const double da = std::abs(lv.E - ov.E_aim);
        aim_worst = std::max(aim_worst, std::isfinite(da) ? da : INFINITY);
        const bool a_ok = da <= 1e-8;
        aim_ok += a_ok;
        o.fail_if(!a_ok, tag + fmt(": |E_closed - E_aim| = %.3g (%s)", da, ov.note.c_str()));
        bool f_ok = false;
        if (n < static_cast<int>(fd.size())) {
          const double df = std::abs(lv.E - fd[n].E);
          fd_worst = std::max(fd_worst, df);
          f_ok = df <= 1e-5 && fd[n].nodes == n;
          fd_ok += f_ok;
          o.fail_if(!f_ok, tag + fmt(": |E_closed - E_fd| = %.3g, nodes %d", df, fd[n].nodes));
        } else {
          ++fd_missing;
          const double u_v_n = lv.radial.u + lv.radial.v + n;
          o.fail_if(true, tag + fmt(": E_closed = %.6g has no FD eigenvalue (u+v+n_r = %g, continuum from %.6g)",
                                    lv.E, u_v_n, continuum_threshold(kCoulomb, ctx, ell)));
        }
        if (lv.bound) {
          ++bound_levels;
          bound_ok += a_ok && f_ok;
        }
        if (eps == 0.1 && ell == 0.0 && n == 0) {
          o.fail_if(std::abs(lv.E + 0.35) > 1e-12, fmt("E(0.1, 0, 0) = %.17g, expected -0.35", lv.E));
          o.details.push_back(fmt("anchor eps=0.1 l=0 n_r=0: closed %.15g, AIM %.15g, FD %.12g", lv.E,
                                  ov.E_aim, fd.empty() ? NAN : fd[0].E));
        }
      }
    }
  }
  o.summary = fmt("AIM %d/24 within 1e-8 (max %.2g), FD %d/24 within 1e-5 (max %.2g), %d without an FD "
                  "eigenvalue; bound levels %d/%d agree on both",
                  aim_ok, aim_worst, fd_ok, fd_worst, fd_missing, bound_ok, bound_levels);
  return o;
}

Outcome theta_quantization() {
  Outcome o;
  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const PhysicalContext ctx = eps_ctx(0.05);
  AimConfig cfg;
  double worst = 0.0;
  int roots = 0;
  auto check_family = [&](const std::string& name, const PotentialSpec& spec, double Lambda) {
    const QuantizationResult res = solve_quantization(aim_family(spec, ctx, Stage::theta, Lambda, 2), 3, cfg);
    for (int k = 0; k < 3; ++k) {
      const double ell_aim = family_root_to_value(spec, Stage::theta, res.roots.at(k).value);
      const double ell = theta_closed_ell(spec, Lambda, k, ctx).ell;
      const double d = std::abs(ell_aim - ell);
      worst = std::max(worst, d);
      ++roots;
      g_spreads.add(fmt("theta %s k=%d", name.c_str(), k), res.roots[k].spread);
      o.fail_if(d > 1e-8, fmt("%s Lambda=%g k=%d: l_aim %.15g vs %.15g", name.c_str(), Lambda, k, ell_aim, ell));
    }
  };
  for (int draw = 0; draw < 5; ++draw) {
    const Ptdrsc pt{1.0, U(rng), 1.2 + 2 * U(rng), 1.2 + 2 * U(rng), 1.2 + 2 * U(rng), 1 + int(2 * U(rng))};
    check_family("ptdrsc", pt, phi_closed_lambda(pt, int(3 * U(rng)), ctx).Lambda);
    const int L = int(3 * U(rng));
    check_family("makarov", Makarov{1.0, U(rng), U(rng) - 0.5}, L);
    for (int variant : {1, 2}) {
      check_family(fmt("nad%d", variant), NadCoulomb{1.0, U(rng), U(rng), U(rng), variant}, int(3 * U(rng)));
    }
  }
  o.summary = fmt("%d roots over 5 draws x 4 families, max |l_aim - l| = %.2g", roots, worst);
  return o;
}

Outcome phi_quantization() {
  Outcome o;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const PhysicalContext ctx = eps_ctx(0.05);
  double worst = 0.0, worst_gap = 0.0;
  for (int draw = 0; draw < 5; ++draw) {
    const Ptdrsc pt{1.0, U(rng), 1.2 + 2 * U(rng), 1.1 + 2 * U(rng), 1.1 + 2 * U(rng), 1 + int(3 * U(rng))};
    const QuantizationResult res = solve_quantization(aim_family(pt, ctx, Stage::phi, 0.0, 2), 3, AimConfig{});
    double prev = 0.0;
    for (int q = 0; q < 3; ++q) {
      const double L_aim = family_root_to_value(pt, Stage::phi, res.roots.at(q).value);
      const double L = phi_closed_lambda(pt, q, ctx).Lambda;
      worst = std::max(worst, std::abs(L_aim - L));
      g_spreads.add(fmt("phi draw %d q=%d", draw, q), res.roots[q].spread);
      o.fail_if(std::abs(L_aim - L) > 1e-8, fmt("draw %d q=%d: %.15g vs %.15g", draw, q, L_aim, L));
      if (q > 0) {
        const double gap = std::abs(L - prev - 2.0 * pt.alpha);
        worst_gap = std::max(worst_gap, gap);
        o.fail_if(gap > 1e-10, fmt("draw %d: Lambda(%d) - Lambda(%d) off 2 alpha by %.3g", draw, q, q - 1, gap));
      }
      prev = L;
    }
  }
  o.summary = fmt("max |Lambda_aim - Lambda| = %.2g, max spacing error = %.2g", worst, worst_gap);
  return o;
}

Outcome normalization_check() {
  Outcome o;
  const PhysicalContext ctx = eps_ctx(0.05);
  int n_checked = 0;
  double worst_self = 0.0;
  struct Angular {
    std::string name;
    PotentialSpec spec;
    Stage stage;
  };
  const std::vector<Angular> angular{
      {"ptdrsc theta", Ptdrsc{1.0, 0.3, 2.0, 1.5, 2.5, 1}, Stage::theta},
      {"ptdrsc phi", Ptdrsc{1.0, 0.3, 2.0, 1.5, 2.5, 1}, Stage::phi},
      {"makarov theta", Makarov{1.0, 0.4, 0.2}, Stage::theta},
      {"nad theta", NadCoulomb{1.0, 0.5, 0.2, 0.3, 1}, Stage::theta},
  };
  for (const Angular& a : angular) {
    double worst = 0.0;
    for (int q = 0; q <= 2; ++q)
      for (int k = 0; k <= 2; ++k) {
        const LevelSolution lv = closed_level(a.spec, ctx, {q, k, 0});
        const NormalizationReport r = normalization(a.spec, ctx, lv, a.stage);
        worst = std::max(worst, std::abs(r.printed_norm - 1.0));
        worst_self = std::max(worst_self, std::abs(r.self_norm - 1.0));
        ++n_checked;
      }
    o.fail_if(!(worst <= 1e-6), fmt("%s: printed-constant norm off 1 by up to %.3g", a.name.c_str(), worst));
    if (worst <= 1e-6) o.details.push_back(a.name + fmt(": printed constant OK (%.2g)", worst));
  }
  // Radial stage: printed constant reported, quadrature constant authoritative.
  for (int n = 0; n <= 2; ++n) {
    const PhysicalContext c = eps_ctx(0.1);
    const double ell = 0.0;
    const LevelSolution lv = closed_level(kCoulomb, c, {0, 0, n}, &ell);
    const NormalizationReport r = normalization(kCoulomb, c, lv, Stage::radial);
    worst_self = std::max(worst_self, std::abs(r.self_norm - 1.0));
    o.fail_if(!std::isfinite(r.quadrature_constant) || std::abs(r.self_norm - 1.0) > 1e-6,
              fmt("radial n_r=%d: self norm %.12g", n, r.self_norm));
    o.details.push_back(fmt("radial eps=0.1 l=0 n_r=%d: printed constant %.10g gives norm %.10g; "
                            "quadrature constant %.10g, self norm %.12g%s%s",
                            n, r.printed_constant, r.printed_norm, r.quadrature_constant, r.self_norm,
                            r.note.empty() ? "" : "; ", r.note.c_str()));
    ++n_checked;
  }
  o.summary = fmt("%d stage normalizations, max |self norm - 1| = %.2g", n_checked, worst_self);
  return o;
}

Outcome ode_residuals() {
  Outcome o;
  struct Case {
    PotentialSpec spec;
    double eps;
  };
  const std::vector<Case> cases{
      {Ptdrsc{1.0, 0.1, 1.2, 1.1, 1.3, 1}, 0.005}, {Ptdrsc{1.0, 0.0, 1.5, 1.5, 2.0, 2}, 0.002},
      {Kratzer{2.0, 1.0, 0.3, 0.2}, 0.02},         {ModifiedKratzer{2.0, 1.0, 0.3, 0.2}, 0.02},
      {Makarov{1.0, 0.5, 0.2}, 0.005},             {NadCoulomb{1.0, 0.5, 0.2, 0.3, 1}, 0.005},
      {NadCoulomb{1.0, 0.5, 0.2, 0.3, 2}, 0.005},
  };
  double worst = 0.0;
  int levels = 0;
  for (const Case& c : cases) {
    SolveRequest base;
    base.spec = c.spec;
    base.ctx = eps_ctx(c.eps);
    base.checks.residual = true;
    const VerificationReport rep = verify_levels(base, LevelRange{0, 1, 0, 1, 0, 1}.expand());
    for (const LevelVerification& v : rep.levels) {
      ++levels;
      for (const CheckEntry& e : v.entries) {
        if (e.status == "PASS") worst = std::max(worst, e.value);
        o.fail_if(e.status == "FAIL" || (e.name == "residual_radial" && e.status != "PASS"),
                  fmt("%s (%d,%d,%d) %s: %s %.3g %s", v.level.family.c_str(), v.level.qn.q, v.level.qn.idx,
                      v.level.qn.n_r, e.name.c_str(), e.status.c_str(), e.value, e.detail.c_str()));
      }
    }
  }
  o.summary = fmt("%d levels x 3 stages on 50-point grids, max relative residual %.2g", levels, worst);
  return o;
}

Outcome reductions() {
  Outcome o;
  // (a) the modified Kratzer spectrum is the Kratzer one shifted by De.
  double worst_a = 0.0;
  int exact = 0;
  for (double eps : {0.0, 0.02}) {
    const PhysicalContext ctx = eps_ctx(eps);
    for (int k = 0; k <= 2; ++k)
      for (int n = 0; n <= 2; ++n) {
        const double De = 2.0;
        const double ek = closed_level(Kratzer{De, 1.0, 0.3, 0.2}, ctx, {0, k, n}).E;
        const double em = closed_level(ModifiedKratzer{De, 1.0, 0.3, 0.2}, ctx, {0, k, n}).E;
        const double d = std::abs((em - ek) - De);
        exact += d == 0.0;
        worst_a = std::max(worst_a, d);
        o.fail_if(d > 4 * std::numeric_limits<double>::epsilon() * (De + std::abs(ek)),
                  fmt("(a) eps=%g k=%d n_r=%d: E_mkp - E_kp - De = %.3g", eps, k, n, d));
      }
  }
  // (b) Makarov without ring terms: l = |Lambda| + j.
  int b_ok = 0;
  for (int L = 0; L <= 2; ++L)
    for (int j = 0; j <= 2; ++j) {
      const double ell = closed_level(Makarov{1.0, 0.0, 0.0}, eps_ctx(0.05), {L, j, 0}).ell;
      b_ok += ell == L + j;
      o.fail_if(ell != L + j, fmt("(b) Lambda=%d j=%d: l = %.17g", L, j, ell));
    }
  // (c) PTDRSC at A = C = D = 1, b = 0: no angular potential, Coulomb spectrum.
  const PotentialComponents comp = decompose_potential(kCoulomb, PhysicalContext{});
  double vmax = 0.0;
  for (int i = 1; i < 200; ++i) {
    vmax = std::max(vmax, std::abs(comp.v2(kPi * i / 200.0 + 1e-3)));
    vmax = std::max(vmax, std::abs(comp.v3(2 * kPi * i / 200.0 + 1e-3)));
  }
  o.fail_if(vmax != 0.0 || !comp.v2_zero || !comp.v3_zero, fmt("(c) angular potential %.3g", vmax));
  double worst_c = 0.0;
  for (int q = 0; q <= 2; ++q)
    for (int k = 0; k <= 2; ++k)
      for (int n = 0; n <= 2; ++n) {
        const LevelSolution lv = closed_level(kCoulomb, PhysicalContext{}, {q, k, n});
        const double N = n + lv.ell + 1.0;
        const double d = std::abs(lv.E + 0.5 / (N * N));
        worst_c = std::max(worst_c, d);
        o.fail_if(d > 1e-14 || lv.ell != std::round(lv.ell),
                  fmt("(c) (%d,%d,%d): l = %.17g, E = %.17g", q, k, n, lv.ell, lv.E));
      }
  o.summary = fmt("(a) max |E_mkp - E_kp - De| = %.2g (%d/18 bit-exact), (b) %d/9 exact, "
                  "(c) angular max %.2g, Coulomb max %.2g",
                  worst_a, exact, b_ok, vmax, worst_c);
  return o;
}

Outcome x0_independence() {
  Outcome o;
  for (const auto& s : g_spreads.over) o.fail_if(true, s);
  o.fail_if(g_spreads.count == 0, "no AIM roots were recorded");
  o.summary = fmt("%d AIM roots from criteria 2-4, max spread over 3 x0 = %.2g", g_spreads.count,
                  g_spreads.worst);
  return o;
}

Outcome epsilon_continuity() {
  Outcome o;
  const std::vector<double> eps{1e-2, 1e-3, 1e-4};
  struct Case {
    std::string name;
    PotentialSpec spec;
    std::optional<double> ell;
  };
  const std::vector<Case> cases{
      {"ptdrsc l=0", kCoulomb, 0.0},
      {"ptdrsc chain", Ptdrsc{1.0, 0.1, 1.2, 1.1, 1.3, 1}, std::nullopt},
      {"kratzer chain", Kratzer{2.0, 1.0, 0.3, 0.2}, std::nullopt},
  };
  double worst = 0.0;
  for (const Case& c : cases) {
    const LimitReport r = epsilon_limit_check(c.spec, PhysicalContext{}, {0, 0, 0}, eps, c.ell);
    worst = std::max(worst, r.difference);
    o.fail_if(!r.pass, fmt("%s: E0 = %.15g vs %.15g", c.name.c_str(), r.E0, r.E_constant_mass));
    o.details.push_back(fmt("%s: E0 = %.12g, constant mass %.12g, c1 = %.6g", c.name.c_str(), r.E0,
                            r.E_constant_mass, r.c1));
  }
  o.summary = fmt("max |E0 - E(eps=0)| = %.2g over 3 ground chains", worst);
  return o;
}

std::string cli_output(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"aim-spectra"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return std::to_string(code) + "\n" + out.str();
}

Outcome determinism(const std::string& golden_dir) {
  Outcome o;
  const std::vector<std::vector<std::string>> commands{
      {"spectrum", "--A", "2", "--C", "2", "--D", "2", "--epsilon", "0.1", "--nr", "0..3", "--k", "0..2",
       "--q", "0..2"},
      {"spectrum", "--ell", "0", "--epsilon", "0.1", "--nr", "0..3", "--method", "aim", "--mode", "exact"},
      {"spectrum", "--family", "nad", "--variant", "2", "--gammaN", "0.5", "--kappaN", "0.2", "--etaN", "0.3",
       "--epsilon", "0.005", "--k", "0..2", "--nr", "0..1", "--method", "aim", "--format", "json"},
      {"sweep", "--family", "kratzer", "--De", "2", "--a", "0.3", "--b", "0.2", "--nr", "0..1", "--sweep",
       "epsilon=0:0.2:11"},
      {"verify", "--epsilon", "0.1", "--ell", "0", "--nr", "0..1", "--checks", "all", "--method", "all"},
  };
  std::vector<std::string> first, second;
  setenv("AIM_SPECTRA_THREADS", "1", 1);
  for (const auto& c : commands) first.push_back(cli_output(c));
  setenv("AIM_SPECTRA_THREADS", "8", 1);
  for (const auto& c : commands) second.push_back(cli_output(c));
  unsetenv("AIM_SPECTRA_THREADS");
  int same = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    same += first[i] == second[i];
    o.fail_if(first[i] != second[i], "run " + std::to_string(i) + " differs between 1 and 8 workers");
  }
  // Committed golden outputs, bit for bit.
  const std::vector<std::pair<std::string, int>> golden{{"spectrum_ptdrsc.csv", 0},
                                                        {"spectrum_radial_aim.csv", 1},
                                                        {"spectrum_families.json", 2},
                                                        {"sweep_epsilon.csv", 3}};
  int golden_ok = 0;
  for (const auto& [file, idx] : golden) {
    std::ifstream f(golden_dir + "/" + file, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    const bool ok = f.good() && "0\n" + ss.str() == first[idx];
    golden_ok += ok;
    o.fail_if(!ok, file + " does not match");
  }
  o.summary = fmt("%d/%zu outputs identical across runs and worker counts, %d/%zu golden files bit-exact", same,
                  commands.size(), golden_ok, golden.size());
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  std::string expect;
  std::string golden_dir = AIMSPEC_GOLDEN_DIR;
  bool verbose = false;
  app.add_option("--expect-fail", expect, "comma list of criteria known to fail");
  app.add_option("--golden", golden_dir, "golden output directory");
  app.add_flag("-v,--verbose", verbose, "print details for passing criteria too");
  CLI11_PARSE(app, argc, argv);

  std::set<int> expected;
  std::stringstream ss(expect);
  for (std::string item; std::getline(ss, item, ',');) expected.insert(std::stoi(item));

  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "hydrogen limit", 1.0, hydrogen},
      {2, "triple-oracle agreement (radial)", 60.0, triple_oracle},
      {3, "angular quantization (theta)", 30.0, theta_quantization},
      {4, "azimuthal quantization (phi)", 0.0, phi_quantization},
      {5, "normalization", 0.0, normalization_check},
      {6, "ODE residuals", 0.0, ode_residuals},
      {7, "reductions", 0.0, reductions},
      {8, "x0-independence", 0.0, x0_independence},
      {9, "eps-continuity", 0.0, epsilon_continuity},
      {10, "determinism", 0.0, [&] { return determinism(golden_dir); }},
  };
  std::set<int> failed;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("threw: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0.0 && secs > c.budget_s) {
      o.pass = false;
      o.details.push_back(fmt("runtime %.2f s exceeds %.0f s", secs, c.budget_s));
    }
    if (!o.pass) failed.insert(c.id);
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << c.id << "  " << c.name << ": " << o.summary
              << fmt(" [%.2f s]", secs) << '\n';
    if (!o.pass || verbose) {
      for (const auto& d : o.details) std::cout << "        " << d << '\n';
    }
  }
  std::cout << "failed: " << failed.size() << "/" << criteria.size();
  if (!expected.empty()) std::cout << " (expected: " << expect << ")";
  std::cout << '\n';
  return failed == expected ? 0 : 1;
}
