#pragma once

// Command-line front end.  Three subcommands:
//   verify — run the estimate suite from a config, write JSON + CSV
//   solve  — run the fixed-point solver and persist slices + diagnostics
//   report — reload a persisted solve run and emit its decay verdicts
// Exit codes: 0 all checks passed, 1 checks failed, 2 configuration or
// runtime error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <mildns/config.hpp>
#include <mildns/report.hpp>
#include <mildns/solver.hpp>
#include <mildns/verify.hpp>

namespace mildns {

namespace detail {

inline int env_thread_override() {
  const char* s = std::getenv("MILDNS_THREADS");
  if (!s) return 0;
  char* end = nullptr;
  long v = std::strtol(s, &end, 10);
  if (end == s || *end != '\0' || v < 1 || v > 4096) return 0;  // honored, never required
  return static_cast<int>(v);
}

struct CliCommon {
  std::string config_path;
  std::string out_override;
  std::uint64_t seed = 0;
  bool have_seed = false;
  bool json_flag = true, csv_flag = true;
  bool json_set = false, csv_set = false;
};

inline void apply_overrides(RunConfig& cfg, const CliCommon& c) {
  if (c.have_seed) cfg.solver.seed = c.seed;
  if (!c.out_override.empty()) cfg.out_dir = c.out_override;
  if (c.json_set) cfg.emit_json = c.json_flag;
  if (c.csv_set) cfg.emit_csv = c.csv_flag;
  if (!cfg.threads_from_config) {
    int env = env_thread_override();
    if (env > 0) cfg.solver.threads = env;
  }
}

inline void add_common(CLI::App* sub, CliCommon& c, bool needs_config) {
  if (needs_config)
    sub->add_option("--config", c.config_path, "run configuration file")->required();
  sub->add_option("--seed", c.seed, "override [solver] seed")
      ->each([&c](const std::string&) { c.have_seed = true; });
  sub->add_option("--out", c.out_override, "override [output] dir");
  sub->add_flag("--json,!--no-json", c.json_flag, "toggle JSON emission")
      ->each([&c](const std::string&) { c.json_set = true; });
  sub->add_flag("--csv,!--no-csv", c.csv_flag, "toggle CSV emission")
      ->each([&c](const std::string&) { c.csv_set = true; });
}

inline void emit_csvs(const RunConfig& cfg, const std::vector<DecayReport>& reports) {
  for (const auto& [name, text] : decay_csv_files(reports))
    write_text_atomic(std::filesystem::path(cfg.out_dir) / name, text);
}

inline void print_report_line(const DecayReport& r) {
  std::printf("[%s] %s  slope=%+.4f target=%+.3g tol=%.3g%s\n", r.pass ? "PASS" : "FAIL",
              r.name.c_str(), r.slope, r.target, r.tolerance,
              r.flat_degenerate ? " (degenerate)" : "");
}

inline int run_verify(const CliCommon& common) {
  RunConfig cfg = load_run_config(common.config_path);
  apply_overrides(cfg, common);
  VerificationSuiteResult suite = run_verification_suite(cfg.solver, cfg.verify);

  bool beta_pass = true;
  for (const BetaCheckRecord& r : suite.beta_checks) beta_pass = beta_pass && r.rel_err <= 1e-8;
  std::printf("[%s] singular time integrals vs closed forms (%zu draws)\n",
              beta_pass ? "PASS" : "FAIL", suite.beta_checks.size());
  std::printf("[%s] one-dimensional convolution constant  rel_err=%.3g\n",
              suite.d1_constant.rel_err <= 1e-6 ? "PASS" : "FAIL", suite.d1_constant.rel_err);
  std::printf("[%s] divergence-free projection sweep  div=%.3g idem=%.3g\n",
              suite.projection.pass ? "PASS" : "FAIL", suite.projection.max_div_ratio,
              suite.projection.max_idem_ratio);
  std::printf("[%s] heat flow exactness  gauss=%.3g semigroup=%.3g\n",
              suite.heat_exactness.pass ? "PASS" : "FAIL", suite.heat_exactness.gaussian_err,
              suite.heat_exactness.semigroup_err);
  if (cfg.verify.kernel_checks)
    std::printf("[%s] kernel self-similar collapse  max_err=%.3g\n",
                suite.collapse_pass ? "PASS" : "FAIL", suite.collapse.max_err);
  for (const DecayReport& r : suite.reports) print_report_line(r);
  std::printf("overall: %s\n", suite.overall ? "PASS" : "FAIL");

  if (cfg.emit_json)
    write_text_atomic(std::filesystem::path(cfg.out_dir) / "verify_run.json",
                      verify_run_json(cfg, suite).dump(2) + "\n");
  if (cfg.emit_csv) emit_csvs(cfg, suite.reports);
  return suite.overall ? 0 : 1;
}

inline int run_solve(const CliCommon& common, bool override_smallness) {
  RunConfig cfg = load_run_config(common.config_path);
  apply_overrides(cfg, common);
  validate_solver_config(cfg.solver);
  Grid g = solver_grid(cfg.solver);

  VecField data =
      make_divfree_data(g, g.d == 2 ? DataKind::vortex : DataKind::curl_potential,
                        cfg.solver.weights.beta, cfg.verify.data_amplitude);
  EtaEstimate eta =
      estimate_bilinear_constant(g, cfg.solver.weights, cfg.solver, cfg.solver.eta_samples);
  double budget = smallness_budget(eta.eta_hat);
  if (cfg.solver.delta <= 0) {
    cfg.solver.delta = budget;
  } else if (cfg.solver.delta > budget && !override_smallness) {
    throw std::runtime_error(
        "solve: configured delta " + std::to_string(cfg.solver.delta) +
        " exceeds the calibrated smallness bound " + std::to_string(budget) +
        " = 1/(4 eta); small data is the contraction precondition "
        "(pass --override-smallness to proceed anyway)");
  }
  SmallnessScaling sc =
      scale_to_smallness(g, data, cfg.solver.weights, cfg.solver.delta, solver_times(cfg.solver));
  PicardResult res = picard_solve(g, sc.u0, cfg.solver, override_smallness);

  std::printf("[%s] fixed-point iteration  iters=%zu residual=%.3g\n",
              res.diag.converged ? "PASS" : "FAIL", res.diag.diff_norms.size(),
              res.diag.residual);
  if (!res.diag.converged && !res.diag.failure.empty())
    std::printf("  failure: %s\n", res.diag.failure.c_str());

  if (cfg.emit_json) {
    json doc;
    doc["header"] = run_header(cfg, "solve");
    doc["body"] = solve_body_json(cfg, g, res, eta, sc);
    write_text_atomic(std::filesystem::path(cfg.out_dir) / "solve_run.json",
                      doc.dump(2) + "\n");
  }
  return res.diag.converged ? 0 : 1;
}

inline int run_report(const std::string& run_path, const CliCommon& common) {
  std::ifstream in(run_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read persisted run: " + run_path);
  json doc = json::parse(in);
  PersistedRun run = load_solve_run(doc);
  if (!run.result.diag.converged)
    throw std::runtime_error("persisted run did not converge; decay verdicts need a solution");
  Grid g = make_grid(run.d, run.N, run.L);

  SolutionDecayReport dec =
      verify_solution_decay(g, run.result, run.weights.gamma, run.weights.beta);
  std::vector<double> alpha_grid, hat_grid;
  for (int i = 0; i < 5; ++i) alpha_grid.push_back(i / 4.0);
  for (int i = 0; i < 4; ++i) hat_grid.push_back(run.weights.beta * i / 3.0);
  BootstrapReport boot = verify_bootstrap(g, run.result, run.weights.beta, alpha_grid, hat_grid);

  print_report_line(dec.temporal);
  print_report_line(dec.spatial);
  std::printf("[%s] combined space-time weight sup = %.6g\n",
              std::isfinite(dec.combined_sup) ? "PASS" : "FAIL", dec.combined_sup);
  std::printf("[%s] weighted-norm grids stable under probe-cap doubling (%zu entries)\n",
              boot.pass ? "PASS" : "FAIL", boot.entries.size());

  bool overall = dec.pass && boot.pass;
  std::string out_dir = common.out_override.empty() ? "." : common.out_override;
  bool emit_json = common.json_set ? common.json_flag : true;
  bool emit_csv = common.csv_set ? common.csv_flag : true;
  if (emit_json) {
    json out;
    json header = doc.contains("header") ? doc["header"] : json::object();
    header["subcommand"] = "report";
    header["timestamp"] = iso_utc_timestamp();
    header["source_run"] = run_path;
    out["header"] = header;
    out["body"] = {{"solution_decay", solution_decay_json(dec)},
                   {"bootstrap", bootstrap_json(boot)},
                   {"overall", overall}};
    write_text_atomic(std::filesystem::path(out_dir) / "report_run.json", out.dump(2) + "\n");
  }
  if (emit_csv) {
    RunConfig stub;
    stub.out_dir = out_dir;
    emit_csvs(stub, {dec.temporal, dec.spatial});
  }
  return overall ? 0 : 1;
}

}  // namespace detail

inline int cli_main(int argc, const char* const* argv) {
  CLI::App app{"weighted-decay laboratory for an incompressible mild-solution solver"};
  app.require_subcommand(1);

  detail::CliCommon vc, sc, rc;
  bool override_smallness = false;
  std::string run_path;

  CLI::App* verify = app.add_subcommand("verify", "run the estimate suite");
  detail::add_common(verify, vc, true);
  CLI::App* solve = app.add_subcommand("solve", "run the fixed-point solver");
  detail::add_common(solve, sc, true);
  solve->add_flag("--override-smallness", override_smallness,
                  "proceed even when data exceeds the contraction budget");
  CLI::App* report = app.add_subcommand("report", "re-emit verdicts from a persisted run");
  report->add_option("run", run_path, "persisted solve_run.json")->required();
  detail::add_common(report, rc, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }

  try {
    if (verify->parsed()) return detail::run_verify(vc);
    if (solve->parsed()) return detail::run_solve(sc, override_smallness);
    return detail::run_report(run_path, rc);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

}  // namespace mildns
