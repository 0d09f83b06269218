#include <catch2/catch_amalgamated.hpp>

#include <mildns/config.hpp>
#include <mildns/report.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace mildns;
namespace fs = std::filesystem;

TEST_CASE("config defaults round-trip through the canonical dump") {
  RunConfig def;
  std::string text = canonical_config_text(def);
  RunConfig back = parse_run_config_text(text);
  CHECK(canonical_config_text(back) == text);
  CHECK(config_hash(back) == config_hash(def));
  CHECK(back.solver.N == 128);
  CHECK(back.solver.t_min == 0.1);
  CHECK(back.solver.weights.beta == 1.5);
  CHECK(back.verify.young_pairs.size() == 2);
  CHECK(back.verify.young_pairs[1][0] == 1.5);
  CHECK(back.verify.young_pairs[1][1] == 1.0);
  CHECK(back.emit_json);
}

TEST_CASE("config parsing applies values, comments, and whitespace") {
  std::string text =
      "# leading comment\n"
      "[grid]\n"
      "points = 64   # inline comment\n"
      "half_extent = 10.5\n"
      "\n"
      "[solver]\n"
      "  seed   =   99  \n"
      "threads = 3\n"
      "[weights]\n"
      "beta = 1.25\n"
      "[verify]\n"
      "operator_gammas = 0.0, 0.25 ,0.5\n"
      "kernel_checks = false\n"
      "fit_family = regularized\n"
      "[output]\n"
      "json = false\n"
      "dir = some/dir\n";
  RunConfig cfg = parse_run_config_text(text);
  CHECK(cfg.solver.N == 64);
  CHECK(cfg.solver.L == 10.5);
  CHECK(cfg.solver.seed == 99);
  CHECK(cfg.solver.threads == 3);
  CHECK(cfg.threads_from_config);
  CHECK(cfg.solver.weights.beta == 1.25);
  REQUIRE(cfg.verify.operator_gammas.size() == 3);
  CHECK(cfg.verify.operator_gammas[1] == 0.25);
  CHECK_FALSE(cfg.verify.kernel_checks);
  CHECK(cfg.verify.fit_family == DataProfile::regularized);
  CHECK_FALSE(cfg.emit_json);
  CHECK(cfg.emit_csv);
  CHECK(cfg.out_dir == "some/dir");
}

TEST_CASE("config schema rejects malformed input before anything runs") {
  auto rejects = [](const std::string& text, const std::string& needle) {
    try {
      parse_run_config_text(text);
      FAIL("expected rejection for: " << text);
    } catch (const std::invalid_argument& e) {
      CAPTURE(text, e.what());
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  rejects("[grid]\nmystery = 1\n", "unknown key 'grid.mystery'");
  rejects("[grid]\nmystery = 1\n", "schema rejection");
  rejects("[nosuch]\nx = 1\n", "unknown section");
  rejects("points = 64\n", "key before any [section]");
  rejects("[grid]\npoints = soon\n", "expected an integer");
  rejects("[grid]\nhalf_extent = wide\n", "expected a number");
  rejects("[verify]\nkernel_checks = yes\n", "expected true or false");
  rejects("[verify]\noperator_gammas = 1.0,,2.0\n", "empty array element");
  rejects("[grid\npoints = 64\n", "unterminated section");
  rejects("[grid]\npoints 64\n", "expected key = value");
  rejects("[grid]\npoints =\n", "empty key or value");
  rejects("[verify]\nyoung_alphas = 1.25, 1.5\nyoung_betas = 1.0\n", "pair up");
  rejects("[verify]\nfit_family = gaussian\n", "power_tail or regularized");
  // line numbers surface in the message
  rejects("[grid]\n\n\nmystery = 1\n", ":4:");
}

TEST_CASE("config hash tracks every effective value") {
  RunConfig a, b;
  CHECK(config_hash(a) == config_hash(b));
  b.solver.seed = 123;
  CHECK(config_hash(a) != config_hash(b));
  b = a;
  b.verify.operator_gammas = {0.5};
  CHECK(config_hash(a) != config_hash(b));
  b = a;
  b.out_dir = "elsewhere";
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("missing config file is reported with its path") {
  try {
    load_run_config("/definitely/not/here.cfg");
    FAIL("expected a throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("/definitely/not/here.cfg") != std::string::npos);
  }
}

TEST_CASE("decay report JSON is self-contained: verdict recomputable from samples") {
  std::vector<Sample> samples;
  for (int i = 0; i < 8; ++i) {
    double t = 0.1 * std::pow(10.0 / 0.1, i / 7.0);
    samples.push_back({t, 2.0 * std::pow(t, -0.75)});
  }
  DecayReport rep = make_decay_report("pure power probe", samples, 0.1, 10.0, -0.75, 0.05,
                                      PassRule::two_sided, samples.front().v);
  json j = decay_report_json(rep);
  CHECK(j["name"] == "pure power probe");
  CHECK(j["pass"].get<bool>() == rep.pass);
  CHECK(j["slope"].get<double>() == rep.slope);
  REQUIRE(j["samples"].size() == samples.size());

  // rebuild the series from the document alone and refit
  std::vector<Sample> back;
  for (const json& s : j["samples"]) back.push_back({s[0].get<double>(), s[1].get<double>()});
  FitResult refit = fit_decay_exponent(back, j["window"][0].get<double>(),
                                       j["window"][1].get<double>());
  CHECK(refit.slope == rep.slope);
  bool re_verdict = std::abs(refit.slope - j["target"].get<double>()) <=
                    j["tolerance"].get<double>();
  CHECK(re_verdict == j["pass"].get<bool>());

  // identical inputs serialize identically
  CHECK(decay_report_json(rep).dump() == j.dump());
}

TEST_CASE("CSV emission: one series per file, full-precision rows") {
  DecayReport rep;
  rep.name = "heat flow weighted decay (gamma=0.5, beta=1.5)";
  rep.samples = {{0.1, 3.0}, {1.0, 1.0 / 3.0}, {10.0, 0.123456789012345678}};
  std::string csv = decay_series_csv(rep);
  CHECK(csv.find("series,t_or_r,value\n") == 0);
  CHECK(csv.find("\"heat flow weighted decay (gamma=0.5, beta=1.5)\",1,0.33333333333333331\n") !=
        std::string::npos);
  CHECK(csv.find("0.12345678901234568") != std::string::npos);

  CHECK(series_slug("heat flow weighted decay (gamma=0.5, beta=1.5)") ==
        "heat_flow_weighted_decay_gamma_0_5_beta_1_5");
  CHECK(series_slug("///") == "series");

  auto files = decay_csv_files({rep, rep});
  REQUIRE(files.size() == 2);
  CHECK(files[0].first == "series_heat_flow_weighted_decay_gamma_0_5_beta_1_5.csv");
}

TEST_CASE("atomic text writes create directories and leave no temp files") {
  fs::path dir = fs::path("cfgrep_tmp") / "nested";
  fs::remove_all("cfgrep_tmp");
  fs::path target = dir / "run.json";
  write_text_atomic(target, "{\"x\": 1}\n");
  REQUIRE(fs::exists(target));
  std::ifstream in(target);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(content == "{\"x\": 1}\n");
  int entries = 0;
  for (const auto& _ : fs::directory_iterator(dir)) (void)_, ++entries;
  CHECK(entries == 1);
  fs::remove_all("cfgrep_tmp");
}

TEST_CASE("run header carries hash, seed, grid, and the canonical config echo") {
  RunConfig cfg;
  cfg.solver.seed = 77;
  json h = run_header(cfg, "verify");
  CHECK(h["tool"] == "mildns");
  CHECK(h["subcommand"] == "verify");
  CHECK(h["config_hash"] == hex64(config_hash(cfg)));
  CHECK(h["seed"].get<std::uint64_t>() == 77);
  CHECK(h["grid"]["points"] == 128);
  CHECK(h["grid"]["cell"].get<double>() == 0.3125);
  CHECK(h["config"].get<std::string>() == canonical_config_text(cfg));
  CHECK(h["timestamp"].get<std::string>().size() == 20);
}

TEST_CASE("solve-run persistence reloads the exact field data") {
  Grid g = make_grid(2, 16, 20.0);
  RunConfig cfg;
  cfg.solver.N = 16;
  cfg.solver.weights.hat_beta = std::numeric_limits<double>::quiet_NaN();

  PicardResult res;
  res.diag.converged = true;
  res.diag.iterate_norms = {1.0, 1.5};
  res.diag.diff_norms = {0.5, 1e-9};
  res.diag.ratios = {2e-9};
  res.diag.residual = 3e-10;
  res.diag.probed_smallness = 0.25;
  res.diag.max_divergence = 1e-12;
  for (double t : {0.5, 2.0}) {
    VecField u = VecField::zeros(g);
    for (std::size_t n = 0; n < g.size; ++n) {
      u.c[0][n] = std::sin(0.1 * static_cast<double>(n)) / (1 + t);
      u.c[1][n] = std::cos(0.2 * static_cast<double>(n)) * t;
    }
    res.u.t.push_back(t);
    res.u.slices.push_back(u);
  }

  EtaEstimate eta;
  eta.sample_ratios = {0.3, 0.4};
  eta.raw_max = 0.4;
  eta.eta_hat = 0.8;
  SmallnessScaling sc;
  sc.factor = 0.01;
  sc.achieved = 0.3124;

  json doc;
  doc["header"] = run_header(cfg, "solve");
  doc["body"] = solve_body_json(cfg, g, res, eta, sc);

  PersistedRun run = load_solve_run(doc);
  CHECK(run.d == 2);
  CHECK(run.N == 16);
  CHECK(run.L == 20.0);
  CHECK(std::isnan(run.weights.hat_beta));
  CHECK(run.weights.beta == 1.5);
  CHECK(run.eta_hat == 0.8);
  CHECK(run.result.diag.converged);
  CHECK(run.result.diag.residual == 3e-10);
  CHECK(run.result.diag.ratios == res.diag.ratios);
  REQUIRE(run.result.u.t.size() == 2);
  CHECK(run.result.u.t[1] == 2.0);
  for (std::size_t j = 0; j < 2; ++j)
    for (int a = 0; a < 2; ++a)
      for (std::size_t n = 0; n < g.size; ++n) {
        REQUIRE(run.result.u.slices[j].c[a][n] == res.u.slices[j].c[a][n]);
      }

  SECTION("structural damage is caught") {
    json bad = doc;
    bad["body"].erase("slices");
    CHECK_THROWS_AS(load_solve_run(bad), std::runtime_error);
    bad = doc;
    bad["body"]["slices"][0]["u"][0].erase(0);
    CHECK_THROWS_AS(load_solve_run(bad), std::runtime_error);
    bad = doc;
    bad.erase("body");
    CHECK_THROWS_AS(load_solve_run(bad), std::runtime_error);
  }
}

TEST_CASE("suite body serialization is deterministic") {
  SolverConfig scfg;
  scfg.N = 32;
  scfg.t_min = 1.6;
  scfg.t_max = 10.0;
  scfg.M = 9;
  VerifyConfig vcfg;
  vcfg.n_beta_draws = 2;
  vcfg.young_pairs = {};
  vcfg.operator_gammas = {};
  vcfg.fit_t_lo = 1.6;
  vcfg.fit_t_hi = 10.0;
  vcfg.n_times = 12;
  vcfg.kernel_checks = false;
  vcfg.n_projection_fields = 3;

  VerificationSuiteResult a = run_verification_suite(scfg, vcfg);
  VerificationSuiteResult b = run_verification_suite(scfg, vcfg);
  CHECK(suite_body_json(a).dump() == suite_body_json(b).dump());
}
