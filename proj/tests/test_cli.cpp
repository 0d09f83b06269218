#include <catch2/catch_amalgamated.hpp>

#include <mildns/cli.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

using namespace mildns;
namespace fs = std::filesystem;

namespace {

int run_cli(std::vector<std::string> args) {
  std::vector<const char*> argv{"mildns"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

const char* quick_cfg_text =
    "[grid]\n"
    "points = 64\n"
    "[solver]\n"
    "t_min = 0.4\n"
    "slices = 17\n"
    "eta_samples = 2\n"
    "[verify]\n"
    "beta_draws = 3\n"
    "young_alphas = 1.25\n"
    "young_betas = 1.25\n"
    "operator_gammas = 0.5\n"
    "fit_t_lo = 0.4\n"
    "fit_times = 12\n"
    "kernel_checks = false\n"
    "projection_fields = 5\n"
    "[output]\n"
    "dir = out\n";

struct TmpDir {
  fs::path root;
  explicit TmpDir(const char* name) : root(fs::path("cli_test_tmp") / name) {
    fs::remove_all(root);
    fs::create_directories(root);
  }
  std::string file(const char* name, const std::string& text) const {
    fs::path p = root / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string sub(const char* name) const { return (root / name).string(); }
};

json read_json(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  return json::parse(in);
}

}  // namespace

TEST_CASE("verify subcommand: runs the suite, writes JSON and CSV, exit 0") {
  TmpDir tmp("verify");
  std::string cfg = tmp.file("quick.cfg", quick_cfg_text);
  std::string out = tmp.sub("out");

  REQUIRE(run_cli({"verify", "--config", cfg, "--out", out}) == 0);

  json doc = read_json(fs::path(out) / "verify_run.json");
  CHECK(doc["header"]["subcommand"] == "verify");
  CHECK(doc["header"]["seed"].get<std::uint64_t>() == 2026);
  CHECK(doc["header"]["grid"]["points"] == 64);
  CHECK(doc["body"]["overall"].get<bool>());
  CHECK(doc["body"]["time_integrals"]["pass"].get<bool>());
  CHECK(doc["body"]["decay_reports"].size() >= 3);

  int csvs = 0;
  for (const auto& e : fs::directory_iterator(out))
    if (e.path().extension() == ".csv") ++csvs;
  CHECK(csvs == static_cast<int>(doc["body"]["decay_reports"].size()));

  SECTION("identical config and seed reproduce the body byte-for-byte") {
    std::string out2 = tmp.sub("out2");
    REQUIRE(run_cli({"verify", "--config", cfg, "--out", out2}) == 0);
    json doc2 = read_json(fs::path(out2) / "verify_run.json");
    CHECK(doc["body"].dump() == doc2["body"].dump());
    CHECK(doc["header"]["config_hash"] != doc2["header"]["config_hash"]);  // out dir differs
  }

  SECTION("--seed override lands in the header and the hash") {
    std::string out3 = tmp.sub("out3");
    REQUIRE(run_cli({"verify", "--config", cfg, "--out", out3, "--seed", "7"}) == 0);
    json doc3 = read_json(fs::path(out3) / "verify_run.json");
    CHECK(doc3["header"]["seed"].get<std::uint64_t>() == 7);
    CHECK(doc3["header"]["config_hash"] != doc["header"]["config_hash"]);
  }

  SECTION("--no-csv suppresses series files") {
    std::string out4 = tmp.sub("out4");
    REQUIRE(run_cli({"verify", "--config", cfg, "--out", out4, "--no-csv"}) == 0);
    int n = 0;
    for (const auto& e : fs::directory_iterator(out4))
      if (e.path().extension() == ".csv") ++n;
    CHECK(n == 0);
    CHECK(fs::exists(fs::path(out4) / "verify_run.json"));
  }
}

TEST_CASE("solve then report: persisted run reloads and passes its decay checks") {
  TmpDir tmp("solve");
  std::string cfg = tmp.file("quick.cfg", quick_cfg_text);
  std::string out = tmp.sub("out");

  REQUIRE(run_cli({"solve", "--config", cfg, "--out", out}) == 0);
  fs::path run_file = fs::path(out) / "solve_run.json";
  REQUIRE(fs::exists(run_file));

  json doc = read_json(run_file);
  CHECK(doc["header"]["subcommand"] == "solve");
  CHECK(doc["body"]["diagnostics"]["converged"].get<bool>());
  CHECK(doc["body"]["smallness"]["eta_hat"].get<double>() > 0);
  CHECK(doc["body"]["slices"].size() == 17);

  std::string rep_out = tmp.sub("rep");
  REQUIRE(run_cli({"report", run_file.string(), "--out", rep_out}) == 0);
  json rep = read_json(fs::path(rep_out) / "report_run.json");
  CHECK(rep["header"]["subcommand"] == "report");
  CHECK(rep["body"]["overall"].get<bool>());
  CHECK(rep["body"]["solution_decay"]["pass"].get<bool>());
  CHECK(rep["body"]["bootstrap"]["entries"].size() == 9);
  CHECK(fs::exists(fs::path(rep_out) /
                   "series_solution_sup_norm_temporal_decay_beta_1_5.csv"));
}

TEST_CASE("exit code 2 paths: bad input is rejected before any run") {
  TmpDir tmp("errors");

  SECTION("missing config file") { CHECK(run_cli({"verify", "--config", "/no/file.cfg"}) == 2); }

  SECTION("unknown config key") {
    std::string bad = tmp.file("bad.cfg", "[grid]\nwarp = 9\n");
    CHECK(run_cli({"verify", "--config", bad}) == 2);
  }

  SECTION("unknown subcommand and missing required flag") {
    CHECK(run_cli({"frobnicate"}) == 2);
    CHECK(run_cli({"verify"}) == 2);
    CHECK(run_cli({"report"}) == 2);
  }

  SECTION("solve refuses a budget above the calibrated bound") {
    std::string big = tmp.file("big.cfg", std::string(quick_cfg_text) +
                                              "\n[solver]\ndelta = 99.0\n");
    CHECK(run_cli({"solve", "--config", big, "--out", tmp.sub("o")}) == 2);
  }

  SECTION("report on a run that never converged") {
    std::vector<double> zeros(16 * 16, 0.0);
    json doc;
    doc["body"] = {{"grid", {{"dimension", 2}, {"points", 16}, {"half_extent", 20.0}}},
                   {"weights",
                    {{"gamma", 0.5},
                     {"tilde_gamma", 0.5},
                     {"alpha", 0.5},
                     {"beta", 1.5},
                     {"tilde_beta", 1.0},
                     {"hat_beta", 1.0}}},
                   {"diagnostics",
                    {{"converged", false},
                     {"failure", "iteration cap reached"},
                     {"probed_smallness", 1.0},
                     {"max_divergence", 0.0},
                     {"residual", nullptr},
                     {"iterate_norms", json::array()},
                     {"diff_norms", json::array()},
                     {"ratios", json::array()}}},
                   {"slices", json::array({{{"t", 0.4}, {"u", json::array({zeros, zeros})}}})}};
    std::string p = tmp.file("unconverged.json", doc.dump());
    CHECK(run_cli({"report", p}) == 2);
  }

  SECTION("report on a missing run file") {
    CHECK(run_cli({"report", tmp.sub("nowhere.json")}) == 2);
  }

  SECTION("report on a structurally damaged run file") {
    std::string p = tmp.file("damaged.json", "{\"header\": {}}");
    CHECK(run_cli({"report", p}) == 2);
  }
}

TEST_CASE("thread count: config wins, environment honored otherwise") {
  TmpDir tmp("threads");
  std::string out1 = tmp.sub("o1");
  std::string no_threads = tmp.file("a.cfg", quick_cfg_text);

  setenv("MILDNS_THREADS", "3", 1);
  REQUIRE(run_cli({"verify", "--config", no_threads, "--out", out1}) == 0);
  CHECK(read_json(fs::path(out1) / "verify_run.json")["header"]["threads"].get<int>() == 3);

  std::string with_threads =
      tmp.file("b.cfg", std::string(quick_cfg_text) + "\n[solver]\nthreads = 1\n");
  std::string out2 = tmp.sub("o2");
  REQUIRE(run_cli({"verify", "--config", with_threads, "--out", out2}) == 0);
  CHECK(read_json(fs::path(out2) / "verify_run.json")["header"]["threads"].get<int>() == 1);

  setenv("MILDNS_THREADS", "not-a-number", 1);
  std::string out3 = tmp.sub("o3");
  REQUIRE(run_cli({"verify", "--config", no_threads, "--out", out3}) == 0);
  CHECK(read_json(fs::path(out3) / "verify_run.json")["header"]["threads"].get<int>() == 1);
  unsetenv("MILDNS_THREADS");
}
