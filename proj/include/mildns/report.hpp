#pragma once

// Report emission and reload.  One JSON document per run — a header carrying
// the effective config (canonical text + hash), seed, grid, and timestamp,
// and a body carrying every check with its samples so verdicts can be
// recomputed from the file alone.  Decay series additionally go out as CSV,
// one file per series.  All writes are write-temp-then-rename.

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <limits>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include <mildns/config.hpp>
#include <mildns/verify.hpp>

namespace mildns {

using json = nlohmann::ordered_json;

inline std::string hex64(std::uint64_t x) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

inline std::string iso_utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline json run_header(const RunConfig& cfg, const std::string& subcommand) {
  Grid g = solver_grid(cfg.solver);
  json h;
  h["tool"] = "mildns";
  h["version"] = "0.1.0";
  h["subcommand"] = subcommand;
  h["timestamp"] = iso_utc_timestamp();
  h["config_hash"] = hex64(config_hash(cfg));
  h["seed"] = cfg.solver.seed;
  h["grid"] = {{"dimension", g.d}, {"points", g.N}, {"half_extent", g.L}, {"cell", g.h}};
  h["threads"] = cfg.solver.threads;
  h["config"] = canonical_config_text(cfg);
  return h;
}

inline json decay_report_json(const DecayReport& r) {
  json samples = json::array();
  for (const Sample& s : r.samples) samples.push_back({s.s, s.v});
  json j;
  j["name"] = r.name;
  j["window"] = {r.window_lo, r.window_hi};
  j["slope"] = r.slope;
  j["intercept"] = r.intercept;
  j["r2"] = r.r2;
  j["target"] = r.target;
  j["tolerance"] = r.tolerance;
  j["rule"] = r.rule == PassRule::two_sided ? "two_sided" : "upper_bound";
  j["flat_degenerate"] = r.flat_degenerate;
  j["sup_constant"] = r.sup_constant;
  j["pass"] = r.pass;
  j["samples"] = samples;
  return j;
}

inline json kernel_audit_json(const KernelBoundAudit& a) {
  json probes = json::array(), ratios = json::array();
  for (const KernelProbe& p : a.probes) probes.push_back({p.x[0], p.x[1], p.x[2], p.t});
  for (double r : a.ratios) ratios.push_back(r);
  json j;
  j["kernel"] = a.kind == KernelKind::heat ? "heat" : "projected_gradient";
  j["weight_exponent"] = a.alpha;
  j["formula"] = a.formula;
  j["max_ratio"] = a.max_ratio;
  j["argmax"] = a.argmax;
  j["probes"] = probes;
  j["ratios"] = ratios;
  return j;
}

inline json beta_check_json(const BetaCheckRecord& r) {
  json j;
  j["part"] = r.part == BetaPart::head ? "first-half" : r.part == BetaPart::tail ? "second-half" : "full";
  j["gamma"] = r.gamma_;
  j["theta"] = r.theta;
  j["t"] = r.t;
  j["numeric"] = r.numeric;
  j["closed"] = r.closed;
  j["rel_err"] = r.rel_err;
  j["pass"] = r.rel_err <= 1e-8;
  return j;
}

inline json suite_body_json(const VerificationSuiteResult& s) {
  json body;
  {
    json records = json::array();
    bool pass = true;
    for (const BetaCheckRecord& r : s.beta_checks) {
      records.push_back(beta_check_json(r));
      pass = pass && r.rel_err <= 1e-8;
    }
    body["time_integrals"] = {{"tolerance", 1e-8}, {"pass", pass}, {"records", records}};
  }
  body["convolution_constant_1d"] = {{"numeric", s.d1_constant.numeric},
                                     {"closed", s.d1_constant.closed},
                                     {"rel_err", s.d1_constant.rel_err},
                                     {"tolerance", 1e-6},
                                     {"pass", s.d1_constant.rel_err <= 1e-6}};
  body["projection"] = {{"fields", s.projection.n_fields},
                        {"max_div_ratio", s.projection.max_div_ratio},
                        {"max_idem_ratio", s.projection.max_idem_ratio},
                        {"tolerance", 1e-10},
                        {"pass", s.projection.pass}};
  body["heat_exactness"] = {{"gaussian_err", s.heat_exactness.gaussian_err},
                            {"gaussian_tolerance", 1e-8},
                            {"semigroup_err", s.heat_exactness.semigroup_err},
                            {"semigroup_tolerance", 1e-10},
                            {"pass", s.heat_exactness.pass}};
  body["kernel_collapse"] = {{"t", s.collapse.t},
                             {"probes", s.collapse.n_probes},
                             {"peak", s.collapse.peak},
                             {"max_err", s.collapse.max_err},
                             {"tolerance", s.collapse_tol},
                             {"pass", s.collapse_pass}};
  {
    json reports = json::array();
    for (const DecayReport& r : s.reports) reports.push_back(decay_report_json(r));
    body["decay_reports"] = reports;
  }
  {
    json audits = json::array();
    for (const KernelBoundAudit& a : s.audits) audits.push_back(kernel_audit_json(a));
    body["kernel_audits"] = audits;
  }
  body["overall"] = s.overall;
  return body;
}

inline json verify_run_json(const RunConfig& cfg, const VerificationSuiteResult& s) {
  json doc;
  doc["header"] = run_header(cfg, "verify");
  doc["body"] = suite_body_json(s);
  return doc;
}

// --- solve-run persistence --------------------------------------------------

inline json solution_decay_json(const SolutionDecayReport& r) {
  json j;
  j["combined_sup"] = r.combined_sup;
  j["temporal"] = decay_report_json(r.temporal);
  j["spatial"] = decay_report_json(r.spatial);
  j["pass"] = r.pass;
  return j;
}

inline json bootstrap_json(const BootstrapReport& r) {
  json entries = json::array();
  for (const BootstrapEntry& e : r.entries)
    entries.push_back({{"space_exponent", e.exponent},
                       {"decay_index", e.pair_beta},
                       {"norm_half_cap", e.norm_half_cap},
                       {"norm_full_cap", e.norm_full_cap},
                       {"rel_change", e.rel_change},
                       {"pass", e.pass}});
  json j;
  j["stability_tolerance"] = 0.10;
  j["entries"] = entries;
  j["pass"] = r.pass;
  return j;
}

inline json diagnostics_json(const PicardDiagnostics& d) {
  json j;
  j["converged"] = d.converged;
  j["failure"] = d.failure;
  j["iterations"] = d.diff_norms.size();
  j["iterate_norms"] = d.iterate_norms;
  j["diff_norms"] = d.diff_norms;
  j["ratios"] = d.ratios;
  j["probed_smallness"] = d.probed_smallness;
  j["max_divergence"] = d.max_divergence;
  j["residual"] = d.residual;
  return j;
}

inline json solve_body_json(const RunConfig& cfg, const Grid& g, const PicardResult& res,
                            const EtaEstimate& eta, const SmallnessScaling& sc) {
  json body;
  body["grid"] = {{"dimension", g.d}, {"points", g.N}, {"half_extent", g.L}};
  body["weights"] = {{"gamma", cfg.solver.weights.gamma},
                     {"tilde_gamma", cfg.solver.weights.tilde_gamma},
                     {"alpha", cfg.solver.weights.alpha},
                     {"beta", cfg.solver.weights.beta},
                     {"tilde_beta", cfg.solver.weights.tilde_beta},
                     {"hat_beta", cfg.solver.weights.hat_beta}};
  body["smallness"] = {{"eta_hat", eta.eta_hat},
                       {"sample_ratios", eta.sample_ratios},
                       {"budget", cfg.solver.delta},
                       {"scale_factor", sc.factor},
                       {"achieved", sc.achieved}};
  body["diagnostics"] = diagnostics_json(res.diag);
  json slices = json::array();
  for (std::size_t j = 0; j < res.u.t.size(); ++j) {
    json comps = json::array();
    for (int a = 0; a < g.d; ++a) comps.push_back(res.u.slices[j].c[a]);
    slices.push_back({{"t", res.u.t[j]}, {"u", comps}});
  }
  body["slices"] = slices;
  return body;
}

struct PersistedRun {
  int d = 0, N = 0;
  double L = 0;
  WeightParams weights;
  double eta_hat = 0, budget = 0;
  PicardResult result;
};

inline PersistedRun load_solve_run(const json& doc) {
  if (!doc.contains("body")) throw std::runtime_error("persisted run: missing body");
  const json& body = doc["body"];
  for (const char* k : {"grid", "weights", "diagnostics", "slices"})
    if (!body.contains(k))
      throw std::runtime_error(std::string("persisted run: missing body field ") + k);
  PersistedRun run;
  run.d = body["grid"]["dimension"].get<int>();
  run.N = body["grid"]["points"].get<int>();
  run.L = body["grid"]["half_extent"].get<double>();
  const json& w = body["weights"];
  run.weights.gamma = w["gamma"].get<double>();
  run.weights.tilde_gamma = w["tilde_gamma"].get<double>();
  run.weights.alpha = w["alpha"].get<double>();
  run.weights.beta = w["beta"].get<double>();
  run.weights.tilde_beta = w["tilde_beta"].get<double>();
  run.weights.hat_beta = w["hat_beta"].is_number()
                             ? w["hat_beta"].get<double>()
                             : std::numeric_limits<double>::quiet_NaN();
  if (body.contains("smallness")) {
    run.eta_hat = body["smallness"]["eta_hat"].get<double>();
    run.budget = body["smallness"]["budget"].get<double>();
  }
  const json& diag = body["diagnostics"];
  run.result.diag.converged = diag["converged"].get<bool>();
  run.result.diag.failure = diag["failure"].get<std::string>();
  run.result.diag.probed_smallness = diag["probed_smallness"].get<double>();
  run.result.diag.max_divergence = diag["max_divergence"].get<double>();
  run.result.diag.residual = diag["residual"].is_number()
                                 ? diag["residual"].get<double>()
                                 : std::numeric_limits<double>::quiet_NaN();
  run.result.diag.iterate_norms = diag["iterate_norms"].get<std::vector<double>>();
  run.result.diag.diff_norms = diag["diff_norms"].get<std::vector<double>>();
  run.result.diag.ratios = diag["ratios"].get<std::vector<double>>();
  Grid g = make_grid(run.d, run.N, run.L);
  for (const json& sl : body["slices"]) {
    VecField u = VecField::zeros(g);
    const json& comps = sl["u"];
    if (static_cast<int>(comps.size()) != g.d)
      throw std::runtime_error("persisted run: slice component count mismatch");
    for (int a = 0; a < g.d; ++a) {
      std::vector<double> vals = comps[a].get<std::vector<double>>();
      if (vals.size() != g.size)
        throw std::runtime_error("persisted run: slice length mismatch");
      u.c[a] = std::move(vals);
    }
    run.result.u.t.push_back(sl["t"].get<double>());
    run.result.u.slices.push_back(std::move(u));
  }
  if (run.result.u.t.empty()) throw std::runtime_error("persisted run: no slices");
  return run;
}

// --- CSV --------------------------------------------------------------------

inline std::string series_slug(const std::string& name) {
  std::string s;
  bool gap = false;
  for (char ch : name) {
    if (std::isalnum(static_cast<unsigned char>(ch))) {
      if (gap && !s.empty()) s += '_';
      gap = false;
      s += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    } else {
      gap = true;
    }
  }
  return s.empty() ? "series" : s;
}

inline std::string decay_series_csv(const DecayReport& r) {
  std::string out = "series,t_or_r,value\n";
  char buf[96];
  for (const Sample& s : r.samples) {
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g\n", s.s, s.v);
    out += "\"" + r.name + "\"" + buf;
  }
  return out;
}

// --- atomic file output -------------------------------------------------------

inline void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path dir = path.parent_path();
  if (!dir.empty()) std::filesystem::create_directories(dir);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::vector<std::pair<std::string, std::string>> decay_csv_files(
    const std::vector<DecayReport>& reports) {
  std::vector<std::pair<std::string, std::string>> files;
  for (const DecayReport& r : reports)
    files.emplace_back("series_" + series_slug(r.name) + ".csv", decay_series_csv(r));
  return files;
}

}  // namespace mildns
