#pragma once

// Run configuration: a line-oriented `key = value` file under [section]
// headers, validated against the schema below before anything runs.  The
// canonical dump (every key in schema order, full precision) is what gets
// hashed into report headers, so two configs agree iff their hashes do.

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <mildns/rng.hpp>
#include <mildns/solver.hpp>
#include <mildns/verify.hpp>

namespace mildns {

struct RunConfig {
  SolverConfig solver;
  VerifyConfig verify;
  std::string out_dir = ".";
  bool emit_json = true;
  bool emit_csv = true;
  bool threads_from_config = false;
  // staging for the paired-array keys; folded into verify.young_pairs after parse
  std::vector<double> young_alphas_raw, young_betas_raw;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::string cfg_err(const std::string& path, int line, const std::string& what) {
  std::ostringstream os;
  os << "config " << path << ":" << line << ": " << what;
  return os.str();
}

inline double parse_double_value(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    throw std::invalid_argument(key + ": expected a number, got '" + v + "'");
  }
}

inline long long parse_int_value(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    throw std::invalid_argument(key + ": expected an integer, got '" + v + "'");
  }
}

inline std::uint64_t parse_u64_value(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    throw std::invalid_argument(key + ": expected an unsigned integer, got '" + v + "'");
  }
}

inline bool parse_bool_value(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw std::invalid_argument(key + ": expected true or false, got '" + v + "'");
}

inline std::vector<double> parse_array_value(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw std::invalid_argument(key + ": empty array element");
    out.push_back(parse_double_value(key, item));
  }
  if (out.empty()) throw std::invalid_argument(key + ": empty array");
  return out;
}

inline DataProfile parse_family_value(const std::string& key, const std::string& v) {
  if (v == "power_tail") return DataProfile::power_tail;
  if (v == "regularized") return DataProfile::regularized;
  throw std::invalid_argument(key + ": expected power_tail or regularized, got '" + v + "'");
}

inline std::string family_name(DataProfile f) {
  return f == DataProfile::power_tail ? "power_tail" : "regularized";
}

inline std::string fmt_full(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string fmt_array(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ", ";
    s += fmt_full(xs[i]);
  }
  return s;
}

struct SchemaEntry {
  const char* key;
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

// the published schema, one row per key; dump order below is canonical
inline const std::vector<SchemaEntry>& config_schema() {
  using E = SchemaEntry;
  static const std::vector<SchemaEntry> schema = [] {
    std::vector<SchemaEntry> s;
    auto add = [&](const char* key, auto setter, auto getter) {
      s.push_back(E{key, setter, getter});
    };
    // [grid]
    add("grid.dimension",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.solver.d = static_cast<int>(parse_int_value(k, v));
        },
        [](const RunConfig& c) { return std::to_string(c.solver.d); });
    add("grid.points",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.solver.N = static_cast<int>(parse_int_value(k, v));
        },
        [](const RunConfig& c) { return std::to_string(c.solver.N); });
    add("grid.half_extent",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.solver.L = parse_double_value(k, v);
        },
        [](const RunConfig& c) { return fmt_full(c.solver.L); });
    // [solver]
    add("solver.t_min",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.solver.t_min = parse_double_value(k, v);
        },
        [](const RunConfig& c) { return fmt_full(c.solver.t_min); });
    add("solver.t_max",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.solver.t_max = parse_double_value(k, v);
        },
        [](const RunConfig& c) { return fmt_full(c.solver.t_max); });
    add("solver.slices",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.solver.M = static_cast<int>(parse_int_value(k, v));
        },
        [](const RunConfig& c) { return std::to_string(c.solver.M); });
    add("solver.quad_order",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.solver.q = static_cast<int>(parse_int_value(k, v));
        },
        [](const RunConfig& c) { return std::to_string(c.solver.q); });
    add("solver.max_iter",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.solver.max_iter = static_cast<int>(parse_int_value(k, v));
        },
        [](const RunConfig& c) { return std::to_string(c.solver.max_iter); });
    add("solver.eps",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.solver.eps = parse_double_value(k, v);
        },
        [](const RunConfig& c) { return fmt_full(c.solver.eps); });
    add("solver.delta",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.solver.delta = parse_double_value(k, v);
        },
        [](const RunConfig& c) { return fmt_full(c.solver.delta); });
    add("solver.seed",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.solver.seed = parse_u64_value(k, v);
        },
        [](const RunConfig& c) { return std::to_string(c.solver.seed); });
    add("solver.threads",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.solver.threads = static_cast<int>(parse_int_value(k, v));
          c.threads_from_config = true;
        },
        [](const RunConfig& c) { return std::to_string(c.solver.threads); });
    add("solver.eta_samples",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.solver.eta_samples = static_cast<int>(parse_int_value(k, v));
        },
        [](const RunConfig& c) { return std::to_string(c.solver.eta_samples); });
    add("solver.data_amplitude",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.verify.data_amplitude = parse_double_value(k, v);
        },
        [](const RunConfig& c) { return fmt_full(c.verify.data_amplitude); });
    // [weights]
    add("weights.gamma",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.solver.weights.gamma = parse_double_value(k, v);
        },
        [](const RunConfig& c) { return fmt_full(c.solver.weights.gamma); });
    add("weights.tilde_gamma",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.solver.weights.tilde_gamma = parse_double_value(k, v);
        },
        [](const RunConfig& c) { return fmt_full(c.solver.weights.tilde_gamma); });
    add("weights.alpha",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.solver.weights.alpha = parse_double_value(k, v);
        },
        [](const RunConfig& c) { return fmt_full(c.solver.weights.alpha); });
    add("weights.beta",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.solver.weights.beta = parse_double_value(k, v);
        },
        [](const RunConfig& c) { return fmt_full(c.solver.weights.beta); });
    add("weights.tilde_beta",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.solver.weights.tilde_beta = parse_double_value(k, v);
        },
        [](const RunConfig& c) { return fmt_full(c.solver.weights.tilde_beta); });
    add("weights.hat_beta",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.solver.weights.hat_beta = parse_double_value(k, v);
        },
        [](const RunConfig& c) { return fmt_full(c.solver.weights.hat_beta); });
    // [verify]
    add("verify.beta_draws",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.verify.n_beta_draws = static_cast<int>(parse_int_value(k, v));
        },
        [](const RunConfig& c) { return std::to_string(c.verify.n_beta_draws); });
    add("verify.beta_times",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.verify.beta_check_times = parse_array_value(k, v);
        },
        [](const RunConfig& c) { return fmt_array(c.verify.beta_check_times); });
    add("verify.young_alphas",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.young_alphas_raw = parse_array_value(k, v);
        },
        [](const RunConfig& c) {
          std::vector<double> xs;
          for (const auto& p : c.verify.young_pairs) xs.push_back(p[0]);
          return fmt_array(xs);
        });
    add("verify.young_betas",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.young_betas_raw = parse_array_value(k, v);
        },
        [](const RunConfig& c) {
          std::vector<double> xs;
          for (const auto& p : c.verify.young_pairs) xs.push_back(p[1]);
          return fmt_array(xs);
        });
    add("verify.young_probes",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.verify.young_probes = static_cast<int>(parse_int_value(k, v));
        },
        [](const RunConfig& c) { return std::to_string(c.verify.young_probes); });
    add("verify.young_family",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.verify.young_family = parse_family_value(k, v);
        },
        [](const RunConfig& c) { return family_name(c.verify.young_family); });
    add("verify.envelope_beta",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.verify.envelope_beta = parse_double_value(k, v);
        },
        [](const RunConfig& c) { return fmt_full(c.verify.envelope_beta); });
    add("verify.operator_gammas",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.verify.operator_gammas = parse_array_value(k, v);
        },
        [](const RunConfig& c) { return fmt_array(c.verify.operator_gammas); });
    add("verify.fit_t_lo",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.verify.fit_t_lo = parse_double_value(k, v);
        },
        [](const RunConfig& c) { return fmt_full(c.verify.fit_t_lo); });
    add("verify.fit_t_hi",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.verify.fit_t_hi = parse_double_value(k, v);
        },
        [](const RunConfig& c) { return fmt_full(c.verify.fit_t_hi); });
    add("verify.fit_times",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.verify.n_times = static_cast<int>(parse_int_value(k, v));
        },
        [](const RunConfig& c) { return std::to_string(c.verify.n_times); });
    add("verify.fit_family",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.verify.fit_family = parse_family_value(k, v);
        },
        [](const RunConfig& c) { return family_name(c.verify.fit_family); });
    add("verify.kernel_checks",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.verify.kernel_checks = parse_bool_value(k, v);
        },
        [](const RunConfig& c) { return c.verify.kernel_checks ? "true" : "false"; });
    add("verify.projection_fields",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.verify.n_projection_fields = static_cast<int>(parse_int_value(k, v));
        },
        [](const RunConfig& c) { return std::to_string(c.verify.n_projection_fields); });
    // [output]
    add("output.dir",
        [](RunConfig& c, const std::string&, const std::string& v) { c.out_dir = v; },
        [](const RunConfig& c) { return c.out_dir; });
    add("output.json",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.emit_json = parse_bool_value(k, v);
        },
        [](const RunConfig& c) { return c.emit_json ? "true" : "false"; });
    add("output.csv",
        [](RunConfig& c, const std::string& k, const std::string& v) {
          c.emit_csv = parse_bool_value(k, v);
        },
        [](const RunConfig& c) { return c.emit_csv ? "true" : "false"; });
    return s;
  }();
  return schema;
}

}  // namespace detail

inline RunConfig parse_run_config_text(const std::string& text,
                                       const std::string& path = "<string>") {
  RunConfig cfg;
  const std::vector<detail::SchemaEntry>& schema = detail::config_schema();
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument(detail::cfg_err(path, lineno, "unterminated section header"));
      section = detail::trim(line.substr(1, line.size() - 2));
      bool known = section == "grid" || section == "solver" || section == "weights" ||
                   section == "verify" || section == "output";
      if (!known)
        throw std::invalid_argument(
            detail::cfg_err(path, lineno, "unknown section [" + section + "]"));
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(detail::cfg_err(path, lineno, "expected key = value"));
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));
    if (section.empty())
      throw std::invalid_argument(detail::cfg_err(path, lineno, "key before any [section]"));
    if (key.empty() || value.empty())
      throw std::invalid_argument(detail::cfg_err(path, lineno, "empty key or value"));
    std::string full = section + "." + key;
    bool matched = false;
    for (const detail::SchemaEntry& e : schema) {
      if (full == e.key) {
        try {
          e.set(cfg, full, value);
        } catch (const std::invalid_argument& ex) {
          throw std::invalid_argument(detail::cfg_err(path, lineno, ex.what()));
        }
        matched = true;
        break;
      }
    }
    if (!matched)
      throw std::invalid_argument(
          detail::cfg_err(path, lineno, "unknown key '" + full + "' (schema rejection)"));
  }
  if (!cfg.young_alphas_raw.empty() || !cfg.young_betas_raw.empty()) {
    if (cfg.young_alphas_raw.size() != cfg.young_betas_raw.size())
      throw std::invalid_argument(
          "config: verify.young_alphas and verify.young_betas must pair up "
          "(element counts differ)");
    cfg.verify.young_pairs.clear();
    for (std::size_t i = 0; i < cfg.young_alphas_raw.size(); ++i)
      cfg.verify.young_pairs.push_back({cfg.young_alphas_raw[i], cfg.young_betas_raw[i]});
  }
  return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config_text(ss.str(), path);
}

// canonical full-precision dump, the hashing and echo format
inline std::string canonical_config_text(const RunConfig& cfg) {
  std::string cur_section, out;
  for (const detail::SchemaEntry& e : detail::config_schema()) {
    std::string full = e.key;
    std::size_t dot = full.find('.');
    std::string section = full.substr(0, dot), key = full.substr(dot + 1);
    if (section != cur_section) {
      if (!out.empty()) out += "\n";
      out += "[" + section + "]\n";
      cur_section = section;
    }
    out += key + " = " + e.get(cfg) + "\n";
  }
  return out;
}

inline std::uint64_t config_hash(const RunConfig& cfg) {
  return fnv1a64(canonical_config_text(cfg));
}

}  // namespace mildns
