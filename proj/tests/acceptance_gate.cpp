// Acceptance gate at desk scale (d = 2, N = 128, L = 20): one verdict line
// per criterion, nonzero exit when any fails.  No test framework on purpose —
// the printed lines are the contract, and the binary must stay runnable on
// its own.

#include <mildns/mildns.hpp>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <vector>

using namespace mildns;

namespace {

int failures = 0;

void verdict(int idx, bool ok, const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  std::printf("[%s] %2d. %s\n", ok ? "PASS" : "FAIL", idx, buf);
  if (!ok) ++failures;
}

double slope_miss(const DecayReport& r) { return std::abs(r.slope - r.target); }

}  // namespace

int main() {
  std::printf("acceptance gate: weighted-decay laboratory, desk scale d=2 N=128 L=20\n");
  try {
    SolverConfig cfg;  // defaults ARE the desk scale
    Grid g = solver_grid(cfg);
    const double beta = cfg.weights.beta, gamma = cfg.weights.gamma;

    // 1. singular time-integral identities, numeric vs closed form
    {
      auto t0 = std::chrono::steady_clock::now();
      std::vector<BetaCheckRecord> recs = beta_integral_checks(cfg.seed, 20, {0.5, 1.0, 7.0});
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      double worst = 0;
      for (const BetaCheckRecord& r : recs) worst = std::max(worst, r.rel_err);
      verdict(1, recs.size() == 60 && worst <= 1e-8 && secs < 1.0,
              "time-integral identities: %zu draws, max rel err %.2e (tol 1e-8), %.3f s",
              recs.size(), worst, secs);
    }

    // 2. divergence-free projection on seeded band-limited fields
    {
      LerayProjectionCheck c = leray_projection_check(g, cfg.seed, 50);
      verdict(2, c.max_div_ratio <= 1e-10 && c.max_idem_ratio <= 1e-10,
              "projection sweep: %d fields, div %.2e, idempotence %.2e (tol 1e-10)", c.n_fields,
              c.max_div_ratio, c.max_idem_ratio);
    }

    // 3. heat flow exactness: Gaussian closed form and the semigroup law
    {
      HeatExactnessCheck c = heat_exactness_check(g);
      verdict(3, c.gaussian_err <= 1e-8 && c.semigroup_err <= 1e-10,
              "heat exactness: gaussian %.2e (tol 1e-8), semigroup %.2e (tol 1e-10)",
              c.gaussian_err, c.semigroup_err);
    }

    // 4./5. fitted decay exponents of the two flows at the three weight pairs
    {
      const double gammas[] = {0.0, 0.5, 1.5};
      double worst_heat = 0, worst_oseen = 0;
      bool ok_heat = true, ok_oseen = true;
      for (double gm : gammas) {
        DecayReport h = verify_heat_estimate(g, gm, 1.5, 0.1, 10.0);
        DecayReport o = verify_oseen_estimate(g, gm, 1.5, 0.1, 10.0);
        ok_heat = ok_heat && h.pass && slope_miss(h) <= 0.05;
        ok_oseen = ok_oseen && o.pass && slope_miss(o) <= 0.05;
        worst_heat = std::max(worst_heat, slope_miss(h));
        worst_oseen = std::max(worst_oseen, slope_miss(o));
      }
      verdict(4, ok_heat,
              "heat flow slopes -(beta-gamma)/2 at gamma {0, 0.5, 1.5}: worst miss %.3f "
              "(tol 0.05)",
              worst_heat);
      verdict(5, ok_oseen,
              "projected-gradient slopes -(beta+1-gamma)/2, same gammas: worst miss %.3f "
              "(tol 0.05)",
              worst_oseen);
    }

    // 6. convolution inequality: bounded flat ratio + scalar cross-check
    {
      DecayReport y1 = verify_weighted_young(g, 1.25, 1.25, 8);
      DecayReport y2 = verify_weighted_young(g, 1.5, 1.0, 8);
      ScalarCheck d1 = young_d1_constant_check();
      bool flat = y1.pass && y2.pass && std::abs(y1.slope) <= 0.15 && std::abs(y2.slope) <= 0.15 &&
                  std::isfinite(y1.sup_constant) && std::isfinite(y2.sup_constant);
      verdict(6, flat && d1.rel_err <= 1e-6,
              "convolution ratios flat: slopes %+.3f / %+.3f (tol 0.15); 1-d constant rel err "
              "%.2e (tol 1e-6)",
              y1.slope, y2.slope, d1.rel_err);
    }

    // 7. kernel self-similarity: pointwise collapse and weighted-profile flatness
    {
      double t0 = g.h * g.h;
      CollapseCheck c = oseen_collapse_check(g, t0);
      DecayReport prof = oseen_profile_report(g, t0);
      verdict(7, c.max_err <= 1e-3 && prof.pass && std::abs(prof.slope) <= 0.15,
              "kernel collapse at t and 4t: max err %.2e (tol 1e-3); weighted profile slope "
              "%+.3f (tol 0.15)",
              c.max_err, prof.slope);
    }

    // 8.-10. share one converged desk solve
    VecField data = make_divfree_data(g, DataKind::vortex, beta, 1.0);
    EtaEstimate eta = estimate_bilinear_constant(g, cfg.weights, cfg, cfg.eta_samples);
    cfg.delta = smallness_budget(eta.eta_hat);
    SmallnessScaling sc = scale_to_smallness(g, data, cfg.weights, cfg.delta, solver_times(cfg));
    PicardResult res = picard_solve(g, sc.u0, cfg);

    // 8. contraction: ratio ceiling, residual, solution norm vs 1/(2 eta)
    {
      double worst_ratio = 0;
      for (double r : res.diag.ratios) worst_ratio = std::max(worst_ratio, r);
      double k1 = res.diag.iterate_norms.back();
      double bound = 1.1 / (2.0 * eta.eta_hat);
      bool ok = res.diag.converged && !res.diag.ratios.empty() && worst_ratio <= 0.5 &&
                res.diag.residual <= 10 * cfg.eps && k1 <= bound;
      verdict(8, ok,
              "contraction: %zu iterations, ratios <= %.3f (cap 0.5), residual %.2e (tol "
              "1e-7), norm %.3g <= %.3g",
              res.diag.diff_norms.size(), worst_ratio, res.diag.residual, k1, bound);
    }

    // 9. solution decay: temporal and spatial slopes, stable combined sup
    {
      SolutionDecayReport dec = verify_solution_decay(g, res, gamma, beta);
      double half = combined_weight_sup(g, res.u, gamma, beta, g.L / 4);
      double full = combined_weight_sup(g, res.u, gamma, beta, g.L / 2);
      double rel = full > 0 ? std::abs(full - half) / full : 0.0;
      bool ok = dec.pass && std::abs(dec.temporal.slope + 0.75) <= 0.1 &&
                dec.spatial.slope <= -1.4 && std::isfinite(dec.combined_sup) &&
                dec.combined_sup > 0 && rel <= 0.10;
      verdict(9, ok,
              "solution decay: temporal %+.3f (-0.75 +/- 0.1), spatial %+.3f (<= -1.4), "
              "combined sup %.3g stable to %.1f%%",
              dec.temporal.slope, dec.spatial.slope, dec.combined_sup, 100 * rel);
    }

    // 10. weighted-norm grids finite and probe-stable
    {
      BootstrapReport boot = verify_bootstrap(g, res, beta, {0.0, 0.25, 0.5, 0.75, 1.0},
                                              {0.0, 0.5, 1.0, 1.5});
      bool finite = true;
      double worst = 0;
      for (const BootstrapEntry& e : boot.entries) {
        finite = finite && std::isfinite(e.norm_full_cap) && std::isfinite(e.norm_half_cap);
        worst = std::max(worst, e.rel_change);
      }
      verdict(10, boot.pass && finite && boot.entries.size() == 9,
              "norm grids over 5 space and 4 decay exponents: %zu entries finite, worst "
              "probe drift %.1f%% (cap 10%%)",
              boot.entries.size(), 100 * worst);
    }

    // 11. determinism: identical config + seed, byte-identical JSON bodies
    {
      SolverConfig scfg;
      VerifyConfig vcfg;
      VerificationSuiteResult a = run_verification_suite(scfg, vcfg);
      VerificationSuiteResult b = run_verification_suite(scfg, vcfg);
      std::string da = suite_body_json(a).dump(), db = suite_body_json(b).dump();
      verdict(11, a.overall && da == db,
              "determinism: repeated suite bodies identical (%zu bytes), overall %s", da.size(),
              a.overall ? "pass" : "fail");
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  std::printf("acceptance: %d/11 criteria hold\n", 11 - failures);
  return failures == 0 ? 0 : 1;
}
