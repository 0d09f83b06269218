#pragma once

// Picard iteration on the integral form of the viscous incompressible flow
// equations,
//
//   u(t) = e^{t L} u0 - B(u, u)(t),
//   B(u, v)(t) = integral over (0, t) of e^{(t-tau) L} P div(u x v)(tau) dtau,
//
// with L the Laplacian and P the divergence-free projection.  The tau
// integral carries a (t - tau)^{-1/2} operator singularity at tau = t, and
// the iterates themselves vary fastest near tau = 0, so each half of (0, t)
// gets a square-root substitution flattening the matching end: tau = s^2 on
// (0, t/2) and tau = t - s^2 on (t/2, t).  Panel edges sit at the mapped
// slice times, where the piecewise-linear interpolant of an iterate has
// kinks, and the panel touching tau = t is refined dyadically down to the
// scale below which even the largest resolved wavenumber sees no damping.
// Fixed-order Gauss-Legendre per panel then converges fast; doubling the
// order is the standard self-check.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <mildns/field.hpp>
#include <mildns/grid.hpp>
#include <mildns/kernels.hpp>
#include <mildns/profiles.hpp>
#include <mildns/quadrature.hpp>
#include <mildns/rng.hpp>
#include <mildns/spectral.hpp>
#include <mildns/weighted.hpp>

namespace mildns {

struct SolverConfig {
  int d = 2;
  int N = 128;
  double L = 20.0;
  double t_min = 0.1;
  double t_max = 10.0;
  int M = 25;     // geometric slice count
  int q = 8;      // Gauss-Legendre points per quadrature panel
  int max_iter = 20;
  double eps = 1e-8;   // convergence threshold on the difference norm
  double delta = 0.0;  // smallness budget; <= 0 means "not yet calibrated"
  WeightParams weights;
  std::uint64_t seed = 2026;
  int threads = 1;
  int eta_samples = 4;  // draws used to calibrate the quadratic-term constant
  bool zero_bilinear = false;  // test hook: drop the quadratic term
};

inline Grid solver_grid(const SolverConfig& cfg) { return make_grid(cfg.d, cfg.N, cfg.L); }

inline std::vector<double> solver_times(const SolverConfig& cfg) {
  return geometric_times(cfg.t_min, cfg.t_max, cfg.M);
}

inline void validate_solver_config(const SolverConfig& cfg) {
  Grid g = solver_grid(cfg);  // validates d, N, L
  double h2 = g.h * g.h, cap = (cfg.L / 6) * (cfg.L / 6);
  if (!(cfg.t_min >= h2 * (1 - 1e-12)))
    throw std::invalid_argument("solver config: t_min below the resolvable time h^2");
  if (!(cfg.t_max <= cap * (1 + 1e-12)))
    throw std::invalid_argument("solver config: t_max beyond the trusted window (L/6)^2");
  if (!(cfg.t_min < cfg.t_max))
    throw std::invalid_argument("solver config: need t_min < t_max");
  if (cfg.M < 8) throw std::invalid_argument("solver config: need at least 8 time slices");
  if (cfg.q < 8) throw std::invalid_argument("solver config: quadrature order below 8");
  if (!(cfg.eps > 0)) throw std::invalid_argument("solver config: need eps > 0");
  if (cfg.max_iter < 1) throw std::invalid_argument("solver config: need max_iter >= 1");
  if (cfg.threads < 1) throw std::invalid_argument("solver config: need threads >= 1");
  if (cfg.eta_samples < 1) throw std::invalid_argument("solver config: need eta_samples >= 1");
  validate_weight_params(cfg.weights, cfg.d);
}

// ---------------------------------------------------------------------------
// initial data

enum class DataKind { vortex, curl_potential };
enum class DataProfile { power_tail, regularized };

// Divergence-free data with prescribed spatial decay |u0| ~ |x|^{-beta}: a
// stream function falling like |x|^{-(beta-1)} loses one power to the
// derivative.  d = 2 rotates the gradient of a scalar; d = 3 takes the curl
// of (psi, 0, 0).  At beta = 1 the stream function degenerates to a constant
// and the flow vanishes.
inline VecField make_divfree_data(const Grid& g, DataKind kind, double beta, double A,
                                  DataProfile prof = DataProfile::power_tail,
                                  double core_radius = 0.0) {
  if (core_radius == 0.0) core_radius = 2 * g.h;
  if (!(A >= 0)) throw std::invalid_argument("make_divfree_data: amplitude must be >= 0");
  if (!(beta >= 1 && beta < g.d))
    throw std::invalid_argument("make_divfree_data: need 1 <= beta < d");
  if (kind == DataKind::vortex && g.d != 2)
    throw std::invalid_argument("make_divfree_data: vortex data is two-dimensional");
  if (kind == DataKind::curl_potential && g.d != 3)
    throw std::invalid_argument("make_divfree_data: curl-potential data is three-dimensional");
  if (core_radius < 2 * g.h * (1 - 1e-12))
    throw std::invalid_argument("make_divfree_data: core radius below 2h is not resolvable");
  if (A == 0.0 || beta == 1.0) return VecField::zeros(g);

  Scalar psi;
  if (prof == DataProfile::power_tail)
    psi = sample_radial(g, power_tail_profile(g.d, beta - 1, core_radius));
  else
    psi = sample_radial(g, regularized_profile(beta - 1, core_radius));
  for (auto& w : psi) w *= A;
  if (g.d == 2) return perp_gradient(g, psi);
  VecField Psi = VecField::zeros(g);
  Psi.c[0] = psi;
  return curl(g, Psi);
}

inline SpaceTimeField heat_flow(const Grid& g, const VecField& u0,
                                const std::vector<double>& times) {
  SpaceTimeField f;
  f.t = times;
  f.slices.reserve(times.size());
  for (double t : times) f.slices.push_back(heat_apply(g, u0, t));
  return f;
}

struct SmallnessScaling {
  VecField u0;
  double factor = 0;    // multiplier applied to the input data
  double achieved = 0;  // three-term gauge of the scaled heat flow over the probes
};

// Largest multiplier keeping the three-term weighted gauge of the heat flow
// within the budget at every probe time.  The gauge is linear in the data,
// so the multiplier is budget/sup; a hair below keeps the downstream gate
// strict.
inline SmallnessScaling scale_to_smallness(const Grid& g, const VecField& u0,
                                           const WeightParams& p, double delta,
                                           const std::vector<double>& probe_times) {
  validate_weight_params(p, g.d);
  if (!(delta > 0)) throw std::invalid_argument("scale_to_smallness: budget must be positive");
  if (probe_times.empty()) throw std::invalid_argument("scale_to_smallness: no probe times");
  double t_lo = g.h * g.h * (1 - 1e-12), t_hi = (g.L / 6) * (g.L / 6) * (1 + 1e-12);
  double S = 0;
  for (double t : probe_times) {
    if (!(t >= t_lo && t <= t_hi))
      throw std::invalid_argument("scale_to_smallness: probe outside [h^2, (L/6)^2]");
    S = std::max(S, three_term_weight_sup(g, heat_apply(g, u0, t), p, t));
  }
  if (S == 0)
    throw std::invalid_argument("scale_to_smallness: zero data has no scale");
  SmallnessScaling out;
  out.factor = delta * (1 - 1e-6) / S;
  out.u0 = scale(u0, out.factor);
  out.achieved = out.factor * S;
  return out;
}

// ---------------------------------------------------------------------------
// the bilinear term

namespace detail {

inline std::vector<double> dedup_sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || x - out.back() > 1e-15) out.push_back(x);
  return out;
}

}  // namespace detail

inline VecField duhamel_bilinear(const Grid& g, const SpaceTimeField& u,
                                 const SpaceTimeField& v, double t, const SolverConfig& cfg) {
  if (!(t > 0)) throw std::invalid_argument("duhamel_bilinear: need t > 0");
  if (u.t.empty() || v.t.empty())
    throw std::invalid_argument("duhamel_bilinear: empty iterate");
  if (t > std::min(u.t.back(), v.t.back()) * (1 + 1e-12))
    throw std::invalid_argument("duhamel_bilinear: time beyond the sampled window");
  if (cfg.q < 1) throw std::invalid_argument("duhamel_bilinear: need q >= 1");

  double sm = std::sqrt(0.5 * t);
  std::vector<double> k1{0.0, sm}, k2{0.0, sm};
  auto add_times = [&](const std::vector<double>& ts) {
    for (double tj : ts) {
      if (tj < 0.5 * t)
        k1.push_back(std::sqrt(tj));
      else if (tj <= t * (1 + 1e-15))
        k2.push_back(std::sqrt(std::max(0.0, t - tj)));
    }
  };
  add_times(u.t);
  if (&u != &v) add_times(v.t);
  {
    // refine the tau -> t panel: below s = 2h/(pi sqrt(d)) the damping
    // e^{-s^2 |k|^2} is flat even at the largest resolved wavenumber
    std::vector<double> edges = detail::dedup_sorted(k2);
    double w0 = edges.size() >= 2 ? edges[1] : sm;
    double kmax = std::numbers::pi / g.h;
    double wmin = 2.0 / (kmax * std::sqrt(static_cast<double>(g.d)));
    double w = 0.5 * w0;
    for (int j = 0; j < 40 && w > wmin; ++j, w *= 0.5) k2.push_back(w);
  }
  std::vector<double> s1 = detail::dedup_sorted(k1), s2 = detail::dedup_sorted(k2);

  GaussRule rule = gauss_legendre(cfg.q);
  SpecVec acc = SpecVec::zeros(g);
  auto accumulate = [&](const std::vector<double>& edges, bool upper_half) {
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
      double a = edges[p], b = edges[p + 1];
      if (b - a < 1e-15) continue;
      double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      for (int i = 0; i < cfg.q; ++i) {
        double s = mid + half * rule.x[i];
        double w = half * rule.w[i] * 2.0 * s;  // dtau = 2 s ds
        // dt is formed directly in each branch: t - s^2 is exact where it is
        // O(t) and s^2 is exact where t - s^2 would cancel
        double tau = upper_half ? t - s * s : s * s;
        double dt = upper_half ? s * s : t - s * s;
        VecField a_s = u.eval(tau);
        TensorField T = (&u == &v) ? tensor_product(a_s, a_s)
                                   : tensor_product(a_s, v.eval(tau));
        oseen_div_spectral_acc(g, T, dt, w, acc);
      }
    }
  };
  accumulate(s1, false);
  accumulate(s2, true);
  return from_spectral_vec(g, acc);
}

// B(u, v) sampled at u's slice times.  Slices are independent; chunking is by
// slice index, so results are byte-identical for any thread count.
inline SpaceTimeField duhamel_all(const Grid& g, const SpaceTimeField& u,
                                  const SpaceTimeField& v, const SolverConfig& cfg) {
  if (u.t.empty() || v.t.empty()) throw std::invalid_argument("duhamel_all: empty iterate");
  if (v.t.back() < u.t.back() * (1 - 1e-12))
    throw std::invalid_argument("duhamel_all: second factor does not cover the window");
  SpaceTimeField B;
  B.t = u.t;
  B.slices.assign(u.t.size(), VecField{});
  int nth = std::max(1, std::min<int>(cfg.threads, static_cast<int>(u.t.size())));
  auto work = [&](int lane) {
    for (std::size_t j = static_cast<std::size_t>(lane); j < u.t.size(); j += nth)
      B.slices[j] = duhamel_bilinear(g, u, v, u.t[j], cfg);
  };
  if (nth == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nth);
    for (int lane = 0; lane < nth; ++lane) pool.emplace_back(work, lane);
    for (auto& th : pool) th.join();
  }
  return B;
}

// ---------------------------------------------------------------------------
// bilinear-constant estimation

struct EtaEstimate {
  std::vector<double> sample_ratios;
  double raw_max = 0;
  double eta_hat = 0;  // 2 x raw_max: declared safety factor on a finite sample
};

inline double smallness_budget(double eta_hat) {
  if (!(eta_hat > 0)) throw std::invalid_argument("smallness_budget: need eta_hat > 0");
  return 1.0 / (4.0 * eta_hat);
}

namespace detail {

// random trigonometric polynomial times a power-law envelope, projected
// divergence-free; the projection preserves the envelope class at desk
// tolerance (measured, not proved)
inline VecField random_enveloped_field(const Grid& g, RngStream& rng, double decay) {
  Scalar env(g.size, 1.0);
  if (decay > 0) env = sample_radial(g, power_tail_profile(g.d, decay, 2 * g.h));
  VecField f = VecField::zeros(g);
  for (int mode = 0; mode < 6; ++mode) {
    std::array<int, 3> kk{};
    std::array<double, 3> ph{};
    for (int a = 0; a < g.d; ++a) {
      kk[a] = static_cast<int>(rng.uniform_int(1, 3));
      ph[a] = rng.uniform(0, 2 * std::numbers::pi);
    }
    std::array<double, 3> amp{};
    for (int c = 0; c < g.d; ++c) amp[c] = rng.normal();
    std::array<int, 3> idx{};
    for (std::size_t n = 0; n < g.size; ++n) {
      g.decompose(n, idx);
      for (int c = 0; c < g.d; ++c) {
        double w = amp[c];
        for (int a = 0; a < g.d; ++a)
          w *= std::cos(kk[a] * std::numbers::pi / g.L * g.axis_x[idx[a]] +
                        ph[(a + c) % g.d]);
        f.c[c][n] += w;
      }
    }
  }
  for (int c = 0; c < g.d; ++c)
    for (std::size_t n = 0; n < g.size; ++n) f.c[c][n] *= env[n];
  return leray_project(g, f);
}

}  // namespace detail

// Monte-Carlo lower envelope of the bilinear norm ratio
//   |B(u, v)| in the (hat_beta, beta) norm over
//   |u| in the (alpha, 1) norm times |v| in the (tilde_beta, beta) norm
// across heat flows of enveloped random fields.  Doubling the observed
// maximum declares the margin for draws the sample missed.
inline EtaEstimate estimate_bilinear_constant(const Grid& g, const WeightParams& p,
                                              const SolverConfig& cfg, int n_samples) {
  validate_weight_params(p, g.d);
  if (std::isnan(p.hat_beta))
    throw std::invalid_argument("estimate_bilinear_constant: hat_beta is required");
  if (n_samples < 1)
    throw std::invalid_argument("estimate_bilinear_constant: need at least one sample");
  RngStream rng(cfg.seed, "bilinear-constant");
  std::vector<double> times = solver_times(cfg);
  EtaEstimate est;
  for (int s = 0; s < n_samples; ++s) {
    VecField a = detail::random_enveloped_field(g, rng, p.alpha);
    VecField b = detail::random_enveloped_field(g, rng, p.tilde_beta);
    SpaceTimeField U = heat_flow(g, a, times);
    SpaceTimeField V = heat_flow(g, b, times);
    SpaceTimeField B = duhamel_all(g, U, V, cfg);
    double num = k_norm(g, B, p.hat_beta, p.beta, cfg.t_max);
    double den = k_norm(g, U, p.alpha, 1.0, cfg.t_max) *
                 k_norm(g, V, p.tilde_beta, p.beta, cfg.t_max);
    double ratio = den > 0 ? num / den : 0.0;
    est.sample_ratios.push_back(ratio);
    est.raw_max = std::max(est.raw_max, ratio);
  }
  est.eta_hat = 2.0 * est.raw_max;
  return est;
}

// ---------------------------------------------------------------------------
// fixed-point iteration

struct PicardDiagnostics {
  std::vector<double> iterate_norms;  // (alpha, 1) norm of each iterate
  std::vector<double> diff_norms;     // same norm of successive differences
  std::vector<double> ratios;         // contraction factors between differences
  double probed_smallness = 0;        // three-term gauge of the data's heat flow
  double max_divergence = 0;          // worst sup|div u| / sup|u| over final slices
  double residual = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
  std::string failure;  // empty on success
};

struct PicardResult {
  SpaceTimeField u;
  PicardDiagnostics diag;
};

inline PicardResult picard_solve(const Grid& g, const VecField& u0, const SolverConfig& cfg,
                                 bool override_smallness = false) {
  validate_solver_config(cfg);
  if (g.d != cfg.d || g.N != cfg.N || g.L != cfg.L)
    throw std::invalid_argument("picard_solve: grid does not match the config");
  {
    Scalar dv = divergence(g, u0);
    double sd = 0;
    for (double x : dv) sd = std::max(sd, std::abs(x));
    if (sd > 1e-8 * sup_magnitude(u0))
      throw std::invalid_argument("picard_solve: initial data is not divergence-free");
  }

  std::vector<double> times = solver_times(cfg);
  SpaceTimeField flow0 = heat_flow(g, u0, times);

  PicardResult out;
  PicardDiagnostics& dg = out.diag;
  for (std::size_t j = 0; j < times.size(); ++j)
    dg.probed_smallness = std::max(
        dg.probed_smallness, three_term_weight_sup(g, flow0.slices[j], cfg.weights, times[j]));
  if (!override_smallness) {
    if (!(cfg.delta > 0))
      throw std::runtime_error(
          "picard_solve: smallness budget is not set; estimate the bilinear constant first "
          "or override");
    if (dg.probed_smallness > cfg.delta * (1 + 1e-12))
      throw std::runtime_error(
          "picard_solve: data exceeds the smallness budget; rescale or override");
  }

  double alpha = cfg.weights.alpha, T = cfg.t_max;
  auto diff_norm = [&](const SpaceTimeField& x, const SpaceTimeField& y) {
    SpaceTimeField dfld;
    dfld.t = x.t;
    dfld.slices.reserve(x.t.size());
    for (std::size_t j = 0; j < x.t.size(); ++j)
      dfld.slices.push_back(lin_comb(1.0, x.slices[j], -1.0, y.slices[j]));
    return k_norm(g, dfld, alpha, 1.0, T);
  };
  auto step = [&](const SpaceTimeField& w) {
    if (cfg.zero_bilinear) return flow0;
    SpaceTimeField B = duhamel_all(g, w, w, cfg);
    SpaceTimeField next;
    next.t = times;
    next.slices.reserve(times.size());
    for (std::size_t j = 0; j < times.size(); ++j)
      next.slices.push_back(lin_comb(1.0, flow0.slices[j], -1.0, B.slices[j]));
    return next;
  };

  SpaceTimeField cur = flow0;
  dg.iterate_norms.push_back(k_norm(g, cur, alpha, 1.0, T));
  for (int it = 0; it < cfg.max_iter; ++it) {
    SpaceTimeField next = step(cur);
    double dn = diff_norm(next, cur);
    dg.diff_norms.push_back(dn);
    if (dg.diff_norms.size() >= 2) {
      double prev = dg.diff_norms[dg.diff_norms.size() - 2];
      dg.ratios.push_back(prev > 0 ? dn / prev : 0.0);
    }
    cur = std::move(next);
    dg.iterate_norms.push_back(k_norm(g, cur, alpha, 1.0, T));
    if (dn < cfg.eps) {
      dg.converged = true;
      break;
    }
    std::size_t nr = dg.ratios.size();
    if (nr >= 2 && dg.ratios[nr - 1] >= 1 && dg.ratios[nr - 2] >= 1) {
      dg.failure = "non-contraction";
      break;
    }
  }
  if (dg.converged) {
    dg.residual = diff_norm(cur, step(cur));
  } else if (dg.failure.empty()) {
    dg.failure = "iteration cap reached";
  }

  for (std::size_t j = 0; j < times.size(); ++j) {
    double su = sup_magnitude(cur.slices[j]);
    if (su == 0) continue;
    Scalar dv = divergence(g, cur.slices[j]);
    double sd = 0;
    for (double x : dv) sd = std::max(sd, std::abs(x));
    dg.max_divergence = std::max(dg.max_divergence, sd / su);
  }
  out.u = std::move(cur);
  return out;
}

}  // namespace mildns
