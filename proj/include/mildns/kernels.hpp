#pragma once

// The three solution operators, realized as Fourier multipliers on the
// periodic grid:
//
//   heat_apply      multiplier exp(-t|k|^2)
//   leray_project   multiplier delta_ij - k_i k_j / |k|^2   (mean mode kept)
//   oseen_apply     exp(-t|k|^2) P (ik . T^)  fused in one spectral pass
//
// plus the discrete point-source reconstruction of the kernels and the
// pointwise bound / self-similarity audits built on it.

#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <mildns/field.hpp>
#include <mildns/fit.hpp>
#include <mildns/grid.hpp>
#include <mildns/spectral.hpp>

namespace mildns {

// ---- heat semigroup ----

inline void heat_damp_spec(const Grid& g, Spectral& c, double t) {
  for (std::size_t m = 0; m < g.size; ++m) c[m] *= std::exp(-t * g.k2[m]);
}

inline Scalar heat_apply(const Grid& g, const Scalar& f, double t) {
  if (t < 0) throw std::invalid_argument("heat_apply: negative time");
  Spectral c = to_spectral(g, f);
  heat_damp_spec(g, c, t);
  return from_spectral(g, c);
}

inline VecField heat_apply(const Grid& g, const VecField& u, double t) {
  if (t < 0) throw std::invalid_argument("heat_apply: negative time");
  SpecVec s = to_spectral_vec(g, u);
  for (int a = 0; a < g.d; ++a) heat_damp_spec(g, s.c[a], t);
  return from_spectral_vec(g, s);
}

// ---- Helmholtz--Leray projection ----

// In place, built from the derivative wavenumbers, so the projection
// annihilates exactly the divergence the rest of the calculus computes
// (pointwise tensor products alias energy onto the highest mode, which the
// derivative operators treat as flat).  Modes the divergence cannot see,
// k = 0 included, pass through unchanged; P stays idempotent on the grid.
inline void leray_project_spec(const Grid& g, SpecVec& s) {
  std::array<int, 3> ix{};
  for (std::size_t m = 0; m < g.size; ++m) {
    g.decompose(m, ix);
    double kv[3] = {0, 0, 0};
    double k2 = 0;
    std::complex<double> kd{0, 0};
    for (int a = 0; a < g.d; ++a) {
      kv[a] = g.axis_kd[ix[a]];
      k2 += kv[a] * kv[a];
      kd += kv[a] * s.c[a][m];
    }
    if (k2 == 0.0) continue;
    kd /= k2;
    for (int a = 0; a < g.d; ++a) s.c[a][m] -= kv[a] * kd;
  }
}

inline VecField leray_project(const Grid& g, const VecField& u) {
  SpecVec s = to_spectral_vec(g, u);
  leray_project_spec(g, s);
  return from_spectral_vec(g, s);
}

// ---- divergence of a tensor's rows ----

// (div F)_i = sum_l d_l F_il
inline VecField div_tensor(const Grid& g, const TensorField& F) {
  VecField out;
  out.d = g.d;
  for (int i = 0; i < g.d; ++i) {
    VecField row;
    row.d = g.d;
    for (int l = 0; l < g.d; ++l) row.c[l] = F.at(i, l);
    out.c[i] = divergence(g, row);
  }
  return out;
}

// ---- fused Oseen pass ----

// acc_i += weight * exp(-dt |k|^2) * [P (ik . T^)]_i ; this is the spectral
// workhorse shared by oseen_apply and the time-integral accumulation.
inline void oseen_div_spectral_acc(const Grid& g, const TensorField& T, double dt, double weight,
                                   SpecVec& acc) {
  if (dt < 0) throw std::invalid_argument("oseen_div_spectral_acc: negative lag");
  SpecVec W = SpecVec::zeros(g);
  Spectral ca(g.size), cb(g.size);
  for (int i = 0; i < g.d; ++i) {
    forward_pair(g, T.at(i, 0), T.at(i, 1), ca, cb);
    detail::mul_ik(g, ca, 0);
    detail::mul_ik(g, cb, 1);
    for (std::size_t m = 0; m < g.size; ++m) W.c[i][m] = ca[m] + cb[m];
    if (g.d == 3) {
      Spectral cc = to_spectral(g, T.at(i, 2));
      detail::mul_ik(g, cc, 2);
      for (std::size_t m = 0; m < g.size; ++m) W.c[i][m] += cc[m];
    }
  }
  leray_project_spec(g, W);
  for (int i = 0; i < g.d; ++i)
    for (std::size_t m = 0; m < g.size; ++m)
      acc.c[i][m] += weight * std::exp(-dt * g.k2[m]) * W.c[i][m];
}

inline VecField oseen_apply(const Grid& g, const TensorField& F, double t) {
  if (!(t > 0)) throw std::invalid_argument("oseen_apply: time must be positive");
  SpecVec acc = SpecVec::zeros(g);
  oseen_div_spectral_acc(g, F, t, 1.0, acc);
  return from_spectral_vec(g, acc);
}

// ---- point source and kernel reconstruction ----

// Band-limited unit point mass at the origin: the true coefficients are the
// constant (2L)^-d; the per-axis phase restates them against the first-node
// offset used by to_spectral/from_spectral.
inline Spectral delta_spectral(const Grid& g) {
  std::vector<std::complex<double>> ph(g.N);
  for (int i = 0; i < g.N; ++i) {
    int mm = (i < g.N / 2) ? i : i - g.N;
    double arg = std::numbers::pi * mm * (1.0 / g.N - 1.0);
    ph[i] = {std::cos(arg), std::sin(arg)};
  }
  Spectral c(g.size);
  const double amp = std::pow(2.0 * g.L, -g.d);
  std::array<int, 3> ix{};
  for (std::size_t m = 0; m < g.size; ++m) {
    g.decompose(m, ix);
    std::complex<double> v{amp, 0.0};
    for (int a = 0; a < g.d; ++a) v *= ph[ix[a]];
    c[m] = v;
  }
  return c;
}

inline Spectral heat_kernel_spectral(const Grid& g, double t) {
  Spectral c = delta_spectral(g);
  heat_damp_spec(g, c, t);
  return c;
}

// Scalar kernel profile for the projected-gradient propagator: the operator is
// applied to a point-source tensor concentrated in the (0,0) component and the
// first output component is kept.  All audits below read this reconstruction.
inline Spectral oseen_kernel_spectral(const Grid& g, double t) {
  TensorField T = TensorField::zeros(g);
  T.at(0, 0) = from_spectral(g, delta_spectral(g));
  SpecVec acc = SpecVec::zeros(g);
  oseen_div_spectral_acc(g, T, t, 1.0, acc);
  return acc.c[0];
}

// ---- pointwise bound audits ----

enum class KernelKind { heat, oseen };

struct KernelProbe {
  std::array<double, 3> x{0, 0, 0};
  double t = 0;
};

struct KernelBoundAudit {
  KernelKind kind{};
  double alpha = 0;
  std::string formula;  // the ratio being maximized
  std::vector<KernelProbe> probes;
  std::vector<double> ratios;
  double max_ratio = 0;
  std::size_t argmax = 0;
};

namespace detail {
inline double probe_radius(int d, const std::array<double, 3>& x) {
  double r2 = 0;
  for (int a = 0; a < d; ++a) r2 += x[a] * x[a];
  return std::sqrt(r2);
}
}  // namespace detail

// Max over probes of |K(x,t)| |x|^a t^((d-a)/2) for the heat kernel, or
// |F_t(x)| |x|^a t^((d+1-a)/2) for the projected-gradient kernel.  Probes must
// sit in the resolvable window: |x| >= 2h, h^2 <= t <= (L/6)^2.
inline KernelBoundAudit audit_kernel_bound(const Grid& g, KernelKind kind, double alpha,
                                           const std::vector<KernelProbe>& probes) {
  const double amax = (kind == KernelKind::heat) ? g.d : g.d + 1;
  if (!(alpha >= 0 && alpha <= amax))
    throw std::invalid_argument("audit_kernel_bound: alpha out of range for this kernel");
  if (probes.empty()) throw std::invalid_argument("audit_kernel_bound: empty probe set");
  const double t_lo = g.h * g.h * (1 - 1e-12);
  const double t_hi = std::pow(g.L / 6.0, 2) * (1 + 1e-12);
  for (const auto& p : probes) {
    if (detail::probe_radius(g.d, p.x) < 2 * g.h * (1 - 1e-12))
      throw std::invalid_argument("audit_kernel_bound: probe radius below resolvable 2h");
    if (p.t < t_lo || p.t > t_hi)
      throw std::invalid_argument("audit_kernel_bound: probe time outside resolvable window");
  }

  const double texp = (kind == KernelKind::heat) ? 0.5 * (g.d - alpha) : 0.5 * (g.d + 1 - alpha);
  KernelBoundAudit audit;
  audit.kind = kind;
  audit.alpha = alpha;
  audit.probes = probes;
  audit.ratios.assign(probes.size(), 0.0);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "|x|^%.3g * t^%.4g * |%s_kernel(x,t)|", alpha, texp,
                kind == KernelKind::heat ? "heat" : "oseen");
  audit.formula = buf;

  std::map<double, std::vector<std::size_t>> by_t;
  for (std::size_t i = 0; i < probes.size(); ++i) by_t[probes[i].t].push_back(i);
  for (const auto& [t, idx] : by_t) {
    Spectral K =
        (kind == KernelKind::heat) ? heat_kernel_spectral(g, t) : oseen_kernel_spectral(g, t);
    for (std::size_t i : idx) {
      double r = detail::probe_radius(g.d, probes[i].x);
      double val = std::abs(spectral_eval(g, K, probes[i].x));
      audit.ratios[i] = val * std::pow(r, alpha) * std::pow(t, texp);
    }
  }
  for (std::size_t i = 0; i < audit.ratios.size(); ++i)
    if (audit.ratios[i] > audit.max_ratio) {
      audit.max_ratio = audit.ratios[i];
      audit.argmax = i;
    }
  return audit;
}

// ---- self-similarity audits of the projected-gradient kernel ----

struct CollapseCheck {
  double t = 0;
  std::size_t n_probes = 0;
  double peak = 0;     // sup |F_t| over the probe set
  double max_err = 0;  // sup |2^(d+1) F_{4t}(2x) - F_t(x)| / peak
};

// Compare the reconstructed kernel at t against the rescaled one at 4t on
// nodes with |x| <= L/3.  The error is normalized by the profile peak: the
// kernel changes sign, so pointwise quotients are ill-conditioned near zeros.
inline CollapseCheck oseen_collapse_check(const Grid& g, double t, std::size_t max_probes = 500) {
  if (!(t >= g.h * g.h * (1 - 1e-12)) || !(4 * t <= std::pow(g.L / 6.0, 2) * (1 + 1e-12)))
    throw std::invalid_argument("oseen_collapse_check: t outside resolvable window");
  Spectral Kt = oseen_kernel_spectral(g, t);
  Spectral K4 = oseen_kernel_spectral(g, 4 * t);
  Scalar Ft = from_spectral(g, Kt);

  std::vector<std::size_t> nodes;
  for (std::size_t m = 0; m < g.size; ++m)
    if (g.radius[m] <= g.L / 3.0) nodes.push_back(m);
  std::size_t stride = std::max<std::size_t>(1, nodes.size() / max_probes);

  CollapseCheck chk;
  chk.t = t;
  const double scale = std::pow(2.0, g.d + 1);
  std::array<int, 3> ix{};
  std::array<double, 3> p{0, 0, 0};
  for (std::size_t j = 0; j < nodes.size(); j += stride) {
    std::size_t m = nodes[j];
    chk.peak = std::max(chk.peak, std::abs(Ft[m]));
    ++chk.n_probes;
  }
  for (std::size_t j = 0; j < nodes.size(); j += stride) {
    std::size_t m = nodes[j];
    g.decompose(m, ix);
    for (int a = 0; a < g.d; ++a) p[a] = 2.0 * g.axis_x[ix[a]];
    double rescaled = scale * spectral_eval(g, K4, p).real();
    chk.max_err = std::max(chk.max_err, std::abs(rescaled - Ft[m]) / chk.peak);
  }
  return chk;
}

// Rescaled-profile flatness: (1 + |x|/sqrt(t))^(d+1) t^((d+1)/2) |F_t| sampled
// on half-dyadic shells of xi = |x|/sqrt(t) should carry no trend in xi.
inline DecayReport oseen_profile_report(const Grid& g, double t) {
  if (!(t >= g.h * g.h * (1 - 1e-12)) || !(t <= std::pow(g.L / 6.0, 2) * (1 + 1e-12)))
    throw std::invalid_argument("oseen_profile_report: t outside resolvable window");
  Scalar F = from_spectral(g, oseen_kernel_spectral(g, t));
  const double st = std::sqrt(t);
  const double xi_lo = std::max(1.0, 2 * g.h / st) * (1 - 1e-12);
  const double xi_hi = (g.L / 3.0) / st * (1 + 1e-12);

  std::vector<Sample> samples;
  for (int e = -6; e <= 12; ++e) {
    double xi = std::pow(2.0, 0.5 * e);
    if (xi < xi_lo || xi > xi_hi) continue;
    double r = xi * st, best = 0;
    for (std::size_t m = 0; m < g.size; ++m)
      if (std::abs(g.radius[m] - r) <= g.h)
        best = std::max(best, std::pow(1 + g.radius[m] / st, g.d + 1) *
                                  std::pow(t, 0.5 * (g.d + 1)) * std::abs(F[m]));
    if (best > 0) samples.push_back({xi, best});
  }
  double lo = samples.front().s * (1 - 1e-9), hi = samples.back().s * (1 + 1e-9);
  return make_decay_report("projected-gradient kernel profile flatness", std::move(samples), lo,
                           hi, 0.0, 0.15, PassRule::two_sided);
}

}  // namespace mildns
