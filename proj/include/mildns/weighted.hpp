#pragma once

// Weighted supremum norms.  The essential supremum is realized as a max over
// sampled nodes (all test functions are continuous); an optional probe cap
// restricts the max to |x| <= cap for stability studies.

#include <cmath>
#include <limits>
#include <stdexcept>

#include <mildns/field.hpp>
#include <mildns/grid.hpp>

namespace mildns {

constexpr double no_cap = std::numeric_limits<double>::infinity();

// Exponent tuple driving the weighted estimates.  hat_beta may be NaN when the
// bilinear-constant constraints are not in play.
struct WeightParams {
  double gamma = 0.5;
  double tilde_gamma = 0.5;
  double alpha = 0.5;
  double beta = 1.5;
  double tilde_beta = 1.0;
  double hat_beta = 1.0;
};

inline void validate_weight_params(const WeightParams& p, int d) {
  if (!(0 <= p.gamma && p.gamma <= 1 && 1 <= p.beta && p.beta < d))
    throw std::invalid_argument("weight params: need 0 <= gamma <= 1 <= beta < d");
  if (!(0 <= p.tilde_gamma && p.tilde_gamma <= p.gamma))
    throw std::invalid_argument("weight params: need 0 <= tilde_gamma <= gamma");
  if (!(p.tilde_beta >= 0 && p.beta - 2 < p.tilde_beta && p.tilde_beta <= p.beta))
    throw std::invalid_argument("weight params: need 0 <= tilde_beta and beta-2 < tilde_beta <= beta");
  if (!(0 < p.alpha && p.alpha < 1))
    throw std::invalid_argument("weight params: need 0 < alpha < 1");
  if (!(p.beta - p.tilde_beta - 1 < p.alpha && p.alpha < d - p.tilde_beta))
    throw std::invalid_argument("weight params: need beta-tilde_beta-1 < alpha < d-tilde_beta");
  if (!std::isnan(p.hat_beta)) {
    if (!(0 <= p.hat_beta && p.hat_beta <= p.beta))
      throw std::invalid_argument("weight params: need 0 <= hat_beta <= beta");
    if (!(p.alpha + p.tilde_beta - 1 < p.hat_beta && p.hat_beta <= p.alpha + p.tilde_beta))
      throw std::invalid_argument(
          "weight params: need alpha+tilde_beta-1 < hat_beta <= alpha+tilde_beta");
  }
}

inline double weighted_sup_norm(const Grid& g, const Scalar& f, double beta,
                                double cap = no_cap) {
  if (beta < 0) throw std::invalid_argument("weighted_sup_norm: beta must be >= 0");
  double best = 0;
  for (std::size_t n = 0; n < g.size; ++n) {
    double r = g.radius[n];
    if (r > cap) continue;
    double v = std::pow(r, beta) * std::abs(f[n]);
    if (v > best) best = v;
  }
  return best;
}

inline double weighted_sup_norm(const Grid& g, const VecField& u, double beta,
                                double cap = no_cap) {
  if (beta < 0) throw std::invalid_argument("weighted_sup_norm: beta must be >= 0");
  double best = 0;
  for (std::size_t n = 0; n < g.size; ++n) {
    double r = g.radius[n];
    if (r > cap) continue;
    double m2 = 0;
    for (int a = 0; a < u.d; ++a) m2 += u.c[a][n] * u.c[a][n];
    double v = std::pow(r, beta) * std::sqrt(m2);
    if (v > best) best = v;
  }
  return best;
}

// sup over {t <= T} x nodes of |x|^alpha t^{(beta-alpha)/2} |u(x,t)|
inline double k_norm(const Grid& g, const SpaceTimeField& u, double alpha, double beta,
                     double T, double cap = no_cap) {
  if (alpha < 0 || alpha > beta || beta >= g.d)
    throw std::invalid_argument("k_norm: need 0 <= alpha <= beta < d");
  if (u.t.empty() || T < u.t.front())
    throw std::invalid_argument("k_norm: empty time window");
  double best = 0;
  for (std::size_t s = 0; s < u.t.size(); ++s) {
    double t = u.t[s];
    if (t > T * (1 + 1e-12)) break;
    double tf = std::pow(t, 0.5 * (beta - alpha));
    const VecField& v = u.slices[s];
    for (std::size_t n = 0; n < g.size; ++n) {
      double r = g.radius[n];
      if (r > cap) continue;
      double m2 = 0;
      for (int a = 0; a < v.d; ++a) m2 += v.c[a][n] * v.c[a][n];
      double val = std::pow(r, alpha) * tf * std::sqrt(m2);
      if (val > best) best = val;
    }
  }
  return best;
}

// sup of (|x|^gamma + t^{gamma/2} + |x|^beta + t^{beta/2}) |u(x,t)|
inline double combined_weight_sup(const Grid& g, const SpaceTimeField& u, double gamma,
                                  double beta, double cap = no_cap) {
  if (gamma < 0 || gamma > beta)
    throw std::invalid_argument("combined_weight_sup: need 0 <= gamma <= beta");
  double best = 0;
  for (std::size_t s = 0; s < u.t.size(); ++s) {
    double t = u.t[s];
    double tg = std::pow(t, 0.5 * gamma), tb = std::pow(t, 0.5 * beta);
    const VecField& v = u.slices[s];
    for (std::size_t n = 0; n < g.size; ++n) {
      double r = g.radius[n];
      if (r > cap) continue;
      double m2 = 0;
      for (int a = 0; a < v.d; ++a) m2 += v.c[a][n] * v.c[a][n];
      double w = std::pow(r, gamma) + tg + std::pow(r, beta) + tb;
      double val = w * std::sqrt(m2);
      if (val > best) best = val;
    }
  }
  return best;
}

// sup over the grid of
//   (|x|^tg t^{(g-tg)/2} + |x|^a t^{(1-a)/2} + |x|^tb t^{(b-tb)/2}) |u(x)|
// — the three-weight gauge a heat flow of admissible data must keep small.
inline double three_term_weight_sup(const Grid& g, const VecField& u, const WeightParams& p,
                                    double t) {
  if (!(t > 0)) throw std::invalid_argument("three_term_weight_sup: need t > 0");
  double e1 = std::pow(t, 0.5 * (p.gamma - p.tilde_gamma));
  double e2 = std::pow(t, 0.5 * (1.0 - p.alpha));
  double e3 = std::pow(t, 0.5 * (p.beta - p.tilde_beta));
  double best = 0;
  for (std::size_t n = 0; n < g.size; ++n) {
    double r = g.radius[n];
    double m2 = 0;
    for (int a = 0; a < u.d; ++a) m2 += u.c[a][n] * u.c[a][n];
    double w = std::pow(r, p.tilde_gamma) * e1 + std::pow(r, p.alpha) * e2 +
               std::pow(r, p.tilde_beta) * e3;
    double val = w * std::sqrt(m2);
    if (val > best) best = val;
  }
  return best;
}

}  // namespace mildns
