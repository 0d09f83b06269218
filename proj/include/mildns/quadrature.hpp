#pragma once

// Gauss-Legendre rules, the incomplete beta function at 1/2, and closed forms
// for the singular lag integrals  int (t-tau)^-gamma tau^-theta dtau  over the
// first half, second half, and whole of (0, t).

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace mildns {

struct GaussRule {
  std::vector<double> x, w;  // nodes and weights on [-1, 1], nodes ascending
};

namespace detail {
// P_q(x) and P_q'(x) by the three-term recurrence
inline std::pair<double, double> legendre_pair(int q, double x) {
  double p0 = 1.0, p1 = x;
  for (int n = 2; n <= q; ++n) {
    double p2 = ((2 * n - 1) * x * p1 - (n - 1) * p0) / n;
    p0 = p1;
    p1 = p2;
  }
  double dp = q * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}
}  // namespace detail

inline GaussRule gauss_legendre(int q) {
  if (q < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  GaussRule r;
  r.x.assign(q, 0.0);
  r.w.assign(q, 0.0);
  for (int i = 0; i < (q + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
    if (q == 1) x = 0.0;
    for (int it = 0; it < 100; ++it) {
      auto [p, dp] = detail::legendre_pair(q, x);
      double dx = (q == 1) ? 0.0 : p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double dp = (q == 1) ? 1.0 : detail::legendre_pair(q, x).second;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.x[q - 1 - i] = x;  // initial guesses run from the largest root down
    r.x[i] = -x;
    r.w[q - 1 - i] = w;
    r.w[i] = w;
  }
  return r;
}

// B_{1/2}(a, b) = int_0^{1/2} s^{a-1} (1-s)^{b-1} ds for a > 0 and any real b,
// by the hypergeometric series x^a sum_n ((1-b)_n / n!) x^n / (a+n) at x=1/2.
inline double beta_half(double a, double b) {
  if (!(a > 0)) throw std::invalid_argument("beta_half: first parameter must be positive");
  const double x = 0.5;
  double term = 1.0, sum = 1.0 / a;
  for (int n = 1; n < 700; ++n) {
    term *= (n - b) * x / n;
    double inc = term / (a + n);
    sum += inc;
    if (std::abs(inc) <= 1e-17 * std::abs(sum)) break;
  }
  return std::pow(x, a) * sum;
}

inline double beta_complete(double a, double b) {
  if (!(a > 0) || !(b > 0))
    throw std::invalid_argument("beta_complete: parameters must be positive");
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

// Which range of the lag integral int (t-tau)^-gamma tau^-theta dtau:
//   head = (0, t/2), tail = (t/2, t), full = (0, t).
enum class BetaPart { head, tail, full };

inline double beta_time_integral(double gamma_, double theta, double t, BetaPart part) {
  if (!(t > 0)) throw std::invalid_argument("beta_time_integral: t must be positive");
  const double scale = std::pow(t, 1.0 - gamma_ - theta);
  switch (part) {
    case BetaPart::head:
      if (!(theta < 1))
        throw std::invalid_argument("beta_time_integral: head needs theta < 1");
      return scale * beta_half(1.0 - theta, 1.0 - gamma_);
    case BetaPart::tail:
      if (!(gamma_ < 1))
        throw std::invalid_argument("beta_time_integral: tail needs gamma < 1");
      return scale * beta_half(1.0 - gamma_, 1.0 - theta);
    case BetaPart::full:
      if (!(gamma_ < 1) || !(theta < 1))
        throw std::invalid_argument("beta_time_integral: full needs gamma < 1 and theta < 1");
      return scale * beta_complete(1.0 - gamma_, 1.0 - theta);
  }
  throw std::logic_error("beta_time_integral: unknown part");
}

}  // namespace mildns
