#pragma once

// Log-log regression of decay series and the pass/fail report type.
//
// A series whose values span less than 0.05 in log over the fit window is
// classified flat-degenerate: its residuals are grid noise of the same size
// as the total variation, so R^2 carries no information and the verdict
// rests on the slope tolerance alone.  The exactly-constant case (R^2 = 1,
// slope 0 by convention) is the limit of the same rule.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace mildns {

struct Sample {
  double s;  // abscissa (time or radius), > 0
  double v;  // value, > 0
};

struct FitResult {
  double slope = 0;
  double intercept = 0;
  double r2 = 1;
  int n_used = 0;
  double value_log_range = 0;
};

inline FitResult fit_decay_exponent(const std::vector<Sample>& samples, double lo, double hi) {
  std::vector<double> lx, ly;
  for (const auto& p : samples) {
    if (p.s < lo || p.s > hi) continue;
    if (!(p.s > 0) || !(p.v > 0))
      throw std::invalid_argument("fit_decay_exponent: nonpositive sample");
    lx.push_back(std::log(p.s));
    ly.push_back(std::log(p.v));
  }
  if (lx.size() < 5)
    throw std::invalid_argument("fit_decay_exponent: fewer than 5 samples in window");

  int n = static_cast<int>(lx.size());
  double mx = 0, my = 0;
  for (int i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  FitResult out;
  out.n_used = n;
  out.slope = (sxx > 0) ? sxy / sxx : 0.0;
  out.intercept = my - out.slope * mx;
  double ssres = 0, sstot = 0;
  for (int i = 0; i < n; ++i) {
    double pred = out.intercept + out.slope * lx[i];
    ssres += (ly[i] - pred) * (ly[i] - pred);
    sstot += (ly[i] - my) * (ly[i] - my);
  }
  out.r2 = (sstot > 0) ? 1.0 - ssres / sstot : 1.0;  // zero variance: slope 0, R^2 = 1
  auto [itmin, itmax] = std::minmax_element(ly.begin(), ly.end());
  out.value_log_range = *itmax - *itmin;
  return out;
}

// default window: trim 20% of the log range of the abscissas at each end
inline std::pair<double, double> default_fit_window(const std::vector<Sample>& samples) {
  if (samples.empty()) throw std::invalid_argument("default_fit_window: no samples");
  double lmin = std::log(samples.front().s), lmax = lmin;
  for (const auto& p : samples) {
    lmin = std::min(lmin, std::log(p.s));
    lmax = std::max(lmax, std::log(p.s));
  }
  double trim = 0.2 * (lmax - lmin);
  return {std::exp(lmin + trim), std::exp(lmax - trim)};
}

enum class PassRule { two_sided, upper_bound };

struct DecayReport {
  std::string name;
  std::vector<Sample> samples;
  double window_lo = 0, window_hi = 0;
  double slope = 0, intercept = 0, r2 = 1;
  double target = 0, tolerance = 0;
  PassRule rule = PassRule::two_sided;
  bool flat_degenerate = false;
  double sup_constant = 0;  // reported, never asserted
  bool pass = false;
};

inline DecayReport make_decay_report(std::string name, std::vector<Sample> samples, double lo,
                                     double hi, double target, double tolerance,
                                     PassRule rule = PassRule::two_sided,
                                     double sup_constant = 0) {
  DecayReport r;
  r.name = std::move(name);
  r.samples = std::move(samples);
  r.window_lo = lo;
  r.window_hi = hi;
  r.target = target;
  r.tolerance = tolerance;
  r.rule = rule;
  r.sup_constant = sup_constant;
  FitResult f = fit_decay_exponent(r.samples, lo, hi);
  r.slope = f.slope;
  r.intercept = f.intercept;
  r.r2 = f.r2;
  r.flat_degenerate = f.value_log_range < 0.05;
  bool slope_ok = (rule == PassRule::two_sided) ? std::abs(r.slope - target) <= tolerance
                                                : r.slope <= target + tolerance;
  // The R^2 gate guards trend claims against fitting noise.  For a flatness
  // claim (target 0) low R^2 alongside a near-zero slope IS the expected
  // reading, so the gate does not apply.
  bool trend_claim = target != 0.0;
  r.pass = slope_ok && (!trend_claim || r.r2 >= 0.98 || r.flat_degenerate);
  return r;
}

}  // namespace mildns
