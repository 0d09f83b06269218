#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <mildns/grid.hpp>

namespace mildns {

using Scalar = std::vector<double>;                 // N^d samples, row-major
using Spectral = std::vector<std::complex<double>>; // N^d coefficients, DFT order

struct VecField {
  int d = 0;
  std::array<Scalar, 3> c;
  static VecField zeros(const Grid& g) {
    VecField u;
    u.d = g.d;
    for (int a = 0; a < g.d; ++a) u.c[a].assign(g.size, 0.0);
    return u;
  }
};

struct TensorField {
  int d = 0;
  std::array<Scalar, 9> c;  // (i,j) -> c[i*d + j]
  static TensorField zeros(const Grid& g) {
    TensorField T;
    T.d = g.d;
    for (int a = 0; a < g.d * g.d; ++a) T.c[a].assign(g.size, 0.0);
    return T;
  }
  Scalar& at(int i, int j) { return c[i * d + j]; }
  const Scalar& at(int i, int j) const { return c[i * d + j]; }
};

struct SpecVec {
  int d = 0;
  std::array<Spectral, 3> c;
  static SpecVec zeros(const Grid& g) {
    SpecVec u;
    u.d = g.d;
    for (int a = 0; a < g.d; ++a) u.c[a].assign(g.size, {0.0, 0.0});
    return u;
  }
};

inline Scalar magnitude(const VecField& u) {
  Scalar m(u.c[0].size(), 0.0);
  for (int a = 0; a < u.d; ++a)
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += u.c[a][i] * u.c[a][i];
  for (auto& v : m) v = std::sqrt(v);
  return m;
}

inline double sup_magnitude(const VecField& u) {
  double best = 0.0;
  for (std::size_t i = 0; i < u.c[0].size(); ++i) {
    double s = 0;
    for (int a = 0; a < u.d; ++a) s += u.c[a][i] * u.c[a][i];
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

// axpy-style helpers used by the iteration
inline VecField lin_comb(double a, const VecField& u, double b, const VecField& v) {
  VecField w;
  w.d = u.d;
  for (int k = 0; k < u.d; ++k) {
    w.c[k].resize(u.c[k].size());
    for (std::size_t i = 0; i < w.c[k].size(); ++i) w.c[k][i] = a * u.c[k][i] + b * v.c[k][i];
  }
  return w;
}

inline VecField scale(const VecField& u, double a) {
  VecField w = u;
  for (int k = 0; k < u.d; ++k)
    for (auto& v : w.c[k]) v *= a;
  return w;
}

// One velocity field per time; times form a geometric progression.
struct SpaceTimeField {
  std::vector<double> t;
  std::vector<VecField> slices;

  // piecewise-linear in t; held constant below the first stored time
  VecField eval(double tau) const {
    if (tau <= t.front()) return slices.front();
    auto it = std::upper_bound(t.begin(), t.end(), tau);
    std::size_t j = static_cast<std::size_t>(it - t.begin());
    j = std::min(std::max<std::size_t>(j, 1), t.size() - 1) - 1;
    double w = (tau - t[j]) / (t[j + 1] - t[j]);
    w = std::clamp(w, 0.0, 1.0);
    return lin_comb(1.0 - w, slices[j], w, slices[j + 1]);
  }
};

inline std::vector<double> geometric_times(double t_min, double t_max, int M) {
  if (M < 2 || !(t_min > 0) || !(t_max > t_min))
    throw std::invalid_argument("geometric_times: need M >= 2 and 0 < t_min < t_max");
  std::vector<double> t(M);
  double q = std::pow(t_max / t_min, 1.0 / (M - 1));
  for (int i = 0; i < M; ++i) t[i] = t_min * std::pow(q, i);
  t.back() = t_max;
  return t;
}

}  // namespace mildns
