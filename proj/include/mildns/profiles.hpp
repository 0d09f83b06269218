#pragma once

// Radial test-function families.
//
// power_tail_profile: |x|^{-beta} for r >= r0 with a quintic-in-r^2 core
// fill.  The five fill coefficients match value, slope and curvature at the
// seam (C^2) plus the ball mass and second moment of the pure power law, so
// the heat evolution of the sampled field follows the exact self-similar
// decay law to fourth-moment order.  This is what makes desk-scale decay
// exponents land within a few percent of their continuum targets; a
// regularized core (eps^2 + r^2)^{-beta/2} is also provided for contrast,
// but its core mass deficit relaxes only like t^{-(d-beta)/2}.

#include <array>
#include <cmath>
#include <stdexcept>

#include <mildns/field.hpp>
#include <mildns/grid.hpp>

namespace mildns {

namespace detail {

template <int n>
inline std::array<double, n> solve_dense(std::array<std::array<double, n>, n> A,
                                         std::array<double, n> b) {
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    if (A[col][col] == 0) throw std::runtime_error("solve_dense: singular system");
    for (int r = col + 1; r < n; ++r) {
      double f = A[r][col] / A[col][col];
      for (int c = col; c < n; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  std::array<double, n> x{};
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= A[r][c] * x[c];
    x[r] = s / A[r][r];
  }
  return x;
}

}  // namespace detail

struct PowerTailProfile {
  double beta = 0, r0 = 0;
  std::array<double, 5> a{};  // fill coefficients in z = (r/r0)^2

  double operator()(double r) const {
    if (r >= r0) return std::pow(r, -beta);
    double z = (r / r0) * (r / r0);
    return a[0] + z * (a[1] + z * (a[2] + z * (a[3] + z * a[4])));
  }
};

inline PowerTailProfile power_tail_profile(int d, double beta, double r0) {
  if (!(beta > 0) || !(beta < d))
    throw std::invalid_argument("power_tail_profile: need 0 < beta < d");
  if (!(r0 > 0)) throw std::invalid_argument("power_tail_profile: need r0 > 0");
  double s = std::pow(r0, -beta);
  std::array<std::array<double, 5>, 5> A{};
  std::array<double, 5> b{};
  for (int j = 0; j < 5; ++j) {
    A[0][j] = 1.0;                        // value at the seam
    A[1][j] = 2.0 * j;                    // r d/dr at the seam
    A[2][j] = 2.0 * j * (2.0 * j - 1.0);  // r^2 d^2/dr^2 at the seam
    A[3][j] = 1.0 / (2.0 * j + d);        // ball mass
    A[4][j] = 1.0 / (2.0 * j + d + 2);    // second moment
  }
  b[0] = s;
  b[1] = -beta * s;
  b[2] = beta * (beta + 1) * s;
  b[3] = s / (d - beta);
  b[4] = s / (d + 2 - beta);
  PowerTailProfile p;
  p.beta = beta;
  p.r0 = r0;
  p.a = detail::solve_dense<5>(A, b);
  return p;
}

struct RegularizedProfile {
  double beta = 0, eps = 0;
  double operator()(double r) const { return std::pow(eps * eps + r * r, -beta / 2.0); }
};

inline RegularizedProfile regularized_profile(double beta, double eps) {
  if (!(beta > 0) || !(eps > 0))
    throw std::invalid_argument("regularized_profile: need beta > 0, eps > 0");
  return {beta, eps};
}

template <class Profile>
inline Scalar sample_radial(const Grid& g, const Profile& p) {
  Scalar f(g.size);
  for (std::size_t n = 0; n < g.size; ++n) f[n] = p(g.radius[n]);
  return f;
}

}  // namespace mildns
