#pragma once

// Cell-centered periodic surrogate of a cube [-L, L)^d.  No node sits at the
// origin, so pointwise weights |x|^a are always finite on samples.
//
// Wavenumbers follow DFT index order: k_m = (pi/L)*mm with mm = m for
// m < N/2 and mm = m - N for m >= N/2.  First-derivative multipliers zero
// the mm = -N/2 row (axis_kd) so that derivatives of real fields stay
// exactly conjugate-symmetric.

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace mildns {

struct Grid {
  int d = 0;
  int N = 0;
  double L = 0;
  double h = 0;
  std::size_t size = 0;

  std::vector<double> axis_x;   // node coordinates per axis, length N
  std::vector<double> axis_k;   // wavenumbers, DFT order
  std::vector<double> axis_kd;  // wavenumbers for first derivatives (Nyquist zeroed)
  std::vector<double> radius;   // |x| per flat node index
  std::vector<double> k2;       // |k|^2 per flat spectral index
  std::vector<std::size_t> reflect;  // flat spectral index of -m

  std::size_t idx2(int i, int j) const { return static_cast<std::size_t>(i) * N + j; }
  std::size_t idx3(int i, int j, int l) const {
    return (static_cast<std::size_t>(i) * N + j) * N + l;
  }
  void decompose(std::size_t flat, std::array<int, 3>& out) const {
    out = {0, 0, 0};
    for (int a = d - 1; a >= 0; --a) {
      out[a] = static_cast<int>(flat % N);
      flat /= N;
    }
  }
};

inline Grid make_grid(int d, int N, double L) {
  if (d != 2 && d != 3) throw std::invalid_argument("make_grid: d must be 2 or 3");
  if (N % 2 != 0) throw std::invalid_argument("make_grid: N must be even");
  if (N < 16) throw std::invalid_argument("make_grid: N must be at least 16");
  if (!(L > 0)) throw std::invalid_argument("make_grid: L must be positive");

  Grid g;
  g.d = d;
  g.N = N;
  g.L = L;
  g.h = 2.0 * L / N;
  g.size = 1;
  for (int a = 0; a < d; ++a) g.size *= static_cast<std::size_t>(N);

  g.axis_x.resize(N);
  g.axis_k.resize(N);
  g.axis_kd.resize(N);
  for (int i = 0; i < N; ++i) {
    g.axis_x[i] = -L + (i + 0.5) * g.h;
    int mm = (i < N / 2) ? i : i - N;
    g.axis_k[i] = (std::numbers::pi / L) * mm;
    g.axis_kd[i] = (mm == -N / 2) ? 0.0 : g.axis_k[i];
  }

  g.radius.resize(g.size);
  g.k2.resize(g.size);
  g.reflect.resize(g.size);
  std::array<int, 3> ix{};
  for (std::size_t f = 0; f < g.size; ++f) {
    g.decompose(f, ix);
    double r2 = 0, kk = 0;
    std::size_t refl = 0;
    for (int a = 0; a < d; ++a) {
      double x = g.axis_x[ix[a]];
      double k = g.axis_k[ix[a]];
      r2 += x * x;
      kk += k * k;
      refl = refl * N + static_cast<std::size_t>((N - ix[a]) % N);
    }
    g.radius[f] = std::sqrt(r2);
    g.k2[f] = kk;
    g.reflect[f] = refl;
  }
  return g;
}

}  // namespace mildns
