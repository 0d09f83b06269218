#pragma once

// Complex DFT on N^d cubes, N even (radix-2 when N is a power of two,
// Bluestein's chirp-z otherwise).  Conventions:
//   forward :  X_k = sum_j x_j e^{-2*pi*i*j*k/N}   (no 1/N)
//   backward:  x_j = sum_k X_k e^{+2*pi*i*j*k/N}   (no 1/N)
// Normalization is the caller's business (see spectral.hpp).

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace mildns::fft {

using cd = std::complex<double>;

namespace detail {

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

struct Pow2Plan {
  int n = 0;
  std::vector<int> rev;
  std::vector<cd> tw;  // tw[j] = exp(-2*pi*i*j/n), j < n/2

  explicit Pow2Plan(int n_) : n(n_), rev(n_), tw(n_ / 2) {
    int lg = 0;
    while ((1 << lg) < n) ++lg;
    for (int i = 0; i < n; ++i) {
      int r = 0;
      for (int b = 0; b < lg; ++b)
        if (i & (1 << b)) r |= 1 << (lg - 1 - b);
      rev[i] = r;
    }
    for (int j = 0; j < n / 2; ++j) {
      double ph = -2.0 * std::numbers::pi * j / n;
      tw[j] = cd(std::cos(ph), std::sin(ph));
    }
  }

  void run(cd* a, bool forward) const {
    for (int i = 0; i < n; ++i)
      if (rev[i] > i) std::swap(a[i], a[rev[i]]);
    for (int len = 2; len <= n; len <<= 1) {
      int step = n / len;
      for (int base = 0; base < n; base += len) {
        for (int j = 0; j < len / 2; ++j) {
          cd w = tw[j * step];
          if (!forward) w = std::conj(w);
          cd u = a[base + j];
          cd v = a[base + j + len / 2] * w;
          a[base + j] = u + v;
          a[base + j + len / 2] = u - v;
        }
      }
    }
  }
};

struct BluesteinPlan {
  int n = 0, m = 0;
  std::vector<cd> wn;  // wn[j] = exp(-i*pi*j^2/n)
  std::vector<cd> bf;  // forward pow2-DFT of the chirp kernel, length m
  std::shared_ptr<const Pow2Plan> p2;

  explicit BluesteinPlan(int n_) : n(n_) {
    m = 1;
    while (m < 2 * n - 1) m <<= 1;
    p2 = std::make_shared<Pow2Plan>(m);
    wn.resize(n);
    for (int j = 0; j < n; ++j) {
      long long q = (static_cast<long long>(j) * j) % (2LL * n);
      double ph = -std::numbers::pi * static_cast<double>(q) / n;
      wn[j] = cd(std::cos(ph), std::sin(ph));
    }
    std::vector<cd> b(m, cd(0, 0));
    for (int j = 0; j < n; ++j) {
      cd c = std::conj(wn[j]);
      b[j] = c;
      if (j) b[m - j] = c;
    }
    p2->run(b.data(), true);
    bf = std::move(b);
  }

  void run(cd* x, bool forward) const {
    std::vector<cd> a(m, cd(0, 0));
    for (int j = 0; j < n; ++j) {
      cd v = forward ? x[j] : std::conj(x[j]);
      a[j] = v * wn[j];
    }
    p2->run(a.data(), true);
    for (int j = 0; j < m; ++j) a[j] *= bf[j];
    // unnormalized inverse pow2 DFT
    for (auto& v : a) v = std::conj(v);
    p2->run(a.data(), true);
    for (int k = 0; k < n; ++k) {
      cd v = std::conj(a[k]) * (1.0 / m) * wn[k];
      x[k] = forward ? v : std::conj(v);
    }
  }
};

struct Plan {
  std::shared_ptr<const Pow2Plan> p2;
  std::shared_ptr<const BluesteinPlan> bs;
  void run(cd* a, bool forward) const {
    if (p2)
      p2->run(a, forward);
    else
      bs->run(a, forward);
  }
};

inline std::shared_ptr<const Plan> get_plan(int n) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const Plan>> cache;
  std::scoped_lock lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto plan = std::make_shared<Plan>();
  if (is_pow2(n))
    plan->p2 = std::make_shared<Pow2Plan>(n);
  else
    plan->bs = std::make_shared<BluesteinPlan>(n);
  cache[n] = plan;
  return plan;
}

}  // namespace detail

inline void dft(cd* a, int n, bool forward) {
  if (n == 1) return;
  detail::get_plan(n)->run(a, forward);
}

// Transform every axis of a row-major N^d cube (d = 1, 2 or 3).
inline void dft_all_axes(std::vector<cd>& a, int d, int N, bool forward) {
  if (d < 1 || d > 3) throw std::invalid_argument("dft_all_axes: d must be 1, 2 or 3");
  std::size_t n = static_cast<std::size_t>(N);
  std::size_t expect = 1;
  for (int i = 0; i < d; ++i) expect *= n;
  if (a.size() != expect) throw std::invalid_argument("dft_all_axes: size mismatch");
  auto plan = detail::get_plan(N);

  std::size_t nlines = expect / n;
  // last axis: contiguous lines
  for (std::size_t l = 0; l < nlines; ++l) plan->run(a.data() + l * n, forward);
  if (d == 1) return;

  std::vector<cd> scratch(n);
  if (d == 2) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) scratch[i] = a[i * n + j];
      plan->run(scratch.data(), forward);
      for (std::size_t i = 0; i < n; ++i) a[i * n + j] = scratch[i];
    }
    return;
  }
  // d == 3: middle axis (stride n), then first axis (stride n^2)
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < n; ++l) {
      for (std::size_t j = 0; j < n; ++j) scratch[j] = a[(i * n + j) * n + l];
      plan->run(scratch.data(), forward);
      for (std::size_t j = 0; j < n; ++j) a[(i * n + j) * n + l] = scratch[j];
    }
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = 0; l < n; ++l) {
      for (std::size_t i = 0; i < n; ++i) scratch[i] = a[(i * n + j) * n + l];
      plan->run(scratch.data(), forward);
      for (std::size_t i = 0; i < n; ++i) a[(i * n + j) * n + l] = scratch[i];
    }
}

}  // namespace mildns::fft
