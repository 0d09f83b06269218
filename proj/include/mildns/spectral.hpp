#pragma once

// Transform layer and spectral field algebra.
//
// to_spectral carries the 1/N^d factor, so a coefficient c_m is the amplitude
// of exp(i k_m (x - x0)) with x0 the first node; from_spectral is the plain
// synthesis sum.  Evaluation at off-grid points and the linear convolution
// below account for the cell-centered offset x0 = -L + h/2 explicitly —
// index-space circular convolution alone would return the continuum
// convolution displaced by half a box per axis.

#include <complex>
#include <stdexcept>
#include <vector>

#include <mildns/fft.hpp>
#include <mildns/field.hpp>
#include <mildns/grid.hpp>

namespace mildns {

using cd = std::complex<double>;

namespace detail {

inline Spectral raw_forward(const Grid& g, const Scalar& f) {
  Spectral a(f.begin(), f.end());
  fft::dft_all_axes(a, g.d, g.N, true);
  return a;
}

inline Scalar raw_backward_real(const Grid& g, Spectral a, double scale = 1.0) {
  fft::dft_all_axes(a, g.d, g.N, false);
  Scalar out(g.size);
  for (std::size_t i = 0; i < g.size; ++i) out[i] = a[i].real() * scale;
  return out;
}

}  // namespace detail

inline Spectral to_spectral(const Grid& g, const Scalar& f) {
  if (f.size() != g.size) throw std::invalid_argument("to_spectral: size mismatch");
  Spectral a = detail::raw_forward(g, f);
  double inv = 1.0 / static_cast<double>(g.size);
  for (auto& v : a) v *= inv;
  return a;
}

inline Scalar from_spectral(const Grid& g, const Spectral& c) {
  if (c.size() != g.size) throw std::invalid_argument("from_spectral: size mismatch");
  return detail::raw_backward_real(g, c, 1.0);
}

// Two real fields per complex transform (coefficients normalized as in
// to_spectral).  Split uses c_a(m) = (Z(m) + conj(Z(-m)))/2.
inline void forward_pair(const Grid& g, const Scalar& fa, const Scalar& fb, Spectral& ca,
                         Spectral& cb) {
  Spectral z(g.size);
  for (std::size_t i = 0; i < g.size; ++i) z[i] = cd(fa[i], fb[i]);
  fft::dft_all_axes(z, g.d, g.N, true);
  ca.resize(g.size);
  cb.resize(g.size);
  double inv = 1.0 / static_cast<double>(g.size);
  for (std::size_t i = 0; i < g.size; ++i) {
    cd zr = std::conj(z[g.reflect[i]]);
    ca[i] = 0.5 * (z[i] + zr) * inv;
    cb[i] = cd(0.0, -0.5) * (z[i] - zr) * inv;
  }
}

// Inverse of forward_pair for conjugate-symmetric ca, cb.
inline void inverse_pair(const Grid& g, const Spectral& ca, const Spectral& cb, Scalar& fa,
                         Scalar& fb) {
  Spectral z(g.size);
  for (std::size_t i = 0; i < g.size; ++i) z[i] = ca[i] + cd(0.0, 1.0) * cb[i];
  fft::dft_all_axes(z, g.d, g.N, false);
  fa.resize(g.size);
  fb.resize(g.size);
  for (std::size_t i = 0; i < g.size; ++i) {
    fa[i] = z[i].real();
    fb[i] = z[i].imag();
  }
}

inline SpecVec to_spectral_vec(const Grid& g, const VecField& u) {
  SpecVec s = SpecVec::zeros(g);
  if (g.d == 2) {
    forward_pair(g, u.c[0], u.c[1], s.c[0], s.c[1]);
  } else {
    forward_pair(g, u.c[0], u.c[1], s.c[0], s.c[1]);
    s.c[2] = to_spectral(g, u.c[2]);
  }
  return s;
}

inline VecField from_spectral_vec(const Grid& g, const SpecVec& s) {
  VecField u = VecField::zeros(g);
  if (g.d == 2) {
    inverse_pair(g, s.c[0], s.c[1], u.c[0], u.c[1]);
  } else {
    inverse_pair(g, s.c[0], s.c[1], u.c[0], u.c[1]);
    u.c[2] = from_spectral(g, s.c[2]);
  }
  return u;
}

// ---- field algebra ----

inline TensorField tensor_product(const VecField& u, const VecField& v) {
  if (u.d != v.d || u.c[0].size() != v.c[0].size())
    throw std::invalid_argument("tensor_product: grid mismatch");
  TensorField T;
  T.d = u.d;
  for (int i = 0; i < u.d; ++i)
    for (int j = 0; j < u.d; ++j) {
      Scalar& t = T.at(i, j);
      t.resize(u.c[i].size());
      for (std::size_t n = 0; n < t.size(); ++n) t[n] = u.c[i][n] * v.c[j][n];
    }
  return T;
}

namespace detail {

// multiply spectral coefficients by i*k_axis (derivative wavenumbers)
inline void mul_ik(const Grid& g, Spectral& c, int axis) {
  std::array<int, 3> ix{};
  for (std::size_t f = 0; f < g.size; ++f) {
    g.decompose(f, ix);
    c[f] *= cd(0.0, g.axis_kd[ix[axis]]);
  }
}

}  // namespace detail

inline Scalar divergence(const Grid& g, const VecField& u) {
  Spectral acc(g.size, cd(0, 0));
  SpecVec s = to_spectral_vec(g, u);
  std::array<int, 3> ix{};
  for (std::size_t f = 0; f < g.size; ++f) {
    g.decompose(f, ix);
    cd v(0, 0);
    for (int a = 0; a < g.d; ++a) v += cd(0.0, g.axis_kd[ix[a]]) * s.c[a][f];
    acc[f] = v;
  }
  return from_spectral(g, acc);
}

inline VecField gradient(const Grid& g, const Scalar& f) {
  Spectral c = to_spectral(g, f);
  VecField out = VecField::zeros(g);
  for (int a = 0; a < g.d; ++a) {
    Spectral da = c;
    detail::mul_ik(g, da, a);
    out.c[a] = from_spectral(g, da);
  }
  return out;
}

// d=2 stream-function velocity  u = (-d2 psi, d1 psi)
inline VecField perp_gradient(const Grid& g, const Scalar& psi) {
  if (g.d != 2) throw std::invalid_argument("perp_gradient: d must be 2");
  VecField grad = gradient(g, psi);
  VecField out = VecField::zeros(g);
  for (std::size_t i = 0; i < g.size; ++i) {
    out.c[0][i] = -grad.c[1][i];
    out.c[1][i] = grad.c[0][i];
  }
  return out;
}

// d=3 vector-potential velocity  u = curl Psi
inline VecField curl(const Grid& g, const VecField& Psi) {
  if (g.d != 3) throw std::invalid_argument("curl: d must be 3");
  SpecVec s = to_spectral_vec(g, Psi);
  SpecVec out = SpecVec::zeros(g);
  std::array<int, 3> ix{};
  for (std::size_t f = 0; f < g.size; ++f) {
    g.decompose(f, ix);
    cd k0(0, g.axis_kd[ix[0]]), k1(0, g.axis_kd[ix[1]]), k2c(0, g.axis_kd[ix[2]]);
    out.c[0][f] = k1 * s.c[2][f] - k2c * s.c[1][f];
    out.c[1][f] = k2c * s.c[0][f] - k0 * s.c[2][f];
    out.c[2][f] = k0 * s.c[1][f] - k1 * s.c[0][f];
  }
  return from_spectral_vec(g, out);
}

// ---- evaluation off the grid ----

// Evaluate the trigonometric interpolant of normalized coefficients at an
// arbitrary point (factorized axis sums).
inline cd spectral_eval(const Grid& g, const Spectral& c, const std::array<double, 3>& p) {
  double x0 = g.axis_x[0];
  std::array<std::vector<cd>, 3> E;
  for (int a = 0; a < g.d; ++a) {
    E[a].resize(g.N);
    for (int m = 0; m < g.N; ++m) {
      double ph = g.axis_k[m] * (p[a] - x0);
      E[a][m] = cd(std::cos(ph), std::sin(ph));
    }
  }
  if (g.d == 2) {
    cd total(0, 0);
    for (int m0 = 0; m0 < g.N; ++m0) {
      cd row(0, 0);
      const cd* base = c.data() + static_cast<std::size_t>(m0) * g.N;
      for (int m1 = 0; m1 < g.N; ++m1) row += base[m1] * E[1][m1];
      total += row * E[0][m0];
    }
    return total;
  }
  cd total(0, 0);
  for (int m0 = 0; m0 < g.N; ++m0) {
    cd plane(0, 0);
    for (int m1 = 0; m1 < g.N; ++m1) {
      cd row(0, 0);
      const cd* base = c.data() + (static_cast<std::size_t>(m0) * g.N + m1) * g.N;
      for (int m2 = 0; m2 < g.N; ++m2) row += base[m2] * E[2][m2];
      plane += row * E[1][m1];
    }
    total += plane * E[0][m0];
  }
  return total;
}

// ---- linear convolution ----

// Continuum convolution (f * g)(x) = int f(y) g(x - y) dy of box-sampled
// fields, via zero-padding to a double-width box.  The fields are embedded
// centered (their coordinates are preserved), and the spectral product is
// multiplied by the cell-centering phase exp(i*pi*mm*(1 - 1/P)) per axis.
inline Scalar conv_linear(const Grid& g, const Scalar& f, const Scalar& w) {
  if (f.size() != g.size || w.size() != g.size)
    throw std::invalid_argument("conv_linear: size mismatch");
  const int P = 2 * g.N, o = g.N / 2;
  std::size_t sp = 1;
  for (int a = 0; a < g.d; ++a) sp *= static_cast<std::size_t>(P);

  std::vector<cd> fp(sp, cd(0, 0)), wp(sp, cd(0, 0));
  std::array<int, 3> ix{};
  for (std::size_t n = 0; n < g.size; ++n) {
    g.decompose(n, ix);
    std::size_t m = 0;
    for (int a = 0; a < g.d; ++a) m = m * P + static_cast<std::size_t>(ix[a] + o);
    fp[m] = f[n];
    wp[m] = w[n];
  }
  fft::dft_all_axes(fp, g.d, P, true);
  fft::dft_all_axes(wp, g.d, P, true);

  std::vector<cd> phase1(P);
  for (int m = 0; m < P; ++m) {
    int mm = (m < P / 2) ? m : m - P;
    double ph = std::numbers::pi * mm * (1.0 - 1.0 / P);
    phase1[m] = cd(std::cos(ph), std::sin(ph));
  }
  double hd = 1.0;
  for (int a = 0; a < g.d; ++a) hd *= g.h;
  double scale = hd / static_cast<double>(sp);
  // product, phase, unnormalized backward
  {
    std::size_t f2 = 0;
    std::array<int, 3> jx{};
    for (f2 = 0; f2 < sp; ++f2) {
      std::size_t rem = f2;
      for (int a = g.d - 1; a >= 0; --a) {
        jx[a] = static_cast<int>(rem % P);
        rem /= P;
      }
      cd ph(1, 0);
      for (int a = 0; a < g.d; ++a) ph *= phase1[jx[a]];
      fp[f2] *= wp[f2] * ph;
    }
  }
  fft::dft_all_axes(fp, g.d, P, false);

  Scalar out(g.size);
  for (std::size_t n = 0; n < g.size; ++n) {
    g.decompose(n, ix);
    std::size_t m = 0;
    for (int a = 0; a < g.d; ++a) m = m * P + static_cast<std::size_t>(ix[a] + o);
    out[n] = fp[m].real() * scale;
  }
  return out;
}

}  // namespace mildns
