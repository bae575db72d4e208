#pragma once
// Unitary DFT between the centered box and its dual lattice. Plane wave
// exp(i xi_k . x) maps to sqrt(N) at dual index k. With the coordinate
// offset -L/2 the transform is the standard per-axis DFT times a parity
// phase (-1)^k per axis. Power-of-two sizes use an iterative radix-2 FFT;
// other sizes fall back to the O(n^2) transform.

#include <array>
#include <complex>
#include <vector>

#include "relop/grid.hpp"

namespace relop {
namespace detail {

inline void fft_pow2(std::vector<std::complex<double>>& a, bool invert) {
  const int n = int(a.size());
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * M_PI / len * (invert ? 1.0 : -1.0);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      std::complex<double> w(1.0);
      for (int j = 0; j < len / 2; ++j) {
        std::complex<double> u = a[i + j];
        std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

inline void dft_generic(std::vector<std::complex<double>>& a, bool invert) {
  const int n = int(a.size());
  static thread_local std::vector<std::complex<double>> tw;
  static thread_local int tw_n = -1;
  if (tw_n != n) {
    tw.assign(n, {});
    for (int k = 0; k < n; ++k)
      tw[k] = std::polar(1.0, -2.0 * M_PI * k / n);
    tw_n = n;
  }
  std::vector<std::complex<double>> out(n, 0.0);
  for (int k = 0; k < n; ++k) {
    std::complex<double> s = 0.0;
    for (int j = 0; j < n; ++j) {
      int e = int((long(j) * k) % n);
      std::complex<double> w = tw[e];
      if (invert) w = std::conj(w);
      s += a[j] * w;
    }
    out[k] = s;
  }
  a = std::move(out);
}

inline void transform_axis(Eigen::VectorXcd& v, const LatticeGrid& g,
                           int axis, bool invert) {
  const int n = g.n;
  long stride = 1;
  for (int j = 0; j < axis; ++j) stride *= n;
  const long total = g.total_sites();
  const long nslices = total / n;
  std::vector<std::complex<double>> buf(n);
  for (long s = 0; s < nslices; ++s) {
    // base index of this 1-D line
    long lo = s % stride;
    long hi = s / stride;
    long base = lo + hi * stride * n;
    for (int i = 0; i < n; ++i) buf[i] = v[base + i * stride];
    if (g.power_of_two())
      detail::fft_pow2(buf, invert);
    else
      detail::dft_generic(buf, invert);
    for (int i = 0; i < n; ++i) v[base + i * stride] = buf[i];
  }
}

}  // namespace detail

// forward: u(x) -> (1/sqrt(N)) sum_x u(x) exp(-i xi_k . x)
inline GridFunction dft_forward(const GridFunction& u) {
  GridFunction out = u;
  const auto& g = u.grid;
  for (int axis = 0; axis < g.d; ++axis)
    detail::transform_axis(out.values, g, axis, false);
  const double scale = 1.0 / std::sqrt(double(g.total_sites()));
  for (long idx = 0; idx < g.total_sites(); ++idx) {
    auto i = g.unflatten(idx);
    int parity = 0;
    for (int j = 0; j < g.d; ++j) parity += std::abs(g.freq_index(i[j]));
    out.values[idx] *= (parity % 2 ? -scale : scale);
  }
  return out;
}

inline GridFunction dft_inverse(const GridFunction& uhat) {
  GridFunction tmp = uhat;
  const auto& g = uhat.grid;
  for (long idx = 0; idx < g.total_sites(); ++idx) {
    auto i = g.unflatten(idx);
    int parity = 0;
    for (int j = 0; j < g.d; ++j) parity += std::abs(g.freq_index(i[j]));
    if (parity % 2) tmp.values[idx] = -tmp.values[idx];
  }
  for (int axis = 0; axis < g.d; ++axis)
    detail::transform_axis(tmp.values, g, axis, true);
  tmp.values *= 1.0 / std::sqrt(double(g.total_sites()));
  return tmp;
}

// Apply a real radial Fourier multiplier f(|xi|^2).
template <class F>
GridFunction apply_multiplier(const GridFunction& u, F&& f) {
  GridFunction uhat = dft_forward(u);
  const auto& g = u.grid;
  for (long idx = 0; idx < g.total_sites(); ++idx) {
    auto i = g.unflatten(idx);
    double xi2 = 0.0;
    for (int j = 0; j < g.d; ++j) {
      double xi = g.freq(i[j]);
      xi2 += xi * xi;
    }
    uhat.values[idx] *= f(xi2);
  }
  return dft_inverse(uhat);
}

// Spectral partial derivative along one axis (Nyquist mode dropped, the
// standard convention for odd-order spectral derivatives).
inline GridFunction spectral_derivative(const GridFunction& u, int axis) {
  GridFunction uhat = dft_forward(u);
  const auto& g = u.grid;
  for (long idx = 0; idx < g.total_sites(); ++idx) {
    auto i = g.unflatten(idx);
    int k = g.freq_index(i[axis]);
    if (g.n % 2 == 0 && k == -g.n / 2)
      uhat.values[idx] = 0.0;
    else
      uhat.values[idx] *= std::complex<double>(0.0, g.freq(i[axis]));
  }
  return dft_inverse(uhat);
}

// Displacement kernel of a radial multiplier: the vector kv with
// (M u)(x) = sum_y kv[wrap(ix - iy)] u(y), i.e. the inverse nonunitary DFT
// of the eigenvalue array divided by N. Real for even multipliers.
template <class F>
Eigen::VectorXcd multiplier_kernel(const LatticeGrid& g, F&& f) {
  GridFunction lam(g);
  for (long idx = 0; idx < g.total_sites(); ++idx) {
    auto i = g.unflatten(idx);
    double xi2 = 0.0;
    for (int j = 0; j < g.d; ++j) {
      double xi = g.freq(i[j]);
      xi2 += xi * xi;
    }
    lam.values[idx] = f(xi2);
  }
  for (int axis = 0; axis < g.d; ++axis)
    detail::transform_axis(lam.values, g, axis, true);
  lam.values *= 1.0 / double(g.total_sites());
  return lam.values;
}

namespace detail {

// Eigenvalue of the A=0 centred-difference kinetic operator at frequency
// multi-index i: sum_j sin^2(xi_j h)/h^2 (mass term added by the caller).
inline double stencil_symbol(const LatticeGrid& g,
                             const std::array<int, 3>& i) {
  const double h = g.h();
  double s = 0.0;
  for (int j = 0; j < g.d; ++j) {
    const double sj = std::sin(g.freq(i[j]) * h) / h;
    s += sj * sj;
  }
  return s;
}

}  // namespace detail

// Displacement kernel of f applied to the free Peierls operator: like
// multiplier_kernel but with f evaluated on the kinetic stencil symbol, so
// the result is matched to the lattice operator family rather than to the
// spectral Laplacian.
template <class F>
Eigen::VectorXcd stencil_multiplier_kernel(const LatticeGrid& g, F&& f) {
  GridFunction lam(g);
  for (long idx = 0; idx < g.total_sites(); ++idx)
    lam.values[idx] = f(detail::stencil_symbol(g, g.unflatten(idx)));
  for (int axis = 0; axis < g.d; ++axis)
    detail::transform_axis(lam.values, g, axis, true);
  lam.values *= 1.0 / double(g.total_sites());
  return lam.values;
}

}  // namespace relop
