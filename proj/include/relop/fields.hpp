#pragma once
// Vector potentials, gauge functions and test states. Potentials carry an
// analytic evaluator (they are sampled at link midpoints and along kernel
// segments, not just at sites); the linear kind keeps its matrix so the
// quantization-coincidence checks can recognize it. Random fields are
// band-limited trigonometric sums, smooth and exactly periodic.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "relop/fourier.hpp"
#include "relop/grid.hpp"
#include "relop/rng.hpp"

namespace relop {

struct VectorPotential {
  enum class Kind { zero, linear, smooth };
  Kind kind = Kind::zero;
  int d = 1;
  double box_length = 2.0 * M_PI;
  Eigen::MatrixXd lin;  // linear kind: A(x) = lin * x on the wrapped box
  std::function<double(int, const Eigen::VectorXd&)> eval;

  double operator()(int axis, const Eigen::VectorXd& x) const {
    return eval ? eval(axis, x) : 0.0;
  }
  bool is_zero() const { return kind == Kind::zero; }

  static VectorPotential zero(int d, double L) {
    VectorPotential a;
    a.kind = Kind::zero;
    a.d = d;
    a.box_length = L;
    a.eval = [](int, const Eigen::VectorXd&) { return 0.0; };
    return a;
  }

  // A(x) = adot * x as a genuinely affine field (no wrapping). The kernel
  // quantizations evaluate A along straight minimal-image segments that may
  // leave the fundamental domain; midpoint and averaged evaluation coincide
  // exactly only if A stays degree-1 along the whole segment. adot symmetric
  // is the class on which all three quantizations coincide.
  static VectorPotential linear(Eigen::MatrixXd adot, double L) {
    VectorPotential a;
    a.kind = Kind::linear;
    a.d = int(adot.rows());
    a.box_length = L;
    a.lin = std::move(adot);
    Eigen::MatrixXd mat = a.lin;
    a.eval = [mat](int axis, const Eigen::VectorXd& x) {
      double v = 0.0;
      for (int j = 0; j < x.size(); ++j) v += mat(axis, j) * x[j];
      return v;
    };
    return a;
  }

  struct TrigTerm {
    int axis;
    Eigen::VectorXi k;
    double amp, phase;
  };

  static VectorPotential random_smooth(int d, double L, double amplitude,
                                       int max_mode, Rng& rng) {
    std::vector<TrigTerm> terms;
    for (int axis = 0; axis < d; ++axis) {
      for (int t = 0; t < 2 * d; ++t) {
        TrigTerm tt;
        tt.axis = axis;
        tt.k = Eigen::VectorXi(d);
        bool nonzero = false;
        for (int j = 0; j < d; ++j) {
          tt.k[j] = int(std::floor(rng.uniform(-double(max_mode),
                                               double(max_mode) + 1.0)));
          if (tt.k[j] != 0) nonzero = true;
        }
        if (!nonzero) tt.k[0] = 1;
        tt.amp = amplitude * rng.uniform(0.3, 1.0);
        tt.phase = rng.uniform(0.0, 2.0 * M_PI);
        terms.push_back(tt);
      }
    }
    VectorPotential a;
    a.kind = Kind::smooth;
    a.d = d;
    a.box_length = L;
    double Lc = L;
    a.eval = [terms, Lc](int axis, const Eigen::VectorXd& x) {
      double v = 0.0;
      for (const auto& t : terms) {
        if (t.axis != axis) continue;
        double ph = t.phase;
        for (int j = 0; j < x.size(); ++j)
          ph += 2.0 * M_PI * t.k[j] * x[j] / Lc;
        v += t.amp * std::cos(ph);
      }
      return v;
    };
    return a;
  }

  // Shift by an analytic gradient field: A + grad(phi).
  static VectorPotential shifted(const VectorPotential& a,
                                 std::function<double(int, const Eigen::VectorXd&)> grad) {
    VectorPotential s = a;
    s.kind = Kind::smooth;
    auto base = a.eval;
    s.eval = [base, grad](int axis, const Eigen::VectorXd& x) {
      return base(axis, x) + grad(axis, x);
    };
    return s;
  }
};

struct GaugeFunction {
  enum class Kind { constant, quadratic, smooth };
  Kind kind = Kind::constant;
  int d = 1;
  double box_length = 2.0 * M_PI;
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<double(int, const Eigen::VectorXd&)> grad;

  GridFunction sample(const LatticeGrid& g) const {
    GridFunction f(g);
    for (long idx = 0; idx < g.total_sites(); ++idx)
      f.values[idx] = value(g.site_coords(idx));
    return f;
  }

  static GaugeFunction constant(int d, double L, double c) {
    GaugeFunction p;
    p.kind = Kind::constant;
    p.d = d;
    p.box_length = L;
    p.value = [c](const Eigen::VectorXd&) { return c; };
    p.grad = [](int, const Eigen::VectorXd&) { return 0.0; };
    return p;
  }

  // phi(x) = x . Q x / 2 on the fundamental domain. Not globally smooth on
  // the torus: the wrap seam is what defeats the midpoint quantization.
  static GaugeFunction quadratic(Eigen::MatrixXd q, double L) {
    GaugeFunction p;
    p.kind = Kind::quadratic;
    p.d = int(q.rows());
    p.box_length = L;
    Eigen::MatrixXd Q = 0.5 * (q + q.transpose());
    double Lc = L;
    auto wrapv = [Lc](const Eigen::VectorXd& x) {
      Eigen::VectorXd w = x;
      for (int j = 0; j < w.size(); ++j) {
        w[j] = std::fmod(w[j], Lc);
        if (w[j] < -0.5 * Lc) w[j] += Lc;
        if (w[j] >= 0.5 * Lc) w[j] -= Lc;
      }
      return w;
    };
    p.value = [Q, wrapv](const Eigen::VectorXd& x) {
      Eigen::VectorXd w = wrapv(x);
      return 0.5 * w.dot(Q * w);
    };
    p.grad = [Q, wrapv](int axis, const Eigen::VectorXd& x) {
      Eigen::VectorXd w = wrapv(x);
      return (Q * w)[axis];
    };
    return p;
  }

  static GaugeFunction random_smooth(int d, double L, double amplitude,
                                     int max_mode, Rng& rng) {
    struct Term {
      Eigen::VectorXi k;
      double amp, phase;
    };
    std::vector<Term> terms;
    for (int t = 0; t < 3 * d; ++t) {
      Term tt;
      tt.k = Eigen::VectorXi(d);
      bool nonzero = false;
      for (int j = 0; j < d; ++j) {
        tt.k[j] = int(std::floor(
            rng.uniform(-double(max_mode), double(max_mode) + 1.0)));
        if (tt.k[j] != 0) nonzero = true;
      }
      if (!nonzero) tt.k[0] = 1;
      tt.amp = amplitude * rng.uniform(0.3, 1.0);
      tt.phase = rng.uniform(0.0, 2.0 * M_PI);
      terms.push_back(tt);
    }
    GaugeFunction p;
    p.kind = Kind::smooth;
    p.d = d;
    p.box_length = L;
    double Lc = L;
    p.value = [terms, Lc](const Eigen::VectorXd& x) {
      double v = 0.0;
      for (const auto& t : terms) {
        double ph = t.phase;
        for (int j = 0; j < x.size(); ++j)
          ph += 2.0 * M_PI * t.k[j] * x[j] / Lc;
        v += t.amp * std::cos(ph);
      }
      return v;
    };
    p.grad = [terms, Lc](int axis, const Eigen::VectorXd& x) {
      double v = 0.0;
      for (const auto& t : terms) {
        double ph = t.phase;
        for (int j = 0; j < x.size(); ++j)
          ph += 2.0 * M_PI * t.k[j] * x[j] / Lc;
        v -= t.amp * std::sin(ph) * 2.0 * M_PI * t.k[axis] / Lc;
      }
      return v;
    };
    return p;
  }
};

// ---- test states ----------------------------------------------------------

inline GridFunction gaussian_bump(const LatticeGrid& g,
                                  const Eigen::VectorXd& center, double width,
                                  const Eigen::VectorXd& momentum) {
  GridFunction u(g);
  for (long idx = 0; idx < g.total_sites(); ++idx) {
    Eigen::VectorXd x = g.site_coords(idx);
    double r2 = 0.0, kx = 0.0;
    for (int j = 0; j < g.d; ++j) {
      double dx = g.wrap(x[j] - center[j]);
      r2 += dx * dx;
      kx += momentum[j] * x[j];
    }
    u.values[idx] = std::exp(-r2 / (2.0 * width * width)) *
                    std::polar(1.0, kx);
  }
  return u;
}

inline GridFunction gaussian_bump(const LatticeGrid& g, double width) {
  return gaussian_bump(g, Eigen::VectorXd::Zero(g.d), width,
                       Eigen::VectorXd::Zero(g.d));
}

// Exactly compactly supported mollifier-style bump, radius R around center.
inline GridFunction smooth_bump(const LatticeGrid& g,
                                const Eigen::VectorXd& center, double R) {
  GridFunction u(g);
  for (long idx = 0; idx < g.total_sites(); ++idx) {
    Eigen::VectorXd x = g.site_coords(idx);
    double r2 = 0.0;
    for (int j = 0; j < g.d; ++j) {
      double dx = g.wrap(x[j] - center[j]);
      r2 += dx * dx;
    }
    double rho2 = r2 / (R * R);
    u.values[idx] = rho2 < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - rho2)) : 0.0;
  }
  return u;
}

inline GridFunction plane_wave(const LatticeGrid& g,
                               const Eigen::VectorXi& k) {
  GridFunction u(g);
  for (long idx = 0; idx < g.total_sites(); ++idx) {
    Eigen::VectorXd x = g.site_coords(idx);
    double ph = 0.0;
    for (int j = 0; j < g.d; ++j)
      ph += 2.0 * M_PI * k[j] * x[j] / g.box_length;
    u.values[idx] = std::polar(1.0, ph);
  }
  return u;
}

// Band-limited complex random state: independent complex Gaussian Fourier
// coefficients on |k|_inf <= cutoff, transformed back to the box.
inline GridFunction random_smooth_state(const LatticeGrid& g, int cutoff,
                                        Rng& rng) {
  GridFunction uhat(g);
  for (long idx = 0; idx < g.total_sites(); ++idx) {
    auto i = g.unflatten(idx);
    bool keep = true;
    for (int j = 0; j < g.d; ++j)
      if (std::abs(g.freq_index(i[j])) > cutoff) keep = false;
    uhat.values[idx] = keep ? rng.complex_normal() : 0.0;
  }
  GridFunction u = dft_inverse(uhat);
  double nrm = u.norm_l2();
  if (nrm > 0) u.values /= nrm;
  return u;
}

inline GridFunction normalized(GridFunction u) {
  double nrm = u.norm_l2();
  if (nrm > 0) u.values /= nrm;
  return u;
}

// ---- mollification --------------------------------------------------------

// Periodic convolution with the normalized compact bump of radius delta.
// Direct spatial convolution: keeps nonnegativity exactly and preserves the
// mean to rounding (the weights sum to 1/h^d by construction).
inline GridFunction mollify(const GridFunction& u, double delta) {
  const auto& g = u.grid;
  if (delta < g.h()) return u;  // below grid resolution: identity
  const int K = int(std::floor(delta / g.h()));
  std::vector<long> offsets;
  std::vector<double> weights;
  std::array<int, 3> off{0, 0, 0};
  std::function<void(int)> rec = [&](int axis) {
    if (axis == g.d) {
      double r2 = 0.0;
      for (int j = 0; j < g.d; ++j) r2 += double(off[j]) * off[j];
      double rho2 = r2 * g.h() * g.h() / (delta * delta);
      if (rho2 < 1.0) {
        offsets.push_back(g.flatten(off));
        weights.push_back(std::exp(1.0 - 1.0 / (1.0 - rho2)));
      }
      return;
    }
    for (off[axis] = -K; off[axis] <= K; ++off[axis]) rec(axis + 1);
    off[axis] = 0;
  };
  rec(0);
  double wsum = 0.0;
  for (double w : weights) wsum += w;
  for (double& w : weights) w /= wsum;  // discrete mass exactly 1

  GridFunction out(g);
  for (long idx = 0; idx < g.total_sites(); ++idx) {
    auto i = g.unflatten(idx);
    std::complex<double> acc = 0.0;
    for (std::size_t t = 0; t < offsets.size(); ++t) {
      auto o = g.unflatten(offsets[t]);
      std::array<int, 3> j{0, 0, 0};
      for (int ax = 0; ax < g.d; ++ax) j[ax] = i[ax] - o[ax];
      acc += weights[t] * u.values[g.flatten(j)];
    }
    out.values[idx] = acc;
  }
  return out;
}

// Pointwise unitary gauge transform of a state.
inline GridFunction gauge_transform(const GridFunction& u,
                                    const GridFunction& phi) {
  GridFunction out = u;
  for (long idx = 0; idx < u.grid.total_sites(); ++idx)
    out.values[idx] *= std::polar(1.0, phi.values[idx].real());
  return out;
}

}  // namespace relop
