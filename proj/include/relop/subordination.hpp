#pragma once
// One-sided alpha/2-stable subordination: the density f_{t,alpha/2} on
// (0,infty) with Laplace transform exp(-t z^{alpha/2}), its closed form at
// alpha = 1, and the representation
//   exp(-t [ S^{alpha/2} - m^alpha ]) = e^{m^alpha t} int f_{t,alpha/2}(s)
//                                       e^{-s S} ds
// applied spectrally to a positive semidefinite lattice operator.

#include <cmath>
#include <map>
#include <stdexcept>

#include "relop/operators.hpp"
#include "relop/quadrature.hpp"

namespace relop {

// f_{t,beta}(s) = (1/pi) int_0^infty e^{-s r} e^{-t r^beta cos(beta pi)}
//                 sin(t r^beta sin(beta pi)) dr,   beta = alpha/2 in (0,1/2].
// Substituting sigma = r^beta makes the sine argument linear:
//   (1/pi) int e^{-s sigma^{1/beta} - t sigma c} sin(t sigma w)
//          (1/beta) sigma^{1/beta - 1} d sigma
// with c = cos(beta pi) >= 0, w = sin(beta pi). Summed over half-periods of
// the sine with epsilon acceleration as a fallback for small s.
inline double subordinator_density(double t, double beta, double s) {
  if (!(t > 0.0)) throw std::domain_error("subordinator_density: t > 0");
  if (!(beta > 0.0 && beta <= 0.5))
    throw std::domain_error("subordinator_density: beta in (0, 1/2]");
  if (!(s > 0.0)) return 0.0;
  const double c = std::cos(beta * M_PI);
  const double w = std::sin(beta * M_PI);
  auto f = [&](double sigma) {
    if (sigma <= 0.0) return 0.0;
    const double ex = -s * std::pow(sigma, 1.0 / beta) - t * sigma * c;
    if (ex < -700.0) return 0.0;
    return std::exp(ex) * std::sin(t * sigma * w) *
           std::pow(sigma, 1.0 / beta - 1.0) / beta;
  };
  const double halfper = M_PI / (t * w);
  auto panel = [&](std::size_t k) {
    return integrate(f, k * halfper, (k + 1) * halfper, 1e-300, 1e-11, 2048);
  };
  QuadResult q = sum_panels(panel, 1e-14);
  return q.value / M_PI;
}

// Closed form at beta = 1/2 (alpha = 1):
//   f_{t,1/2}(s) = t / (2 sqrt(pi)) s^{-3/2} e^{-t^2/(4s)}
inline double subordinator_density_closed_half(double t, double s) {
  if (!(s > 0.0)) return 0.0;
  return t / (2.0 * std::sqrt(M_PI)) * std::pow(s, -1.5) *
         std::exp(-t * t / (4.0 * s));
}

namespace detail {

// Integral of f over (0, smax] for integrands whose mass may sit many orders
// of magnitude below smax: a dyadic probe locates the scale of the mass and
// sets a realistic absolute tolerance, then dyadic slices are integrated from
// smax downward until well past the peak. Without the probe, slices with
// values around 1e-200 would be subdivided to the panel cap chasing a
// meaningless relative tolerance.
template <class F>
double integrate_geometric(F&& f, double smax, double rel_tol) {
  double scale = 0.0;
  int kpeak = 0;
  for (int k = 0; k <= 160; ++k) {
    const double x = smax * std::pow(0.5, k);
    const double v = std::abs(f(x)) * x;
    if (v > scale) {
      scale = v;
      kpeak = k;
    }
  }
  if (scale == 0.0) return 0.0;
  const double abs_slice = scale * rel_tol * 1e-2;
  double total = 0.0;
  double hi = smax;
  int quiet = 0;
  for (int k = 0; k < 220 && quiet < 8; ++k) {
    const double lo = hi * 0.5;
    const double part = integrate(f, lo, hi, abs_slice, rel_tol, 1024).value;
    total += part;
    if (k > kpeak + 8 && std::abs(part) < 4.0 * abs_slice)
      ++quiet;
    else
      quiet = 0;
    hi = lo;
  }
  return total;
}

}  // namespace detail

struct LaplaceCheck {
  double z;
  double integral;   // int f_{t,beta}(s) e^{-z s} ds
  double expected;   // exp(-t z^beta)
  double rel_err;
};

// The defining contract of the density.
inline LaplaceCheck laplace_transform_check(double t, double beta, double z,
                                            double rel_tol = 1e-9) {
  auto f = [&](double s) {
    return subordinator_density(t, beta, s) * std::exp(-z * s);
  };
  // the subordinator bulk sits at s ~ t^{1/beta}; the e^{-zs} factor kills
  // everything beyond ~ 50/z, so the polynomial tail never matters here
  const double smax = 50.0 / z + 10.0 * std::pow(t, 1.0 / beta);
  const double integral = detail::integrate_geometric(f, smax, rel_tol);
  const double expected = std::exp(-t * std::pow(z, beta));
  return {z, integral, expected, std::abs(integral - expected) / expected};
}

// Scalar subordination: for one eigenvalue lambda >= 0 of S,
//   e^{m^alpha t} int f_{t,alpha/2}(s) e^{-s lambda} ds
// which must reproduce exp(-t [ lambda^{alpha/2} - m^alpha ]).
// The density has the polynomial tail f ~ (t beta / Gamma(1-beta)) s^{-1-beta},
// so when lambda is small the truncated range is topped up with the leading
// asymptotic tail, integrated exactly after s = smax x^{-1/beta}.
inline double subordinated_scalar(double t, double alpha, double m,
                                  double lambda, double rel_tol = 1e-9) {
  const double beta = 0.5 * alpha;
  auto density = [&](double s) {
    return alpha == 1.0 ? subordinator_density_closed_half(t, s)
                        : subordinator_density(t, beta, s);
  };
  auto f = [&](double s) { return density(s) * std::exp(-s * lambda); };
  const double smax = std::min(50.0 / std::max(lambda, 1e-30), 1e6) +
                      10.0 * std::pow(t, 1.0 / beta);
  double value = detail::integrate_geometric(f, smax, rel_tol);
  if (lambda * smax < 45.0) {
    const double c = t * beta / gamma_fn(1.0 - beta);
    const double ls = lambda * smax;
    const double tail_shape =
        ls == 0.0 ? 1.0
                  : integrate([&](double x) {
                      return x <= 0.0
                                 ? 0.0
                                 : std::exp(-ls * std::pow(x, -1.0 / beta));
                    },
                    0.0, 1.0, 1e-300, 1e-10, 2048)
                        .value;
    value += c / beta * std::pow(smax, -beta) * tail_shape;
  }
  return std::exp(std::pow(m, alpha) * t) * value;
}

// Matrix subordination through the spectral decomposition: applies
// e^{m^alpha t} int f e^{-sS} ds to a state by per-eigenvalue quadrature.
inline Eigen::VectorXcd subordinated_semigroup_apply(const HermitianOperator& S,
                                                     double t, double alpha,
                                                     double m,
                                                     const Eigen::VectorXcd& u,
                                                     double rel_tol = 1e-9) {
  return S.apply_function(
      [&](double lambda) {
        return subordinated_scalar(t, alpha, m, std::max(lambda, 0.0),
                                   rel_tol);
      },
      u);
}

struct SubordinationMatrixCheck {
  double frobenius_gap;  // |subordinated - spectral|_F / |spectral|_F
  double max_entry_gap;  // max entrywise deviation
};

// Full-matrix comparison of the subordination route against direct spectral
// calculus of exp(-t [S^{alpha/2} - m^alpha]). Lattice spectra are heavily
// degenerate, so the quadrature is memoized per distinct eigenvalue.
inline SubordinationMatrixCheck subordination_matrix_check(
    const HermitianOperator& S, double t, double alpha, double m,
    double rel_tol = 1e-9) {
  const double ma = std::pow(m, alpha);
  Eigen::MatrixXcd direct = S.apply_function([&](double lambda) {
    return std::exp(-t * (std::pow(std::max(lambda, 0.0), 0.5 * alpha) - ma));
  });
  std::map<long long, double> memo;
  Eigen::MatrixXcd sub = S.apply_function([&](double lambda) {
    const long long key = llround(std::max(lambda, 0.0) * 1e10);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    const double v =
        subordinated_scalar(t, alpha, m, std::max(lambda, 0.0), rel_tol);
    memo.emplace(key, v);
    return v;
  });
  const double fro = (sub - direct).norm() / direct.norm();
  const double entry = (sub - direct).cwiseAbs().maxCoeff();
  return {fro, entry};
}

}  // namespace relop
