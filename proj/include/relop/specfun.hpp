#pragma once
// Gamma and modified Bessel function of the second kind K_nu, with an
// independent quadrature oracle. K_nu uses the Temme reflection series for
// x <= 2 and the Steed continued fraction for x > 2, then forward
// recurrence in the order; both branches exist in e^x-scaled form. The
// reflection gamma combinations come from the power series of 1/Gamma, so
// integer and near-integer orders need no special casing.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "relop/quadrature.hpp"

namespace relop {

inline double gamma_fn(double x) {
  if (!(x > 0.0))
    throw std::domain_error("gamma_fn: requires x > 0, got " +
                            std::to_string(x));
  return std::tgamma(x);
}

namespace detail {

// Coefficients of 1/Gamma(z) = sum c_k z^k (Abramowitz-Stegun 6.1.34).
inline constexpr double kInvGamma[26] = {
    +1.0000000000000000e+00, +5.7721566490153286e-01, -6.5587807152025388e-01,
    -4.2002635034095236e-02, +1.6653861138229149e-01, -4.2197734555544337e-02,
    -9.6219715278769736e-03, +7.2189432466630995e-03, -1.1651675918590651e-03,
    -2.1524167411495097e-04, +1.2805028238811619e-04, -2.0134854780788239e-05,
    -1.2504934821426707e-06, +1.1330272319816959e-06, -2.0563384169776071e-07,
    +6.1160951044814158e-09, +5.0020076444692229e-09, -1.1812745704870201e-09,
    +1.0434267116911005e-10, +7.7822634399050712e-12, -3.6968056186422057e-12,
    +5.1003702874544760e-13, -2.0583260535665068e-14, -5.3481225394230180e-15,
    +1.2267786282382608e-15, +1.1125139008444150e-16};

// 1/Gamma(1+mu) for |mu| <= 1/2 via the series above: Gamma(1+mu) = mu
// Gamma(mu) gives 1/Gamma(1+mu) = sum c_k mu^(k-1).
inline double inv_gamma_1p(double mu) {
  double s = 0.0, p = 1.0;
  for (double c : kInvGamma) {
    s += c * p;
    p *= mu;
  }
  return s;
}

// gam1 = [1/Gamma(1-mu) - 1/Gamma(1+mu)] / (2 mu), cancellation-free:
// only even-index coefficients survive.
inline double temme_gam1(double mu) {
  double s = 0.0, p = 1.0;
  const double mu2 = mu * mu;
  for (int k = 1; k < 26; k += 2) {
    s += kInvGamma[k] * p;
    p *= mu2;
  }
  return -s;
}

struct KPair {
  double kmu, kmu1;  // K_mu(x), K_{mu+1}(x), scaled by e^x when requested
};

// Temme series, valid for x <= 2 and |mu| <= 1/2.
inline KPair bessel_k_temme(double mu, double x, bool scaled) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double pimu = M_PI * mu;
  const double fact =
      std::abs(pimu) < 1e-15 ? 1.0 : pimu / std::sin(pimu);
  const double lnhx = std::log(2.0 / x);
  const double e0 = mu * lnhx;
  const double fact2 = std::abs(e0) < 1e-15 ? 1.0 : std::sinh(e0) / e0;
  const double gam1 = temme_gam1(mu);
  const double gampl = inv_gamma_1p(mu);    // 1/Gamma(1+mu)
  const double gammi = inv_gamma_1p(-mu);   // 1/Gamma(1-mu)
  const double gam2 = 0.5 * (gammi + gampl);

  double ff = fact * (gam1 * std::cosh(e0) + gam2 * fact2 * lnhx);
  double sum = ff;
  const double ee = std::exp(e0);
  double p = 0.5 * ee / gampl;
  double q = 0.5 / (ee * gammi);
  double c = 1.0;
  const double x24 = 0.25 * x * x;
  double sum1 = p;
  for (int i = 1; i < 500; ++i) {
    ff = (i * ff + p + q) / (i * i - mu * mu);
    c *= x24 / i;
    p /= (i - mu);
    q /= (i + mu);
    const double del = c * ff;
    sum += del;
    sum1 += c * (p - i * ff);
    if (std::abs(del) < std::abs(sum) * eps) break;
  }
  const double s = scaled ? std::exp(x) : 1.0;
  return {s * sum, s * sum1 * (2.0 / x)};
}

// Steed continued fraction CF2, valid for x > 2 and |mu| <= 1/2.
inline KPair bessel_k_steed(double mu, double x, bool scaled) {
  const double eps = std::numeric_limits<double>::epsilon();
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d, delh = d;
  double q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25 - mu * mu;
  double q = a1, c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i < 10000; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < eps) break;
  }
  h = a1 * h;
  const double pref =
      std::sqrt(M_PI / (2.0 * x)) * (scaled ? 1.0 : std::exp(-x));
  const double kmu = pref / s;
  return {kmu, kmu * (mu + x + 0.5 - h) / x};
}

inline KPair bessel_k_mu(double mu, double x, bool scaled) {
  return x <= 2.0 ? bessel_k_temme(mu, x, scaled)
                  : bessel_k_steed(mu, x, scaled);
}

inline double bessel_k_impl(double nu, double x, bool scaled) {
  if (!(x > 0.0) || !(nu >= 0.0) || !std::isfinite(nu) || !std::isfinite(x))
    throw std::domain_error("bessel_k: requires x > 0 and nu >= 0");
  const int nl = int(nu + 0.5);
  const double mu = nu - nl;  // in [-1/2, 1/2)
  KPair kp = bessel_k_mu(mu, x, scaled);
  double km = kp.kmu, k1 = kp.kmu1;
  for (int i = 1; i <= nl; ++i) {
    const double knew = km + (2.0 * (mu + i) / x) * k1;
    km = k1;
    k1 = knew;
    if (km > std::numeric_limits<double>::max() / 4.0)
      throw std::overflow_error("bessel_k: overflow during order recurrence");
  }
  if (!std::isfinite(km))
    throw std::overflow_error("bessel_k: result overflows");
  return km;
}

}  // namespace detail

// Largest x for which e^{-x} K_nu(x) stays above the double underflow
// range; beyond it callers must use bessel_k_scaled.
inline constexpr double kBesselKUnderflowX = 690.0;

inline double bessel_k(double nu, double x) {
  if (x > kBesselKUnderflowX)
    throw std::underflow_error(
        "bessel_k: e^{-x} underflows at x = " + std::to_string(x) +
        "; use bessel_k_scaled");
  return detail::bessel_k_impl(nu, x, false);
}

// e^x K_nu(x)
inline double bessel_k_scaled(double nu, double x) {
  return detail::bessel_k_impl(nu, x, true);
}

// Independent oracle: K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt,
// evaluated by adaptive Gauss-Kronrod after truncating where the integrand
// falls 10^-22 below its scale. scaled multiplies the result by e^x (the
// e^x is folded into the integrand, not applied after).
inline QuadResult bessel_k_oracle(double nu, double x, double rel_tol = 1e-11,
                                  bool scaled = false) {
  if (!(x > 0.0) || !(nu >= 0.0))
    throw std::domain_error("bessel_k_oracle: requires x > 0 and nu >= 0");
  // Find t_max with x(cosh t - 1) - nu t > 51 by doubling.
  double tmax = 1.0;
  auto decay = [&](double t) { return x * (std::cosh(t) - 1.0) - nu * t; };
  while (decay(tmax) < 51.0 && tmax < 60.0) tmax *= 1.5;
  auto f = [&](double t) {
    const double arg = -x * (std::cosh(t) - 1.0) + (scaled ? 0.0 : -x);
    // cosh(nu t) can overflow on its own for large nu*t; combine in logs.
    const double c = nu * t;
    if (c > 30.0) return 0.5 * (std::exp(arg + c) + std::exp(arg - c));
    return std::exp(arg) * std::cosh(c);
  };
  return integrate(f, 0.0, tmax, 1e-300, rel_tol, 16384);
}

// Hankel-transform identity for K: for mu > -1, y > 0,
//   int_a^inf x^{1/2-nu} (x^2-a^2)^mu K_nu(x y) (x y)^{1/2} dx
//     = 2^mu a^{mu-nu+1} y^{-mu-1/2} Gamma(mu+1) K_{mu-nu+1}(a y).
// Returns both sides; the left side by quadrature with the endpoint
// algebraic singularity absorbed by x = a + s^2.
struct KTransformCheck {
  double lhs, rhs, rel_err;
};

inline KTransformCheck ktransform_check(double mu, double nu, double a,
                                        double y, double rel_tol = 1e-9) {
  if (!(mu > -1.0) || !(a > 0.0) || !(y > 0.0))
    throw std::domain_error("ktransform_check: requires mu > -1, a > 0, y > 0");
  auto integrand = [&](double s) {
    const double x = a + s * s;
    const double core = std::pow(x, 0.5 - nu) *
                        std::pow(x - a, mu) * std::pow(x + a, mu) *
                        std::sqrt(x * y);
    const double arg = x * y;
    double k;
    if (arg > kBesselKUnderflowX) return 0.0;
    k = bessel_k(std::abs(nu), arg);
    return 2.0 * s * core * k;
  };
  // Truncate where e^{-xy} with the algebraic prefactor is negligible.
  double smax = 1.0;
  while ((a + smax * smax) * y < 60.0 + std::abs(mu) * 10.0 + 10.0 &&
         smax < 1e4)
    smax *= 1.5;
  QuadResult q = integrate(integrand, 0.0, smax, 1e-300, rel_tol, 16384);
  const double order = std::abs(mu - nu + 1.0);
  const double rhs = std::pow(2.0, mu) * std::pow(a, mu - nu + 1.0) *
                     std::pow(y, -mu - 0.5) * gamma_fn(mu + 1.0) *
                     bessel_k(order, a * y);
  const double rel =
      std::abs(q.value - rhs) / std::max(std::abs(rhs), 1e-300);
  return {q.value, rhs, rel};
}

}  // namespace relop
