#pragma once
// Quadrature kernel shared by the special-function oracles and the kernel
// integrals: globally adaptive Gauss-Kronrod 7/15, Gauss-Legendre panel
// rules, and Wynn epsilon acceleration for slowly convergent oscillatory
// panel sums.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace relop {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // absolute error estimate
  std::size_t evals = 0;
  bool converged = true;
};

namespace detail {

// QUADPACK DQK15 abscissae (positive half) and weights.
inline constexpr double kk15_x[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double kk15_wk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kk15_wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Panel {
  double a, b, value, error;
};

}  // namespace detail

// One Gauss-Kronrod 7/15 panel on [a,b]. error is |K15 - G7|, which in
// practice overestimates the K15 error by orders of magnitude.
template <class F>
QuadResult gk15_panel(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  double fc = f(c);
  double resk = detail::kk15_wk[7] * fc;
  double resg = detail::kk15_wg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = hw * detail::kk15_x[i];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    resk += detail::kk15_wk[i] * (f1 + f2);
    if (i % 2 == 1) resg += detail::kk15_wg[i / 2] * (f1 + f2);
  }
  QuadResult r;
  r.value = resk * hw;
  r.error = std::abs((resk - resg) * hw);
  r.evals = 15;
  return r;
}

// Globally adaptive bisection: always split the panel with the largest
// error estimate, stop when the summed estimate meets the tolerance.
template <class F>
QuadResult integrate(F&& f, double a, double b, double abs_tol = 1e-12,
                     double rel_tol = 1e-12, std::size_t max_panels = 4096) {
  QuadResult first = gk15_panel(f, a, b);
  std::vector<detail::Panel> panels{{a, b, first.value, first.error}};
  std::size_t evals = first.evals;
  while (panels.size() < max_panels) {
    double total = 0.0, err = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      total += panels[i].value;
      err += panels[i].error;
      if (panels[i].error > panels[worst].error) worst = i;
    }
    if (err <= std::max(abs_tol, rel_tol * std::abs(total)) ||
        panels[worst].error == 0.0)
      return {total, err, evals, true};
    detail::Panel p = panels[worst];
    double mid = 0.5 * (p.a + p.b);
    if (mid <= p.a || mid >= p.b)  // interval exhausted at double precision
      return {total, err, evals, true};
    QuadResult left = gk15_panel(f, p.a, mid);
    QuadResult right = gk15_panel(f, mid, p.b);
    evals += left.evals + right.evals;
    panels[worst] = {p.a, mid, left.value, left.error};
    panels.push_back({mid, p.b, right.value, right.error});
  }
  double total = 0.0, err = 0.0;
  for (const auto& p : panels) {
    total += p.value;
    err += p.error;
  }
  return {total, err, evals,
          err <= std::max(abs_tol, rel_tol * std::abs(total))};
}

// Semi-infinite integral of a decaying integrand: map [a,inf) to [0,1).
template <class F>
QuadResult integrate_to_inf(F&& f, double a, double abs_tol = 1e-12,
                            double rel_tol = 1e-12,
                            std::size_t max_panels = 8192) {
  auto g = [&](double s) {
    const double om = 1.0 - s;
    const double t = a + s / om;
    return f(t) / (om * om);
  };
  return integrate(g, 0.0, 1.0, abs_tol, rel_tol, max_panels);
}

// Gauss-Legendre nodes/weights on [-1,1], generated by Newton iteration on
// the Legendre recurrence and cached per order.
struct GaussLegendre {
  std::vector<double> x, w;
  explicit GaussLegendre(int n) : x(n), w(n) {
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 0; j < n; ++j) {
          double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
        }
        pp = n * (z * p0 - p1) / (z * z - 1.0);
        double dz = p0 / pp;
        z -= dz;
        if (std::abs(dz) < 1e-15) break;
      }
      x[i] = -z;
      x[n - 1 - i] = z;
      w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
  }
};

inline const GaussLegendre& gauss_legendre(int n) {
  static std::vector<GaussLegendre> cache;
  for (const auto& g : cache)
    if (int(g.x.size()) == n) return g;
  cache.emplace_back(n);
  return cache.back();
}

// Wynn epsilon table applied to partial sums; returns the highest stable
// even-column extrapolant. Used for conditionally convergent oscillatory
// panel series (Fourier inversions with algebraic envelopes).
inline double wynn_epsilon(const std::vector<double>& partial) {
  const std::size_t n = partial.size();
  if (n == 0) return 0.0;
  std::vector<double> prev(n + 1, 0.0);  // column -1
  std::vector<double> cur(partial);      // column 0
  double best = cur.back();
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<double> next(n - k, 0.0);
    for (std::size_t j = 0; j + k < n; ++j) {
      double denom = cur[j + 1] - cur[j];
      if (denom == 0.0)
        next[j] = std::numeric_limits<double>::infinity();
      else
        next[j] = prev[j + 1] + 1.0 / denom;
    }
    prev = cur;
    cur = next;
    if (k % 2 == 0 && !cur.empty() && std::isfinite(cur.back()))
      best = cur.back();
  }
  return best;
}

// Sum integral panels P(0), P(1), ... whose values eventually alternate.
// Plain summation handles fast-decaying envelopes; the epsilon table takes
// over when the envelope decays slowly. panel(k) returns the k-th integral.
template <class PanelFn>
QuadResult sum_panels(PanelFn&& panel, double abs_tol,
                      std::size_t max_panels = 20000) {
  std::vector<double> partial;
  double sum = 0.0;
  double prev_accel = std::numeric_limits<double>::quiet_NaN();
  std::size_t evals = 0;
  for (std::size_t k = 0; k < max_panels; ++k) {
    QuadResult p = panel(k);
    evals += p.evals;
    sum += p.value;
    partial.push_back(sum);
    if (std::abs(p.value) < 0.25 * abs_tol && k >= 2)
      return {sum, std::abs(p.value) + abs_tol * 0.25, evals, true};
    if (partial.size() >= 8 && partial.size() % 2 == 0) {
      std::size_t tail = std::min<std::size_t>(partial.size(), 40);
      std::vector<double> window(partial.end() - tail, partial.end());
      double accel = wynn_epsilon(window);
      if (std::isfinite(accel) && std::isfinite(prev_accel) &&
          std::abs(accel - prev_accel) < 0.5 * abs_tol)
        return {accel, std::abs(accel - prev_accel) + 1e-300, evals, true};
      prev_accel = accel;
    }
  }
  return {std::isfinite(prev_accel) ? prev_accel : sum, abs_tol, evals, false};
}

}  // namespace relop
