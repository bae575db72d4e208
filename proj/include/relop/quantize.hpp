#pragma once
// Three quantizations of sqrt((xi - A(x))^2 + m^2) as lattice matrices:
//   h1 — Weyl midpoint kernel       K(x,y) = h_m(x-y) e^{i (x-y).A((x+y)/2)}
//   h2 — line-integral phase        K(x,y) = h_m(x-y) e^{i (x-y).int_0^1 A(..)}
//   h3 — operator square root of the magnetic Schrodinger operator
// plus their structural checks: gauge covariance (exact for h2/h3 with
// exact-difference gauge phases, broken for h1 by nonlinear gauge functions),
// the h1 = h2 coincidence on linear potentials, and the refinement behaviour
// of h1 against h3.
//
// On the torus the minimal-image displacement is ambiguous when a component
// is exactly half the box; the kernel weight is then split evenly between
// the two images, which keeps every builder exactly Hermitian on even grids.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "relop/fields.hpp"
#include "relop/fourier.hpp"
#include "relop/grid.hpp"
#include "relop/lattice_ops.hpp"
#include "relop/operators.hpp"
#include "relop/quadrature.hpp"

namespace relop {

namespace detail {

// Minimal-image displacement images (site a minus site b), with tie-splitting
// at the half-box seam. Returns up to 2^d (delta, weight) pairs.
inline void displacement_images(
    const LatticeGrid& g, const std::array<int, 3>& ia,
    const std::array<int, 3>& ib,
    std::vector<std::pair<Eigen::VectorXd, double>>& out) {
  out.clear();
  std::array<std::array<double, 2>, 3> cand{};
  std::array<int, 3> ncand{};
  const double h = g.h();
  for (int j = 0; j < g.d; ++j) {
    int di = ((ia[j] - ib[j]) % g.n + g.n) % g.n;  // in [0, n)
    if (2 * di == g.n) {
      cand[j] = {di * h, (di - g.n) * h};
      ncand[j] = 2;
    } else {
      cand[j] = {(di <= (g.n - 1) / 2 ? di : di - g.n) * h, 0.0};
      ncand[j] = 1;
    }
  }
  int total = 1;
  for (int j = 0; j < g.d; ++j) total *= ncand[j];
  for (int c = 0; c < total; ++c) {
    Eigen::VectorXd delta(g.d);
    int cc = c;
    for (int j = 0; j < g.d; ++j) {
      delta[j] = cand[j][cc % ncand[j]];
      cc /= ncand[j];
    }
    out.emplace_back(delta, 1.0 / total);
  }
}

}  // namespace detail

// Displacement kernel h_m of the free operator sqrt(-Delta + m^2),
// discretized on the same footing as the Peierls family: the multiplier is
// evaluated on the kinetic stencil symbol, so h1/h2/h3 share their A = 0
// matrix exactly and the three-way comparison isolates the phase
// prescriptions instead of mixing in an O(1) high-mode symbol mismatch.
// Circulant, real and even in exact arithmetic.
inline Eigen::VectorXd free_displacement_kernel(const LatticeGrid& g,
                                                double m) {
  Eigen::VectorXcd kv = stencil_multiplier_kernel(
      g, [m](double s) { return std::sqrt(s + m * m); });
  return kv.real();
}

inline HermitianOperator free_kernel_matrix(const LatticeGrid& g, double m) {
  Eigen::VectorXd kv = free_displacement_kernel(g, m);
  const long N = g.total_sites();
  Eigen::MatrixXcd M(N, N);
  for (long r = 0; r < N; ++r) {
    auto ir = g.unflatten(r);
    for (long c = 0; c < N; ++c) {
      auto ic = g.unflatten(c);
      std::array<int, 3> dd{0, 0, 0};
      for (int j = 0; j < g.d; ++j) dd[j] = ir[j] - ic[j];
      M(r, c) = kv[g.flatten(dd)];
    }
  }
  return HermitianOperator(std::move(M));
}

// Weyl midpoint quantization. Each unordered site pair is assigned one
// straight minimal-image segment (anchored at the lower flat index) and the
// reverse entry is filled by conjugation — the segment may leave the
// fundamental domain, so Hermiticity must come from path reversal rather
// than from periodicity of A.
inline HermitianOperator build_h1(const LatticeGrid& g,
                                  const VectorPotential& a, double m) {
  Eigen::VectorXd kv = free_displacement_kernel(g, m);
  const long N = g.total_sites();
  Eigen::MatrixXcd M(N, N);
  std::vector<std::pair<Eigen::VectorXd, double>> imgs;
  for (long c = 0; c < N; ++c) {
    auto ic = g.unflatten(c);
    Eigen::VectorXd y = g.site_coords(c);
    for (long r = c; r < N; ++r) {
      auto ir = g.unflatten(r);
      std::array<int, 3> dd{0, 0, 0};
      for (int j = 0; j < g.d; ++j) dd[j] = ir[j] - ic[j];
      const double k = kv[g.flatten(dd)];
      if (a.is_zero()) {
        M(r, c) = k;
        M(c, r) = k;
        continue;
      }
      detail::displacement_images(g, ir, ic, imgs);
      std::complex<double> ph = 0.0;
      for (const auto& [delta, w] : imgs) {
        Eigen::VectorXd mid = y + 0.5 * delta;
        double th = 0.0;
        for (int j = 0; j < g.d; ++j) th += delta[j] * a(j, mid);
        ph += w * std::polar(1.0, th);
      }
      M(r, c) = k * ph;
      M(c, r) = k * std::conj(ph);
    }
  }
  return HermitianOperator(std::move(M));
}

// Line-integral quantization. The straight-segment integral of A is done
// with Gauss-Legendre quadrature (exact for linear potentials); when a gauge
// function is attached, its gradient's line integral telescopes and is added
// as the exact endpoint difference, which is what makes this quantization
// exactly gauge covariant on the lattice.
inline HermitianOperator build_h2(const LatticeGrid& g,
                                  const VectorPotential& a, double m,
                                  int n_theta = 8,
                                  const GridFunction* gauge_phi = nullptr) {
  Eigen::VectorXd kv = free_displacement_kernel(g, m);
  const GaussLegendre& gl = gauss_legendre(n_theta);
  const long N = g.total_sites();
  Eigen::MatrixXcd M(N, N);
  std::vector<std::pair<Eigen::VectorXd, double>> imgs;
  for (long c = 0; c < N; ++c) {
    auto ic = g.unflatten(c);
    Eigen::VectorXd y = g.site_coords(c);
    for (long r = c; r < N; ++r) {
      auto ir = g.unflatten(r);
      std::array<int, 3> dd{0, 0, 0};
      for (int j = 0; j < g.d; ++j) dd[j] = ir[j] - ic[j];
      const double k = kv[g.flatten(dd)];
      double gauge_th = 0.0;
      if (gauge_phi)
        gauge_th = gauge_phi->values[r].real() - gauge_phi->values[c].real();
      if (a.is_zero()) {
        M(r, c) = k * std::polar(1.0, gauge_th);
        M(c, r) = k * std::polar(1.0, -gauge_th);
        continue;
      }
      detail::displacement_images(g, ir, ic, imgs);
      std::complex<double> ph = 0.0;
      for (const auto& [delta, w] : imgs) {
        double th = 0.0;
        for (std::size_t q = 0; q < gl.x.size(); ++q) {
          const double tau = 0.5 * (gl.x[q] + 1.0);  // map to [0,1]
          Eigen::VectorXd pt = y + tau * delta;
          double comp = 0.0;
          for (int j = 0; j < g.d; ++j) comp += delta[j] * a(j, pt);
          th += 0.5 * gl.w[q] * comp;
        }
        ph += w * std::polar(1.0, th + gauge_th);
      }
      M(r, c) = k * ph;
      M(c, r) = k * std::conj(ph);
    }
  }
  return HermitianOperator(std::move(M));
}

// Operator square root of the magnetic Schrodinger operator.
inline HermitianOperator build_h3(const LatticeGrid& g,
                                  const VectorPotential& a, double m,
                                  const GridFunction* gauge_phi = nullptr) {
  HermitianOperator S = magnetic_schrodinger(g, a, m, gauge_phi);
  Eigen::MatrixXcd H = S.apply_function(
      [](double lambda) { return std::sqrt(std::max(lambda, 0.0)); });
  return HermitianOperator(std::move(H));
}

// ---- gauge covariance -------------------------------------------------------

struct GaugeCovarianceReport {
  int kind = 1;          // 1, 2 or 3
  double defect = 0.0;   // ||H_{A+grad phi} - e^{i phi} H_A e^{-i phi}||_F
                         //   / ||H_A||_F
};

inline GaugeCovarianceReport gauge_covariance_check(const LatticeGrid& g,
                                                    const VectorPotential& a,
                                                    const GaugeFunction& phi,
                                                    double m, int kind) {
  GridFunction phis = phi.sample(g);
  Eigen::MatrixXcd lhs, base;
  switch (kind) {
    case 1: {
      auto grad = phi.grad;
      VectorPotential shifted = VectorPotential::shifted(a, grad);
      base = build_h1(g, a, m).matrix();
      lhs = build_h1(g, shifted, m).matrix();
      break;
    }
    case 2: {
      base = build_h2(g, a, m).matrix();
      lhs = build_h2(g, a, m, 8, &phis).matrix();
      break;
    }
    case 3: {
      base = build_h3(g, a, m).matrix();
      lhs = build_h3(g, a, m, &phis).matrix();
      break;
    }
    default:
      throw std::invalid_argument("gauge_covariance_check: kind in {1,2,3}");
  }
  Eigen::MatrixXcd rhs = gauge_conjugate(base, phis);
  return {kind, (lhs - rhs).norm() / base.norm()};
}

// ---- coincidence and refinement ---------------------------------------------

struct CoincidenceRow {
  int n = 0;
  double h12_max_entry = 0.0;   // max |H1 - H2| entry (linear A: rounding)
  double h13_fro_ratio = 0.0;   // ||H1 - H3||_F / ||H3||_F
  double h13_state_gap = 0.0;   // ||(H1 - H3)u|| / ||H3 u||, u smooth bump
  double min_eig_h3 = 0.0;
};

inline std::vector<CoincidenceRow> coincidence_check(
    double m, const Eigen::MatrixXd& adot, double L,
    const std::vector<int>& ns, int d) {
  std::vector<CoincidenceRow> rows;
  for (int n : ns) {
    LatticeGrid g(d, n, L);
    VectorPotential a = VectorPotential::linear(adot, L);
    HermitianOperator h1 = build_h1(g, a, m);
    HermitianOperator h2 = build_h2(g, a, m);
    HermitianOperator h3 = build_h3(g, a, m);
    CoincidenceRow row;
    row.n = n;
    row.h12_max_entry = (h1.matrix() - h2.matrix()).cwiseAbs().maxCoeff();
    row.h13_fro_ratio =
        (h1.matrix() - h3.matrix()).norm() / h3.matrix().norm();
    GridFunction u = gaussian_bump(g, L / 10.0);
    Eigen::VectorXcd num = (h1.matrix() - h3.matrix()) * u.values;
    Eigen::VectorXcd den = h3.matrix() * u.values;
    row.h13_state_gap = num.norm() / den.norm();
    row.min_eig_h3 = h3.min_eigenvalue();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace relop
