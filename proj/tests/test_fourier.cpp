#include <catch2/catch_amalgamated.hpp>

#include "relop/fields.hpp"
#include "relop/fourier.hpp"
#include "relop/lattice_ops.hpp"
#include "relop/rng.hpp"

using namespace relop;

namespace {

GridFunction random_state(const LatticeGrid& g, std::uint64_t seed) {
  Rng rng(seed);
  GridFunction u(g);
  for (long i = 0; i < g.total_sites(); ++i) u.values[i] = rng.complex_normal();
  return u;
}

// dense circulant action of a displacement kernel; flatten() wraps indices
Eigen::VectorXcd circulant_apply(const LatticeGrid& g,
                                 const Eigen::VectorXcd& kv,
                                 const Eigen::VectorXcd& u) {
  const long N = g.total_sites();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(N);
  for (long r = 0; r < N; ++r) {
    const auto ir = g.unflatten(r);
    for (long c = 0; c < N; ++c) {
      const auto ic = g.unflatten(c);
      std::array<int, 3> dd{};
      for (int j = 0; j < g.d; ++j) dd[j] = ir[j] - ic[j];
      out[r] += kv[g.flatten(dd)] * u[c];
    }
  }
  return out;
}

}  // namespace

TEST_CASE("transform round trip, power-of-two and generic sizes", "[fourier]") {
  for (auto [d, n] : {std::pair{1, 16}, {1, 12}, {2, 6}}) {
    LatticeGrid g(d, n, 2.0 * M_PI);
    GridFunction u = random_state(g, 17 + n);
    GridFunction r = dft_inverse(dft_forward(u));
    CHECK((r.values - u.values).norm() < 1e-13 * u.values.norm());
  }
}

TEST_CASE("transform is unitary", "[fourier]") {
  LatticeGrid g(2, 12, 5.0);
  GridFunction u = random_state(g, 3);
  GridFunction hat = dft_forward(u);
  CHECK(std::abs(hat.values.norm() - u.values.norm()) <
        1e-13 * u.values.norm());
}

TEST_CASE("multipliers act diagonally on plane waves", "[fourier]") {
  auto f = [](double xi2) { return 1.0 / (1.0 + xi2); };
  {
    LatticeGrid g(1, 16, 2.0 * M_PI);  // L = 2pi: xi_k = k exactly
    GridFunction u = plane_wave(g, Eigen::VectorXi::Constant(1, 3));
    GridFunction v = apply_multiplier(u, f);
    CHECK((v.values - f(9.0) * u.values).norm() < 1e-12 * u.values.norm());
  }
  {
    LatticeGrid g(2, 16, 2.0 * M_PI);
    Eigen::VectorXi k(2);
    k << 2, -5;
    GridFunction u = plane_wave(g, k);
    GridFunction v = apply_multiplier(u, f);
    CHECK((v.values - f(29.0) * u.values).norm() < 1e-12 * u.values.norm());
  }
}

TEST_CASE("spectral derivative of a trigonometric mode", "[fourier]") {
  LatticeGrid g(1, 32, 2.0 * M_PI);
  GridFunction u(g);
  for (long i = 0; i < g.total_sites(); ++i)
    u.values[i] = std::sin(3.0 * g.coord(g.unflatten(i)[0]));
  GridFunction du = spectral_derivative(u, 0);
  double worst = 0.0;
  for (long i = 0; i < g.total_sites(); ++i)
    worst = std::max(worst,
                     std::abs(du.values[i] -
                              3.0 * std::cos(3.0 * g.coord(g.unflatten(i)[0]))));
  CHECK(worst < 1e-11);
}

TEST_CASE("displacement kernel reproduces the multiplier action", "[fourier]") {
  LatticeGrid g(1, 16, 4.0);
  auto f = [](double xi2) { return std::exp(-0.3 * xi2); };
  Eigen::VectorXcd kv = multiplier_kernel(g, f);
  GridFunction u = random_state(g, 5);
  GridFunction ref = apply_multiplier(u, f);
  Eigen::VectorXcd got = circulant_apply(g, kv, u.values);
  CHECK((got - ref.values).norm() < 1e-12 * ref.values.norm());
}

TEST_CASE("stencil kernel rebuilds the kinetic operator", "[fourier]") {
  // f(s) = s + m^2 on the stencil symbol must reproduce the A = 0 operator
  // assembled site-by-site, including its Nyquist null mode
  for (auto [d, n, m] : {std::tuple{1, 8, 0.7}, {2, 6, 0.0}}) {
    LatticeGrid g(d, n, 2.0 * M_PI);
    Eigen::VectorXcd kv =
        stencil_multiplier_kernel(g, [m = m](double s) { return s + m * m; });
    Eigen::MatrixXcd S =
        magnetic_schrodinger(g, VectorPotential::zero(d, g.box_length), m)
            .matrix();
    GridFunction u = random_state(g, 23 + n);
    Eigen::VectorXcd got = circulant_apply(g, kv, u.values);
    Eigen::VectorXcd ref = S * u.values;
    CHECK((got - ref).norm() < 1e-11 * ref.norm());
  }
}
