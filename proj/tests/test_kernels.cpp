#include <catch2/catch_amalgamated.hpp>

#include "relop/fields.hpp"
#include "relop/fourier.hpp"
#include "relop/kernels.hpp"

using namespace relop;

namespace {
double rel(double got, double want) {
  return std::abs(got - want) / std::abs(want);
}
}  // namespace

// Frozen extended-precision reference values.

TEST_CASE("parameter validation", "[kernels]") {
  CHECK_THROWS_AS(KernelParams(-1.0, 0.5, 1), std::domain_error);
  CHECK_THROWS_AS(KernelParams(1.0, 0.0, 1), std::domain_error);
  CHECK_THROWS_AS(KernelParams(1.0, 1.5, 1), std::domain_error);
  CHECK_THROWS_AS(KernelParams(1.0, 0.5, 0), std::domain_error);
}

TEST_CASE("sphere surface areas", "[kernels]") {
  CHECK(rel(surface_area(1), 2.0) < 1e-14);
  CHECK(rel(surface_area(2), 2.0 * M_PI) < 1e-14);
  CHECK(rel(surface_area(3), 4.0 * M_PI) < 1e-14);
}

TEST_CASE("closed-form kernel pins at alpha = 1", "[kernels]") {
  CHECK(rel(heat_kernel_closed_alpha1(KernelParams(1, 1, 1), 1.0, 0.5),
            0.38314591564074064) < 1e-13);
  CHECK(rel(heat_kernel_closed_alpha1(KernelParams(0.5, 1, 2), 0.3, 1.2),
            0.02555969385339922) < 1e-13);
  CHECK(rel(heat_kernel_closed_alpha1(KernelParams(2, 1, 3), 2.0, 1.0),
            0.043665203398824986) < 1e-13);
  // massless branch
  CHECK(rel(heat_kernel_closed_alpha1(KernelParams(0, 1, 2), 1.0, 1.0),
            0.056269769759819129) < 1e-13);
}

TEST_CASE("jump density pins", "[kernels]") {
  CHECK(rel(levy_density(KernelParams(1, 0.5, 1), 0.7),
            0.21768572720312996) < 1e-13);
  CHECK(rel(levy_density(KernelParams(1, 1, 2), 1.3),
            0.045408283398015055) < 1e-13);
  CHECK(rel(levy_density(KernelParams(0, 0.5, 2), 0.9),
            0.10832685843512474) < 1e-13);
  CHECK(rel(levy_density(KernelParams(2, 0.8, 3), 0.4),
            2.2614227840369313) < 1e-13);
}

TEST_CASE("resolvent kernel pins", "[kernels]") {
  CHECK(rel(resolvent_kernel_closed(1.0, 2, 0.8), 0.089391157142020846) <
        1e-13);
  CHECK(rel(resolvent_kernel_closed(0.5, 3, 1.5), 0.016035436146041311) <
        1e-13);
  CHECK(rel(resolvent_kernel_closed(2.0, 1, 0.3), 0.24749296857957722) <
        1e-13);
}

TEST_CASE("quadrature and transform routes agree with the closed form",
          "[kernels]") {
  const KernelParams p(1, 1, 1);
  const double closed = heat_kernel_closed_alpha1(p, 1.0, 0.5);
  CHECK(rel(heat_kernel_quadrature(p, 1.0, 0.5).value, closed) < 1e-8);
  CHECK(rel(heat_kernel_fourier(p, 1.0, 0.5).value, closed) < 1e-7);
  const KernelParams p3(2, 1, 3);
  const double closed3 = heat_kernel_closed_alpha1(p3, 2.0, 1.0);
  CHECK(rel(heat_kernel_fourier(p3, 2.0, 1.0).value, closed3) < 1e-7);
}

TEST_CASE("dispatcher picks consistent routes", "[kernels]") {
  const KernelParams p(1, 0.5, 1);
  const double via_quad = heat_kernel(p, 0.7, 0.9);
  const double via_fourier = heat_kernel_fourier(p, 0.7, 0.9).value;
  CHECK(rel(via_quad, via_fourier) < 1e-6);
  const KernelParams q(1, 1, 2);
  CHECK(rel(heat_kernel(q, 0.4, 1.1),
            heat_kernel_closed_alpha1(q, 0.4, 1.1)) < 1e-12);
}

TEST_CASE("kernel mass is one", "[kernels]") {
  CHECK(std::abs(kernel_normalization(KernelParams(1, 0.5, 1), 0.7).value -
                 1.0) < 1e-7);
  CHECK(std::abs(kernel_normalization(KernelParams(1, 1, 2), 0.5).value -
                 1.0) < 1e-6);
}

TEST_CASE("semigroup property under spatial convolution", "[kernels]") {
  ConvolutionCheck a = chapman_kolmogorov_check(KernelParams(1, 1, 1),
                                                0.4, 0.6, 0.8);
  CHECK(a.rel_err < 1e-12);
  ConvolutionCheck b = chapman_kolmogorov_check(KernelParams(1, 0.5, 1),
                                                0.4, 0.6, 0.8);
  CHECK(b.rel_err < 1e-9);
  ConvolutionCheck c = chapman_kolmogorov_check(KernelParams(0.5, 1, 2),
                                                0.5, 0.5, 1.0);
  CHECK(c.rel_err < 1e-12);
  CHECK_THROWS(chapman_kolmogorov_check(KernelParams(1, 1, 3), 0.5, 0.5, 1.0));
}

TEST_CASE("kernel-over-t approaches the jump density", "[kernels]") {
  auto rows = levy_limit_check(KernelParams(1, 0.5, 1), 1.0, {1e-2, 1e-3});
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].rel_gap < rows[0].rel_gap);
  CHECK(rows[1].rel_gap < 2e-3);
}

TEST_CASE("jump measure moments", "[kernels]") {
  LevyMoments lm = levy_moments(KernelParams(1, 0.5, 1), 1.0);
  CHECK(lm.small_converged);
  CHECK(rel(lm.tail_mass, 0.1039004113170313) < 1e-12);
  CHECK(rel(lm.small_moment, 0.18550309257424578) < 1e-10);
  // for alpha = 1, d = 2, m = 1 the tail mass collapses to e^{-kappa}
  LevyMoments lm2 = levy_moments(KernelParams(1, 1, 2), 1.0);
  CHECK(rel(lm2.tail_mass, std::exp(-1.0)) < 1e-12);
}

TEST_CASE("singular-integral route converges to the multiplier", "[kernels]") {
  const double m = 1.0, alpha = 0.5;
  double prev = 0.0;
  for (int n : {64, 128}) {
    LatticeGrid g(1, n, 2.0 * M_PI);
    GridFunction u = gaussian_bump(g, g.box_length / 10.0);
    GridFunction ref = apply_multiplier(u, [&](double xi2) {
      return std::pow(xi2 + m * m, alpha / 2.0);
    });
    Eigen::VectorXcd got = apply_free_fractional(u, m, alpha);
    const double err = (got - ref.values).norm() / ref.values.norm();
    if (n == 64) {
      CHECK(err < 1.2e-2);
      prev = err;
    } else {
      CHECK(err < 0.8 * prev);
    }
  }
}
