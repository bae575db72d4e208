#include <catch2/catch_amalgamated.hpp>

#include "relop/quantize.hpp"
#include "relop/rng.hpp"

using namespace relop;

TEST_CASE("minimal displacement images split half-box ties", "[quantize]") {
  LatticeGrid g(1, 8, 4.0);
  std::vector<std::pair<Eigen::VectorXd, double>> imgs;
  // |ia - ib| = n/2: both wrapped representatives, half weight each
  detail::displacement_images(g, {4, 0, 0}, {0, 0, 0}, imgs);
  REQUIRE(imgs.size() == 2);
  CHECK(imgs[0].second == Catch::Approx(0.5));
  CHECK(imgs[1].second == Catch::Approx(0.5));
  CHECK(std::abs(imgs[0].first[0]) == Catch::Approx(2.0));  // n/2 * h
  CHECK(imgs[0].first[0] == Catch::Approx(-imgs[1].first[0]));
  // generic displacement: single image, minimal representative
  detail::displacement_images(g, {1, 0, 0}, {7, 0, 0}, imgs);
  REQUIRE(imgs.size() == 1);
  CHECK(imgs[0].second == Catch::Approx(1.0));
  CHECK(imgs[0].first[0] == Catch::Approx(1.0));  // 2 sites * h, wrapped
  // weights always sum to one
  for (int a = 0; a < 8; ++a) {
    detail::displacement_images(g, {a, 0, 0}, {3, 0, 0}, imgs);
    double w = 0.0;
    for (const auto& iw : imgs) w += iw.second;
    CHECK(w == Catch::Approx(1.0));
  }
}

TEST_CASE("free kernel diagonalizes on the stencil symbol", "[quantize]") {
  LatticeGrid g(1, 16, 2.0 * M_PI);
  const double m = 1.0;
  Eigen::MatrixXcd K = free_kernel_matrix(g, m).matrix();
  for (int k : {0, 1, 5, 8}) {
    GridFunction u = plane_wave(g, Eigen::VectorXi::Constant(1, k));
    const double h = g.h();
    const double s = std::sin(g.freq(k) * h) / h;
    const double lam = std::sqrt(s * s + m * m);
    CHECK((K * u.values - lam * u.values).norm() < 1e-11 * u.values.norm());
  }
}

TEST_CASE("midpoint and line-average prescriptions coincide for linear fields",
          "[quantize]") {
  {
    LatticeGrid g(1, 12, 2.0 * M_PI);
    VectorPotential a =
        VectorPotential::linear(Eigen::MatrixXd::Constant(1, 1, 0.4),
                                g.box_length);
    Eigen::MatrixXcd d =
        build_h1(g, a, 1.0).matrix() - build_h2(g, a, 1.0).matrix();
    CHECK(d.cwiseAbs().maxCoeff() < 1e-13);
  }
  {
    LatticeGrid g(2, 6, 2.0 * M_PI);
    Eigen::MatrixXd adot(2, 2);
    adot << 0.3, 0.2, 0.1, 0.5;
    VectorPotential a = VectorPotential::linear(adot, g.box_length);
    Eigen::MatrixXcd d =
        build_h1(g, a, 0.5).matrix() - build_h2(g, a, 0.5).matrix();
    CHECK(d.cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("all three prescriptions share their free operator", "[quantize]") {
  LatticeGrid g(1, 16, 2.0 * M_PI);
  VectorPotential z = VectorPotential::zero(1, g.box_length);
  const double m = 1.0;
  Eigen::MatrixXcd h1 = build_h1(g, z, m).matrix();
  Eigen::MatrixXcd h2 = build_h2(g, z, m).matrix();
  Eigen::MatrixXcd h3 = build_h3(g, z, m).matrix();
  CHECK((h1 - h2).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((h1 - h3).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("hermiticity and the mass floor", "[quantize]") {
  LatticeGrid g(1, 20, 2.0 * M_PI);
  Rng rng(37);
  VectorPotential a =
      VectorPotential::random_smooth(1, g.box_length, 1.2, 2, rng);
  Eigen::MatrixXcd h1 = build_h1(g, a, 0.5).matrix();
  CHECK((h1 - h1.adjoint()).norm() < 1e-14 * h1.norm());
  HermitianOperator h3 = build_h3(g, a, 0.5);
  CHECK(h3.min_eigenvalue() >= 0.5 - 1e-10);
}

TEST_CASE("gauge covariance separates the prescriptions", "[quantize]") {
  LatticeGrid g(1, 12, 2.0 * M_PI);
  Rng rng(61);
  VectorPotential a =
      VectorPotential::random_smooth(1, g.box_length, 0.8, 2, rng);
  GaugeFunction phi =
      GaugeFunction::quadratic(Eigen::MatrixXd::Constant(1, 1, 0.3),
                               g.box_length);
  const double d1 = gauge_covariance_check(g, a, phi, 1.0, 1).defect;
  const double d2 = gauge_covariance_check(g, a, phi, 1.0, 2).defect;
  const double d3 = gauge_covariance_check(g, a, phi, 1.0, 3).defect;
  CHECK(d1 > 1e-6);   // midpoint rule is not exactly covariant
  CHECK(d2 <= 1e-10); // line-average and square-root are
  CHECK(d3 <= 1e-10);
}

TEST_CASE("kernel quantization converges to the square root", "[quantize]") {
  auto rows = coincidence_check(1.0, Eigen::MatrixXd::Constant(1, 1, 0.6),
                                2.0 * M_PI, {16, 32, 64}, 1);
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 0; i + 1 < rows.size(); ++i)
    CHECK(rows[i + 1].h13_fro_ratio < rows[i].h13_fro_ratio);
  for (const auto& r : rows) {
    CHECK(r.h12_max_entry < 1e-13);
    CHECK(r.min_eig_h3 >= 1.0 - 1e-10);
  }
}
