#include <algorithm>
#include <catch2/catch_amalgamated.hpp>

#include "relop/fields.hpp"
#include "relop/lattice_ops.hpp"
#include "relop/operators.hpp"
#include "relop/rng.hpp"

using namespace relop;

namespace {
Eigen::MatrixXcd random_hermitian(int n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXcd G(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) G(r, c) = rng.complex_normal();
  return (G.adjoint() * G) / double(n);
}
}  // namespace

TEST_CASE("constructor rejects defective input", "[operators]") {
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(2, 3);
  CHECK_THROWS_AS(HermitianOperator(M), std::invalid_argument);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2, 2);
  A(0, 1) = 1.0;  // A(1,0) left at 0: visibly non-Hermitian
  CHECK_THROWS_AS(HermitianOperator(A), std::invalid_argument);
}

TEST_CASE("tiny asymmetry is symmetrized away", "[operators]") {
  Eigen::MatrixXcd M = random_hermitian(6, 2);
  Eigen::MatrixXcd noisy = M;
  noisy(0, 1) += std::complex<double>(1e-15, -1e-15);
  HermitianOperator H(noisy);
  CHECK((H.matrix() - H.matrix().adjoint()).norm() == 0.0);
}

TEST_CASE("free lattice operator has the stencil spectrum", "[operators]") {
  const int n = 8;
  const double m = 0.7, L = 2.0 * M_PI;
  LatticeGrid g(1, n, L);
  HermitianOperator S =
      magnetic_schrodinger(g, VectorPotential::zero(1, L), m);
  std::vector<double> want;
  const double h = g.h();
  for (int k = 0; k < n; ++k) {
    const double s = std::sin(g.freq(k) * h) / h;
    want.push_back(s * s + m * m);
  }
  std::sort(want.begin(), want.end());
  const Eigen::VectorXd& got = S.eig().eigenvalues;
  REQUIRE(got.size() == n);
  for (int k = 0; k < n; ++k)
    CHECK(std::abs(got(k) - want[k]) < 1e-12 * (1.0 + want[k]));
  CHECK(S.min_eigenvalue() == Catch::Approx(want.front()));
  CHECK(S.max_eigenvalue() == Catch::Approx(want.back()));
}

TEST_CASE("functional calculus routes agree", "[operators]") {
  HermitianOperator H(random_hermitian(12, 9));
  auto f = [](double lam) { return std::sqrt(std::abs(lam)) + 0.1 * lam; };
  Eigen::MatrixXcd M = H.apply_function(f);
  Rng rng(31);
  Eigen::VectorXcd u(12);
  for (int i = 0; i < 12; ++i) u[i] = rng.complex_normal();
  Eigen::VectorXcd via_vec = H.apply_function(f, u);
  CHECK((M * u - via_vec).norm() < 1e-12 * via_vec.norm());

  Eigen::MatrixXcd states(12, 3);
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 12; ++i) states(i, c) = rng.complex_normal();
  Eigen::MatrixXcd via_states = H.apply_function(f, states);
  CHECK((M * states - via_states).norm() < 1e-12 * via_states.norm());
}

TEST_CASE("square then square-root returns the operator", "[operators]") {
  HermitianOperator H(random_hermitian(10, 4));
  Eigen::MatrixXcd R =
      H.apply_function([](double lam) { return lam * lam; });
  Eigen::MatrixXcd back = HermitianOperator(R).apply_function(
      [](double lam) { return std::sqrt(std::max(lam, 0.0)); });
  CHECK((back - H.matrix()).norm() < 1e-11 * H.matrix().norm());
}
