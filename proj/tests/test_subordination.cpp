#include <catch2/catch_amalgamated.hpp>

#include "relop/fields.hpp"
#include "relop/lattice_ops.hpp"
#include "relop/rng.hpp"
#include "relop/subordination.hpp"

using namespace relop;

namespace {
double rel(double got, double want) {
  return std::abs(got - want) / std::abs(want);
}
}  // namespace

// Frozen extended-precision reference values for the one-sided stable
// density f_{t,beta}(s).

TEST_CASE("half-stable closed form", "[subordination]") {
  CHECK(rel(subordinator_density_closed_half(1.0, 0.7),
            0.33701003732726986) < 1e-13);
  CHECK(rel(subordinator_density_closed_half(0.3, 2.0),
            0.029585949818091666) < 1e-13);
}

TEST_CASE("numeric density matches the closed form at beta = 1/2",
          "[subordination]") {
  for (double t : {0.4, 1.0, 2.5})
    for (double s : {0.2, 0.9, 3.0, 8.0}) {
      INFO("t=" << t << " s=" << s);
      CHECK(rel(subordinator_density(t, 0.5, s),
                subordinator_density_closed_half(t, s)) < 1e-9);
    }
}

TEST_CASE("numeric density pins away from the closed case",
          "[subordination]") {
  CHECK(rel(subordinator_density(1.0, 0.25, 0.5), 0.1949940582982892) < 1e-9);
  CHECK(rel(subordinator_density(1.0, 0.25, 2.0), 0.045805457625720845) <
        1e-9);
  CHECK(rel(subordinator_density(1.0, 0.25, 10.0), 0.007615018463877014) <
        1e-9);
  CHECK(rel(subordinator_density(2.0, 0.375, 1.5), 0.099848288628469455) <
        1e-9);
}

TEST_CASE("density integrates to the stable exponent", "[subordination]") {
  for (double t : {0.5, 2.0})
    for (double beta : {0.25, 0.4, 0.5})
      for (double z : {1.0, 5.0}) {
        LaplaceCheck c = laplace_transform_check(t, beta, z);
        INFO("t=" << t << " beta=" << beta << " z=" << z);
        CHECK(c.rel_err < 1e-9);
      }
}

TEST_CASE("scalar subordination matches the spectral exponential",
          "[subordination]") {
  for (double alpha : {0.5, 1.0})
    for (double t : {0.3, 1.0})
      for (double lam : {1.0, 2.5, 40.0, 900.0}) {
        const double m = 1.0;
        const double want =
            std::exp(-t * (std::pow(lam, 0.5 * alpha) - std::pow(m, alpha)));
        INFO("alpha=" << alpha << " t=" << t << " lam=" << lam);
        CHECK(rel(subordinated_scalar(t, alpha, m, lam), want) < 1e-10);
      }
}

TEST_CASE("matrix subordination agrees with spectral calculus",
          "[subordination]") {
  LatticeGrid g(1, 16, 2.0 * M_PI);
  Rng rng(13);
  VectorPotential a =
      VectorPotential::random_smooth(1, g.box_length, 1.0, 2, rng);
  HermitianOperator S = magnetic_schrodinger(g, a, 1.0);
  for (double alpha : {0.5, 1.0}) {
    SubordinationMatrixCheck c = subordination_matrix_check(S, 0.7, alpha, 1.0);
    INFO("alpha=" << alpha);
    CHECK(c.frobenius_gap < 1e-9);
    CHECK(c.max_entry_gap < 1e-9);
  }
}
