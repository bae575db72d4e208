// Acceptance battery: one numbered line per gate with the measured margin.
// Run with no arguments for all gates, or pass gate numbers to run a subset
// (`acceptance 7 12`). Exits 1 if any executed gate fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "relop/driver.hpp"

namespace fs = std::filesystem;
using namespace relop;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------- gate 1
Outcome bessel_vs_oracle() {
  double worst = 0.0;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 10; ++j) {
      const double nu = 5.0 * i / 19.0;
      const double x = 0.01 * std::pow(5000.0, j / 9.0);  // log grid to 50
      const double ref = bessel_k_oracle(nu, x, 1e-12).value;
      worst = std::max(worst, std::abs(bessel_k(nu, x) - ref) / ref);
    }
  double worst_half = 0.0;
  for (int n = 0; n <= 4; ++n)
    for (double x : {0.2, 1.0, 5.0, 20.0}) {
      double coef = 1.0, sum = 1.0;
      for (int k = 1; k <= n; ++k) {
        coef *= double((n + k) * (n - k + 1)) / (2.0 * k * x);
        sum += coef;
      }
      const double want = std::sqrt(M_PI / (2.0 * x)) * std::exp(-x) * sum;
      worst_half = std::max(worst_half,
                            std::abs(bessel_k(n + 0.5, x) - want) / want);
    }
  Outcome o;
  o.ok = worst <= 1e-10 && worst_half <= 1e-12;
  o.detail = "200-point lattice rel " + fmt("%.2e", worst) +
             " (tol 1e-10), half-integer rel " + fmt("%.2e", worst_half) +
             " (tol 1e-12)";
  return o;
}

// ---------------------------------------------------------------- gate 2
Outcome ktransform_identity() {
  const double tri[10][4] = {
      {0.5, 0.5, 1.0, 1.0},  {1.0, 0.5, 1.0, 2.0},   {2.0, 1.0, 0.5, 1.0},
      {0.5, 1.5, 2.0, 0.5},  {1.5, 2.0, 1.0, 1.0},   {1.0, 1.0, 1.5, 1.0},
      {0.25, 0.75, 1.0, 1.5}, {3.0, 2.0, 0.8, 1.0},  {0.5, 1.0, 2.0, 0.7},
      {2.0, 2.5, 1.0, 0.9}};
  double worst = 0.0;
  for (const auto& q : tri)
    worst = std::max(worst, ktransform_check(q[0], q[1], q[2], q[3]).rel_err);
  Outcome o;
  o.ok = worst <= 1e-7;
  o.detail = "10 triples, worst rel " + fmt("%.2e", worst) + " (tol 1e-7)";
  return o;
}

// ---------------------------------------------------------------- gate 3
Outcome kernel_consistency() {
  double worst_q = 0.0;
  for (double m : {0.5, 1.0, 2.0})
    for (int d : {1, 2, 3})
      for (double t : {0.1, 1.0})
        for (double r : {0.5, 1.0, 2.0}) {
          const KernelParams p(m, 1.0, d);
          const double closed = heat_kernel_closed_alpha1(p, t, r);
          const double quad = heat_kernel_quadrature(p, t, r).value;
          worst_q = std::max(worst_q, std::abs(quad - closed) / closed);
        }
  double worst_n = 0.0;
  for (double alpha : {0.5, 1.0})
    for (int d : {1, 2})
      for (double t : {0.5, 2.0})
        worst_n = std::max(
            worst_n,
            std::abs(kernel_normalization(KernelParams(1, alpha, d), t).value -
                     1.0));
  double worst_ck = 0.0;
  worst_ck = std::max(worst_ck,
                      chapman_kolmogorov_check(KernelParams(1, 1, 1), 0.4, 0.6,
                                               0.8).rel_err);
  worst_ck = std::max(worst_ck,
                      chapman_kolmogorov_check(KernelParams(1, 0.5, 1), 0.4,
                                               0.6, 0.8).rel_err);
  worst_ck = std::max(worst_ck,
                      chapman_kolmogorov_check(KernelParams(0.5, 1, 2), 0.5,
                                               0.5, 1.0).rel_err);
  Outcome o;
  o.ok = worst_q <= 1e-6 && worst_n <= 1e-6 && worst_ck <= 1e-4;
  o.detail = "closed-vs-quadrature " + fmt("%.2e", worst_q) +
             " (tol 1e-6), mass defect " + fmt("%.2e", worst_n) +
             " (tol 1e-6), convolution " + fmt("%.2e", worst_ck) +
             " (tol 1e-4)";
  return o;
}

// ---------------------------------------------------------------- gate 4
Outcome small_time_jump_limit() {
  double worst_t = 0.0;
  for (auto [m, a, d] : {std::tuple{1.0, 1.0, 2}, {1.0, 0.5, 2},
                         {0.5, 1.0, 1}}) {
    const KernelParams p(m, a, d);
    for (double r : {0.5, 1.0, 2.0}) {
      auto rows = levy_limit_check(p, r, {1e-3});
      worst_t = std::max(worst_t, rows[0].rel_gap);
    }
  }
  // alpha-continuity of the jump density at the same (m, d) pairs; the
  // derivative in alpha carries a log(r) factor, so moderate radii are the
  // meaningful regime for a fixed 1e-3 budget
  double worst_a = 0.0;
  for (auto [m, d] : {std::pair{1.0, 2}, {0.5, 1}})
    for (double r : {1.0, 2.0}) {
      const double ga = levy_density(KernelParams(m, 0.999, d), r);
      const double g1 = levy_density(KernelParams(m, 1.0, d), r);
      worst_a = std::max(worst_a, std::abs(ga - g1) / g1);
    }
  Outcome o;
  o.ok = worst_t <= 1e-3 && worst_a <= 1e-3;
  o.detail = "kernel/t vs density " + fmt("%.6e", worst_t) +
             ", alpha-continuity " + fmt("%.2e", worst_a) + " (tol 1e-3)";
  return o;
}

// ---------------------------------------------------------------- gate 5
Outcome subordination_route() {
  CheckResult lap = laplace_identity_check("laplace", {0.3, 1.0, 3.0},
                                           {0.5, 1.0},
                                           {0.5, 1.0, 2.0, 5.0, 10.0});
  LatticeGrid g(1, 64, 2.0 * M_PI);
  Rng rng(11);
  VectorPotential a =
      VectorPotential::random_smooth(1, g.box_length, 1.0, 2, rng);
  HermitianOperator S = magnetic_schrodinger(g, a, 1.0);
  double worst = 0.0;
  for (double alpha : {0.5, 1.0})
    worst = std::max(worst,
                     subordination_matrix_check(S, 0.5, alpha, 1.0)
                         .frobenius_gap);
  Outcome o;
  o.ok = lap.passed() && worst <= 1e-6;
  o.detail = "30 transform triples rel " + fmt("%.2e", lap.max_violation) +
             " (tol 1e-8), matrix gap " + fmt("%.2e", worst) + " (tol 1e-6)";
  return o;
}

// ---------------------------------------------------------------- gate 6
Outcome power_quadratures() {
  Rng rng(23);
  CheckResult r = power_quadrature_check("powers", rng, 10, 1e-7);
  Outcome o;
  o.ok = r.passed();
  o.detail = "10 random operators, worst rel " + fmt("%.2e", r.max_violation) +
             " (tol 1e-7)";
  return o;
}

// ---------------------------------------------------------------- gate 7
Outcome pairing_domination() {
  double worst = -1.0;
  long pairings = 0;
  for (auto [d, n] : {std::pair{1, 256}, {2, 48}}) {
    LatticeGrid g(d, n, 2.0 * M_PI);
    Rng rng(90 + d);
    Eigen::MatrixXd adot = Eigen::MatrixXd::Constant(d, d, 0.2);
    for (int j = 0; j < d; ++j) adot(j, j) = 0.5;
    const std::vector<VectorPotential> pots = {
        VectorPotential::zero(d, g.box_length),
        VectorPotential::linear(adot, g.box_length),
        VectorPotential::random_smooth(d, g.box_length, 1.0, 2, rng)};
    Eigen::MatrixXcd states(g.total_sites(), 20);
    for (int c = 0; c < 20; ++c)
      states.col(c) = random_smooth_state(g, g.n / 3, rng).values;
    GridFunction flat(g);
    flat.values.setOnes();
    const std::vector<GridFunction> psis = {
        gaussian_bump(g, g.box_length / 8.0),
        gaussian_bump(g, Eigen::VectorXd::Constant(d, 1.0),
                      g.box_length / 6.0, Eigen::VectorXd::Zero(d)),
        flat};
    for (const auto& a : pots) {
      HermitianOperator SA0 = magnetic_schrodinger(g, a, 0.0);
      for (auto [alpha, m] : {std::pair{0.5, 0.5}, {0.5, 1.0}, {1.0, 0.5},
                              {1.0, 1.0}, {1.0, 0.0}}) {
        CheckResult r = kato_check("kato", g, SA0, states, m, alpha, psis);
        worst = std::max(worst, r.max_violation);
        pairings += r.samples;
      }
    }
  }
  Outcome o;
  o.ok = worst <= 1e-8;
  o.detail = std::to_string(pairings) + " pairings, worst scaled deficit " +
             fmt("%.2e", worst) + " (tol 1e-8)";
  return o;
}

// ---------------------------------------------------------------- gate 8
Outcome semigroup_domination() {
  LatticeGrid g(1, 48, 2.0 * M_PI);
  Rng rng(17);
  double worst = 0.0;
  long samples = 0;
  bool ok = true;
  auto run = [&](const VectorPotential& a, double alpha, bool zero) {
    HermitianOperator SA0 = magnetic_schrodinger(g, a, 0.0);
    DiamagneticOptions opt;
    opt.alpha = alpha;
    opt.pairs_per_t = 10;
    opt.a_is_zero = zero;
    CheckResult r = diamagnetic_check("diamagnetic", g, SA0, opt, rng);
    ok = ok && r.passed();
    worst = std::max(worst, r.max_violation);
    samples += r.samples;
  };
  run(VectorPotential::random_smooth(1, g.box_length, 1.0, 2, rng), 1.0,
      false);
  run(VectorPotential::random_smooth(1, g.box_length, 1.4, 3, rng), 0.5,
      false);
  run(VectorPotential::linear(Eigen::MatrixXd::Constant(1, 1, 0.5),
                              g.box_length),
      1.0, false);
  run(VectorPotential::zero(1, g.box_length), 1.0, true);  // equality case
  Outcome o;
  o.ok = ok;
  o.detail = std::to_string(samples) +
             " pair/entry samples incl. equality case, worst at " +
             fmt("%.2e", worst) +
             " of budget (scalar 1e-12, entrywise 1e-10)";
  return o;
}

// ---------------------------------------------------------------- gate 9
Outcome semigroup_norm_bounds() {
  LatticeGrid g(1, 48, 2.0 * M_PI);
  Rng rng(29);
  double worst = 0.0;
  for (int k = 0; k < 5; ++k) {
    VectorPotential a = VectorPotential::random_smooth(
        1, g.box_length, 0.4 + 0.3 * k, 2, rng);
    for (double t : {0.01, 0.1, 1.0})
      worst = std::max(worst, semigroup_bounds_report(g, a, t).max_slack);
  }
  Outcome o;
  o.ok = worst <= 1e-10;
  o.detail = "5 fields x 3 times, worst slack " + fmt("%.2e", worst) +
             " (tol 1e-10)";
  return o;
}

// ---------------------------------------------------------------- gate 10
Outcome quantization_family() {
  // midpoint vs line-average for linear fields
  double h12 = 0.0;
  for (int n : {16, 32, 64}) {
    LatticeGrid g(1, n, 2.0 * M_PI);
    VectorPotential a = VectorPotential::linear(
        Eigen::MatrixXd::Constant(1, 1, 0.5), g.box_length);
    h12 = std::max(h12, (build_h1(g, a, 1.0).matrix() -
                         build_h2(g, a, 1.0).matrix())
                            .cwiseAbs()
                            .maxCoeff());
  }
  {
    LatticeGrid g(2, 10, 2.0 * M_PI);
    Eigen::MatrixXd adot(2, 2);
    adot << 0.4, 0.2, 0.1, 0.6;
    VectorPotential a = VectorPotential::linear(adot, g.box_length);
    h12 = std::max(h12, (build_h1(g, a, 1.0).matrix() -
                         build_h2(g, a, 1.0).matrix())
                            .cwiseAbs()
                            .maxCoeff());
  }
  // gauge covariance: exact for line-average and square-root, broken for
  // the midpoint rule
  LatticeGrid gg(1, 16, 2.0 * M_PI);
  Rng rng(41);
  VectorPotential af =
      VectorPotential::random_smooth(1, gg.box_length, 0.8, 2, rng);
  GaugeFunction phi = GaugeFunction::quadratic(
      Eigen::MatrixXd::Constant(1, 1, 0.3), gg.box_length);
  const double d1 = gauge_covariance_check(gg, af, phi, 1.0, 1).defect;
  const double d2 = gauge_covariance_check(gg, af, phi, 1.0, 2).defect;
  const double d3 = gauge_covariance_check(gg, af, phi, 1.0, 3).defect;
  // refinement of the kernel prescription toward the square root
  auto rows = coincidence_check(1.0, Eigen::MatrixXd::Constant(1, 1, 0.6),
                                2.0 * M_PI, {16, 32, 64, 128}, 1);
  bool monotone = true;
  double min_eig = 1e300;
  std::string ratios;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i + 1 < rows.size())
      monotone = monotone && rows[i + 1].h13_fro_ratio < rows[i].h13_fro_ratio;
    min_eig = std::min(min_eig, rows[i].min_eig_h3);
    ratios += (i ? "/" : "") + fmt("%.3f", rows[i].h13_fro_ratio);
  }
  Outcome o;
  o.ok = h12 <= 1e-13 && d2 <= 1e-10 && d3 <= 1e-10 && d1 > 1e-6 &&
         min_eig >= 1.0 - 1e-10 && monotone;
  o.detail = "h1-h2 " + fmt("%.1e", h12) + " (tol 1e-13); gauge defects " +
             fmt("%.1e", d1) + "/" + fmt("%.1e", d2) + "/" + fmt("%.1e", d3) +
             " (midpoint must break); min eig " + fmt("%.6f", min_eig) +
             "; gap ladder " + ratios + (monotone ? " monotone" : " NOT monotone");
  return o;
}

// ---------------------------------------------------------------- gate 11
Outcome commutator_expansion() {
  Rng rng(7);
  const double L = 2.0 * M_PI;
  VectorPotential A = VectorPotential::random_smooth(1, L, 1.0, 2, rng);
  VectorPotential B = VectorPotential::random_smooth(1, L, 0.7, 2, rng);
  std::vector<CommutatorRow> rows;
  CheckResult r = commutator_identity_check("commutator", 1, L, 1.0,
                                            {64, 128, 256}, A, B,
                                            trig_test_function(1, L), &rows);
  double min_order = 1e300;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    min_order = std::min(min_order, std::log2(rows[i].residual_single /
                                              rows[i + 1].residual_single));
    min_order = std::min(min_order, std::log2(rows[i].residual_two /
                                              rows[i + 1].residual_two));
  }
  Outcome o;
  o.ok = r.passed();
  o.detail = "min observed order " + fmt("%.3f", min_order) +
             " (>= 1.9), exact-reduction gap " +
             fmt("%.1e", rows.back().reduction_gap);
  return o;
}

// ---------------------------------------------------------------- gate 12
Outcome fractional_limits() {
  LatticeGrid g(1, 64, 2.0 * M_PI);
  Rng rng(19);
  VectorPotential a =
      VectorPotential::random_smooth(1, g.box_length, 1.0, 2, rng);
  HermitianOperator SA0 = magnetic_schrodinger(g, a, 0.0);
  Eigen::VectorXcd state = random_smooth_state(g, g.n / 3, rng).values;
  Eigen::VectorXd psi = gaussian_bump(g, g.box_length / 8.0).values.real();

  CheckResult mono = alpha_limit_monotone_check(
      "alpha_monotone", g, SA0, state, 1.0, psi,
      {0.5, 0.7, 0.9, 0.99, 0.999, 1.0 - 1e-4});
  CheckResult fin = alpha_limit_final_check("alpha_final", g, SA0, state, 1.0,
                                            psi, 1.0 - 1e-4, 1e-6);
  CheckResult mass = mass_limit_check("mass", g, SA0, state, psi,
                                      {1.0, 0.5, 0.25, 0.125});
  Outcome o;
  o.ok = mono.passed() && fin.passed() && mass.passed();
  o.detail = "monotone " + std::string(mono.passed() ? "ok" : "VIOLATED") +
             "; final gap " + fmt("%.3e", fin.max_violation) +
             " vs tol 1e-6" + (fin.passed() ? "" : " EXCEEDED") +
             "; mass-slope check " + (mass.passed() ? "ok" : "FAILED");
  return o;
}

// ---------------------------------------------------------------- gate 13
Outcome resolvent_kernel() {
  double worst = 0.0;
  for (int d : {1, 2, 3})
    for (auto [m, r] : {std::pair{0.5, 1.5}, {1.0, 0.8}, {2.0, 0.4}}) {
      const double closed = resolvent_kernel_closed(m, d, r);
      const double ti = resolvent_kernel_time_integral(m, d, r).value;
      const double fo = resolvent_kernel_fourier(m, d, r).value;
      worst = std::max(worst, std::abs(ti - closed) / closed);
      worst = std::max(worst, std::abs(fo - closed) / closed);
    }
  Outcome o;
  o.ok = worst <= 1e-6;
  o.detail = "9 points x 2 routes, worst rel " + fmt("%.2e", worst) +
             " (tol 1e-6)";
  return o;
}

// ---------------------------------------------------------------- gate 14
Outcome deterministic_reports() {
#ifndef RELOP_CLI_PATH
  return {false, "CLI path not configured at build time"};
#else
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / "relop-determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path scn = dir / "case.scn";
  {
    std::ofstream out(scn);
    out << "[lattice]\nd = 1\nn = 32\n[operator]\nm = 1\nalpha = 0.5, 1\n"
           "potential = smooth\n[verify]\nstates = 4\n"
           "suites = kato, diamagnetic, kernels, subordination\n";
  }
  std::string reports[2];
  for (int k = 0; k < 2; ++k) {
    const fs::path out = dir / ("run" + std::to_string(k));
    std::ostringstream cmd;
    cmd << '"' << RELOP_CLI_PATH << '"' << " verify --config " << scn
        << " --seed 7 --out " << out << " > " << (out.string() + ".log")
        << " 2>&1";
    if (std::system(cmd.str().c_str()) != 0)
      return {false, "verify run " + std::to_string(k) + " exited nonzero"};
    std::ifstream in(out / "report.json", std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    reports[k] = ss.str();
    if (reports[k].empty())
      return {false, "run " + std::to_string(k) + " wrote no report"};
  }
  o.ok = reports[0] == reports[1];
  o.detail = o.ok ? "two seeded runs byte-identical (" +
                        std::to_string(reports[0].size()) + " bytes)"
                  : "reports differ";
  return o;
#endif
}

struct Gate {
  const char* label;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Gate> gates = {
      {"modified Bessel K against the integral oracle", bessel_vs_oracle},
      {"K-transform identity", ktransform_identity},
      {"heat kernel: quadrature, mass, convolution", kernel_consistency},
      {"small-time kernel limit and alpha-continuity", small_time_jump_limit},
      {"subordination: transform + matrix semigroup", subordination_route},
      {"fractional-power quadratures on random operators", power_quadratures},
      {"pairing domination (free vs magnetic)", pairing_domination},
      {"semigroup domination incl. equality case", semigroup_domination},
      {"heat-semigroup operator norm bounds", semigroup_norm_bounds},
      {"quantization family coincidence and gauge", quantization_family},
      {"commutator first-order expansion order", commutator_expansion},
      {"fractional and mass limits", fractional_limits},
      {"resolvent kernel: three routes", resolvent_kernel},
      {"byte-identical seeded reports", deterministic_reports},
  };

  std::vector<int> todo;
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k < 1 || k > int(gates.size())) {
      std::fprintf(stderr, "unknown gate number '%s'\n", argv[i]);
      return 2;
    }
    todo.push_back(k);
  }
  if (todo.empty())
    for (int k = 1; k <= int(gates.size()); ++k) todo.push_back(k);

  int failures = 0;
  for (int k : todo) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = gates[k - 1].run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::printf("[%2d] %-50s %s  %s  (%.1fs)\n", k, gates[k - 1].label,
                o.ok ? "PASS" : "FAIL", o.detail.c_str(), dt);
    std::fflush(stdout);
    if (!o.ok) ++failures;
  }
  if (failures)
    std::printf("%d of %zu gates failed\n", failures, todo.size());
  else
    std::printf("all %zu gates passed\n", todo.size());
  return failures ? 1 : 0;
}
