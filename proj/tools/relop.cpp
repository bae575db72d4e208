// Command-line front end: artifact tables, scenario verification, selftest.
// Exit codes: 0 success / all checks pass, 1 check failures, 2 bad
// configuration, 3 internal error.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "relop/driver.hpp"
#include "relop/specfun.hpp"

namespace fs = std::filesystem;
using namespace relop;

namespace {

struct CommonFlags {
  std::string config;
  std::string out = ".";
  long seed = -1;
  double tol_scale = 1.0;
  int jobs = 0;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "scenario file (.scn)");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--seed", f.seed, "override the scenario seed");
  cmd->add_option("--tol-scale", f.tol_scale,
                  "multiply all gating tolerances");
  cmd->add_option("--jobs", f.jobs,
                  "parallel suite width (default: logical cores)");
}

Scenario load_or_default(const CommonFlags& f) {
  Scenario sc;
  if (!f.config.empty()) sc = load_scenario(f.config);
  if (f.seed >= 0) sc.seed = std::uint64_t(f.seed);
  if (sc.n & (sc.n - 1))
    std::cerr << "warning: n = " << sc.n
              << " is not a power of two; using the generic transform\n";
  return sc;
}

void write_file(const fs::path& p, const std::string& content) {
  fs::create_directories(p.parent_path().empty() ? "." : p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << content;
}

int run_verify(const CommonFlags& f) {
  Scenario sc = load_or_default(f);
  const int jobs = f.jobs > 0
                       ? f.jobs
                       : int(std::max(1u, std::thread::hardware_concurrency()));
  std::vector<CheckResult> checks;
  if (jobs <= 1 || sc.suites.size() <= 1) {
    checks = run_scenario(sc);
  } else {
    // one single-suite scenario per task; merge preserves suite order
    std::vector<std::future<std::vector<CheckResult>>> futs;
    for (const auto& s : sc.suites) {
      Scenario one = sc;
      one.suites = {s};
      futs.push_back(std::async(std::launch::async,
                                [one] { return run_scenario(one); }));
    }
    for (auto& fu : futs) {
      auto part = fu.get();
      checks.insert(checks.end(), part.begin(), part.end());
    }
  }
  if (f.tol_scale != 1.0)
    for (auto& c : checks) {
      c.tolerance *= f.tol_scale;
      c.finish();
    }
  std::ostringstream os;
  write_report_json(os, scenario_hash(sc), checks);
  write_file(fs::path(f.out) / "report.json", os.str());
  write_summary_table(std::cout, checks);
  bool ok = true;
  for (const auto& c : checks) ok = ok && c.passed();
  std::cout << (ok ? "all checks passed" : "CHECK FAILURES") << "\n";
  return ok ? 0 : 1;
}

int run_selftest() {
  int failures = 0;
  auto expect = [&](const char* what, double got, double want, double tol) {
    const double err = std::abs(got - want) / std::max(std::abs(want), 1.0);
    const bool ok = err <= tol;
    std::printf("%-44s %s  (err %.2e)\n", what, ok ? "ok" : "FAIL", err);
    if (!ok) ++failures;
  };
  // special-function oracles (reference values computed with extended
  // precision, frozen)
  expect("gamma(0.5) = sqrt(pi)", gamma_fn(0.5), std::sqrt(M_PI), 1e-14);
  expect("K_{1/2}(1) = sqrt(pi/2) e^{-1}", bessel_k(0.5, 1.0),
         std::sqrt(M_PI / 2.0) * std::exp(-1.0), 1e-13);
  expect("K_1(2)", bessel_k(1.0, 2.0), 0.13986588181652242776, 1e-13);
  expect("K_2(0.1)", bessel_k(2.0, 0.1), 199.50396464211413931, 1e-12);
  expect("scaled K_0(500)", bessel_k_scaled(0.0, 500.0),
         0.056035915417234515428, 1e-13);
  // trivial battery on the lattice machinery
  {
    LatticeGrid g(2, 12, 2.0 * M_PI);
    Rng rng(11);
    GridFunction u = random_smooth_state(g, 3, rng);
    GridFunction r = dft_inverse(dft_forward(u));
    expect("DFT round trip", (r.values - u.values).norm(), 0.0, 1e-12);
    expect("plane wave normalization",
           plane_wave(g, Eigen::VectorXi::Zero(2)).norm_l2(),
           g.box_length, 1e-13);
    VectorPotential a =
        VectorPotential::random_smooth(2, g.box_length, 1.0, 2, rng);
    HermitianOperator S = magnetic_schrodinger(g, a, 1.0);
    expect("kinetic floor at m^2", S.min_eigenvalue() >= 1.0 - 1e-12 ? 1.0
                                                                     : 0.0,
           1.0, 0.0);
  }
  {
    Scenario sc;
    expect("scenario hash stability", double(scenario_hash(sc)),
           double(scenario_hash(sc)), 0.0);
  }
  std::printf("%s\n", failures ? "SELFTEST FAILURES" : "selftest passed");
  return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "lattice laboratory for magnetic relativistic Schrodinger operators"};
  app.require_subcommand(1);

  CommonFlags fk, fl, fq, fv;
  CLI::App* kernel = app.add_subcommand(
      "kernel-table", "heat kernel values across (m, alpha, d, t, r)");
  add_common(kernel, fk);
  CLI::App* levy = app.add_subcommand(
      "levy-table", "jump densities with tail mass and small moment");
  add_common(levy, fl);
  CLI::App* cq = app.add_subcommand(
      "compare-quantizations",
      "midpoint vs line-integral vs square-root constructions");
  add_common(cq, fq);
  CLI::App* verify = app.add_subcommand(
      "verify", "run the scenario's check suites and write report.json");
  add_common(verify, fv);
  app.add_subcommand("selftest",
                     "oracle values and the trivial example battery");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  }

  try {
    if (kernel->parsed()) {
      Scenario sc = load_or_default(fk);
      write_file(fs::path(fk.out) / "kernel_table.csv",
                 kernel_table_csv(sc));
      std::cout << "wrote " << (fs::path(fk.out) / "kernel_table.csv").string()
                << "\n";
      return 0;
    }
    if (levy->parsed()) {
      Scenario sc = load_or_default(fl);
      write_file(fs::path(fl.out) / "levy_table.csv", levy_table_csv(sc));
      std::cout << "wrote " << (fs::path(fl.out) / "levy_table.csv").string()
                << "\n";
      return 0;
    }
    if (cq->parsed()) {
      Scenario sc = load_or_default(fq);
      write_file(fs::path(fq.out) / "compare_quantizations.csv",
                 compare_quantizations_csv(sc));
      std::cout << "wrote "
                << (fs::path(fq.out) / "compare_quantizations.csv").string()
                << "\n";
      return 0;
    }
    if (verify->parsed()) return run_verify(fv);
    return run_selftest();
  } catch (const ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
