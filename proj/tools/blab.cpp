// blab run <config> | blab check | blab schedule --eps E --sigma S

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"

#include "blab/config.hpp"
#include "blab/harness.hpp"
#include "blab/oracles.hpp"
#include "blab/schedule.hpp"

using namespace blab;

namespace {

int report(const RunOutcome& r) {
  for (const auto& a : r.assertions)
    std::cout << (a.pass ? "PASS " : "FAIL ") << a.name << " (" << a.detail << ")\n";
  if (!r.error.empty()) std::cerr << "run aborted: " << r.error << '\n';
  std::cout << "output: " << r.dir << '\n';
  return r.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"primitive equations and the slow balance hierarchy"};
  app.require_subcommand(1);

  std::string config_path, out_root;
  auto* run = app.add_subcommand("run", "run the experiment described by a config file");
  run->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--output", out_root, "output root (default $BLAB_OUTPUT_ROOT or ./runs)");
  bool print_only = false;
  run->add_flag("--print-config", print_only, "print the defaulted config and exit");

  bool quick = false;
  int N = 16;
  auto* check = app.add_subcommand("check", "run the oracle suite");
  check->add_flag("--quick", quick, "fewer states and directions");
  check->add_option("-N", N, "grid size")->check(CLI::Range(8, 64));

  double eps = 0, sigma = 0.5, mu = 0.05;
  auto* sched = app.add_subcommand("schedule", "print the derived schedule");
  sched->add_option("--eps", eps, "Rossby number")->required();
  sched->add_option("--sigma", sigma, "Gevrey radius")->capture_default_str();
  sched->add_option("--mu", mu, "viscosity")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const ExperimentConfig cfg = load_config(config_path);
      if (print_only) {
        std::cout << format_config(cfg);
        return 0;
      }
      return report(run_experiment(cfg, out_root.empty() ? output_root() : out_root, std::cout));
    }
    if (*check) {
      OracleSuiteOptions o;
      o.N = N;
      o.quick = quick;
      bool ok = true;
      for (const OracleResult& r : run_oracle_suite(o)) {
        std::cout << format_result(r) << '\n';
        ok = ok && r.pass;
      }
      return ok ? 0 : 1;
    }
    if (*sched) {
      const Schedule s = make_schedule(eps, sigma, mu);
      std::printf("eps    %g\nsigma  %g\nkappa  %.6g\ndelta  %.6g\neta    %.6g\nn*     %d\n", s.eps, s.sigma,
                  s.kappa, s.delta, s.eta, s.n_star);
      for (const auto& c : s.checks)
        std::printf("check  %-32s %-7s %s\n", c.name.c_str(), status_name(c.status), c.detail.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
