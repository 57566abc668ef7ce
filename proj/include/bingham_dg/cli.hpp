#pragma once

#include "config.hpp"
#include "error_norms.hpp"
#include "io.hpp"
#include "newton.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

namespace bdg {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitUnknownBenchmark = 3,
  kExitSolver = 4,
  kExitIo = 5,
};

/// args excludes the program name.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"1D discontinuous Galerkin shallow-water solver for Bingham flows"};
  std::string config_path;
  // flag -> config key; values stay strings so the config file and the
  // command line go through the same parsing
  const std::vector<std::tuple<std::string, std::string, std::string>> flags = {
      {"--benchmark", "benchmark.name",
       "constant-free-surface | parallel-free-surface | dam-break"},
      {"--nel", "benchmark.n_el", "number of elements"},
      {"--dt", "benchmark.dt", "time step"},
      {"--tfinal", "benchmark.t_final", "final time"},
      {"--orders", "benchmark.orders", "m0,m1,m2,m3"},
      {"--reg", "regularization.variant", "1 | 2 | 3"},
      {"--gamma", "regularization.gamma", "regularization slope"},
      {"--beta", "regularization.beta", "smoothing parameter"},
      {"--continuation", "regularization.continuation", "gamma0,ngamma or none"},
      {"--sigma0", "physics.sigma0", "yield stress"},
      {"--eta", "physics.eta", "viscosity"},
      {"--out", "output.dir", "output directory"},
      {"--snapshot-every", "output.snapshot_every", "write a snapshot every N steps"},
      {"--tangent", "newton.tangent", "exact | frozen"},
  };
  std::map<std::string, std::string> values;
  for (const auto& [flag, key, help] : flags) {
    app.add_option(flag, values[key], help);
  }
  app.add_option("--config", config_path, "INI file; command-line flags take precedence");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitConfig;
  }

  BenchmarkSpec spec;
  try {
    ConfigTree tree = config_path.empty() ? ConfigTree{} : read_config_file(config_path);
    for (const auto& [flag, key, help] : flags) {
      if (app.count(flag) > 0) tree.put(key, values[key]);
    }
    if (!tree.get_optional<std::string>("benchmark.name")) {
      err << "error: --benchmark is required (on the command line or in --config)\n"
          << app.help();
      return kExitConfig;
    }
    spec = spec_from_tree(tree);
  } catch (const UnknownBenchmarkError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUnknownBenchmark;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  const std::filesystem::path dir = spec.out_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    err << "error: cannot create " << dir << ": " << ec.message() << "\n";
    return kExitIo;
  }

  try {
    const Benchmark bench = build_benchmark(spec);
    const ProblemSetup& setup = bench.setup;
    const Observer observer = [&](double t, const SolutionState& s, const StepStats&) {
      const auto idx = static_cast<std::size_t>(std::ceil(t / spec.dt - 1e-9));
      write_snapshot(dir / snapshot_name(idx), s, setup);
    };
    const RunResult run =
        run_simulation(bench.initial, spec.t_final, setup, spec.newton, observer,
                       spec.snapshot_every);

    ErrorReport report = error_norms(run.state, reference_for(spec, setup, run.state.time), setup);
    report.nr_per_step = run.stats.iters_per_step();
    report.cpu_seconds = run.stats.wall_time;
    write_json(dir / "summary.json", summary_json(spec, report, run));

    out << to_string(spec.name) << ": steps " << run.stats.steps << ", newton/step "
        << report.nr_per_step << ", max_iters steps " << run.stats.max_iter_steps
        << ", L2_h " << report.L2_h << ", Linf_h " << report.Linf_h << ", Linf_u "
        << report.Linf_u << ", active " << report.active_pct << "%, " << report.cpu_seconds
        << " s\n";
    if (run.failure) {
      err << "error: solver failed at t=" << run.failure->time << ": " << run.failure->message
          << "\n";
      return kExitSolver;
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitOk;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run_cli(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace bdg
