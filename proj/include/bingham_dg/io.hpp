#pragma once

#include "config.hpp"
#include "error_norms.hpp"
#include "newton.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <stdexcept>
#include <string>

namespace bdg {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string snapshot_name(std::size_t step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%06zu.csv", step);
  return buf;
}

/// Header x,h,u,E,active; one row per quadrature point, left to right.
inline void write_snapshot(const std::filesystem::path& path, const SolutionState& state,
                           const ProblemSetup& setup) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path.string());
  f << "x,h,u,E,active\n" << std::setprecision(17);
  for (const Sample& s : samples_from_state(state, setup)) {
    f << s.x << ',' << s.h << ',' << s.u << ',' << s.E << ',' << (s.active ? 1 : 0) << '\n';
  }
  if (!f) throw IoError("write failed: " + path.string());
}

/// Reads a snapshot back as samples (weights are not stored and stay 0).
inline std::vector<Sample> read_snapshot(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(f, line) || line != "x,h,u,E,active") {
    throw IoError("bad snapshot header in " + path.string());
  }
  std::vector<Sample> out;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto parts = detail::split_csv(line);
    if (parts.size() != 5) throw IoError("bad snapshot row in " + path.string());
    Sample s;
    try {
      s.x = std::stod(parts[0]);
      s.h = std::stod(parts[1]);
      s.u = std::stod(parts[2]);
      s.E = std::stod(parts[3]);
    } catch (const std::exception&) {
      throw IoError("bad number in " + path.string());
    }
    s.active = parts[4] == "1";
    out.push_back(s);
  }
  return out;
}

inline nlohmann::json to_json(const BenchmarkSpec& s) {
  nlohmann::json j;
  j["benchmark"] = to_string(s.name);
  j["n_el"] = s.n_el;
  j["dt"] = s.dt;
  j["t_final"] = s.t_final;
  j["orders"] = {s.orders.bottom, s.orders.h, s.orders.u, s.orders.E};
  if (s.name == BenchmarkName::DamBreak) {
    j["geometry"] = {{"length", s.dam.length}, {"wall", s.dam.wall}, {"h1", s.dam.h1},
                     {"h2", s.dam.h2}};
  } else {
    j["geometry"] = {{"length", s.incline.length}, {"alpha", s.incline.alpha},
                     {"h0", s.incline.h0}};
  }
  j["physics"] = {{"rho", s.params.rho}, {"g", s.params.g}, {"eta", s.params.eta},
                  {"sigma0", s.params.sigma0}};
  j["regularization"] = {{"variant", static_cast<int>(s.reg.variant)},
                         {"gamma", s.reg.gamma},
                         {"beta", s.reg.beta}};
  if (s.reg.continuation) {
    j["regularization"]["continuation"] = {{"gamma0", s.reg.continuation->gamma0},
                                           {"n_gamma", s.reg.continuation->n_gamma}};
  } else {
    j["regularization"]["continuation"] = nullptr;
  }
  j["newton"] = {{"max_iters", s.newton.max_iters},
                 {"abs_tol", s.newton.abs_tol},
                 {"rel_tol", s.newton.rel_tol},
                 {"tangent", s.tangent == WaveSpeedMode::Exact ? "exact" : "frozen"}};
  j["output"] = {{"dir", s.out_dir}, {"snapshot_every", s.snapshot_every}};
  return j;
}

inline nlohmann::json to_json(const ErrorReport& r) {
  return {{"L2_h", r.L2_h},           {"L2_u", r.L2_u},
          {"Linf_h", r.Linf_h},       {"Linf_u", r.Linf_u},
          {"active_pct", r.active_pct}, {"nr_per_step", r.nr_per_step},
          {"cpu_seconds", r.cpu_seconds}};
}

inline nlohmann::json summary_json(const BenchmarkSpec& spec, const ErrorReport& report,
                                   const RunResult& run) {
  nlohmann::json j;
  j["report"] = to_json(report);
  j["run"] = {{"steps", run.stats.steps},
              {"newton_iters", run.stats.newton_iters},
              {"max_iter_steps", run.stats.max_iter_steps},
              {"all_converged", run.stats.all_converged},
              {"final_time", run.state.time}};
  if (run.failure) {
    j["run"]["failure"] = {{"message", run.failure->message}, {"time", run.failure->time}};
  } else {
    j["run"]["failure"] = nullptr;
  }
  j["config"] = to_json(spec);
  return j;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path.string());
  f << j.dump(2) << '\n';
  if (!f) throw IoError("write failed: " + path.string());
}

}  // namespace bdg
