#pragma once

#include "benchmarks.hpp"
#include "constitutive.hpp"
#include "error_norms.hpp"
#include "fluxes.hpp"
#include "newton.hpp"
#include "problem.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bdg {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownBenchmarkError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// One fully specified run.
struct BenchmarkSpec {
  BenchmarkName name = BenchmarkName::DamBreak;
  InclineGeometry incline;
  DamBreakGeometry dam;
  FieldOrders orders;
  std::size_t n_el = 100;
  double dt = 1e-5;
  double t_final = 0.05;
  PhysicalParams params;
  RegularizationConfig reg;
  NewtonConfig newton;
  WaveSpeedMode tangent = WaveSpeedMode::Exact;
  std::string out_dir = "out";
  std::size_t snapshot_every = 0;  // 0: initial and final snapshots only

  void validate() const {
    if (n_el < 1) throw ConfigError("n_el must be >= 1");
    if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
    if (!(t_final >= 0.0)) throw ConfigError("t_final must be >= 0");
    try {
      params.validate();
      reg.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (name == BenchmarkName::DamBreak) {
      if (!(dam.h1 > dam.h2) || !(dam.h2 > 0.0)) throw ConfigError("dam break needs h1 > h2 > 0");
      if (!(dam.wall > 0.0) || !(dam.wall < dam.length)) {
        throw ConfigError("dam wall must lie inside the channel");
      }
    } else {
      if (!(incline.length > 0.0)) throw ConfigError("length must be > 0");
    }
  }
};

/// Reference parameters of each benchmark.
inline BenchmarkSpec default_spec(BenchmarkName name) {
  BenchmarkSpec s;
  s.name = name;
  switch (name) {
    case BenchmarkName::ConstantFreeSurface:
      s.orders = {1, 1, 1, 1};
      s.dt = 1e-2;
      s.t_final = 1.0;
      s.params.eta = 0.0;
      s.params.sigma0 = 0.0;
      s.reg.gamma = 1e3;
      s.reg.beta = 1e3;
      break;
    case BenchmarkName::ParallelFreeSurface:
      s.orders = {1, 1, 1, 1};
      s.dt = 1e-6;
      s.t_final = 1e-3;
      s.params.eta = 1.0;
      s.params.sigma0 = 9.035;
      s.reg.gamma = 1e4;
      s.reg.beta = 1e3;
      break;
    case BenchmarkName::DamBreak:
      s.orders = {1, 1, 1, 0};
      s.dt = 1e-5;
      s.t_final = 0.05;
      s.params.eta = 0.02;
      s.params.sigma0 = 0.2;
      s.reg.gamma = 1e2;
      s.reg.beta = 1e2;
      break;
  }
  s.newton.dt = s.dt;
  return s;
}

namespace detail {

inline std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("bad number for " + key + ": '" + v + "'");
  }
}

inline std::size_t parse_size(const std::string& key, const std::string& v) {
  const double d = parse_double(key, v);
  if (d < 0.0 || d != static_cast<double>(static_cast<std::size_t>(d))) {
    throw ConfigError("bad non-negative integer for " + key + ": '" + v + "'");
  }
  return static_cast<std::size_t>(d);
}

inline FieldOrders parse_orders(const std::string& v) {
  const auto parts = split_csv(v);
  if (parts.size() != 4) throw ConfigError("orders must be m0,m1,m2,m3, got '" + v + "'");
  FieldOrders o{parse_size("orders", parts[0]), parse_size("orders", parts[1]),
                parse_size("orders", parts[2]), parse_size("orders", parts[3])};
  return o;
}

inline std::optional<ContinuationSchedule> parse_continuation(const std::string& v) {
  if (v.empty() || v == "none" || v == "off") return std::nullopt;
  const auto parts = split_csv(v);
  if (parts.size() != 2) throw ConfigError("continuation must be g0,ngamma, got '" + v + "'");
  return ContinuationSchedule{parse_double("continuation", parts[0]),
                              parse_size("continuation", parts[1])};
}

inline Regularization parse_variant(const std::string& v) {
  if (v == "1") return Regularization::Reg1;
  if (v == "2") return Regularization::Reg2;
  if (v == "3") return Regularization::Reg3;
  throw ConfigError("regularization variant must be 1, 2 or 3, got '" + v + "'");
}

inline WaveSpeedMode parse_tangent(const std::string& v) {
  if (v == "exact") return WaveSpeedMode::Exact;
  if (v == "frozen") return WaveSpeedMode::Frozen;
  throw ConfigError("tangent must be exact or frozen, got '" + v + "'");
}

}  // namespace detail

using ConfigTree = boost::property_tree::ptree;

inline const std::set<std::string>& known_config_keys() {
  static const std::set<std::string> keys = {
      "benchmark.name",         "benchmark.n_el",          "benchmark.dt",
      "benchmark.t_final",      "benchmark.orders",        "geometry.length",
      "geometry.alpha",         "geometry.h0",             "geometry.wall",
      "geometry.h1",            "geometry.h2",             "physics.rho",
      "physics.g",              "physics.eta",             "physics.sigma0",
      "regularization.variant", "regularization.gamma",    "regularization.beta",
      "regularization.continuation",                       "newton.max_iters",
      "newton.abs_tol",         "newton.rel_tol",          "newton.tangent",
      "output.dir",             "output.snapshot_every"};
  return keys;
}

inline ConfigTree read_config_file(const std::filesystem::path& path) {
  ConfigTree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("cannot read config '" + path.string() + "': " + e.message());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("config key outside a section: " + section);
    for (const auto& [key, _] : body) {
      const std::string full = section + "." + key;
      if (!known_config_keys().contains(full)) throw ConfigError("unknown config key: " + full);
    }
  }
  return tree;
}

/// Defaults of the named benchmark, then every key present in `tree`.
inline BenchmarkSpec spec_from_tree(const ConfigTree& tree) {
  const auto name_str = tree.get_optional<std::string>("benchmark.name");
  if (!name_str) throw ConfigError("no benchmark given");
  const auto name = parse_benchmark(*name_str);
  if (!name) throw UnknownBenchmarkError("unknown benchmark: " + *name_str);
  BenchmarkSpec s = default_spec(*name);

  const auto get = [&](const std::string& key) { return tree.get_optional<std::string>(key); };
  const auto num = [&](const std::string& key, double& into) {
    if (auto v = get(key)) into = detail::parse_double(key, *v);
  };
  const auto count = [&](const std::string& key, std::size_t& into) {
    if (auto v = get(key)) into = detail::parse_size(key, *v);
  };

  count("benchmark.n_el", s.n_el);
  num("benchmark.dt", s.dt);
  num("benchmark.t_final", s.t_final);
  if (auto v = get("benchmark.orders")) s.orders = detail::parse_orders(*v);

  if (s.name == BenchmarkName::DamBreak) {
    num("geometry.length", s.dam.length);
    num("geometry.wall", s.dam.wall);
    num("geometry.h1", s.dam.h1);
    num("geometry.h2", s.dam.h2);
    for (const char* k : {"geometry.alpha", "geometry.h0"}) {
      if (get(k)) throw ConfigError(std::string(k) + " does not apply to dam-break");
    }
  } else {
    num("geometry.length", s.incline.length);
    num("geometry.alpha", s.incline.alpha);
    num("geometry.h0", s.incline.h0);
    for (const char* k : {"geometry.wall", "geometry.h1", "geometry.h2"}) {
      if (get(k)) throw ConfigError(std::string(k) + " applies to dam-break only");
    }
  }

  num("physics.rho", s.params.rho);
  num("physics.g", s.params.g);
  num("physics.eta", s.params.eta);
  num("physics.sigma0", s.params.sigma0);

  if (auto v = get("regularization.variant")) s.reg.variant = detail::parse_variant(*v);
  num("regularization.gamma", s.reg.gamma);
  num("regularization.beta", s.reg.beta);
  if (auto v = get("regularization.continuation")) {
    s.reg.continuation = detail::parse_continuation(*v);
  }

  count("newton.max_iters", s.newton.max_iters);
  num("newton.abs_tol", s.newton.abs_tol);
  num("newton.rel_tol", s.newton.rel_tol);
  if (auto v = get("newton.tangent")) s.tangent = detail::parse_tangent(*v);

  if (auto v = get("output.dir")) s.out_dir = *v;
  count("output.snapshot_every", s.snapshot_every);

  s.newton.dt = s.dt;
  s.validate();
  try {
    s.newton.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return s;
}

inline Benchmark build_benchmark(const BenchmarkSpec& s) {
  Benchmark b = [&] {
    switch (s.name) {
      case BenchmarkName::ConstantFreeSurface:
        return setup_constant_free_surface(s.n_el, s.orders, s.params, s.reg, s.incline);
      case BenchmarkName::ParallelFreeSurface:
        return setup_parallel_free_surface(s.n_el, s.orders, s.params, s.reg, s.incline);
      case BenchmarkName::DamBreak:
        return setup_dam_break(s.n_el, s.orders, s.params, s.reg, s.dam);
    }
    throw UnknownBenchmarkError("unknown benchmark");
  }();
  b.setup.tangent_mode = s.tangent;
  return b;
}

/// Closed-form reference of the benchmark at time t (the lake-at-rest tests
/// use the discrete bottom so that an exact equilibrium has zero error).
inline ReferenceFn reference_for(const BenchmarkSpec& s, const ProblemSetup& setup, double t) {
  switch (s.name) {
    case BenchmarkName::ConstantFreeSurface: {
      const double level = s.incline.h0 / std::cos(s.incline.alpha);
      const double slope = std::tan(s.incline.alpha);
      return [level, slope, &setup](double x) {
        return PrimitivePair{level - x * slope - bottom_at(setup, x), 0.0};
      };
    }
    case BenchmarkName::ParallelFreeSurface: {
      const double h0 = s.incline.h0;
      return [h0, &setup](double x) { return PrimitivePair{h0 - bottom_at(setup, x), 0.0}; };
    }
    case BenchmarkName::DamBreak: {
      const DamBreakGeometry d = s.dam;
      const double g = s.params.g;
      if (!(t > 0.0)) {
        return [d](double x) { return PrimitivePair{x < d.wall ? d.h1 : d.h2, 0.0}; };
      }
      return [d, g, t](double x) { return stoker_solution(x, t, d.h1, d.h2, g, d.wall); };
    }
  }
  throw UnknownBenchmarkError("unknown benchmark");
}

}  // namespace bdg
