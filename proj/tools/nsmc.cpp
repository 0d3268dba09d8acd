// Copyright (c) 2026 nsmc contributors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: volume/integral estimation, samples-vs-dimension
// benchmark sweeps, reference recentring, closed-form oracles and theory
// tables. Exits 0 on success, 2 on configuration errors, 3 when a sample
// budget ran out before the stopping rule was satisfied.
#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <iostream>
#include <optional>
#include <string>

#include "nsmc/config.hpp"
#include "nsmc/harness.hpp"
#include "nsmc/version.hpp"

namespace {

using nlohmann::json;
using namespace nsmc;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;

std::string short_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Options shared by the estimation-style subcommands; only flags the user
// actually passed override values loaded from --spec.
struct ExperimentFlags {
  std::string spec_path;
  std::string target_text;
  std::string body_text;
  std::string density_text;
  std::string integrand_text;
  std::string dims_text;
  std::string tols_text;
  std::string stop_text;
  int trials = 0;
  int consecutive = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  int workers = 0;
  double jitter_frac = -1.0;
  int recentre = -1;
  int passes = 0;
  int nodes = -1;

  CLI::Option* spec_opt = nullptr;

  void add_to(CLI::App* cmd, bool with_integrand) {
    spec_opt = cmd->add_option("--spec", spec_path, "JSON experiment spec (flags override)");
    cmd->add_option("--body", body_text, "body, e.g. cube:1.0, sphere:0.7, ellipsoid:0.5..1.0, shell:0.5,1.0");
    cmd->add_option("--density", density_text,
                    "extent density body, e.g. uniform:0,1, beta:2,2, arcsine, delta:0.7");
    if (with_integrand) {
      cmd->add_option("--integrand", integrand_text,
                      "integrand: gaussian, polynomial[:c0,c1,...], xcoord");
    }
    cmd->add_option("--dim", dims_text, "dimensions: 10 | 5,20,50 | 10..100:10");
    cmd->add_option("--tol", tols_text, "relative tolerance(s), comma separated");
    cmd->add_option("--stop", stop_text, "stopping rule: fixed, oracle, se");
    cmd->add_option("--trials", trials, "trials per (dimension, tolerance)");
    cmd->add_option("--consecutive", consecutive, "in-tolerance streak K for oracle stopping");
    cmd->add_option("--samples", samples, "sample count (fixed mode) or budget cap");
    cmd->add_option("--seed", seed, "base random seed");
    cmd->add_option("--workers", workers, "worker thread count");
    cmd->add_option("--jitter-frac", jitter_frac,
                    "reference jitter radius as a fraction of the body scale");
    cmd->add_option("--recentre", recentre, "recentring pairs per dimension (0 = off)");
    cmd->add_option("--passes", passes, "recentring passes");
    cmd->add_option("--nodes", nodes, "radial quadrature nodes (0 = default)");
  }

  ExperimentSpec to_spec(CLI::App* cmd, ExperimentSpec::Target default_target) const {
    ExperimentSpec spec;
    if (spec_opt->count() > 0) spec = load_experiment_spec(spec_path);
    else spec.target = default_target;

    auto set_if = [cmd](const char* name, auto fn) {
      if (cmd->count(name) > 0) fn();
    };
    set_if("--body", [&] { spec.body = parse_body(body_text); });
    set_if("--density", [&] { spec.body = BodySpec::make_density(parse_density(density_text)); });
    if (cmd->get_option_no_throw("--integrand") != nullptr) {
      set_if("--integrand", [&] { spec.integrand = parse_integrand(integrand_text); });
    }
    set_if("--dim", [&] { spec.dimensions = parse_dimensions(dims_text); });
    set_if("--tol", [&] { spec.tolerances = parse_double_list(tols_text); });
    set_if("--stop", [&] { spec.stop_mode = parse_stop_mode(stop_text); });
    set_if("--trials", [&] { spec.trials = trials; });
    set_if("--consecutive", [&] { spec.consecutive = consecutive; });
    set_if("--samples", [&] { spec.sample_budget = samples; });
    set_if("--seed", [&] { spec.seed = seed; });
    set_if("--workers", [&] { spec.workers = workers; });
    set_if("--jitter-frac", [&] { spec.jitter_frac = jitter_frac; });
    set_if("--recentre", [&] { spec.recentre_pairs_per_dim = recentre; });
    set_if("--passes", [&] { spec.recentre_passes = passes; });
    set_if("--nodes", [&] { spec.quadrature_nodes = nodes; });
    if (spec.tolerances.empty()) spec.tolerances = {0.1};
    return spec;
  }
};

json run_record_json(const RunRecord& rec) {
  json j;
  j["dimension"] = rec.dimension;
  j["body"] = rec.body_tag;
  if (!rec.integrand_tag.empty()) j["integrand"] = rec.integrand_tag;
  j["samples"] = rec.samples;
  j["samples_required"] = rec.samples_required;
  j["mean"] = rec.mean;
  j["log_abs_mean"] = rec.log_abs_mean;
  j["mean_sign"] = rec.mean_sign;
  j["relative_std_error"] = rec.relative_std_error;
  j["seed"] = rec.seed;
  j["workers"] = rec.workers;
  j["stop"] = rec.stop_mode;
  j["wall_seconds"] = rec.wall_seconds;
  j["budget_exceeded"] = rec.budget_exceeded;
  if (rec.ill_conditioned) j["ill_conditioned"] = true;
  return j;
}

int run_estimation_command(CLI::App* cmd, const ExperimentFlags& flags,
                           ExperimentSpec::Target target, const std::string& format) {
  ExperimentSpec spec = flags.to_spec(cmd, target);
  spec.target = target;
  spec.validate();
  bool budget_hit = false;
  for (int dim : spec.dimensions) {
    const RunRecord rec = run_single(spec, dim, spec.tolerances.front());
    budget_hit = budget_hit || rec.budget_exceeded;
    if (format == "csv") {
      std::cout << rec.dimension << ' ' << rec.samples << ' ' << short_double(rec.mean) << ' '
                << short_double(rec.relative_std_error) << '\n';
    } else {
      std::cout << run_record_json(rec).dump(2) << '\n';
    }
  }
  return budget_hit ? kExitBudget : kExitOk;
}

// volume-uniform-0.1.dat style: stem + "-" + tol, keeping the extension.
std::string sweep_output_path(const std::string& base, double tol, bool lone_tolerance) {
  if (lone_tolerance) return base;
  const auto dot = base.rfind('.');
  const std::string stem = dot == std::string::npos ? base : base.substr(0, dot);
  const std::string ext = dot == std::string::npos ? "" : base.substr(dot);
  return stem + "-" + short_double(tol) + ext;
}

int run_bench(CLI::App* cmd, const ExperimentFlags& flags, const std::string& target_text,
              const std::string& out_path) {
  ExperimentSpec spec = flags.to_spec(cmd, ExperimentSpec::Target::volume);
  if (cmd->count("--target") > 0) {
    if (target_text == "volume") {
      spec.target = ExperimentSpec::Target::volume;
    } else if (target_text == "integral") {
      spec.target = ExperimentSpec::Target::integral;
    } else {
      throw ConfigError("unknown target: '" + target_text + "'");
    }
  } else if (spec.integrand && cmd->count("--integrand") > 0) {
    spec.target = ExperimentSpec::Target::integral;
  }
  spec.validate();

  const auto t0 = std::chrono::steady_clock::now();
  const auto records = run_sweep(spec);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  bool budget_hit = false;
  for (double tol : spec.tolerances) {
    std::vector<SweepRecord> group;
    for (const auto& rec : records) {
      if (rec.tolerance == tol) {
        group.push_back(rec);
        budget_hit = budget_hit || rec.budget_exceeded;
      }
    }
    const std::string path = sweep_output_path(out_path, tol, spec.tolerances.size() == 1);
    emit_csv(group, path, experiment_spec_to_json(spec, wall));
    std::cout << "wrote " << path << " (" << group.size() << " records, tol " << short_double(tol)
              << ")\n";
  }
  return budget_hit ? kExitBudget : kExitOk;
}

int run_center(const std::string& body_text, int dim, double jitter_frac, int pairs_per_dim,
               int passes, std::uint64_t seed) {
  const BodySpec body_spec = parse_body(body_text);
  if (!body_spec.is_geometric()) throw ConfigError("recentring needs a geometric body");
  std::unique_ptr<Body> body = body_spec.build(dim);
  DirectionStream stream(dim, seed, 0);

  std::unique_ptr<Body> jittered;
  if (jitter_frac > 0.0) {
    const double radius = jitter_frac * body->characteristic_length();
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 100) throw ConfigError("jitter radius leaves no interior points");
      Point p = Point::origin(dim);
      const Direction& s = stream.next();
      const double r = radius * std::pow(stream.rng().uniform(), 1.0 / dim);
      for (int i = 0; i < dim; ++i) p[i] = r * s[i];
      try {
        jittered = body->with_reference(p);
        break;
      } catch (const std::domain_error&) {
      }
    }
  }
  const Body& start = jittered ? *jittered : *body;
  const Point before = start.reference();
  const Point after = recentre_reference(start, stream, pairs_per_dim * dim, passes);

  json j;
  j["body"] = body_spec.tag();
  j["dimension"] = dim;
  j["pairs"] = pairs_per_dim * dim;
  j["passes"] = passes;
  j["seed"] = seed;
  j["before"] = before.x;
  j["after"] = after.x;
  j["offset_before"] = before.norm();
  j["offset_after"] = after.norm();
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

int run_oracle(CLI::App* cmd, const std::string& body_text, const std::string& density_text,
               const std::string& integrand_text, int dim) {
  std::optional<OracleValue> value;
  BodySpec domain = BodySpec::make_density(ExtentDensity::uniform(0.0, 1.0));
  if (cmd->count("--body") > 0) domain = parse_body(body_text);
  if (cmd->count("--density") > 0) domain = BodySpec::make_density(parse_density(density_text));
  if (cmd->count("--integrand") > 0) {
    value = parse_integrand(integrand_text).integral_oracle(dim, domain);
    if (!value) {
      throw ConfigError("integral oracles need a uniform:0,r0 extent density domain");
    }
  } else {
    value = domain.volume_oracle(dim);
    if (!value) throw ConfigError("no closed-form volume for " + domain.tag());
  }
  json j;
  j["dimension"] = dim;
  j["domain"] = domain.tag();
  j["value"] = value->value;
  j["log_value"] = value->log_value;
  j["sign"] = value->sign;
  j["formula_tag"] = value->formula_tag;
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

int run_theory(const std::string& density_text, const std::string& dims_text, double tol,
               const std::string& format) {
  const ExtentDensity density = parse_density(density_text);
  const auto records = theory_table(density, parse_dimensions(dims_text), tol);
  if (format == "csv") {
    std::cout << "dimension predicted_samples bound bound_valid\n";
    for (const auto& rec : records) {
      std::cout << rec.dimension << ' ' << short_double(rec.predicted_samples) << ' '
                << (rec.bound_available ? short_double(rec.bound) : "n/a") << ' '
                << (rec.bound_available && rec.bound_valid ? "1" : "0") << '\n';
    }
  } else {
    json arr = json::array();
    for (const auto& rec : records) {
      json j;
      j["dimension"] = rec.dimension;
      j["predicted_samples"] = rec.predicted_samples;
      if (rec.bound_available) {
        j["bound"] = rec.bound;
        j["bound_valid"] = rec.bound_valid;
      }
      arr.push_back(j);
    }
    std::cout << arr.dump(2) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"n-sphere Monte Carlo estimation of high-dimensional volumes and integrals"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // volume
  auto* volume = app.add_subcommand("volume", "estimate a volume");
  ExperimentFlags volume_flags;
  volume_flags.add_to(volume, false);
  std::string volume_format = "json";
  volume->add_option("--format", volume_format, "output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  // integrate
  auto* integrate = app.add_subcommand("integrate", "estimate an integral over a domain");
  ExperimentFlags integrate_flags;
  integrate_flags.add_to(integrate, true);
  std::string integrate_format = "json";
  integrate->add_option("--format", integrate_format, "output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  // bench
  auto* bench = app.add_subcommand("bench", "samples-vs-dimension sweep, emits data files");
  ExperimentFlags bench_flags;
  bench_flags.add_to(bench, true);
  std::string bench_target = "volume";
  std::string bench_out = "sweep.dat";
  bench->add_option("--target", bench_target, "volume or integral");
  bench->add_option("--out", bench_out, "output data file (per-tolerance suffix when several)");

  // center
  auto* center = app.add_subcommand("center", "recentre a reference point inside a body");
  std::string center_body = "cube:1.0";
  int center_dim = 10;
  double center_jitter = 0.0;
  int center_pairs = 4;
  int center_passes = 1;
  std::uint64_t center_seed = 1;
  center->add_option("--body", center_body, "geometric body");
  center->add_option("--dim", center_dim, "dimension");
  center->add_option("--jitter-frac", center_jitter, "initial jitter radius fraction");
  center->add_option("--pairs-per-dim", center_pairs, "antithetic pairs per dimension");
  center->add_option("--passes", center_passes, "recentring passes");
  center->add_option("--seed", center_seed, "random seed");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "print a closed-form reference value");
  std::string oracle_body, oracle_density, oracle_integrand;
  int oracle_dim = 2;
  oracle->add_option("--body", oracle_body, "geometric body");
  oracle->add_option("--density", oracle_density, "extent density domain");
  oracle->add_option("--integrand", oracle_integrand, "integrand (switches to integral oracles)");
  oracle->add_option("--dim", oracle_dim, "dimension");

  // theory
  auto* theory = app.add_subcommand("theory", "predicted sample counts and envelope bounds");
  std::string theory_density = "uniform:0,1";
  std::string theory_dims = "10..100:10";
  double theory_tol = 0.1;
  std::string theory_format = "csv";
  theory->add_option("--density", theory_density, "extent density");
  theory->add_option("--dim", theory_dims, "dimensions");
  theory->add_option("--tol", theory_tol, "relative tolerance");
  theory->add_option("--format", theory_format, "output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (volume->parsed()) {
      return run_estimation_command(volume, volume_flags, ExperimentSpec::Target::volume,
                                    volume_format);
    }
    if (integrate->parsed()) {
      return run_estimation_command(integrate, integrate_flags, ExperimentSpec::Target::integral,
                                    integrate_format);
    }
    if (bench->parsed()) return run_bench(bench, bench_flags, bench_target, bench_out);
    if (center->parsed()) {
      return run_center(center_body, center_dim, center_jitter, center_pairs, center_passes,
                        center_seed);
    }
    if (oracle->parsed()) {
      return run_oracle(oracle, oracle_body, oracle_density, oracle_integrand, oracle_dim);
    }
    if (theory->parsed()) return run_theory(theory_density, theory_dims, theory_tol, theory_format);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
