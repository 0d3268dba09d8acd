// Copyright (c) 2026 nsmc contributors
// SPDX-License-Identifier: Apache-2.0
#include "nsmc/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nsmc/version.hpp"

namespace nsmc {

namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& text, char delim) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, delim)) parts.push_back(item);
  return parts;
}

double to_double(const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw ConfigError("trailing characters in number: " + text);
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + text + "'");
  }
}

long long to_int(const std::string& text) {
  long long v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ConfigError("not an integer: '" + text + "'");
  }
  return v;
}

// "name" or "name:args"; returns {name, args}.
std::pair<std::string, std::string> split_head(const std::string& text) {
  const auto pos = text.find(':');
  if (pos == std::string::npos) return {text, ""};
  return {text.substr(0, pos), text.substr(pos + 1)};
}

}  // namespace

std::vector<int> parse_dimensions(const std::string& text) {
  if (text.empty()) throw ConfigError("empty dimension list");
  std::vector<int> dims;
  if (const auto range_pos = text.find(".."); range_pos != std::string::npos) {
    const std::string lo_s = text.substr(0, range_pos);
    std::string rest = text.substr(range_pos + 2);
    long long step = 1;
    if (const auto step_pos = rest.find(':'); step_pos != std::string::npos) {
      step = to_int(rest.substr(step_pos + 1));
      rest = rest.substr(0, step_pos);
    }
    const long long lo = to_int(lo_s);
    const long long hi = to_int(rest);
    if (step < 1 || hi < lo) throw ConfigError("bad dimension range: " + text);
    for (long long n = lo; n <= hi; n += step) dims.push_back(static_cast<int>(n));
  } else {
    for (const auto& part : split(text, ',')) dims.push_back(static_cast<int>(to_int(part)));
  }
  for (int n : dims) {
    if (n < 1) throw ConfigError("dimensions must be >= 1");
  }
  return dims;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> vals;
  for (const auto& part : split(text, ',')) vals.push_back(to_double(part));
  if (vals.empty()) throw ConfigError("empty number list");
  return vals;
}

ExtentDensity parse_density(const std::string& text) {
  const auto [name, args] = split_head(text);
  try {
    if (name == "delta") return ExtentDensity::delta(to_double(args));
    if (name == "uniform") {
      const auto v = parse_double_list(args);
      if (v.size() != 2) throw ConfigError("uniform density needs two parameters");
      return ExtentDensity::uniform(v[0], v[1]);
    }
    if (name == "beta") {
      const auto v = parse_double_list(args);
      if (v.size() != 2) throw ConfigError("beta density needs two parameters");
      return ExtentDensity::beta(v[0], v[1]);
    }
    if (name == "arcsine") return ExtentDensity::arcsine();
    if (name == "polynomial") return ExtentDensity::polynomial(to_double(args));
    if (name == "uquadratic") return ExtentDensity::u_quadratic();
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("invalid density parameters: ") + e.what());
  }
  throw ConfigError("unknown density family: '" + name + "'");
}

BodySpec parse_body(const std::string& text) {
  const auto [name, args] = split_head(text);
  try {
    if (name == "sphere") return BodySpec::make_sphere(to_double(args));
    if (name == "cube") return BodySpec::make_cube(to_double(args));
    if (name == "ellipsoid") {
      const auto pos = args.find("..");
      if (pos == std::string::npos) {
        throw ConfigError("ellipsoid expects an axis range, e.g. ellipsoid:0.5..1.0");
      }
      return BodySpec::make_ellipsoid(to_double(args.substr(0, pos)),
                                      to_double(args.substr(pos + 2)));
    }
    if (name == "shell") {
      const auto v = parse_double_list(args);
      if (v.size() != 2) throw ConfigError("shell needs two radii");
      return BodySpec::make_shell(v[0], v[1]);
    }
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("invalid body parameters: ") + e.what());
  }
  return BodySpec::make_density(parse_density(text));
}

IntegrandSpec parse_integrand(const std::string& text) {
  const auto [name, args] = split_head(text);
  if (name == "gaussian") return IntegrandSpec::make_gaussian();
  if (name == "xcoord") return IntegrandSpec::make_xcoord();
  if (name == "polynomial") {
    if (args.empty()) return IntegrandSpec::make_polynomial();
    return IntegrandSpec::make_polynomial(parse_double_list(args));
  }
  throw ConfigError("unknown integrand: '" + name + "'");
}

StoppingRule::Mode parse_stop_mode(const std::string& text) {
  if (text == "fixed") return StoppingRule::Mode::fixed_samples;
  if (text == "oracle") return StoppingRule::Mode::oracle_consecutive;
  if (text == "se") return StoppingRule::Mode::se_threshold;
  throw ConfigError("unknown stop mode: '" + text + "' (expected fixed, oracle or se)");
}

std::string stop_mode_name(StoppingRule::Mode mode) {
  switch (mode) {
    case StoppingRule::Mode::fixed_samples: return "fixed";
    case StoppingRule::Mode::oracle_consecutive: return "oracle";
    case StoppingRule::Mode::se_threshold: return "se";
  }
  return "?";
}

std::string experiment_spec_to_json(const ExperimentSpec& spec, double wall_seconds) {
  json j;
  j["target"] = spec.target == ExperimentSpec::Target::integral ? "integral" : "volume";
  j["body"] = spec.body.tag();
  if (spec.integrand) j["integrand"] = spec.integrand->tag();
  j["dimensions"] = spec.dimensions;
  j["tolerances"] = spec.tolerances;
  j["trials"] = spec.effective_trials();
  j["stop"] = stop_mode_name(spec.stop_mode);
  j["consecutive"] = spec.consecutive;
  j["samples"] = spec.sample_budget;
  j["seed"] = spec.seed;
  j["workers"] = spec.workers;
  j["jitter_frac"] = spec.jitter_frac;
  j["recentre_pairs_per_dim"] = spec.recentre_pairs_per_dim;
  j["recentre_passes"] = spec.recentre_passes;
  j["quadrature_nodes"] = spec.quadrature_nodes;
  j["tool_version"] = std::string(kVersion);
  if (wall_seconds >= 0.0) j["wall_seconds"] = wall_seconds;
  return j.dump(2);
}

ExperimentSpec experiment_spec_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON spec: ") + e.what());
  }
  ExperimentSpec spec;
  try {
    if (j.contains("target")) {
      const std::string t = j["target"];
      if (t == "integral") {
        spec.target = ExperimentSpec::Target::integral;
      } else if (t == "volume") {
        spec.target = ExperimentSpec::Target::volume;
      } else {
        throw ConfigError("unknown target: '" + t + "'");
      }
    }
    if (j.contains("body")) spec.body = parse_body(j["body"]);
    if (j.contains("density")) spec.body = BodySpec::make_density(parse_density(j["density"]));
    if (j.contains("integrand")) spec.integrand = parse_integrand(j["integrand"]);
    if (j.contains("dimensions")) {
      if (j["dimensions"].is_string()) {
        spec.dimensions = parse_dimensions(j["dimensions"]);
      } else {
        spec.dimensions = j["dimensions"].get<std::vector<int>>();
      }
    }
    if (j.contains("tolerances")) {
      if (j["tolerances"].is_string()) {
        spec.tolerances = parse_double_list(j["tolerances"]);
      } else {
        spec.tolerances = j["tolerances"].get<std::vector<double>>();
      }
    }
    if (j.contains("trials")) spec.trials = j["trials"];
    if (j.contains("stop")) spec.stop_mode = parse_stop_mode(j["stop"]);
    if (j.contains("consecutive")) spec.consecutive = j["consecutive"];
    if (j.contains("samples")) spec.sample_budget = j["samples"];
    if (j.contains("seed")) spec.seed = j["seed"];
    if (j.contains("workers")) spec.workers = j["workers"];
    if (j.contains("jitter_frac")) spec.jitter_frac = j["jitter_frac"];
    if (j.contains("recentre_pairs_per_dim")) spec.recentre_pairs_per_dim = j["recentre_pairs_per_dim"];
    if (j.contains("recentre_passes")) spec.recentre_passes = j["recentre_passes"];
    if (j.contains("quadrature_nodes")) spec.quadrature_nodes = j["quadrature_nodes"];
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid field in JSON spec: ") + e.what());
  }
  return spec;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open spec file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return experiment_spec_from_json(buf.str());
}

}  // namespace nsmc
