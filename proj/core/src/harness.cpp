// Copyright (c) 2026 nsmc contributors
// SPDX-License-Identifier: Apache-2.0
#include "nsmc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace nsmc {

namespace {

// Runs task(0..count-1) on up to `workers` threads. Task order is not
// deterministic but every consumer stores results by task index.
void parallel_for(int workers, std::size_t count, const std::function<void(std::size_t)>& task) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        task(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int spawn = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), count));
  pool.reserve(static_cast<std::size_t>(spawn));
  for (int w = 0; w < spawn; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Uniform point in the ball of the given radius, drawn from the stream.
Point uniform_in_ball(DirectionStream& stream, double radius) {
  const int n = stream.dimension();
  const Direction& s = stream.next();
  const double u = stream.rng().uniform();
  const double r = radius * std::pow(u, 1.0 / n);
  Point p = Point::origin(n);
  for (int i = 0; i < n; ++i) p[i] = r * s[i];
  return p;
}

}  // namespace

// --- BodySpec -------------------------------------------------------------

BodySpec BodySpec::make_sphere(double radius) { return {Kind::sphere, {radius}, std::nullopt}; }
BodySpec BodySpec::make_cube(double edge) { return {Kind::cube, {edge}, std::nullopt}; }
BodySpec BodySpec::make_ellipsoid(double axis_lo, double axis_hi) {
  return {Kind::ellipsoid, {axis_lo, axis_hi}, std::nullopt};
}
BodySpec BodySpec::make_shell(double r_in, double r_out) {
  return {Kind::shell, {r_in, r_out}, std::nullopt};
}
BodySpec BodySpec::make_density(ExtentDensity d) { return {Kind::density, {}, std::move(d)}; }

std::vector<double> BodySpec::ellipsoid_axes(int n) const {
  const double lo = params.at(0);
  const double hi = params.at(1);
  std::vector<double> axes(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    axes[static_cast<std::size_t>(i)] = n == 1 ? hi : lo + (hi - lo) * i / (n - 1.0);
  }
  return axes;
}

std::unique_ptr<Body> BodySpec::build(int n) const {
  switch (kind) {
    case Kind::sphere:
      return std::make_unique<SphereBody>(n, params.at(0));
    case Kind::cube:
      return std::make_unique<CubeBody>(n, params.at(0));
    case Kind::ellipsoid:
      return std::make_unique<EllipsoidBody>(ellipsoid_axes(n));
    case Kind::shell:
      return std::make_unique<ShellBody>(n, params.at(0), params.at(1));
    case Kind::density:
      if (!density) throw ConfigError("density body spec is missing its density");
      return std::make_unique<DensityBody>(n, *density);
  }
  throw ConfigError("unknown body kind");
}

std::optional<OracleValue> BodySpec::volume_oracle(int n) const {
  switch (kind) {
    case Kind::sphere:
      return volume_density(n, ExtentDensity::delta(params.at(0)));
    case Kind::cube:
      return volume_cube(n, params.at(0));
    case Kind::ellipsoid:
      return volume_ellipsoid(ellipsoid_axes(n));
    case Kind::shell:
      return volume_shell(n, params.at(0), params.at(1));
    case Kind::density:
      if (!density) return std::nullopt;
      return volume_density(n, *density);
  }
  return std::nullopt;
}

std::string BodySpec::tag() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::sphere: os << "sphere:" << params.at(0); break;
    case Kind::cube: os << "cube:" << params.at(0); break;
    case Kind::ellipsoid: os << "ellipsoid:" << params.at(0) << ".." << params.at(1); break;
    case Kind::shell: os << "shell:" << params.at(0) << "," << params.at(1); break;
    case Kind::density: os << (density ? density->tag() : std::string("density:?")); break;
  }
  return os.str();
}

// --- IntegrandSpec -----------------------------------------------------------

IntegrandSpec IntegrandSpec::make_gaussian() { return {Kind::gaussian, {}}; }

IntegrandSpec IntegrandSpec::make_polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) coeffs = oscillatory_cubic_coeffs();
  return {Kind::polynomial, std::move(coeffs)};
}

IntegrandSpec IntegrandSpec::make_xcoord() { return {Kind::xcoord, {}}; }

RadialIntegrand IntegrandSpec::build(int n, int nodes) const {
  RadialIntegrand ig;
  ig.dimension = n;
  ig.nodes = nodes;
  ig.label = tag();
  switch (kind) {
    case Kind::gaussian:
      ig.h = [](const Point& p) {
        double r2 = 0.0;
        for (double v : p.x) r2 += v * v;
        return std::exp(-0.5 * r2);
      };
      break;
    case Kind::polynomial: {
      std::vector<double> c = coeffs;
      ig.radial_poly = c;
      ig.h = [c](const Point& p) {
        const double r = p.norm();
        double acc = 0.0;
        for (std::size_t k = c.size(); k-- > 0;) acc = acc * r + c[k];
        return acc;
      };
      break;
    }
    case Kind::xcoord:
      ig.h = [](const Point& p) { return std::fabs(p[0]); };
      break;
  }
  return ig;
}

std::optional<OracleValue> IntegrandSpec::integral_oracle(int n, const BodySpec& domain) const {
  if (domain.kind != BodySpec::Kind::density || !domain.density) return std::nullopt;
  const ExtentDensity& d = *domain.density;
  if (d.family() != ExtentDensity::Family::uniform || d.support_lo() != 0.0) return std::nullopt;
  const double r0 = d.support_hi();
  switch (kind) {
    case Kind::gaussian: return integral_gaussian(n, r0);
    case Kind::polynomial: return integral_polynomial(n, r0, coeffs);
    case Kind::xcoord: return integral_xcoord(n, r0);
  }
  return std::nullopt;
}

std::string IntegrandSpec::tag() const {
  switch (kind) {
    case Kind::gaussian: return "gaussian";
    case Kind::polynomial: {
      std::ostringstream os;
      os << "polynomial:";
      for (std::size_t i = 0; i < coeffs.size(); ++i) os << (i ? "," : "") << coeffs[i];
      return os.str();
    }
    case Kind::xcoord: return "xcoord";
  }
  return "integrand";
}

// --- ExperimentSpec -----------------------------------------------------------

int ExperimentSpec::effective_trials() const {
  if (trials > 0) return trials;
  // Conventional defaults: 100 trials for volume sweeps, 1000 for integral
  // sweeps, 10 when the reference point is jittered inside a convex body.
  if (jitter_frac > 0.0) return 10;
  return target == Target::integral ? 1000 : 100;
}

void ExperimentSpec::validate() const {
  if (dimensions.empty()) throw ConfigError("experiment needs at least one dimension");
  for (int n : dimensions) {
    if (n < 1) throw ConfigError("dimensions must be >= 1");
  }
  if (tolerances.empty()) throw ConfigError("experiment needs at least one tolerance");
  for (double t : tolerances) {
    if (!(t > 0.0)) throw ConfigError("tolerances must be > 0");
  }
  if (trials < 0) throw ConfigError("trials must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (sample_budget < 1) throw ConfigError("sample budget must be >= 1");
  if (consecutive < 1) throw ConfigError("consecutive count must be >= 1");
  if (jitter_frac < 0.0) throw ConfigError("jitter fraction must be >= 0");
  if (recentre_pairs_per_dim < 0) throw ConfigError("recentre pairs must be >= 0");
  if (recentre_passes < 1) throw ConfigError("recentre passes must be >= 1");
  if (target == Target::integral && !integrand) {
    throw ConfigError("integral experiments need an integrand");
  }
  if ((jitter_frac > 0.0 || recentre_pairs_per_dim > 0) && !body.is_geometric()) {
    throw ConfigError("reference jitter and recentring need a geometric body");
  }
}

// --- sweep execution ------------------------------------------------------------

namespace {

struct TaskResult {
  double samples_required = 0.0;
  bool budget_exceeded = false;
};

// Jitter + optional recentring; returns the body to estimate on.
std::unique_ptr<Body> prepare_body(const ExperimentSpec& spec, const Body& base,
                                   DirectionStream& stream) {
  if (spec.jitter_frac <= 0.0 && spec.recentre_pairs_per_dim <= 0) return nullptr;
  std::unique_ptr<Body> current;
  const Body* active = &base;
  if (spec.jitter_frac > 0.0) {
    const double radius = spec.jitter_frac * base.characteristic_length();
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 100) throw ConfigError("jitter radius leaves no interior reference points");
      try {
        current = base.with_reference(uniform_in_ball(stream, radius));
        break;
      } catch (const std::domain_error&) {
        // jittered point fell outside; redraw
      }
    }
    active = current.get();
  }
  if (spec.recentre_pairs_per_dim > 0) {
    const int pairs = spec.recentre_pairs_per_dim * base.dimension();
    const Point recentred = recentre_reference(*active, stream, pairs, spec.recentre_passes);
    current = active->with_reference(recentred);
  }
  return current;
}

StoppingRule make_rule(const ExperimentSpec& spec, double tol,
                       const std::optional<OracleValue>& oracle) {
  switch (spec.stop_mode) {
    case StoppingRule::Mode::fixed_samples:
      return StoppingRule::fixed(spec.sample_budget);
    case StoppingRule::Mode::oracle_consecutive: {
      if (!oracle) {
        throw ConfigError("oracle-consecutive stopping needs a closed-form reference value");
      }
      return StoppingRule::oracle_consecutive(oracle->log_real(), tol, spec.consecutive,
                                              spec.sample_budget);
    }
    case StoppingRule::Mode::se_threshold:
      return StoppingRule::se_threshold(tol, spec.sample_budget);
  }
  throw ConfigError("unknown stopping mode");
}

std::vector<SweepRecord> run_target(const ExperimentSpec& spec) {
  spec.validate();
  const int trials = spec.effective_trials();
  const std::size_t n_dims = spec.dimensions.size();
  const std::size_t n_tols = spec.tolerances.size();
  const std::size_t task_count = n_dims * n_tols * static_cast<std::size_t>(trials);

  // Bodies and oracles are immutable and shared across tasks.
  std::vector<std::unique_ptr<Body>> bodies(n_dims);
  std::vector<std::optional<OracleValue>> oracles(n_dims);
  std::vector<RadialIntegrand> integrands(n_dims);
  for (std::size_t di = 0; di < n_dims; ++di) {
    const int n = spec.dimensions[di];
    bodies[di] = spec.body.build(n);
    if (spec.target == ExperimentSpec::Target::integral) {
      integrands[di] = spec.integrand->build(n, spec.quadrature_nodes);
      oracles[di] = spec.integrand->integral_oracle(n, spec.body);
    } else {
      oracles[di] = spec.body.volume_oracle(n);
    }
    if (spec.stop_mode == StoppingRule::Mode::oracle_consecutive && !oracles[di]) {
      throw ConfigError("no closed-form reference value for " + spec.body.tag() +
                        " at the requested dimension");
    }
  }

  std::vector<TaskResult> results(task_count);
  parallel_for(spec.workers, task_count, [&](std::size_t t) {
    const std::size_t di = t / (n_tols * static_cast<std::size_t>(trials));
    const std::size_t rest = t % (n_tols * static_cast<std::size_t>(trials));
    const std::size_t ti = rest / static_cast<std::size_t>(trials);
    const int n = spec.dimensions[di];
    const double tol = spec.tolerances[ti];

    DirectionStream stream(n, spec.seed, t);
    const Body& base = *bodies[di];
    std::unique_ptr<Body> prepared = prepare_body(spec, base, stream);
    const Body& body = prepared ? *prepared : base;

    const StoppingRule rule = make_rule(spec, tol, oracles[di]);
    Estimate est = spec.target == ExperimentSpec::Target::integral
                       ? estimate_integral(body, integrands[di], stream, rule)
                       : estimate_volume(body, stream, rule);
    results[t].samples_required = static_cast<double>(est.samples_required());
    results[t].budget_exceeded = est.stop_reason() == StopReason::budget_exceeded;
  });

  std::vector<SweepRecord> records;
  records.reserve(n_dims * n_tols);
  for (std::size_t ti = 0; ti < n_tols; ++ti) {
    for (std::size_t di = 0; di < n_dims; ++di) {
      SweepRecord rec;
      rec.dimension = spec.dimensions[di];
      rec.tolerance = spec.tolerances[ti];
      rec.trials = trials;
      rec.seed = spec.seed;
      rec.body_tag = spec.body.tag();
      rec.integrand_tag = spec.integrand ? spec.integrand->tag() : "";
      double sum = 0.0;
      for (int k = 0; k < trials; ++k) {
        const std::size_t t =
            (di * n_tols + ti) * static_cast<std::size_t>(trials) + static_cast<std::size_t>(k);
        sum += results[t].samples_required;
        rec.budget_exceeded = rec.budget_exceeded || results[t].budget_exceeded;
      }
      rec.samples = sum / trials;
      records.push_back(std::move(rec));
    }
  }
  return records;
}

}  // namespace

std::vector<SweepRecord> run_volume(const ExperimentSpec& spec) {
  if (spec.target != ExperimentSpec::Target::volume) {
    throw ConfigError("run_volume called with an integral experiment");
  }
  return run_target(spec);
}

std::vector<SweepRecord> run_integral(const ExperimentSpec& spec) {
  if (spec.target != ExperimentSpec::Target::integral) {
    throw ConfigError("run_integral called with a volume experiment");
  }
  return run_target(spec);
}

std::vector<SweepRecord> run_sweep(const ExperimentSpec& spec) {
  return spec.target == ExperimentSpec::Target::integral ? run_integral(spec) : run_volume(spec);
}

// --- single runs -------------------------------------------------------------------

RunRecord run_single(const ExperimentSpec& spec, int dimension, double tolerance) {
  ExperimentSpec one = spec;
  one.dimensions = {dimension};
  one.tolerances = {tolerance};
  one.trials = 1;
  one.validate();

  const auto t0 = std::chrono::steady_clock::now();

  std::unique_ptr<Body> base = one.body.build(dimension);
  // The prep stream id sits outside the worker range so jitter/recentring
  // draws never overlap the estimation streams of the parallel fixed path.
  const std::uint64_t prep_id =
      one.stop_mode == StoppingRule::Mode::fixed_samples && one.workers > 1
          ? 0x8000000000000000ULL
          : 0;
  DirectionStream prep_stream(dimension, one.seed, prep_id);
  std::unique_ptr<Body> prepared = prepare_body(one, *base, prep_stream);
  const Body& body = prepared ? *prepared : *base;

  std::optional<OracleValue> oracle;
  RadialIntegrand integrand;
  if (one.target == ExperimentSpec::Target::integral) {
    integrand = one.integrand->build(dimension, one.quadrature_nodes);
    oracle = one.integrand->integral_oracle(dimension, one.body);
  } else {
    oracle = one.body.volume_oracle(dimension);
  }
  const StoppingRule rule = make_rule(one, tolerance, oracle);

  Estimate est(0.0);
  const bool parallel_ok =
      one.stop_mode == StoppingRule::Mode::fixed_samples && one.workers > 1;
  if (parallel_ok) {
    est = one.target == ExperimentSpec::Target::integral
              ? estimate_integral_parallel(body, integrand, one.seed, one.workers,
                                           one.sample_budget)
              : estimate_volume_parallel(body, one.seed, one.workers, one.sample_budget);
  } else {
    est = one.target == ExperimentSpec::Target::integral
              ? estimate_integral(body, integrand, prep_stream, rule)
              : estimate_volume(body, prep_stream, rule);
  }

  const auto t1 = std::chrono::steady_clock::now();

  RunRecord rec;
  rec.dimension = dimension;
  rec.body_tag = one.body.tag();
  rec.integrand_tag = one.integrand ? one.integrand->tag() : "";
  rec.samples = est.count();
  rec.samples_required = est.samples_required();
  rec.mean = est.mean();
  rec.log_abs_mean = est.log_abs_mean();
  rec.mean_sign = est.mean_sign();
  rec.relative_std_error = est.relative_std_error();
  rec.seed = one.seed;
  rec.workers = one.workers;
  switch (one.stop_mode) {
    case StoppingRule::Mode::fixed_samples: rec.stop_mode = "fixed"; break;
    case StoppingRule::Mode::oracle_consecutive: rec.stop_mode = "oracle"; break;
    case StoppingRule::Mode::se_threshold: rec.stop_mode = "se"; break;
  }
  rec.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
  rec.budget_exceeded = est.stop_reason() == StopReason::budget_exceeded;
  rec.ill_conditioned = est.ill_conditioned();
  return rec;
}

// --- parallel fixed-budget estimation -------------------------------------------------

Estimate estimate_volume_parallel(const Body& body, std::uint64_t seed, int workers,
                                  std::uint64_t total_samples) {
  std::vector<Estimate> parts(static_cast<std::size_t>(workers), Estimate(0.0));
  const auto w = static_cast<std::uint64_t>(workers);
  parallel_for(workers, static_cast<std::size_t>(workers), [&](std::size_t k) {
    const std::uint64_t chunk = total_samples / w + (k < total_samples % w ? 1 : 0);
    if (chunk == 0) return;
    DirectionStream stream(body.dimension(), seed, k);
    parts[k] = estimate_volume(body, stream, StoppingRule::fixed(chunk));
  });
  Estimate merged = parts.front();
  for (std::size_t k = 1; k < parts.size(); ++k) merged.merge(parts[k]);
  return merged;
}

Estimate estimate_integral_parallel(const Body& body, const RadialIntegrand& integrand,
                                    std::uint64_t seed, int workers,
                                    std::uint64_t total_samples) {
  std::vector<Estimate> parts(static_cast<std::size_t>(workers), Estimate(0.0));
  const auto w = static_cast<std::uint64_t>(workers);
  parallel_for(workers, static_cast<std::size_t>(workers), [&](std::size_t k) {
    const std::uint64_t chunk = total_samples / w + (k < total_samples % w ? 1 : 0);
    if (chunk == 0) return;
    DirectionStream stream(body.dimension(), seed, k);
    parts[k] = estimate_integral(body, integrand, stream, StoppingRule::fixed(chunk));
  });
  Estimate merged = parts.front();
  for (std::size_t k = 1; k < parts.size(); ++k) merged.merge(parts[k]);
  return merged;
}

// --- output ---------------------------------------------------------------------------

void emit_csv(const std::vector<SweepRecord>& records, const std::string& path,
              const std::string& metadata_json) {
  if (records.empty()) throw std::domain_error("emit_csv: no records to write");
  std::vector<SweepRecord> sorted = records;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const SweepRecord& a, const SweepRecord& b) {
                     return a.dimension < b.dimension;
                   });
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
  for (const auto& rec : sorted) {
    out << rec.dimension << ' ' << format_double(rec.samples) << '\n';
  }
  if (!out) throw std::runtime_error("emit_csv: write failed for " + path);
  out.close();

  std::ofstream meta(path + ".meta.json", std::ios::binary);
  if (!meta) throw std::runtime_error("emit_csv: cannot open metadata sidecar for " + path);
  meta << (metadata_json.empty() ? "{}" : metadata_json) << '\n';
  if (!meta) throw std::runtime_error("emit_csv: metadata write failed for " + path);
}

std::vector<TheoryRecord> theory_table(const ExtentDensity& density,
                                       const std::vector<int>& dimensions, double tol) {
  if (!(tol > 0.0)) throw std::domain_error("theory_table: tol must be > 0");
  std::vector<TheoryRecord> out;
  out.reserve(dimensions.size());
  const auto bounds = density_bounds(density);
  for (int n : dimensions) {
    TheoryRecord rec;
    rec.dimension = n;
    const double ratio = moment_ratio(density, n);
    rec.predicted_samples = ratio * ratio / (tol * tol);
    if (bounds) {
      const auto b = sample_count_bound(*bounds, n, tol);
      rec.bound_available = true;
      rec.bound = b.bound;
      rec.bound_valid = b.asymptotic_regime;
    }
    out.push_back(rec);
  }
  return out;
}

}  // namespace nsmc
