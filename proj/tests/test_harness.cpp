// Copyright (c) 2026 nsmc contributors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nsmc/config.hpp"
#include "nsmc/harness.hpp"
#include "test_util.hpp"

using namespace nsmc;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempFile {
  std::string path;
  explicit TempFile(std::string p) : path(std::move(p)) {}
  ~TempFile() {
    std::remove(path.c_str());
    std::remove((path + ".meta.json").c_str());
  }
};

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("dimension grammar") {
    CHECK(parse_dimensions("7") == std::vector<int>{7});
    CHECK(parse_dimensions("5,20,50") == std::vector<int>{5, 20, 50});
    CHECK(parse_dimensions("10..40:10") == std::vector<int>{10, 20, 30, 40});
    CHECK(parse_dimensions("3..5") == std::vector<int>{3, 4, 5});
    CHECK_THROWS_AS(parse_dimensions("10..5"), ConfigError);
    CHECK_THROWS_AS(parse_dimensions("abc"), ConfigError);
    CHECK_THROWS_AS(parse_dimensions("0"), ConfigError);
  }
  SUBCASE("density grammar") {
    CHECK(parse_density("uniform:0,1").family() == ExtentDensity::Family::uniform);
    CHECK(parse_density("beta:2,2").family() == ExtentDensity::Family::beta);
    CHECK(parse_density("arcsine").family() == ExtentDensity::Family::arcsine);
    CHECK(parse_density("delta:0.7").param(0) == 0.7);
    CHECK(parse_density("polynomial:3").param(0) == 3.0);
    CHECK(parse_density("uquadratic").family() == ExtentDensity::Family::u_quadratic);
    CHECK_THROWS_AS(parse_density("uniform:1"), ConfigError);
    CHECK_THROWS_AS(parse_density("cauchy:1"), ConfigError);
    CHECK_THROWS_AS(parse_density("beta:-1,2"), ConfigError);
  }
  SUBCASE("body grammar") {
    CHECK(parse_body("cube:1.0").kind == BodySpec::Kind::cube);
    CHECK(parse_body("sphere:0.7").params.at(0) == 0.7);
    const auto ell = parse_body("ellipsoid:0.5..1.0");
    CHECK(ell.kind == BodySpec::Kind::ellipsoid);
    CHECK(ell.ellipsoid_axes(3) == std::vector<double>{0.5, 0.75, 1.0});
    CHECK(parse_body("shell:0.5,1.0").kind == BodySpec::Kind::shell);
    CHECK(parse_body("uniform:0,1").kind == BodySpec::Kind::density);
    CHECK_THROWS_AS(parse_body("ellipsoid:0.5"), ConfigError);
    CHECK_THROWS_AS(parse_body("dodecahedron:1"), ConfigError);
  }
  SUBCASE("integrand grammar") {
    CHECK(parse_integrand("gaussian").kind == IntegrandSpec::Kind::gaussian);
    CHECK(parse_integrand("xcoord").kind == IntegrandSpec::Kind::xcoord);
    CHECK(parse_integrand("polynomial").coeffs == oscillatory_cubic_coeffs());
    CHECK(parse_integrand("polynomial:1,2").coeffs == std::vector<double>{1.0, 2.0});
    CHECK_THROWS_AS(parse_integrand("sinusoid"), ConfigError);
  }
  SUBCASE("stop mode names") {
    CHECK(parse_stop_mode("oracle") == StoppingRule::Mode::oracle_consecutive);
    CHECK(stop_mode_name(StoppingRule::Mode::se_threshold) == "se");
    CHECK_THROWS_AS(parse_stop_mode("sometimes"), ConfigError);
  }
}

TEST_CASE("experiment spec JSON round trip") {
  ExperimentSpec spec;
  spec.target = ExperimentSpec::Target::integral;
  spec.body = BodySpec::make_density(ExtentDensity::uniform(0, 1));
  spec.integrand = IntegrandSpec::make_gaussian();
  spec.dimensions = {2, 10, 30};
  spec.tolerances = {0.1, 0.2};
  spec.trials = 12;
  spec.seed = 987;
  spec.workers = 3;
  spec.consecutive = 250;

  const std::string text = experiment_spec_to_json(spec);
  const ExperimentSpec back = experiment_spec_from_json(text);
  CHECK(back.target == spec.target);
  CHECK(back.body.tag() == spec.body.tag());
  CHECK(back.integrand->tag() == spec.integrand->tag());
  CHECK(back.dimensions == spec.dimensions);
  CHECK(back.tolerances == spec.tolerances);
  CHECK(back.trials == spec.trials);
  CHECK(back.seed == spec.seed);
  CHECK(back.workers == spec.workers);
  CHECK(back.consecutive == spec.consecutive);

  CHECK_THROWS_AS(experiment_spec_from_json("{nope"), ConfigError);
}

TEST_CASE("experiment validation") {
  ExperimentSpec spec;
  spec.body = BodySpec::make_density(ExtentDensity::uniform(0, 1));
  spec.dimensions = {3};
  spec.tolerances = {0.1};
  CHECK_NOTHROW(spec.validate());

  SUBCASE("integral target needs an integrand") {
    spec.target = ExperimentSpec::Target::integral;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
  }
  SUBCASE("jitter needs a geometric body") {
    spec.jitter_frac = 0.05;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec.body = BodySpec::make_cube(1.0);
    CHECK_NOTHROW(spec.validate());
  }
  SUBCASE("bad values") {
    spec.tolerances = {-0.1};
    CHECK_THROWS_AS(spec.validate(), ConfigError);
  }
}

TEST_CASE("emit_csv") {
  SUBCASE("single record formatting") {
    TempFile tmp("emit_one.dat");
    SweepRecord rec;
    rec.dimension = 10;
    rec.samples = 512.0;
    emit_csv({rec}, tmp.path, "{}");
    CHECK(read_file(tmp.path) == "10 512\n");
    CHECK(read_file(tmp.path + ".meta.json") == "{}\n");
  }
  SUBCASE("records are sorted by dimension") {
    TempFile tmp("emit_sorted.dat");
    SweepRecord a, b, c;
    a.dimension = 30; a.samples = 3.5;
    b.dimension = 10; b.samples = 1.25;
    c.dimension = 20; c.samples = 2.0;
    emit_csv({a, b, c}, tmp.path, "{}");
    CHECK(read_file(tmp.path) == "10 1.25\n20 2\n30 3.5\n");
  }
  SUBCASE("no records is an error") {
    CHECK_THROWS_AS(emit_csv({}, "nowhere.dat", "{}"), std::domain_error);
  }
}

TEST_CASE("run_volume on a sphere needs exactly one sample at any tolerance") {
  ExperimentSpec spec;
  spec.body = BodySpec::make_sphere(0.9);
  spec.dimensions = {1, 2, 7, 40};
  spec.tolerances = {0.2, 0.05};
  spec.trials = 3;
  spec.consecutive = 200;
  spec.seed = 5;
  const auto records = run_volume(spec);
  REQUIRE(records.size() == 8);
  for (const auto& rec : records) {
    CHECK(rec.samples == 1.0);
    CHECK(rec.trials == 3);
    CHECK_FALSE(rec.budget_exceeded);
  }
}

TEST_CASE("full pipeline determinism: identical spec twice gives identical bytes") {
  ExperimentSpec spec;
  spec.body = BodySpec::make_density(ExtentDensity::uniform(0, 1));
  spec.dimensions = {5, 10};
  spec.tolerances = {0.2};
  spec.trials = 5;
  spec.consecutive = 100;
  spec.seed = 31337;
  spec.workers = 2;

  TempFile out1("det_a.dat");
  TempFile out2("det_b.dat");
  emit_csv(run_volume(spec), out1.path, "{}");
  emit_csv(run_volume(spec), out2.path, "{}");
  CHECK(read_file(out1.path) == read_file(out2.path));
  CHECK(read_file(out1.path).find(' ') != std::string::npos);
}

TEST_CASE("sweep records grow roughly linearly in dimension for uniform extents") {
  ExperimentSpec spec;
  spec.body = BodySpec::make_density(ExtentDensity::uniform(0, 1));
  spec.dimensions = {10, 25, 40, 55, 70};
  spec.tolerances = {0.1};
  spec.trials = 40;
  spec.consecutive = 300;
  spec.seed = 7;
  const auto records = run_volume(spec);
  std::vector<double> x, y;
  for (const auto& rec : records) {
    x.push_back(rec.dimension);
    y.push_back(rec.samples);
    CHECK(rec.samples >= 1.0);
  }
  const auto fit = testutil::fit_line(x, y);
  CHECK(fit.r_squared >= 0.85);
  CHECK(fit.slope > 0.0);
}

TEST_CASE("oracle stopping without a closed form is a config error") {
  // The x-coordinate integrand over a beta-extent domain has no closed form here.
  ExperimentSpec spec;
  spec.target = ExperimentSpec::Target::integral;
  spec.body = BodySpec::make_density(ExtentDensity::beta(2, 2));
  spec.integrand = IntegrandSpec::make_xcoord();
  spec.dimensions = {3};
  spec.tolerances = {0.1};
  spec.trials = 1;
  CHECK_THROWS_AS(run_integral(spec), ConfigError);
}

TEST_CASE("run_single produces a complete record") {
  ExperimentSpec spec;
  spec.body = BodySpec::make_cube(1.0);
  spec.dimensions = {6};
  spec.tolerances = {0.1};
  spec.stop_mode = StoppingRule::Mode::fixed_samples;
  spec.sample_budget = 2000;
  spec.seed = 77;
  const RunRecord rec = run_single(spec, 6, 0.1);
  CHECK(rec.dimension == 6);
  CHECK(rec.samples == 2000);
  CHECK(rec.stop_mode == "fixed");
  CHECK(std::fabs(rec.mean - 1.0) <= 0.05);  // unit cube volume
  CHECK(rec.relative_std_error > 0.0);
  CHECK(rec.wall_seconds >= 0.0);

  SUBCASE("parallel fixed runs depend only on (seed, workers, budget)") {
    ExperimentSpec par = spec;
    par.workers = 3;
    const RunRecord a = run_single(par, 6, 0.1);
    const RunRecord b = run_single(par, 6, 0.1);
    CHECK(a.mean == b.mean);
    CHECK(a.relative_std_error == b.relative_std_error);
  }
}

TEST_CASE("theory_table") {
  const auto records = theory_table(ExtentDensity::uniform(0, 1), {10, 20}, 0.1);
  REQUIRE(records.size() == 2);
  CHECK(records[0].predicted_samples == doctest::Approx(100.0 / 21.0 * 100.0).epsilon(1e-12));
  CHECK(records[0].bound_available);
  CHECK(records[0].bound == doctest::Approx(1000.0).epsilon(1e-12));
  CHECK(records[0].bound_valid);
  for (const auto& rec : records) CHECK(rec.predicted_samples <= rec.bound);

  SUBCASE("densities without an envelope mark the bound unavailable") {
    const auto arc = theory_table(ExtentDensity::arcsine(), {10}, 0.1);
    CHECK_FALSE(arc[0].bound_available);
    CHECK(arc[0].predicted_samples > 0.0);
  }
}

TEST_CASE("measured error at fixed N tracks the prediction (small check)") {
  const int n = 5;
  const std::uint64_t N = 2000;
  const int trials = 300;
  const auto density = ExtentDensity::uniform(0, 1);
  const DensityBody body(n, density);
  const double truth = volume_uniform_extents(n, 0, 1).value;
  double sq_sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    DirectionStream stream(n, 1000, static_cast<std::uint64_t>(t));
    const Estimate est = estimate_volume(body, stream, StoppingRule::fixed(N));
    const double rel = est.mean() / truth - 1.0;
    sq_sum += rel * rel;
  }
  const double rms = std::sqrt(sq_sum / trials);
  const double predicted = predicted_relative_error(density, n, N);
  CHECK(std::fabs(rms / predicted - 1.0) <= 0.15);
}

TEST_CASE("jittered and recentred cube sweep terminates") {
  ExperimentSpec spec;
  spec.body = BodySpec::make_cube(1.0);
  spec.dimensions = {8};
  spec.tolerances = {0.1};
  spec.trials = 5;
  spec.consecutive = 100;
  spec.jitter_frac = 0.0625;
  spec.recentre_pairs_per_dim = 2;
  spec.seed = 808;
  const auto records = run_volume(spec);
  REQUIRE(records.size() == 1);
  CHECK(records[0].samples >= 1.0);
  CHECK_FALSE(records[0].budget_exceeded);
}
