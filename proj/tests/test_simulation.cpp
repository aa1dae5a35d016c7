#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "steptx/alignment.hpp"
#include "steptx/errors.hpp"
#include "steptx/simulation.hpp"

using namespace steptx;

TEST_CASE("equally spaced truth carries the published layout") {
  ScenarioSpec spec;
  spec.gamma = 0.5;
  const Signal f = scenario_truth(spec);
  REQUIRE(f.size() == 200);
  const auto cps = changepoints_of(f, 0.0).indices;
  CHECK(cps == std::vector<std::size_t>{25, 50, 75, 100, 125, 150, 175});
  const double expected[] = {1.0, 2.0, 0.5, 2.5, 3.5, 4.0, 1.0, 0.5};
  std::size_t seg = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < 200; ++i) {
    if (seg < cps.size() && i == cps[seg]) {
      ++seg;
      start = i;
    }
    (void)start;
    CHECK(f[i] == expected[seg]);
  }
}

TEST_CASE("unequally spaced truth uses its own breakpoints") {
  ScenarioSpec spec;
  spec.scenario = Scenario::unequally_spaced;
  spec.gamma = 1.0;
  const Signal f = scenario_truth(spec);
  const auto cps = changepoints_of(f, 0.0).indices;
  CHECK(cps == std::vector<std::size_t>{20, 40, 50, 120, 134, 160, 176});
  CHECK(f[0] == 2.0);
  CHECK(f[199] == 1.0);
}

TEST_CASE("changepoints scale proportionally with the grid") {
  ScenarioSpec spec;
  spec.n0 = 400;
  const Signal f = scenario_truth(spec);
  const auto cps = changepoints_of(f, 0.0).indices;
  CHECK(cps == std::vector<std::size_t>{50, 100, 150, 200, 250, 300, 350});
  ScenarioSpec tiny;
  tiny.n0 = 4;
  // Collapsing changepoints onto shared indices cannot represent the
  // layout, so the scenario is rejected rather than silently merged.
  CHECK_THROWS_AS(scenario_truth(tiny), argument_error);
}

TEST_CASE("zero noise reproduces the truth") {
  ScenarioSpec spec;
  spec.sigma = 0.0;
  const auto draw = gen_target(spec, 42);
  CHECK(draw.data == draw.truth);
  CHECK(draw.truth == scenario_truth(spec));
}

TEST_CASE("target generation is seed-deterministic") {
  ScenarioSpec spec;
  const auto a = gen_target(spec, 42);
  const auto b = gen_target(spec, 42);
  const auto c = gen_target(spec, 43);
  CHECK(a.data == b.data);
  CHECK(a.data != c.data);
  // Noise is genuinely present.
  CHECK(a.data != a.truth);
}

TEST_CASE("deterministic discrepancies shift only the leading window") {
  ScenarioSpec sc;
  sc.sigma = 0.0;
  const Signal f = scenario_truth(sc);
  ConfigurationSpec config;
  config.informative = {1};
  config.source_lens = {400, 400};
  config.alpha = 0.2;
  config.alpha_tilde = 2.0;
  config.h_fraction = 0.15;
  const auto sources = gen_sources(f, config, 0.0, 0.0, 5);
  REQUIRE(sources.size() == 2);
  const Signal base = expand(f, 400);
  const std::size_t window = 60;  // floor(0.15 * 400)
  for (std::size_t k = 0; k < 2; ++k) {
    const double off = k == 0 ? 0.2 : 2.0;
    for (std::size_t i = 0; i < 400; ++i) {
      const double want = i < window ? base[i] + off : base[i];
      REQUIRE(sources[k].data()[i] == want);
    }
    REQUIRE(sources[k].truth().has_value());
    CHECK(sources[k].data() == *sources[k].truth());
  }
}

TEST_CASE("vanishing window leaves sources as pure expansions") {
  ScenarioSpec sc;
  sc.sigma = 0.0;
  const Signal f = scenario_truth(sc);
  ConfigurationSpec config;
  config.informative = {1};
  config.source_lens = {300};
  config.h_fraction = 0.0;
  const auto sources = gen_sources(f, config, 0.0, 0.0, 5);
  CHECK(sources[0].data() == expand(f, 300));
}

TEST_CASE("gaussian discrepancies live on the window only") {
  ScenarioSpec sc;
  sc.sigma = 0.0;
  const Signal f = scenario_truth(sc);
  ConfigurationSpec config;
  config.configuration = Configuration::gaussian;
  config.informative = {1};
  config.source_lens = {400};
  config.kappa = 0.2;
  config.h_fraction = 0.15;
  const auto sources = gen_sources(f, config, 0.0, 0.0, 6);
  const Signal base = expand(f, 400);
  for (std::size_t i = 0; i < 60; ++i) CHECK(sources[0].data()[i] != base[i]);
  for (std::size_t i = 60; i < 400; ++i) CHECK(sources[0].data()[i] == base[i]);
}

TEST_CASE("method registry") {
  const auto methods = standard_methods();
  CHECK(methods.size() == 10);
  for (const auto& m : methods) CHECK(is_known_method(m));
  CHECK(is_known_method("l0-T-01"));
  CHECK(is_known_method("l0-T-0K"));
  CHECK_FALSE(is_known_method("l2"));
  CHECK_FALSE(is_known_method(""));
}

TEST_CASE("noiseless trials score zero for every method") {
  ScenarioSpec sc;
  sc.sigma = 0.0;
  ConfigurationSpec config;
  config.informative = {1, 2};
  config.source_lens = {400, 300};
  config.alpha = 0.0;
  config.alpha_tilde = 0.0;
  SimOptions options;
  options.lambda.mode = LambdaPolicy::Mode::fixed;
  options.lambda.fixed_value = 1e-7;
  const auto methods = standard_methods();
  const auto results = run_monte_carlo(sc, config, methods, 1, 3, options);
  REQUIRE(results.size() == methods.size());
  for (const auto& r : results) {
    INFO(r.method);
    // The total-variation fits shrink jumps by a vanishing amount; the
    // jump-count fits are exact.
    if (r.method.rfind("l0", 0) == 0) {
      CHECK(r.loss == 0.0);
    } else {
      CHECK(r.loss < 1e-10);
    }
  }
}

TEST_CASE("monte carlo output is sorted and reproducible") {
  ScenarioSpec sc;
  sc.n0 = 100;
  ConfigurationSpec config;
  config.informative = {1};
  config.source_lens = {200, 150};
  SimOptions options;
  options.selection.permutations = 20;
  const std::vector<std::string> methods{"l0-T-Ahat", "l0", "l1-T-1"};
  const auto a = run_monte_carlo(sc, config, methods, 3, 17, options);
  const auto b = run_monte_carlo(sc, config, methods, 3, 17, options);
  REQUIRE(a.size() == 9);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].method == b[i].method);
    CHECK(a[i].trial == b[i].trial);
    CHECK(a[i].loss == b[i].loss);
    CHECK(a[i].selected == b[i].selected);
    CHECK(a[i].seed == b[i].seed);
  }
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    const bool ordered =
        a[i].method < a[i + 1].method ||
        (a[i].method == a[i + 1].method && a[i].trial < a[i + 1].trial);
    CHECK(ordered);
  }
  // Only the detection-based pipeline reports a selected set.
  for (const auto& r : a) {
    if (r.method == "l0-T-Ahat") {
      CHECK(r.selected.has_value());
    } else {
      CHECK_FALSE(r.selected.has_value());
    }
  }
}

TEST_CASE("thread count never changes results") {
  ScenarioSpec sc;
  sc.n0 = 80;
  ConfigurationSpec config;
  config.informative = {1};
  config.source_lens = {160};
  SimOptions serial;
  serial.selection.permutations = 10;
  SimOptions parallel = serial;
  parallel.threads = 4;
  const std::vector<std::string> methods{"l0", "l0-T-1"};
  const auto a = run_monte_carlo(sc, config, methods, 5, 23, serial);
  const auto b = run_monte_carlo(sc, config, methods, 5, 23, parallel);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].loss == b[i].loss);
    CHECK(a[i].seed == b[i].seed);
  }
}

TEST_CASE("unknown methods are rejected") {
  ScenarioSpec sc;
  ConfigurationSpec config;
  config.informative = {1};
  config.source_lens = {400};
  const std::vector<std::string> methods{"l0", "mystery"};
  CHECK_THROWS_AS(run_monte_carlo(sc, config, methods, 1, 0, {}),
                  argument_error);
}

TEST_CASE("summaries aggregate per method") {
  std::vector<TrialResult> results;
  results.push_back({"a", 1, 1.0, std::nullopt, 0});
  results.push_back({"a", 2, 3.0, std::nullopt, 0});
  results.push_back({"b", 1, 2.0, std::nullopt, 0});
  const auto s = summarize(results);
  REQUIRE(s.size() == 2);
  CHECK(s[0].method == "a");
  CHECK(s[0].mean_loss == doctest::Approx(2.0));
  CHECK(s[0].se == doctest::Approx(1.0));  // sd sqrt(2), over sqrt(2)
  CHECK(s[0].trials == 2);
  CHECK(s[1].method == "b");
  CHECK(s[1].se == 0.0);
  CHECK_THROWS_AS(summarize(std::vector<TrialResult>{}), argument_error);
}

TEST_CASE("configuration validation") {
  ScenarioSpec sc;
  ConfigurationSpec config;
  config.informative = {3};  // out of range for one source
  config.source_lens = {400};
  CHECK_THROWS_AS(gen_sources(scenario_truth(sc), config, 0.5, 0.0, 1),
                  argument_error);
  config.informative = {1, 1};  // duplicates
  CHECK_THROWS_AS(gen_sources(scenario_truth(sc), config, 0.5, 0.0, 1),
                  argument_error);
  config.informative = {};
  config.source_lens = {};
  CHECK_THROWS_AS(gen_sources(scenario_truth(sc), config, 0.5, 0.0, 1),
                  argument_error);
}
