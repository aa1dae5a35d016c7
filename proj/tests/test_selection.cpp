#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "steptx/alignment.hpp"
#include "steptx/errors.hpp"
#include "steptx/selection.hpp"
#include "support.hpp"

using namespace steptx;
using steptx::testing::random_vector;

namespace {

SourceDataset offset_source(const Signal& y, std::size_t n_k, double offset,
                            int index) {
  const Signal base = expand(y, n_k);
  std::vector<double> v(base.values().begin(), base.values().end());
  for (auto& x : v) x += offset;
  return SourceDataset(Signal(v), index);
}

}  // namespace

TEST_CASE("deviation statistic scales by the root of the source length") {
  const Signal y({1.0, 2.0});
  const SourceDataset shifted = offset_source(y, 4, 10.0, 1);
  const auto dev = normalized_deviation(y, shifted.data());
  REQUIRE(dev.size() == 4);
  for (double d : dev) CHECK(d == 5.0);  // 10 / sqrt(4), exact in binary
  CHECK(screened_sq_norm(dev, 2) == 50.0);
}

TEST_CASE("screening keeps the largest magnitudes with index ties") {
  const std::vector<double> dev{3.0, -3.0, 1.0};
  CHECK(screened_sq_norm(dev, 1) == 9.0);
  CHECK(screened_sq_norm(dev, 2) == 18.0);
  CHECK(screened_sq_norm(dev, 3) == 19.0);
  CHECK_THROWS_AS(screened_sq_norm(dev, 0), argument_error);
  CHECK_THROWS_AS(screened_sq_norm(dev, 4), argument_error);
}

TEST_CASE("detection follows the worked example") {
  const Signal y({1.0, 2.0});
  const std::vector<SourceDataset> sources{
      offset_source(y, 4, 0.0, 1),   // clean copy
      offset_source(y, 4, 10.0, 2),  // screened norm 50
  };
  SelectionConfig config;
  config.screen_widths = {2, 2};
  config.thresholds = {1.0, 1.0};
  const auto picked = detect_informative(y, sources, config);
  CHECK(picked.indices == std::vector<int>{1});

  config.thresholds = {1.0, 51.0};
  CHECK(detect_informative(y, sources, config).indices ==
        std::vector<int>{1, 2});
  config.thresholds = {1.0, 49.0};
  CHECK(detect_informative(y, sources, config).indices ==
        std::vector<int>{1});
}

TEST_CASE("duplicate sources are accepted independently") {
  const Signal y({1.0, 2.0, 0.5});
  const SourceDataset clean = offset_source(y, 6, 0.0, 1);
  const std::vector<SourceDataset> sources{clean, clean, clean};
  SelectionConfig config;
  config.screen_widths = {3, 3, 3};
  config.thresholds = {0.5, 0.5, 0.5};
  CHECK(detect_informative(y, sources, config).indices ==
        std::vector<int>{1, 2, 3});
}

TEST_CASE("permuting the source list permutes the detected positions") {
  const Signal y({1.0, 2.0});
  const SourceDataset clean = offset_source(y, 4, 0.0, 1);
  const SourceDataset far = offset_source(y, 4, 10.0, 2);
  SelectionConfig config;
  config.screen_widths = {2, 2};
  config.thresholds = {1.0, 1.0};
  const std::vector<SourceDataset> order_a{clean, far};
  const std::vector<SourceDataset> order_b{far, clean};
  CHECK(detect_informative(y, order_a, config).indices ==
        std::vector<int>{1});
  CHECK(detect_informative(y, order_b, config).indices ==
        std::vector<int>{2});
}

TEST_CASE("raising a threshold never removes a source") {
  std::mt19937_64 rng(21);
  const Signal y(random_vector(rng, 5));
  std::vector<SourceDataset> sources;
  for (int k = 1; k <= 3; ++k) {
    sources.push_back(offset_source(y, 10, 0.3 * k, k));
  }
  SelectionConfig low;
  low.screen_widths = {5, 5, 5};
  low.thresholds = {0.2, 0.2, 0.2};
  SelectionConfig high = low;
  high.thresholds = {2.0, 2.0, 2.0};
  const auto small_set = detect_informative(y, sources, low).indices;
  const auto big_set = detect_informative(y, sources, high).indices;
  for (int k : small_set) {
    CHECK(std::find(big_set.begin(), big_set.end(), k) != big_set.end());
  }
}

TEST_CASE("config and source counts must match") {
  const Signal y({1.0, 2.0});
  const std::vector<SourceDataset> sources{offset_source(y, 4, 0.0, 1)};
  SelectionConfig config;
  config.screen_widths = {2, 2};
  config.thresholds = {1.0, 1.0};
  CHECK_THROWS_AS(detect_informative(y, sources, config), dimension_error);
}

TEST_CASE("screening size rule evaluates and clamps") {
  // 8 * (3/24) * ((1 + log 3)/log 3 + 1) = 2.91... -> 3.
  CHECK(theoretical_screen_width(0, 3, 3, 8.0) == 3);
  // Huge constant exceeds n_k, so the clamp takes over.
  CHECK(theoretical_screen_width(0, 3, 3, 1e9) == 3);
  // Tiny constant drops below 1.
  CHECK(theoretical_screen_width(0, 100, 100, 1e-9) == 1);
  // Degenerate logs (n0 = n_k = 1) clamp to n_k.
  CHECK(theoretical_screen_width(0, 1, 1, 1.0) == 1);
}

TEST_CASE("threshold rule evaluates directly") {
  CHECK(theoretical_threshold(0, 1, 1, 1.0) == doctest::Approx(1.0));
  CHECK(theoretical_threshold(0, 1, 3, 1.0) ==
        doctest::Approx(1.0 + std::log(3.0)).epsilon(1e-15));
  CHECK(theoretical_threshold(0, 1, 3, 2.0) ==
        doctest::Approx(2.0 * theoretical_threshold(0, 1, 3, 1.0))
            .epsilon(1e-15));
}

TEST_CASE("subset refinement maximises effective sample size") {
  const std::vector<std::size_t> lens{1000, 10};
  InformativeSet both{{1, 2}};
  CHECK(refine_subset(both, lens).indices == std::vector<int>{1});

  // Equal lengths: the full set is analytically forced.
  const std::vector<std::size_t> equal{50, 50, 50};
  InformativeSet all{{1, 2, 3}};
  CHECK(refine_subset(all, equal).indices == std::vector<int>{1, 2, 3});

  InformativeSet single{{2}};
  CHECK(refine_subset(single, lens).indices == std::vector<int>{2});

  InformativeSet empty{{}};
  CHECK_THROWS_AS(refine_subset(empty, lens), argument_error);

  InformativeSet big{{}};
  std::vector<std::size_t> many(25, 10);
  for (int k = 1; k <= 25; ++k) big.indices.push_back(k);
  CHECK_THROWS_AS(refine_subset(big, many), argument_error);
}

TEST_CASE("refinement never worsens the objective") {
  std::mt19937_64 rng(22);
  for (int rep = 0; rep < 20; ++rep) {
    std::uniform_int_distribution<std::size_t> kd(1, 8);
    const std::size_t K = kd(rng);
    std::vector<std::size_t> lens(K);
    std::uniform_int_distribution<std::size_t> ld(5, 5000);
    for (auto& l : lens) l = ld(rng);
    InformativeSet a_hat{{}};
    for (std::size_t k = 1; k <= K; ++k) {
      a_hat.indices.push_back(static_cast<int>(k));
    }
    auto objective = [&](const std::vector<int>& set) {
      double s = 0;
      for (int k : set) s += 1.0 / static_cast<double>(lens[k - 1]);
      return s / (static_cast<double>(set.size()) *
                  static_cast<double>(set.size()));
    };
    const auto refined = refine_subset(a_hat, lens);
    CHECK(objective(refined.indices) <= objective(a_hat.indices) + 1e-15);
  }
}

TEST_CASE("effective sample size curve") {
  std::vector<std::size_t> lens;
  for (std::size_t k = 1; k <= 10; ++k) lens.push_back(200 * (11 - k));
  CHECK(frequency_curve(lens, 1) == doctest::Approx(2000.0));
  std::size_t best_k = 1;
  double best = -1;
  for (std::size_t K = 1; K <= 10; ++K) {
    const double v = frequency_curve(lens, K);
    if (v > best) {
      best = v;
      best_k = K;
    }
  }
  CHECK(best_k == 8);

  // Equal lengths: K * n, strictly increasing.
  const std::vector<std::size_t> equal(6, 30);
  double prev = 0;
  for (std::size_t K = 1; K <= 6; ++K) {
    const double v = frequency_curve(equal, K);
    CHECK(v == doctest::Approx(static_cast<double>(30 * K)).epsilon(1e-12));
    CHECK(v > prev);
    prev = v;
  }
  CHECK_THROWS_AS(frequency_curve(equal, 0), argument_error);
  CHECK_THROWS_AS(frequency_curve(equal, 7), argument_error);
}
