#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "steptx/errors.hpp"
#include "steptx/signal.hpp"

using namespace steptx;

TEST_CASE("signal construction validates its input") {
  CHECK_THROWS_AS(Signal(std::vector<double>{}), argument_error);
  CHECK_THROWS_AS(Signal({1.0, std::nan(""), 2.0}), argument_error);
  CHECK_THROWS_AS(Signal({std::numeric_limits<double>::infinity()}),
                  argument_error);
  const Signal s({1.0, -2.5});
  CHECK(s.size() == 2);
  CHECK(s[1] == -2.5);
}

TEST_CASE("constant signal") {
  const Signal s = Signal::constant(4, 3.25);
  CHECK(s.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(s[i] == 3.25);
  CHECK_THROWS_AS(Signal::constant(0, 1.0), argument_error);
}

TEST_CASE("changepoints are 1-based jump positions") {
  const Signal s({1.0, 1.0, 5.0, 5.0, 2.0});
  const auto cps = changepoints_of(s, 0.0);
  CHECK(cps.indices == std::vector<std::size_t>{2, 4});
  CHECK(changepoints_of(Signal::constant(6, 1.0), 0.0).size() == 0);
  // Sub-tolerance wiggles are not jumps.
  const Signal wiggly({1.0, 1.0 + 1e-12, 1.0});
  CHECK(changepoints_of(wiggly).size() == 0);
  CHECK(changepoints_of(wiggly, 0.0).size() == 2);
}

TEST_CASE("mse loss") {
  CHECK(mse_loss(Signal({1.0, 2.0}), Signal({1.0, 2.0})) == 0.0);
  CHECK(mse_loss(Signal({0.0, 0.0}), Signal({1.0, 3.0})) == doctest::Approx(5.0));
  CHECK_THROWS_AS(mse_loss(Signal({1.0}), Signal({1.0, 2.0})),
                  dimension_error);
}

TEST_CASE("first differences") {
  const Signal s({5.0, 3.0, 4.0});
  const Signal d = difference_apply(s);
  CHECK(d.size() == 2);
  CHECK(d[0] == 2.0);
  CHECK(d[1] == -1.0);
  CHECK_THROWS_AS(difference_apply(Signal({1.0})), dimension_error);
}

TEST_CASE("running mean of equal values is exact") {
  // The naive sum (0.1 + 0.1 + 0.1) / 3 lands off 0.1 by one ulp; the
  // incremental mean must not.
  const std::vector<double> v{0.1, 0.1, 0.1};
  CHECK(running_mean(v) == 0.1);
  const std::vector<double> w(17, 3.7e-3);
  CHECK(running_mean(w) == 3.7e-3);
  CHECK(running_mean(std::vector<double>{2.0, 4.0}) == 3.0);
}

TEST_CASE("penalty spec validation") {
  CHECK_THROWS_AS(PenaltySpec(PenaltyKind::l1, -0.5), argument_error);
  CHECK_THROWS_AS(PenaltySpec(PenaltyKind::l0, std::nan("")), argument_error);
  const PenaltySpec p(PenaltyKind::l0, 0.0);
  CHECK(p.lambda == 0.0);
}

TEST_CASE("source dataset keeps truth aligned with data") {
  const Signal data({1.0, 2.0, 3.0});
  CHECK_NOTHROW(SourceDataset(data, 1, Signal({0.0, 0.0, 0.0})));
  CHECK_THROWS_AS(SourceDataset(data, 1, Signal({0.0, 0.0})),
                  dimension_error);
  CHECK_THROWS_AS(SourceDataset(data, 0), argument_error);
}
