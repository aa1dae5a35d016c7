#pragma once

#include "steptx/signal.hpp"

namespace steptx {

// Both solvers minimise over all signals theta of the input's length n:
//
//   l1:  (1/(2n)) * sum_i (v_i - theta_i)^2 + lambda * sum_i |theta_i - theta_{i+1}|
//   l0:  (1/(2n)) * sum_i (v_i - theta_i)^2 + lambda * #{i : theta_i != theta_{i+1}}
//
// The quadratic term carries the 1/(2n) factor, so the internal penalty is
// scaled by n before the classic unit-scaled routines run. Outputs have
// bitwise-equal values inside each fitted segment.

// Exact total-variation solution by a single taut-string sweep, O(n).
Signal solve_l1(const Signal& v, double lambda);

// Exact jump-penalised solution by optimal partitioning, O(n^2) with O(1)
// segment costs from centred prefix sums. When two partitions tie within
// 1e-12 in objective, the one with fewer changepoints wins; among equal
// counts, the lexicographically smallest changepoint sequence wins.
Signal solve_l0(const Signal& v, double lambda);

// Dispatch on the penalty kind.
Signal solve(const Signal& v, const PenaltySpec& penalty);

// Objective value of a candidate theta under the definitions above; the l0
// jump count uses exact inequality.
double objective_value(const Signal& v, const Signal& theta,
                       const PenaltySpec& penalty);

}  // namespace steptx
