#pragma once

// Shared test oracles. Everything here is deliberately independent of the
// library's algorithms: the l0 oracle enumerates partitions, the l1 check
// verifies the optimality certificate instead of re-solving.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "steptx/signal.hpp"
#include "steptx/solvers.hpp"

namespace steptx::testing {

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n,
                                         double lo = -5.0, double hi = 5.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

// Piecewise-constant vector with `jumps` interior level changes.
inline std::vector<double> random_piecewise(std::mt19937_64& rng,
                                            std::size_t n, std::size_t jumps,
                                            double lo = -4.0, double hi = 4.0) {
  std::uniform_real_distribution<double> level(lo, hi);
  std::vector<std::size_t> cuts;
  if (jumps > 0 && n > 1) {
    std::uniform_int_distribution<std::size_t> pos(1, n - 1);
    for (std::size_t j = 0; j < jumps; ++j) cuts.push_back(pos(rng));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  }
  std::vector<double> v(n);
  double value = level(rng);
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (next < cuts.size() && i == cuts[next]) {
      double fresh = level(rng);
      // Force a clearly separated level so tiny penalties never hesitate
      // over whether the jump is real.
      while (std::fabs(fresh - value) < 0.5) fresh = level(rng);
      value = fresh;
      ++next;
    }
    v[i] = value;
  }
  return v;
}

struct BruteL0 {
  double objective;
  std::vector<std::size_t> changepoints;  // 1-based
};

// Exhaustive minimum of (1/(2n)) * sum (v_i - theta_i)^2 + lambda * #jumps
// over all 2^(n-1) changepoint subsets, with the library's tie rule: ties
// within 1e-12 prefer fewer changepoints, then the lexicographically
// smaller sequence.
inline BruteL0 brute_force_l0(const std::vector<double>& v, double lambda) {
  const std::size_t n = v.size();
  BruteL0 best{std::numeric_limits<double>::infinity(), {}};
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
    std::vector<std::size_t> cps;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (mask & (std::uint64_t{1} << i)) cps.push_back(i + 1);
    }
    double quad = 0;
    std::size_t start = 0;
    for (std::size_t s = 0; s <= cps.size(); ++s) {
      const std::size_t end = s < cps.size() ? cps[s] : n;
      double mean = 0;
      for (std::size_t i = start; i < end; ++i) {
        mean += (v[i] - mean) / static_cast<double>(i - start + 1);
      }
      for (std::size_t i = start; i < end; ++i) {
        quad += (v[i] - mean) * (v[i] - mean);
      }
      start = end;
    }
    const double obj = quad / (2.0 * static_cast<double>(n)) +
                       lambda * static_cast<double>(cps.size());
    bool better = obj < best.objective - 1e-12;
    if (!better && obj <= best.objective + 1e-12) {
      if (cps.size() < best.changepoints.size()) {
        better = true;
      } else if (cps.size() == best.changepoints.size() &&
                 cps < best.changepoints) {
        better = true;
      }
    }
    if (better) {
      best.objective = std::min(obj, best.objective);
      best.changepoints = cps;
    }
  }
  return best;
}

// Verifies the optimality certificate for the total-variation problem
//   (1/(2n)) * sum (v_i - theta_i)^2 + lambda * sum |theta_i - theta_{i+1}|.
// The dual sequence g_i = sum_{l<=i} (v_l - theta_l) / (n lambda) must
// stay in [-1, 1], close on zero, and sit at the jump's sign wherever theta
// actually jumps. For a convex problem this certificate is sufficient.
inline bool check_l1_certificate(const std::vector<double>& v,
                                 const Signal& theta, double lambda,
                                 double stat_tol = 1e-8,
                                 double bound_tol = 1e-10,
                                 std::string* why = nullptr) {
  const std::size_t n = v.size();
  const double scale = static_cast<double>(n) * lambda;
  double g = 0;
  for (std::size_t i = 0; i < n; ++i) {
    g += (v[i] - theta[i]) / scale;
    const bool last = i + 1 == n;
    if (last) {
      if (std::fabs(g) > stat_tol) {
        if (why) *why = "dual does not close on zero: " + std::to_string(g);
        return false;
      }
      break;
    }
    if (std::fabs(g) > 1.0 + bound_tol) {
      if (why) *why = "dual bound exceeded at " + std::to_string(i);
      return false;
    }
    const double diff = theta[i] - theta[i + 1];
    if (diff != 0.0) {
      const double sign = diff > 0 ? 1.0 : -1.0;
      if (std::fabs(g - sign) > stat_tol) {
        if (why) *why = "dual not at the jump sign at " + std::to_string(i);
        return false;
      }
    }
  }
  return true;
}

}  // namespace steptx::testing
