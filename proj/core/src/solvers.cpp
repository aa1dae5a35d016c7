#include "steptx/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace steptx {

namespace {

void check_lambda(double lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw argument_error("solver: lambda must be finite and >= 0");
  }
}

// Taut-string sweep for min (1/2)||v - theta||^2 + lam * TV(theta).
// Direct port of the classic O(n) two-bound recursion: vmin/vmax bracket the
// current segment's value, umin/umax track the accumulated slack, kminus /
// kplus remember where each bound was last tight. Each finished segment is
// written as one repeated double, so within-segment entries compare equal.
std::vector<double> taut_string(const std::vector<double>& input, double lam) {
  const long width = static_cast<long>(input.size());
  std::vector<double> output(input.size());
  long k = 0, k0 = 0, kminus = 0, kplus = 0;
  double umin = lam, umax = -lam;
  double vmin = input[0] - lam, vmax = input[0] + lam;
  const double twolam = 2.0 * lam;
  const double minlam = -lam;
  for (;;) {
    while (k == width - 1) {  // right boundary: flush what remains
      if (umin < 0.0) {  // vmin was too high, a negative jump closes it
        do {
          output[k0++] = vmin;
        } while (k0 <= kminus);
        umax = (vmin = input[kminus = k = k0]) + (umin = lam) - vmax;
      } else if (umax > 0.0) {  // vmax was too low, a positive jump closes it
        do {
          output[k0++] = vmax;
        } while (k0 <= kplus);
        umin = (vmax = input[kplus = k = k0]) + (umax = minlam) - vmin;
      } else {  // the string is straight to the end
        vmin += umin / static_cast<double>(k - k0 + 1);
        do {
          output[k0++] = vmin;
        } while (k0 <= k);
        return output;
      }
    }
    if ((umin += input[k + 1] - vmin) < minlam) {  // lower bound broken
      do {
        output[k0++] = vmin;
      } while (k0 <= kminus);
      vmax = (vmin = input[kplus = kminus = k = k0]) + twolam;
      umin = lam;
      umax = minlam;
    } else if ((umax += input[k + 1] - vmax) > lam) {  // upper bound broken
      do {
        output[k0++] = vmax;
      } while (k0 <= kplus);
      vmin = (vmax = input[kplus = kminus = k = k0]) - twolam;
      umin = lam;
      umax = minlam;
    } else {  // still inside the tube
      ++k;
      if (umin >= lam) {
        vmin += (umin - lam) / static_cast<double>((kminus = k) - k0 + 1);
        umin = lam;
      }
      if (umax <= minlam) {
        vmax += (umax + lam) / static_cast<double>((kplus = k) - k0 + 1);
        umax = minlam;
      }
    }
  }
}

}  // namespace

Signal solve_l1(const Signal& v, double lambda) {
  check_lambda(lambda);
  if (lambda == 0.0 || v.size() == 1) return v;
  // The averaged quadratic makes the effective taut-string penalty n*lambda.
  const double lam = static_cast<double>(v.size()) * lambda;
  std::vector<double> input(v.values().begin(), v.values().end());
  return Signal(taut_string(input, lam));
}

namespace {

struct PartitionDp {
  // parent[j] = start of the last segment of the best partition of the first
  // j entries (as a 0-based boundary); cnt[j] = its segment count.
  std::vector<double> best;
  std::vector<std::size_t> cnt;
  std::vector<std::size_t> parent;
};

// Changepoint sequence of the best partition of the first j entries,
// ascending 1-based boundaries. Only used to settle rare exact ties.
std::vector<std::size_t> dp_changepoints(const PartitionDp& dp,
                                         std::size_t j) {
  std::vector<std::size_t> cps;
  std::size_t cur = j;
  while (cur > 0 && dp.parent[cur] > 0) {
    cps.push_back(dp.parent[cur]);
    cur = dp.parent[cur];
  }
  std::reverse(cps.begin(), cps.end());
  return cps;
}

}  // namespace

Signal solve_l0(const Signal& v, double lambda) {
  check_lambda(lambda);
  const std::size_t n = v.size();
  if (lambda == 0.0 || n == 1) return v;

  // Costs come from prefix sums of the centred values; centring keeps the
  // q - s^2/len cancellation benign for long, offset-heavy segments.
  const double center = running_mean(v.values());
  std::vector<double> ps(n + 1, 0.0), pq(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = v[i] - center;
    ps[i + 1] = ps[i] + x;
    pq[i + 1] = pq[i] + x * x;
  }
  const auto seg_cost = [&](std::size_t a, std::size_t b) {  // [a, b)
    const double s = ps[b] - ps[a];
    const double q = pq[b] - pq[a];
    const double c = q - s * s / static_cast<double>(b - a);
    return c > 0.0 ? c : 0.0;
  };

  const double inv2n = 1.0 / (2.0 * static_cast<double>(n));
  constexpr double kTieTol = 1e-12;
  PartitionDp dp;
  dp.best.assign(n + 1, std::numeric_limits<double>::infinity());
  dp.cnt.assign(n + 1, 0);
  dp.parent.assign(n + 1, 0);
  dp.best[0] = 0.0;

  for (std::size_t j = 1; j <= n; ++j) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_cnt = 0, best_l = 0;
    for (std::size_t l = 0; l < j; ++l) {
      const double cand =
          dp.best[l] + seg_cost(l, j) * inv2n + (l > 0 ? lambda : 0.0);
      const std::size_t cand_cnt = dp.cnt[l] + 1;
      bool take = false;
      if (cand < best - kTieTol) {
        take = true;
      } else if (cand <= best + kTieTol) {
        if (cand_cnt < best_cnt) {
          take = true;
        } else if (cand_cnt == best_cnt) {
          auto lhs = dp_changepoints(dp, l);
          if (l > 0) lhs.push_back(l);
          auto rhs = dp_changepoints(dp, best_l);
          if (best_l > 0) rhs.push_back(best_l);
          take = std::lexicographical_compare(lhs.begin(), lhs.end(),
                                              rhs.begin(), rhs.end());
        }
      }
      if (take) {
        best = std::min(best, cand);  // keep the smaller value on ties
        best_cnt = cand_cnt;
        best_l = l;
      }
    }
    dp.best[j] = best;
    dp.cnt[j] = best_cnt;
    dp.parent[j] = best_l;
  }

  // Backtrack boundaries, then refit each segment mean from the raw values;
  // the incremental mean reproduces constant segments exactly.
  std::vector<std::size_t> bounds;
  for (std::size_t cur = n; cur > 0; cur = dp.parent[cur]) {
    bounds.push_back(cur);
    if (dp.parent[cur] == 0) break;
  }
  bounds.push_back(0);
  std::reverse(bounds.begin(), bounds.end());

  std::vector<double> out(n);
  for (std::size_t t = 0; t + 1 < bounds.size(); ++t) {
    const std::size_t lo = bounds[t], hi = bounds[t + 1];
    const double m = running_mean(v.values().subspan(lo, hi - lo));
    for (std::size_t i = lo; i < hi; ++i) out[i] = m;
  }
  return Signal(std::move(out));
}

Signal solve(const Signal& v, const PenaltySpec& penalty) {
  return penalty.kind == PenaltyKind::l1 ? solve_l1(v, penalty.lambda)
                                         : solve_l0(v, penalty.lambda);
}

double objective_value(const Signal& v, const Signal& theta,
                       const PenaltySpec& penalty) {
  if (v.size() != theta.size()) {
    throw dimension_error("objective_value: lengths differ (" +
                          std::to_string(v.size()) + " vs " +
                          std::to_string(theta.size()) + ")");
  }
  double sse = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double d = v[i] - theta[i];
    sse += d * d;
  }
  double pen = 0.0;
  for (std::size_t i = 0; i + 1 < theta.size(); ++i) {
    if (penalty.kind == PenaltyKind::l1) {
      pen += std::fabs(theta[i] - theta[i + 1]);
    } else if (theta[i] != theta[i + 1]) {
      pen += 1.0;
    }
  }
  return sse / (2.0 * static_cast<double>(v.size())) + penalty.lambda * pen;
}

}  // namespace steptx
