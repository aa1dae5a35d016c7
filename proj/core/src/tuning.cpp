#include "steptx/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "steptx/alignment.hpp"
#include "steptx/rng.hpp"
#include "steptx/selection.hpp"
#include "steptx/solvers.hpp"

namespace steptx {

std::vector<double> default_lambda_grid(const Signal& v, std::size_t count) {
  if (count == 0) {
    throw argument_error("default_lambda_grid: count must be >= 1");
  }
  // Scale from the sample variance of first differences; a constant or
  // single-point signal falls back to scale 1.
  double scale = 1.0;
  if (v.size() >= 3) {
    std::vector<double> d(v.size() - 1);
    for (std::size_t i = 0; i + 1 < v.size(); ++i) d[i] = v[i + 1] - v[i];
    const double m = running_mean(d);
    double ss = 0.0;
    for (double x : d) ss += (x - m) * (x - m);
    const double var = ss / static_cast<double>(d.size() - 1);
    if (var > 0.0) scale = var;
  }
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = scale;  // geometric midpoint of the single-value case
    return grid;
  }
  const double lo = std::log(1e-4 * scale);
  const double hi = std::log(1e2 * scale);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    grid[i] = std::exp(lo + t * (hi - lo));
  }
  return grid;
}

namespace {

void check_cv_spec(const Signal& v, const CvSpec& spec) {
  if (spec.folds < 2) {
    throw argument_error("cv_select_lambda: need at least 2 folds");
  }
  if (v.size() < spec.folds) {
    throw argument_error("cv_select_lambda: signal length " +
                         std::to_string(v.size()) +
                         " is below the fold count " +
                         std::to_string(spec.folds));
  }
  if (spec.grid.empty()) {
    throw argument_error("cv_select_lambda: the lambda grid is empty");
  }
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    if (!std::isfinite(spec.grid[i]) || spec.grid[i] < 0.0) {
      throw argument_error("cv_select_lambda: grid values must be finite "
                           "and >= 0");
    }
    if (i > 0 && spec.grid[i] <= spec.grid[i - 1]) {
      throw argument_error(
          "cv_select_lambda: the grid must be strictly increasing");
    }
  }
}

}  // namespace

double cv_select_lambda(const Signal& v, PenaltyKind kind,
                        const CvSpec& spec) {
  check_cv_spec(v, spec);
  const std::size_t n = v.size();

  std::vector<double> score(spec.grid.size(), 0.0);
  std::vector<std::size_t> train_idx;
  std::vector<double> train_vals;
  for (std::size_t f = 0; f < spec.folds; ++f) {
    train_idx.clear();
    train_vals.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (i % spec.folds != f) {
        train_idx.push_back(i);
        train_vals.push_back(v[i]);
      }
    }
    // Held-out index -> position of the nearest training index, distance
    // ties toward the smaller index.
    std::vector<std::pair<std::size_t, std::size_t>> held;  // (index, pos)
    for (std::size_t i = f; i < n; i += spec.folds) {
      const auto it =
          std::lower_bound(train_idx.begin(), train_idx.end(), i);
      std::size_t pos;
      if (it == train_idx.begin()) {
        pos = 0;
      } else if (it == train_idx.end()) {
        pos = train_idx.size() - 1;
      } else {
        const std::size_t right = *it, left = *(it - 1);
        pos = (i - left <= right - i)
                  ? static_cast<std::size_t>(it - train_idx.begin()) - 1
                  : static_cast<std::size_t>(it - train_idx.begin());
      }
      held.emplace_back(i, pos);
    }

    const Signal train(train_vals);
    for (std::size_t g = 0; g < spec.grid.size(); ++g) {
      const Signal fit = solve(train, PenaltySpec(kind, spec.grid[g]));
      double acc = 0.0;
      for (const auto& [i, pos] : held) {
        const double d = v[i] - fit[pos];
        acc += d * d;
      }
      score[g] += acc;
    }
  }

  std::size_t best = 0;
  for (std::size_t g = 1; g < score.size(); ++g) {
    if (score[g] < score[best]) best = g;  // ties keep the smaller lambda
  }
  return spec.grid[best];
}

std::function<Signal(const Signal&)> default_permutation_fitter() {
  // Deliberately oversmoothed: a prediction-optimal fit chases exactly the
  // extreme entries that the screened statistic keeps, so permuting its
  // residuals understates the tail and the threshold lands at the detection
  // boundary. Tripling the cross-validated lambda leaves that tail in the
  // residuals.
  return [](const Signal& s) {
    CvSpec spec;
    spec.grid = default_lambda_grid(s);
    const double lambda = cv_select_lambda(s, PenaltyKind::l1, spec);
    return solve_l1(s, 3.0 * lambda);
  };
}

double permutation_threshold(const Signal& y,
                             std::span<const SourceDataset> sources,
                             std::span<const std::size_t> widths,
                             const PermutationSpec& spec) {
  if (sources.empty()) {
    throw argument_error("permutation_threshold: need at least one source");
  }
  if (widths.size() != sources.size()) {
    throw dimension_error(
        "permutation_threshold: need one screening width per source");
  }
  if (spec.permutations == 0) {
    throw argument_error("permutation_threshold: need at least 1 replicate");
  }
  if (!(spec.quantile > 0.0 && spec.quantile < 1.0)) {
    throw argument_error("permutation_threshold: quantile must be in (0, 1)");
  }
  for (std::size_t k = 0; k < sources.size(); ++k) {
    if (widths[k] == 0 || widths[k] > sources[k].size()) {
      throw argument_error("permutation_threshold: width for source " +
                           std::to_string(k + 1) + " must be in [1, " +
                           std::to_string(sources[k].size()) + "]");
    }
  }

  // Pilot source: smallest full squared deviation from the expanded target.
  std::size_t pilot = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < sources.size(); ++k) {
    const auto dev = normalized_deviation(y, sources[k].data());
    double ss = 0.0;
    for (double d : dev) ss += d * d;
    if (ss < best) {
      best = ss;
      pilot = k;
    }
  }

  const Signal& pilot_data = sources[pilot].data();
  const std::size_t n_k = pilot_data.size();
  const auto fitter = spec.fit ? spec.fit : default_permutation_fitter();
  const Signal fitted = fitter(pilot_data);
  if (fitted.size() != n_k) {
    throw dimension_error(
        "permutation_threshold: the fitter changed the signal length");
  }
  std::vector<double> residual(n_k);
  for (std::size_t i = 0; i < n_k; ++i) {
    residual[i] = pilot_data[i] - fitted[i];
  }

  const Signal expanded = expand(y, n_k);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_k));
  const std::size_t width = widths[pilot];

  std::vector<double> stats(spec.permutations);
  std::vector<std::size_t> perm(n_k);
  std::vector<double> replicate(n_k);
  for (std::size_t b = 0; b < spec.permutations; ++b) {
    // One stream per replicate: results are invariant to evaluation order
    // and to enlarging B.
    CounterRng rng({spec.rng_seed, b + 1, rng_tag::permutation});
    for (std::size_t i = 0; i < n_k; ++i) perm[i] = i;
    for (std::size_t i = n_k - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(rng.below(i + 1));
      std::swap(perm[i], perm[j]);
    }
    for (std::size_t i = 0; i < n_k; ++i) {
      replicate[i] = scale * (fitted[i] + residual[perm[i]] - expanded[i]);
    }
    stats[b] = screened_sq_norm(replicate, width);
  }

  std::sort(stats.begin(), stats.end());
  const double qb = spec.quantile * static_cast<double>(spec.permutations);
  const std::size_t rank = static_cast<std::size_t>(std::ceil(qb));
  return stats[rank - 1];
}

}  // namespace steptx
