#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "steptx/signal.hpp"

namespace steptx {

// Cross-validation layout. Folds are interleaved by index (fold of entry i
// is i mod folds, 0-based), so the split is deterministic and seed-free.
struct CvSpec {
  std::size_t folds = 5;
  std::vector<double> grid;  // strictly increasing, nonnegative
};

// 30 logarithmically spaced values spanning [1e-4, 1e2] times the sample
// variance of the first differences of v (scale 1 when that variance is
// degenerate).
std::vector<double> default_lambda_grid(const Signal& v,
                                        std::size_t count = 30);

// Picks the grid value with the smallest held-out squared error. Each fold
// fits the solver on the training values placed on their own contiguous
// grid and predicts a held-out point by the fitted value at the nearest
// training index (distance ties go left). Score ties pick the smallest
// lambda.
double cv_select_lambda(const Signal& v, PenaltyKind kind, const CvSpec& spec);

// Permutation calibration of the selection threshold.
struct PermutationSpec {
  std::size_t permutations = 200;  // B
  double quantile = 0.99;          // q in (0, 1)
  // Pilot fitter whose residuals are permuted; must return a signal of the
  // input's length.
  std::function<Signal(const Signal&)> fit;
  std::uint64_t rng_seed = 0;
};

// The fitter used when PermutationSpec.fit is empty: the total-variation
// solver at three times its cross-validated lambda. The oversmoothing is
// intentional; see the definition for why a prediction-optimal fit biases
// the threshold low.
std::function<Signal(const Signal&)> default_permutation_fitter();

// Calibrates one threshold shared by all sources: the source closest to the
// expanded target is fitted, its residuals are permuted B times, each
// replicate is screened like a real source (widths[k] entries), and the
// ceil(q*B)-th smallest screened norm is returned. Replicate b draws from a
// stream keyed by (rng_seed, b), so enlarging B extends the sequence
// without changing earlier replicates.
double permutation_threshold(const Signal& y,
                             std::span<const SourceDataset> sources,
                             std::span<const std::size_t> widths,
                             const PermutationSpec& spec);

}  // namespace steptx
