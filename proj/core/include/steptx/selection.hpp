#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "steptx/signal.hpp"

namespace steptx {

// Per-source screening sizes and inclusion thresholds; one entry per source,
// positional.
struct SelectionConfig {
  std::vector<std::size_t> screen_widths;
  std::vector<double> thresholds;
};

// Sorted 1-based positions of the sources judged informative.
struct InformativeSet {
  std::vector<int> indices;
  bool empty() const noexcept { return indices.empty(); }
  std::size_t size() const noexcept { return indices.size(); }
};

// Scaled deviation between a source and the expanded target:
// (source_i - expand(y)_i) / sqrt(n_k).
std::vector<double> normalized_deviation(const Signal& y,
                                         const Signal& source);

// Sum of squares of the `width` largest-magnitude entries. Magnitude ties
// resolve toward the lower index, so the screened set is deterministic.
double screened_sq_norm(std::span<const double> deviation, std::size_t width);

// Keeps source k when the screened squared norm of its deviation statistic
// is at most thresholds[k]. Sources enter independently; duplicates of an
// accepted source are all accepted.
InformativeSet detect_informative(const Signal& y,
                                  std::span<const SourceDataset> sources,
                                  const SelectionConfig& config);

// Screening size rule: ceil of
//   c * (n_k / (8 n0)) * ((s0+1)(1 + log(n0/(s0+1))) / log(max(n0, n_k)) + 1)
// clamped into [1, n_k]. A unit log divisor (n0 = n_k = 1) clamps to n_k.
std::size_t theoretical_screen_width(std::size_t s0, std::size_t n0,
                                     std::size_t n_k, double c);

// Threshold rule:
//   c * ((s0+1)(1 + log(n0/(s0+1))) + log(max(n0, n_k))) / n0.
double theoretical_threshold(std::size_t s0, std::size_t n0, std::size_t n_k,
                             double c);

// Smallest value of sum_{k in A} 1/n_k / |A|^2 over nonempty subsets of the
// given set; ties prefer larger cardinality, then the lexicographically
// smallest index sequence. Exhaustive, so the set is capped at 20 members.
InformativeSet refine_subset(const InformativeSet& a_hat,
                             std::span<const std::size_t> source_lens);

// Effective-sample-size curve K^2 / sum_{k<=K} 1/n_k over the first K
// sources.
double frequency_curve(std::span<const std::size_t> source_lens,
                       std::size_t K);

}  // namespace steptx
