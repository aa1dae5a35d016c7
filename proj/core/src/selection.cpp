#include "steptx/selection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "steptx/alignment.hpp"

namespace steptx {

std::vector<double> normalized_deviation(const Signal& y,
                                         const Signal& source) {
  const Signal expanded = expand(y, source.size());
  const double scale = 1.0 / std::sqrt(static_cast<double>(source.size()));
  std::vector<double> d(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) {
    d[i] = scale * (source[i] - expanded[i]);
  }
  return d;
}

double screened_sq_norm(std::span<const double> deviation,
                        std::size_t width) {
  if (width == 0 || width > deviation.size()) {
    throw argument_error("screened_sq_norm: width must be in [1, " +
                         std::to_string(deviation.size()) + "], got " +
                         std::to_string(width));
  }
  std::vector<std::size_t> order(deviation.size());
  std::iota(order.begin(), order.end(), 0);
  const auto larger = [&](std::size_t a, std::size_t b) {
    const double fa = std::fabs(deviation[a]);
    const double fb = std::fabs(deviation[b]);
    if (fa != fb) return fa > fb;
    return a < b;  // stable under magnitude ties
  };
  std::nth_element(order.begin(), order.begin() + (width - 1), order.end(),
                   larger);
  double acc = 0.0;
  for (std::size_t t = 0; t < width; ++t) {
    acc += deviation[order[t]] * deviation[order[t]];
  }
  return acc;
}

InformativeSet detect_informative(const Signal& y,
                                  std::span<const SourceDataset> sources,
                                  const SelectionConfig& config) {
  if (sources.empty()) {
    throw argument_error("detect_informative: need at least one source");
  }
  if (config.screen_widths.size() != sources.size() ||
      config.thresholds.size() != sources.size()) {
    throw dimension_error(
        "detect_informative: config must carry one width and one threshold "
        "per source");
  }
  InformativeSet out;
  for (std::size_t k = 0; k < sources.size(); ++k) {
    const auto dev = normalized_deviation(y, sources[k].data());
    const double stat = screened_sq_norm(dev, config.screen_widths[k]);
    if (stat <= config.thresholds[k]) {
      out.indices.push_back(static_cast<int>(k + 1));
    }
  }
  return out;
}

namespace {

void check_rule_args(std::size_t s0, std::size_t n0, std::size_t n_k,
                     double c) {
  if (n0 == 0 || n_k == 0) {
    throw argument_error("selection rule: lengths must be >= 1");
  }
  if (s0 + 1 > n0) {
    throw argument_error("selection rule: s0 + 1 must be <= n0");
  }
  if (!std::isfinite(c) || c <= 0.0) {
    throw argument_error("selection rule: c must be finite and > 0");
  }
}

}  // namespace

std::size_t theoretical_screen_width(std::size_t s0, std::size_t n0,
                                     std::size_t n_k, double c) {
  check_rule_args(s0, n0, n_k, c);
  const double sparse = static_cast<double>(s0 + 1) *
                        (1.0 + std::log(static_cast<double>(n0) /
                                        static_cast<double>(s0 + 1)));
  const double log_max = std::log(static_cast<double>(std::max(n0, n_k)));
  double width;
  if (log_max == 0.0) {
    width = static_cast<double>(n_k);  // degenerate n0 = n_k = 1
  } else {
    width = c * (static_cast<double>(n_k) / (8.0 * static_cast<double>(n0))) *
            (sparse / log_max + 1.0);
    width = std::ceil(width);
  }
  const double clamped =
      std::min(static_cast<double>(n_k), std::max(1.0, width));
  return static_cast<std::size_t>(clamped);
}

double theoretical_threshold(std::size_t s0, std::size_t n0, std::size_t n_k,
                             double c) {
  check_rule_args(s0, n0, n_k, c);
  const double sparse = static_cast<double>(s0 + 1) *
                        (1.0 + std::log(static_cast<double>(n0) /
                                        static_cast<double>(s0 + 1)));
  const double log_max = std::log(static_cast<double>(std::max(n0, n_k)));
  return c * (sparse + log_max) / static_cast<double>(n0);
}

InformativeSet refine_subset(const InformativeSet& a_hat,
                             std::span<const std::size_t> source_lens) {
  if (a_hat.empty()) {
    throw argument_error("refine_subset: the candidate set is empty");
  }
  if (a_hat.size() > 20) {
    throw argument_error(
        "refine_subset: exhaustive search is capped at 20 candidates, got " +
        std::to_string(a_hat.size()));
  }
  for (int k : a_hat.indices) {
    if (k < 1 || static_cast<std::size_t>(k) > source_lens.size()) {
      throw argument_error("refine_subset: index " + std::to_string(k) +
                           " has no source length");
    }
  }

  const std::size_t m = a_hat.size();
  double best = 0.0;
  std::vector<int> best_set;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    double harmonic = 0.0;
    std::vector<int> members;
    for (std::size_t t = 0; t < m; ++t) {
      if (mask & (std::uint64_t{1} << t)) {
        const int k = a_hat.indices[t];
        harmonic += 1.0 / static_cast<double>(source_lens[k - 1]);
        members.push_back(k);
      }
    }
    const double value =
        harmonic / (static_cast<double>(members.size()) *
                    static_cast<double>(members.size()));
    bool take = best_set.empty() || value < best;
    if (!take && value == best) {
      if (members.size() > best_set.size()) {
        take = true;
      } else if (members.size() == best_set.size()) {
        take = std::lexicographical_compare(members.begin(), members.end(),
                                            best_set.begin(), best_set.end());
      }
    }
    if (take) {
      best = value;
      best_set = std::move(members);
    }
  }
  return InformativeSet{std::move(best_set)};
}

double frequency_curve(std::span<const std::size_t> source_lens,
                       std::size_t K) {
  if (K == 0 || K > source_lens.size()) {
    throw argument_error("frequency_curve: K must be in [1, " +
                         std::to_string(source_lens.size()) + "], got " +
                         std::to_string(K));
  }
  double harmonic = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    if (source_lens[k] == 0) {
      throw argument_error("frequency_curve: source lengths must be >= 1");
    }
    harmonic += 1.0 / static_cast<double>(source_lens[k]);
  }
  return static_cast<double>(K) * static_cast<double>(K) / harmonic;
}

}  // namespace steptx
