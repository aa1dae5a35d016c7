#include "steptx/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "steptx/alignment.hpp"

namespace steptx {

LeftInverseMatrix::LeftInverseMatrix(std::size_t rows, std::size_t cols,
                                     std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows_ == 0 || cols_ == 0) {
    throw argument_error("LeftInverseMatrix: dimensions must be >= 1");
  }
  if (entries_.size() != rows_ * cols_) {
    throw dimension_error("LeftInverseMatrix: entry count " +
                          std::to_string(entries_.size()) +
                          " does not match " + std::to_string(rows_) + "x" +
                          std::to_string(cols_));
  }
  for (double e : entries_) {
    if (!std::isfinite(e)) {
      throw argument_error("LeftInverseMatrix: non-finite entry");
    }
  }
}

std::vector<double> LeftInverseMatrix::apply(std::span<const double> v) const {
  if (v.size() != cols_) {
    throw dimension_error("LeftInverseMatrix::apply: vector length " +
                          std::to_string(v.size()) + " does not match " +
                          std::to_string(cols_) + " columns");
  }
  std::vector<double> out(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    double acc = 0.0;
    const double* row = entries_.data() + r * cols_;
    for (std::size_t c = 0; c < cols_; ++c) acc += row[c] * v[c];
    out[r] = acc;
  }
  return out;
}

void LeftInverseMatrix::verify_left_inverse_of(std::span<const double> a,
                                               std::size_t a_rows,
                                               std::size_t a_cols,
                                               double tol) const {
  if (a_rows != cols_ || a_cols != rows_ || a.size() != a_rows * a_cols) {
    throw dimension_error(
        "verify_left_inverse_of: declared map must be " +
        std::to_string(cols_) + "x" + std::to_string(rows_));
  }
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < rows_; ++c) {
      double acc = 0.0;
      for (std::size_t k = 0; k < cols_; ++k) {
        acc += at(r, k) * a[k * a_cols + c];
      }
      const double want = (r == c) ? 1.0 : 0.0;
      if (std::fabs(acc - want) > tol) {
        throw argument_error(
            "verify_left_inverse_of: product deviates from identity at (" +
            std::to_string(r + 1) + "," + std::to_string(c + 1) + ") by " +
            std::to_string(acc - want));
      }
    }
  }
}

double LeftInverseMatrix::spectral_norm() const {
  // Power iteration on this * this^T with a fixed, slightly tilted start so
  // repeated calls are bit-identical.
  std::vector<double> x(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    x[i] = 1.0 + 0.5 * static_cast<double>(i) / static_cast<double>(rows_);
  }
  std::vector<double> tmp(cols_), y(rows_);
  double prev = 0.0;
  for (int it = 0; it < 500; ++it) {
    for (std::size_t c = 0; c < cols_; ++c) {
      double acc = 0.0;
      for (std::size_t r = 0; r < rows_; ++r) acc += at(r, c) * x[r];
      tmp[c] = acc;
    }
    for (std::size_t r = 0; r < rows_; ++r) {
      double acc = 0.0;
      const double* row = entries_.data() + r * cols_;
      for (std::size_t c = 0; c < cols_; ++c) acc += row[c] * tmp[c];
      y[r] = acc;
    }
    double xy = 0.0, xx = 0.0, yy = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      xy += x[r] * y[r];
      xx += x[r] * x[r];
      yy += y[r] * y[r];
    }
    if (yy == 0.0) return 0.0;  // matrix annihilates the iterate: zero map
    const double rayleigh = xy / xx;
    const double norm = std::sqrt(yy);
    for (std::size_t r = 0; r < rows_; ++r) x[r] = y[r] / norm;
    if (it > 4 && std::fabs(rayleigh - prev) <=
                      1e-13 * std::max(1.0, std::fabs(rayleigh))) {
      prev = rayleigh;
      break;
    }
    prev = rayleigh;
  }
  return std::sqrt(prev > 0.0 ? prev : 0.0);
}

Signal unisource_input(const SourceDataset& source, std::size_t n0) {
  if (n0 == 0) throw argument_error("unisource_input: n0 must be >= 1");
  if (source.size() < n0) {
    throw precondition_error(
        "unisource transfer needs a source at least as long as the target "
        "(source length " +
        std::to_string(source.size()) + " < n0 " + std::to_string(n0) +
        "); use estimate_target_unisource for shorter sources");
  }
  return average(source.data(), n0);
}

Signal multisource_input(std::span<const SourceDataset> sources,
                         std::size_t n0) {
  if (sources.empty()) {
    throw argument_error("multisource_input: need at least one source");
  }
  for (const auto& s : sources) {
    if (s.size() < n0) {
      throw precondition_error(
          "multisource transfer needs every source at least as long as the "
          "target (source " +
          std::to_string(s.index()) + " has length " +
          std::to_string(s.size()) + " < n0 " + std::to_string(n0) +
          "); use estimate_target_multisource for shorter sources");
    }
  }
  // Entrywise mean of the per-source block averages, accumulated
  // incrementally so identical summands stay exact.
  std::vector<double> mean(n0, 0.0);
  std::size_t k = 0;
  for (const auto& s : sources) {
    const Signal avg = average(s.data(), n0);
    ++k;
    for (std::size_t i = 0; i < n0; ++i) {
      mean[i] += (avg[i] - mean[i]) / static_cast<double>(k);
    }
  }
  return Signal(std::move(mean));
}

Signal affine_input(const SourceDataset& source,
                    const LeftInverseMatrix& a_left) {
  if (a_left.cols() != source.size()) {
    throw dimension_error("affine_input: matrix has " +
                          std::to_string(a_left.cols()) +
                          " columns but the source has length " +
                          std::to_string(source.size()));
  }
  return Signal(a_left.apply(source.data().values()));
}

Signal target_unisource_input(const Signal& y, const SourceDataset& source) {
  return average(interleave_pair(y, source), y.size());
}

Signal target_multisource_input(const Signal& y,
                                std::span<const SourceDataset> sources) {
  if (sources.empty()) {
    throw argument_error("target_multisource_input: need at least one source");
  }
  std::vector<std::size_t> blocks;
  blocks.reserve(sources.size() + 1);
  blocks.push_back(y.size());  // the target's own entries lead each block
  for (const auto& s : sources) blocks.push_back(s.size());
  return average_multi(interleave_all(y, sources), y.size(), blocks);
}

Signal estimate_unisource(const SourceDataset& source, std::size_t n0,
                          const PenaltySpec& penalty) {
  return solve(unisource_input(source, n0), penalty);
}

Signal estimate_multisource(std::span<const SourceDataset> sources,
                            std::size_t n0, const PenaltySpec& penalty) {
  return solve(multisource_input(sources, n0), penalty);
}

Signal estimate_affine(const SourceDataset& source,
                       const LeftInverseMatrix& a_left, double lambda) {
  return solve_l0(affine_input(source, a_left), lambda);
}

Signal estimate_target_unisource(const Signal& y, const SourceDataset& source,
                                 double lambda) {
  return solve_l0(target_unisource_input(y, source), lambda);
}

Signal estimate_target_multisource(const Signal& y,
                                   std::span<const SourceDataset> sources,
                                   double lambda) {
  return solve_l0(target_multisource_input(y, sources), lambda);
}

Signal estimate_target_only(const Signal& y, const PenaltySpec& penalty) {
  return solve(y, penalty);
}

namespace {

void check_tuning_args(std::size_t s0, std::size_t n0, double c) {
  if (n0 == 0) throw argument_error("theoretical_lambda: n0 must be >= 1");
  if (s0 + 1 > n0) {
    throw argument_error(
        "theoretical_lambda: s0 must satisfy s0 + 1 <= n0 (got s0 = " +
        std::to_string(s0) + ", n0 = " + std::to_string(n0) + ")");
  }
  if (!std::isfinite(c) || c <= 0.0) {
    throw argument_error("theoretical_lambda: c must be finite and > 0");
  }
}

double log_rate(std::size_t s0, std::size_t n0, TuningForm form) {
  if (form == TuningForm::sparsity_free) {
    return std::log(static_cast<double>(n0));
  }
  return 1.0 + std::log(static_cast<double>(n0) /
                        static_cast<double>(s0 + 1));
}

double sparsity_factor(std::size_t s0, TuningForm form) {
  return form == TuningForm::sparsity_free
             ? 1.0
             : static_cast<double>(s0 + 1);
}

}  // namespace

double theoretical_lambda(Variant variant, PenaltyKind kind, std::size_t s0,
                          std::size_t n0,
                          std::span<const std::size_t> source_lens, double c,
                          TuningForm form) {
  check_tuning_args(s0, n0, c);
  const bool needs_sources = variant != Variant::target_only;
  if (needs_sources) {
    if (source_lens.empty()) {
      throw argument_error(
          "theoretical_lambda: this variant needs source lengths");
    }
    for (std::size_t n : source_lens) {
      if (n == 0) {
        throw argument_error("theoretical_lambda: source lengths must be >= 1");
      }
    }
  }
  const double L = log_rate(s0, n0, form);

  switch (variant) {
    case Variant::target_only: {
      const double n1 = static_cast<double>(n0);
      return kind == PenaltyKind::l1
                 ? c / std::sqrt(sparsity_factor(s0, form) * n1)
                 : c * L / n1;
    }
    case Variant::unisource: {
      const double n1 = static_cast<double>(source_lens[0]);
      return kind == PenaltyKind::l1
                 ? c / std::sqrt(sparsity_factor(s0, form) * n1)
                 : c * L / n1;
    }
    case Variant::multisource: {
      const double K = static_cast<double>(source_lens.size());
      double S = 0.0;
      for (std::size_t n : source_lens) S += 1.0 / static_cast<double>(n);
      return kind == PenaltyKind::l1
                 ? (c / K) * std::sqrt(S / sparsity_factor(s0, form))
                 : c * L * S / (K * K);
    }
    case Variant::target_unisource: {
      if (kind != PenaltyKind::l0) {
        throw argument_error(
            "theoretical_lambda: target_unisource is jump-count penalised "
            "only");
      }
      return c * L /
             static_cast<double>(n0 + source_lens[0]);
    }
    case Variant::target_multisource: {
      if (kind != PenaltyKind::l0) {
        throw argument_error(
            "theoretical_lambda: target_multisource is jump-count penalised "
            "only");
      }
      // Only sources at least as long as the target enter the rate; the
      // target's own n0 observations always count.
      std::size_t denom = n0;
      for (std::size_t n : source_lens) {
        if (n >= n0) denom += n;
      }
      return c * L / static_cast<double>(denom);
    }
    case Variant::affine:
      throw argument_error(
          "theoretical_lambda: use theoretical_lambda_affine for the affine "
          "estimator");
  }
  throw argument_error("theoretical_lambda: unknown variant");
}

double theoretical_lambda_affine(std::size_t s0,
                                 const LeftInverseMatrix& a_left, double c,
                                 TuningForm form) {
  check_tuning_args(s0, a_left.rows(), c);
  const double L = log_rate(s0, a_left.rows(), form);
  const double norm = a_left.spectral_norm();
  return c * L * norm * norm / static_cast<double>(a_left.rows());
}

}  // namespace steptx
