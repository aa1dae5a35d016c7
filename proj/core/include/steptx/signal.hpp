#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "steptx/errors.hpp"

namespace steptx {

// Immutable finite-valued vector observed on a regular grid, length >= 1.
class Signal {
 public:
  explicit Signal(std::vector<double> values);
  static Signal constant(std::size_t n, double value);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const Signal&, const Signal&) = default;

 private:
  std::vector<double> values_;
};

// Positions i in {1, ..., n-1} where a signal jumps between entries i and
// i+1 (1-based), strictly increasing.
struct ChangepointSet {
  std::vector<std::size_t> indices;
  std::size_t size() const noexcept { return indices.size(); }
};

// One source series plus bookkeeping. `truth` is the source's own noise-free
// signal when known (simulations); it must match `data` in length.
class SourceDataset {
 public:
  SourceDataset(Signal data, int index,
                std::optional<Signal> truth = std::nullopt);

  const Signal& data() const noexcept { return data_; }
  int index() const noexcept { return index_; }
  const std::optional<Signal>& truth() const noexcept { return truth_; }
  std::size_t size() const noexcept { return data_.size(); }

 private:
  Signal data_;
  int index_;
  std::optional<Signal> truth_;
};

enum class PenaltyKind { l1, l0 };

// Penalty kind plus a nonnegative finite tuning value.
struct PenaltySpec {
  PenaltySpec(PenaltyKind kind, double lambda);
  PenaltyKind kind;
  double lambda;
};

// Mean squared error (1/n) * sum_i (a_i - b_i)^2; lengths must match.
double mse_loss(const Signal& a, const Signal& b);

// Indices i with |theta_i - theta_{i+1}| > tol, 1-based. The default tol
// suits float pipelines; pass 0 for exact data.
ChangepointSet changepoints_of(const Signal& theta, double tol = 1e-9);

// First differences (theta_1 - theta_2, ..., theta_{n-1} - theta_n);
// requires length >= 2.
Signal difference_apply(const Signal& theta);

// Incremental mean. Exact when all entries are equal, which downstream code
// relies on: block means of replicated values must reproduce the value.
double running_mean(std::span<const double> xs);

}  // namespace steptx
