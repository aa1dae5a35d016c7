#include "steptx/signal.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace steptx {

Signal::Signal(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw argument_error("Signal: length must be at least 1");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw argument_error("Signal: non-finite value at position " +
                           std::to_string(i + 1));
    }
  }
}

Signal Signal::constant(std::size_t n, double value) {
  return Signal(std::vector<double>(n, value));
}

SourceDataset::SourceDataset(Signal data, int index,
                             std::optional<Signal> truth)
    : data_(std::move(data)), index_(index), truth_(std::move(truth)) {
  if (index_ < 1) {
    throw argument_error("SourceDataset: index must be >= 1, got " +
                         std::to_string(index_));
  }
  if (truth_ && truth_->size() != data_.size()) {
    throw dimension_error("SourceDataset: truth length " +
                          std::to_string(truth_->size()) +
                          " does not match data length " +
                          std::to_string(data_.size()));
  }
}

PenaltySpec::PenaltySpec(PenaltyKind kind_in, double lambda_in)
    : kind(kind_in), lambda(lambda_in) {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw argument_error("PenaltySpec: lambda must be finite and >= 0");
  }
}

double mse_loss(const Signal& a, const Signal& b) {
  if (a.size() != b.size()) {
    throw dimension_error("mse_loss: lengths differ (" +
                          std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc / static_cast<double>(a.size());
}

ChangepointSet changepoints_of(const Signal& theta, double tol) {
  if (!(tol >= 0.0)) {
    throw argument_error("changepoints_of: tol must be >= 0");
  }
  ChangepointSet out;
  for (std::size_t i = 0; i + 1 < theta.size(); ++i) {
    if (std::fabs(theta[i] - theta[i + 1]) > tol) {
      out.indices.push_back(i + 1);  // 1-based
    }
  }
  return out;
}

Signal difference_apply(const Signal& theta) {
  if (theta.size() < 2) {
    throw dimension_error("difference_apply: need length >= 2, got " +
                          std::to_string(theta.size()));
  }
  std::vector<double> d(theta.size() - 1);
  for (std::size_t i = 0; i + 1 < theta.size(); ++i) {
    d[i] = theta[i] - theta[i + 1];
  }
  return Signal(std::move(d));
}

double running_mean(std::span<const double> xs) {
  double m = 0.0;
  std::size_t k = 0;
  for (double x : xs) {
    m += (x - m) / static_cast<double>(++k);
  }
  return m;
}

}  // namespace steptx
