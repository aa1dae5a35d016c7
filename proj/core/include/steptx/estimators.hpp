#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "steptx/signal.hpp"
#include "steptx/solvers.hpp"

namespace steptx {

// Every estimator below is alignment preprocessing followed by exactly one
// penalised solver call on a length-n0 vector. The *_input builders expose
// that solver input so tuning (cross-validation) can operate on the same
// vector the estimator sees.

enum class Variant {
  target_only,
  unisource,
  multisource,
  affine,
  target_unisource,
  target_multisource,
};

// Dense user-supplied left inverse mapping a length-cols source onto a
// length-rows grid (row-major). Used only by the affine estimator; the
// built-in operators stay matrix-free.
class LeftInverseMatrix {
 public:
  LeftInverseMatrix(std::size_t rows, std::size_t cols,
                    std::vector<double> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double at(std::size_t r, std::size_t c) const noexcept {
    return entries_[r * cols_ + c];
  }

  std::vector<double> apply(std::span<const double> v) const;

  // Checks this * a == identity within tol, where a is cols x rows
  // (row-major); throws argument_error when the declared inverse fails.
  void verify_left_inverse_of(std::span<const double> a, std::size_t a_rows,
                              std::size_t a_cols, double tol = 1e-9) const;

  // Largest singular value by power iteration with a fixed start vector.
  double spectral_norm() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> entries_;
};

// Solver inputs. Preconditions throw precondition_error naming the
// estimator that handles the rejected shape.
Signal unisource_input(const SourceDataset& source, std::size_t n0);
Signal multisource_input(std::span<const SourceDataset> sources,
                         std::size_t n0);
Signal affine_input(const SourceDataset& source,
                    const LeftInverseMatrix& a_left);
Signal target_unisource_input(const Signal& y, const SourceDataset& source);
Signal target_multisource_input(const Signal& y,
                                std::span<const SourceDataset> sources);

// Single-source transfer; requires source length >= n0.
Signal estimate_unisource(const SourceDataset& source, std::size_t n0,
                          const PenaltySpec& penalty);

// Multi-source transfer on the per-source block averages; requires every
// source length >= n0.
Signal estimate_multisource(std::span<const SourceDataset> sources,
                            std::size_t n0, const PenaltySpec& penalty);

// Transfer through a user-declared left inverse; jump-count penalty only.
Signal estimate_affine(const SourceDataset& source,
                       const LeftInverseMatrix& a_left, double lambda);

// Target observations interleaved with one source of any length; jump-count
// penalty only.
Signal estimate_target_unisource(const Signal& y, const SourceDataset& source,
                                 double lambda);

// Target observations interleaved with K >= 1 sources of any lengths;
// jump-count penalty only.
Signal estimate_target_multisource(const Signal& y,
                                   std::span<const SourceDataset> sources,
                                   double lambda);

// No transfer: penalised fit of the target series itself.
Signal estimate_target_only(const Signal& y, const PenaltySpec& penalty);

enum class TuningForm {
  oracle,         // uses the true jump count s0
  sparsity_free,  // drops s0 from the rate
};

// Closed-form tuning values, c times the variant's rate:
//   unisource          l1: ((s0+1) n1)^(-1/2)        l0: L/n1
//   multisource        l1: K^-1 (S/(s0+1))^(1/2)     l0: L S / K^2
//   target_only        the unisource forms with n1 = n0
//   target_unisource   l0 only: L/(n0+n1)
//   target_multisource l0 only: L/(n0 + sum of source lengths >= n0)
// with L = 1 + log(n0/(s0+1)) and S = sum_k 1/n_k. The sparsity-free form
// sets s0 aside: the l1 rates lose the (s0+1) factor and L becomes log(n0).
double theoretical_lambda(Variant variant, PenaltyKind kind, std::size_t s0,
                          std::size_t n0,
                          std::span<const std::size_t> source_lens, double c,
                          TuningForm form = TuningForm::oracle);

// Affine rule: c * L * ||a_left||^2 / rows(a_left).
double theoretical_lambda_affine(std::size_t s0,
                                 const LeftInverseMatrix& a_left, double c,
                                 TuningForm form = TuningForm::oracle);

}  // namespace steptx
