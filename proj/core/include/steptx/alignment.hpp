#pragma once

#include <cstddef>
#include <span>

#include "steptx/signal.hpp"

namespace steptx {

// Frequency alignment between grids of different lengths. All operators are
// applied through exact integer index arithmetic; none is materialised as a
// matrix. Block boundaries use ceil(a*b/c) computed in integers, so results
// are identical across platforms.
//
// Grid j of the coarse signal (length n) owns fine indices
// ceil((j-1)*m/n)+1 .. ceil(j*m/n) of the fine grid (length m). These blocks
// partition [m] for any n, m >= 1; blocks can be empty only when m < n.

// Piecewise-constant expansion onto a grid of length m: output entry i
// copies v_j for the unique block containing i. expand(v, n) == v.
Signal expand(const Signal& v, std::size_t m);

// Block averaging onto a grid of length n; requires v.size() >= n.
// Left inverse of expand: average(expand(v, m), n) == v exactly.
Signal average(const Signal& v, std::size_t n);

// Multi-block expansion: grid j owns a run of sum_k(ceil(j*m_k/n) -
// ceil((j-1)*m_k/n)) consecutive output entries, the per-source blocks
// placed source after source. Output length is sum_k m_k.
Signal expand_multi(const Signal& v, std::span<const std::size_t> block_lens);

// Multi-block averaging, left inverse of expand_multi; requires
// max_k block_lens[k] >= n so every composite block is nonempty.
Signal average_multi(const Signal& v, std::size_t n,
                     std::span<const std::size_t> block_lens);

// Interleaves a target signal y (length n0) with one source series (length
// n1, may be empty): y_j lands at position ceil(j*n1/n0) + j; the remaining
// positions take unused source entries in order. Output length n0 + n1.
Signal interleave_pair(const Signal& y, std::span<const double> source);
Signal interleave_pair(const Signal& y, const SourceDataset& source);

// Interleaves a target with K >= 1 sources: for each j, y_j is followed by
// block j of every source in turn (source k contributes its fine indices
// ceil((j-1)*n_k/n0)+1 .. ceil(j*n_k/n0)). Output length n0 + sum_k n_k.
Signal interleave_all(const Signal& y, std::span<const SourceDataset> sources);

}  // namespace steptx
