#include "steptx/alignment.hpp"

#include <string>
#include <utility>
#include <vector>

namespace steptx {

namespace {

// ceil(j*m/n) without floating point; j*m stays within 64 bits for any
// realistic grid (lengths are bounded by memory, not by this product).
inline std::size_t block_end(std::size_t j, std::size_t m, std::size_t n) {
  return (j * m + n - 1) / n;
}

void check_block_lens(std::span<const std::size_t> block_lens) {
  if (block_lens.empty()) {
    throw argument_error("alignment: block length list must be nonempty");
  }
  for (std::size_t m : block_lens) {
    if (m == 0) {
      throw argument_error("alignment: block lengths must be >= 1");
    }
  }
}

}  // namespace

Signal expand(const Signal& v, std::size_t m) {
  if (m == 0) {
    throw argument_error("expand: target length must be >= 1");
  }
  const std::size_t n = v.size();
  std::vector<double> out;
  out.reserve(m);
  std::size_t lo = 0;
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t hi = block_end(j, m, n);
    for (std::size_t i = lo; i < hi; ++i) {
      out.push_back(v[j - 1]);
    }
    lo = hi;
  }
  return Signal(std::move(out));
}

Signal average(const Signal& v, std::size_t n) {
  const std::size_t m = v.size();
  if (n == 0) {
    throw argument_error("average: target length must be >= 1");
  }
  if (m < n) {
    throw dimension_error("average: input length " + std::to_string(m) +
                          " is shorter than output length " +
                          std::to_string(n));
  }
  std::vector<double> out;
  out.reserve(n);
  std::size_t lo = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t hi = block_end(i, m, n);
    out.push_back(running_mean(v.values().subspan(lo, hi - lo)));
    lo = hi;
  }
  return Signal(std::move(out));
}

Signal expand_multi(const Signal& v,
                    std::span<const std::size_t> block_lens) {
  check_block_lens(block_lens);
  const std::size_t n = v.size();
  std::size_t total = 0;
  for (std::size_t m : block_lens) total += m;

  std::vector<double> out;
  out.reserve(total);
  std::vector<std::size_t> lo(block_lens.size(), 0);
  for (std::size_t j = 1; j <= n; ++j) {
    for (std::size_t k = 0; k < block_lens.size(); ++k) {
      const std::size_t hi = block_end(j, block_lens[k], n);
      for (std::size_t i = lo[k]; i < hi; ++i) {
        out.push_back(v[j - 1]);
      }
      lo[k] = hi;
    }
  }
  return Signal(std::move(out));
}

Signal average_multi(const Signal& v, std::size_t n,
                     std::span<const std::size_t> block_lens) {
  check_block_lens(block_lens);
  if (n == 0) {
    throw argument_error("average_multi: target length must be >= 1");
  }
  std::size_t total = 0;
  std::size_t longest = 0;
  for (std::size_t m : block_lens) {
    total += m;
    if (m > longest) longest = m;
  }
  if (v.size() != total) {
    throw dimension_error("average_multi: input length " +
                          std::to_string(v.size()) +
                          " does not equal the block total " +
                          std::to_string(total));
  }
  if (longest < n) {
    throw dimension_error(
        "average_multi: needs max block length >= " + std::to_string(n) +
        " so every composite block is nonempty; longest is " +
        std::to_string(longest));
  }

  std::vector<double> out;
  out.reserve(n);
  std::size_t lo = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    std::size_t hi = 0;  // composite boundary: sum of per-source boundaries
    for (std::size_t m : block_lens) hi += block_end(i, m, n);
    out.push_back(running_mean(v.values().subspan(lo, hi - lo)));
    lo = hi;
  }
  return Signal(std::move(out));
}

Signal interleave_pair(const Signal& y, std::span<const double> source) {
  const std::size_t n0 = y.size();
  const std::size_t n1 = source.size();
  std::vector<double> out;
  out.reserve(n0 + n1);
  std::size_t consumed = 0;
  for (std::size_t j = 1; j <= n0; ++j) {
    const std::size_t hi = block_end(j, n1, n0);
    while (consumed < hi) out.push_back(source[consumed++]);
    out.push_back(y[j - 1]);  // lands at position ceil(j*n1/n0) + j
  }
  return Signal(std::move(out));
}

Signal interleave_pair(const Signal& y, const SourceDataset& source) {
  return interleave_pair(y, source.data().values());
}

Signal interleave_all(const Signal& y,
                      std::span<const SourceDataset> sources) {
  if (sources.empty()) {
    throw argument_error("interleave_all: need at least one source");
  }
  const std::size_t n0 = y.size();
  std::size_t total = n0;
  for (const auto& s : sources) total += s.size();

  std::vector<double> out;
  out.reserve(total);
  std::vector<std::size_t> lo(sources.size(), 0);
  for (std::size_t j = 1; j <= n0; ++j) {
    out.push_back(y[j - 1]);  // target entry opens composite block j
    for (std::size_t k = 0; k < sources.size(); ++k) {
      const std::size_t hi = block_end(j, sources[k].size(), n0);
      const auto vals = sources[k].data().values();
      for (std::size_t i = lo[k]; i < hi; ++i) {
        out.push_back(vals[i]);
      }
      lo[k] = hi;
    }
  }
  return Signal(std::move(out));
}

}  // namespace steptx
