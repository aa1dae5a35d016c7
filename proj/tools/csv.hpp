#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "steptx/signal.hpp"
#include "steptx/simulation.hpp"

namespace steptx::cli {

// Parse failure with 1-based location; row/col 0 refer to the whole file.
class csv_error : public std::runtime_error {
 public:
  csv_error(std::string path, std::size_t row, std::size_t col,
            const std::string& message);
  const std::string& path() const noexcept { return path_; }
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::string path_;
  std::size_t row_;
  std::size_t col_;
};

// Shortest decimal representation that parses back to the same double.
std::string format_double(double x);

// Reads one series: comma-separated, optional header (detected when the
// first row has any non-numeric field). With a header the column named
// "value" is used when present; otherwise the first column.
Signal read_signal_csv(const std::string& path);

// Reads a dense numeric matrix; all rows must have equal width.
std::vector<std::vector<double>> read_matrix_csv(const std::string& path);

// index,value rows, one per entry, 1-based index.
void write_signal_csv(std::ostream& os, const Signal& s);

std::string results_csv(std::span<const TrialResult> results);
std::string summary_csv(std::span<const MethodSummary> summaries);

}  // namespace steptx::cli
