#include "csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace steptx::cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

bool parse_double(const std::string& field, double& out) {
  const char* b = field.data();
  const char* e = b + field.size();
  auto res = std::from_chars(b, e, out);
  return res.ec == std::errc{} && res.ptr == e && !field.empty();
}

// Rows of trimmed fields, with blank lines dropped.
std::vector<std::vector<std::string>> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw csv_error(path, 0, 0, "cannot open file");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    rows.push_back(split_fields(line));
  }
  if (rows.empty()) throw csv_error(path, 0, 0, "file has no data");
  return rows;
}

bool row_is_numeric(const std::vector<std::string>& row) {
  double x = 0;
  for (const auto& f : row) {
    if (!parse_double(f, x)) return false;
  }
  return true;
}

double parse_cell(const std::string& path,
                  const std::vector<std::vector<std::string>>& rows,
                  std::size_t r, std::size_t c) {
  if (c >= rows[r].size()) {
    throw csv_error(path, r + 1, c + 1, "row has too few columns");
  }
  double x = 0;
  if (!parse_double(rows[r][c], x)) {
    throw csv_error(path, r + 1, c + 1,
                    "not a number: \"" + rows[r][c] + "\"");
  }
  if (!std::isfinite(x)) {
    throw csv_error(path, r + 1, c + 1, "value is not finite");
  }
  return x;
}

}  // namespace

csv_error::csv_error(std::string path, std::size_t row, std::size_t col,
                     const std::string& message)
    : std::runtime_error(path + (row == 0 ? std::string()
                                          : ":row " + std::to_string(row) +
                                                ":col " + std::to_string(col)) +
                         ": " + message),
      path_(std::move(path)),
      row_(row),
      col_(col) {}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Signal read_signal_csv(const std::string& path) {
  auto rows = read_rows(path);
  std::size_t first = 0;
  std::size_t col = 0;
  if (!row_is_numeric(rows[0])) {
    for (std::size_t c = 0; c < rows[0].size(); ++c) {
      if (rows[0][c] == "value") col = c;
    }
    first = 1;
  }
  if (first >= rows.size()) throw csv_error(path, 0, 0, "file has no data rows");
  std::vector<double> values;
  values.reserve(rows.size() - first);
  for (std::size_t r = first; r < rows.size(); ++r) {
    values.push_back(parse_cell(path, rows, r, col));
  }
  return Signal(std::move(values));
}

std::vector<std::vector<double>> read_matrix_csv(const std::string& path) {
  auto rows = read_rows(path);
  std::size_t first = row_is_numeric(rows[0]) ? 0 : 1;
  if (first >= rows.size()) throw csv_error(path, 0, 0, "file has no data rows");
  const std::size_t width = rows[first].size();
  std::vector<std::vector<double>> out;
  out.reserve(rows.size() - first);
  for (std::size_t r = first; r < rows.size(); ++r) {
    if (rows[r].size() != width) {
      throw csv_error(path, r + 1, rows[r].size(),
                      "expected " + std::to_string(width) + " columns");
    }
    std::vector<double> row(width);
    for (std::size_t c = 0; c < width; ++c) row[c] = parse_cell(path, rows, r, c);
    out.push_back(std::move(row));
  }
  return out;
}

void write_signal_csv(std::ostream& os, const Signal& s) {
  os << "index,value\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    os << (i + 1) << ',' << format_double(s[i]) << '\n';
  }
}

std::string results_csv(std::span<const TrialResult> results) {
  std::ostringstream os;
  os << "method,trial,loss,selected_set,seed\n";
  for (const auto& r : results) {
    os << r.method << ',' << r.trial << ',' << format_double(r.loss) << ',';
    if (r.selected.has_value()) {
      if (r.selected->empty()) {
        os << "EMPTY";
      } else {
        for (std::size_t i = 0; i < r.selected->size(); ++i) {
          if (i > 0) os << ';';
          os << (*r.selected)[i];
        }
      }
    }
    os << ',' << r.seed << '\n';
  }
  return os.str();
}

std::string summary_csv(std::span<const MethodSummary> summaries) {
  std::ostringstream os;
  os << "method,mean_loss,se,trials\n";
  for (const auto& s : summaries) {
    os << s.method << ',' << format_double(s.mean_loss) << ','
       << format_double(s.se) << ',' << s.trials << '\n';
  }
  return os.str();
}

}  // namespace steptx::cli
