#include "sgep/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

namespace sgep::io {

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::InvalidInput, what);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_field(std::string_view field, const std::string& where) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    invalid(where + ": cannot parse '" + std::string(field) + "'");
  }
  if (!std::isfinite(value)) invalid(where + ": non-finite value");
  return value;
}

}  // namespace

DenseMatrix<double> parse_matrix_csv(std::istream& in, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    const std::string where = source + ":" + std::to_string(line_no);
    while (true) {
      const std::size_t comma = view.find(',', start);
      row.push_back(parse_field(view.substr(start, comma - start), where));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      invalid(where + ": expected " + std::to_string(rows.front().size()) + " columns");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) invalid(source + ": empty matrix file");
  DenseMatrix<double> m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

DenseMatrix<double> read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot open " + path);
  return parse_matrix_csv(in, path);
}

DenseVector<double> read_vector_csv(const std::string& path) {
  const DenseMatrix<double> m = read_matrix_csv(path);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  invalid(path + ": expected a single row or column");
}

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_matrix_csv(std::ostream& out, const DenseMatrix<double>& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix_csv(const std::string& path, const DenseMatrix<double>& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) invalid("cannot write " + path);
  write_matrix_csv(out, m);
}

void write_vector_csv(std::ostream& out, const DenseVector<double>& v) {
  for (Index i = 0; i < v.size(); ++i) out << format_double(v(i)) << '\n';
}

void write_vector_csv(const std::string& path, const DenseVector<double>& v) {
  std::ofstream out(path, std::ios::binary);
  if (!out) invalid("cannot write " + path);
  write_vector_csv(out, v);
}

DenseVector<double> snap_to_zero(DenseVector<double> v, double tol) {
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) <= tol) v(i) = 0.0;
  }
  return v;
}

}  // namespace sgep::io
