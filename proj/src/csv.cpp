#include "fhp/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace fhp {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

double parse_field(const std::string& field, size_t row, size_t col) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  while (last != first && (*(last - 1) == ' ' || *(last - 1) == '\t' || *(last - 1) == '\r'))
    --last;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last) {
    std::ostringstream msg;
    msg << "malformed number at row " << row + 1 << ", column " << col + 1 << ": '" << field
        << "'";
    throw CsvError(msg.str());
  }
  return value;
}

std::vector<std::vector<double>> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") {
      ++lineno;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    size_t col = 0;
    while (std::getline(ss, field, ',')) row.push_back(parse_field(field, lineno, col++));
    if (!rows.empty() && row.size() != rows.front().size()) {
      std::ostringstream msg;
      msg << "row " << lineno + 1 << " has " << row.size() << " columns, expected "
          << rows.front().size();
      throw CsvError(msg.str());
    }
    rows.push_back(std::move(row));
    ++lineno;
  }
  if (rows.empty()) throw CsvError("empty file: " + path);
  return rows;
}

MatrixXd to_matrix(const std::vector<std::vector<double>>& rows, size_t first_row) {
  const Index n = static_cast<Index>(rows.size() - first_row);
  const Index m = static_cast<Index>(rows.front().size());
  MatrixXd out(n, m);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < m; ++k) out(i, k) = rows[first_row + static_cast<size_t>(i)][static_cast<size_t>(k)];
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

CurveData read_curves_csv(const std::string& path, bool header_grid) {
  const auto rows = read_rows(path);
  CurveData data;
  if (header_grid) {
    if (rows.size() < 2) throw CsvError("curve file has a grid header but no curve rows");
    data.grid = Eigen::Map<const VectorXd>(rows.front().data(),
                                           static_cast<Index>(rows.front().size()));
    data.values = to_matrix(rows, 1);
  } else {
    data.values = to_matrix(rows, 0);
    data.grid = VectorXd::LinSpaced(data.values.cols(), 0.0, 1.0);
  }
  return data;
}

void write_curves_csv(const std::string& path, const CurveData& data, bool header_grid) {
  std::ofstream out(path);
  if (!out) throw CsvError("cannot write file: " + path);
  auto write_row = [&out](const auto& row) {
    for (Index k = 0; k < row.size(); ++k) {
      if (k) out << ',';
      out << format_double(row[k]);
    }
    out << '\n';
  };
  if (header_grid) write_row(data.grid);
  for (Index i = 0; i < data.values.rows(); ++i) write_row(data.values.row(i));
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) { return to_matrix(read_rows(path), 0); }

void write_matrix_csv(const std::string& path, const Eigen::Ref<const Eigen::MatrixXd>& m) {
  std::ofstream out(path);
  if (!out) throw CsvError("cannot write file: " + path);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index k = 0; k < m.cols(); ++k) {
      if (k) out << ',';
      out << format_double(m(i, k));
    }
    out << '\n';
  }
}

Eigen::VectorXd read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open file: " + path);
  std::vector<double> values;
  std::string token;
  size_t idx = 0;
  while (in >> token) {
    std::stringstream ss(token);
    std::string field;
    while (std::getline(ss, field, ',')) {
      if (field.empty()) continue;
      values.push_back(parse_field(field, 0, idx++));
    }
  }
  if (values.empty()) throw CsvError("no values in file: " + path);
  return Eigen::Map<const VectorXd>(values.data(), static_cast<Index>(values.size()));
}

}  // namespace fhp
