// csv.hpp - CSV input/output for curve series and coefficient matrices.
// Floating-point output uses 17 significant digits so values round-trip.
#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace fhp {

// Parse/shape failure; the message names the offending row and column.
struct CsvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CurveData {
  Eigen::VectorXd grid;    // m sample points
  Eigen::MatrixXd values;  // n curves x m samples
};

// One row per curve. With header_grid the first row holds the t-values;
// otherwise the grid is implicitly uniform on [0,1].
CurveData read_curves_csv(const std::string& path, bool header_grid);
void write_curves_csv(const std::string& path, const CurveData& data, bool header_grid);

Eigen::MatrixXd read_matrix_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const Eigen::Ref<const Eigen::MatrixXd>& m);

// Whitespace/comma/newline separated list of reals (e.g. an alpha file).
Eigen::VectorXd read_vector_file(const std::string& path);

std::string format_double(double x);  // shortest 17-significant-digit form

}  // namespace fhp
