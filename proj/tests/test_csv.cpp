#include <doctest.h>

#include <Eigen/Dense>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "fhp/csv.hpp"

using namespace fhp;
using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& name)
      : path(std::filesystem::temp_directory_path() / name) {}
  ~TempFile() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("curve CSV round-trips bitwise with and without a grid header") {
  std::mt19937 gen(1);
  std::normal_distribution<double> dist;
  CurveData data;
  data.grid = VectorXd::LinSpaced(17, 0.0, 1.0);
  data.values.resize(4, 17);
  for (Index i = 0; i < data.values.size(); ++i) data.values.data()[i] = dist(gen);

  for (bool header : {true, false}) {
    TempFile f(header ? "fhp_csv_h.csv" : "fhp_csv_nh.csv");
    write_curves_csv(f.path.string(), data, header);
    const CurveData back = read_curves_csv(f.path.string(), header);
    CHECK((back.values - data.values).cwiseAbs().maxCoeff() == 0.0);
    if (header) CHECK((back.grid - data.grid).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("17 significant digits survive extreme values") {
  CHECK(format_double(1.0) == "1");
  const double x = 0.1 + 0.2;  // not representable, needs all digits
  CHECK(std::stod(format_double(x)) == x);
  CHECK(std::stod(format_double(1e-300)) == 1e-300);
  CHECK(std::stod(format_double(-123456.789e100)) == -123456.789e100);
}

TEST_CASE("malformed input names the row and column") {
  TempFile f("fhp_csv_bad.csv");
  {
    std::ofstream out(f.path);
    out << "1,2,3\n4,oops,6\n";
  }
  try {
    read_matrix_csv(f.path.string());
    FAIL("expected CsvError");
  } catch (const CsvError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("row 2") != std::string::npos);
    CHECK(msg.find("column 2") != std::string::npos);
  }
}

TEST_CASE("ragged rows are rejected") {
  TempFile f("fhp_csv_ragged.csv");
  {
    std::ofstream out(f.path);
    out << "1,2,3\n4,5\n";
  }
  CHECK_THROWS_AS(read_matrix_csv(f.path.string()), CsvError);
  CHECK_THROWS_AS(read_matrix_csv("/nonexistent/file.csv"), CsvError);
}

TEST_CASE("vector files accept commas and newlines") {
  TempFile f("fhp_vec.txt");
  {
    std::ofstream out(f.path);
    out << "0.5,2\n1e-3\n";
  }
  const VectorXd v = read_vector_file(f.path.string());
  REQUIRE(v.size() == 3);
  CHECK(v[0] == 0.5);
  CHECK(v[1] == 2.0);
  CHECK(v[2] == 1e-3);
}
