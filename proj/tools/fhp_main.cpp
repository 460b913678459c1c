// fhp - functional Hodrick-Prescott filtering pipeline.
// Subcommands: simulate, estimate, filter, verify-optimality,
// mc-consistency, bench. Exit codes: 0 success, 1 verification failure,
// 2 usage/input error, 3 degenerate-data condition.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fhp/basis.hpp"
#include "fhp/csv.hpp"
#include "fhp/diffop.hpp"
#include "fhp/functional_hp.hpp"
#include "fhp/model_sim.hpp"
#include "fhp/report.hpp"
#include "fhp/rng.hpp"
#include "fhp/scalar_hp.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDegenerate = 3;

struct Options {
  std::string output;
  std::uint64_t seed = 1;
  int threads = 1;

  // basis / data
  std::string input;
  std::string basis_matrix;  // optional m x J evaluation matrix CSV
  int J = 4;
  Index grid_size = 256;
  bool grid_header = true;

  // model
  Index n = 200;
  std::vector<double> mu;
  std::vector<double> tau;
  std::vector<double> gamma;  // column-major 2 x J

  // filter
  std::string alpha_file;
  bool estimate = false;
  double alpha_cap = fhp::kDefaultAlphaMax;

  // alpha grid
  double grid_min = 0.01;
  double grid_max = 100.0;
  int grid_count = 200;

  // experiments
  std::vector<Index> n_list;
  int reps = 300;
};

VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const VectorXd>(v.data(), static_cast<Index>(v.size()));
}

fhp::ModelParams make_params(const Options& opt) {
  fhp::ModelParams params;
  params.n = opt.n;
  params.J = opt.J;
  params.seed = opt.seed;
  params.mu = opt.mu.empty() ? VectorXd::Constant(opt.J, 1.0) : to_vector(opt.mu);
  params.tau = opt.tau.empty() ? VectorXd::Constant(opt.J, 1.0) : to_vector(opt.tau);
  if (opt.gamma.empty()) {
    params.gamma = MatrixXd::Zero(2, opt.J);
  } else {
    if (static_cast<int>(opt.gamma.size()) != 2 * opt.J)
      throw std::domain_error("gamma must supply 2J values (column-major)");
    params.gamma = Eigen::Map<const MatrixXd>(opt.gamma.data(), 2, opt.J);
  }
  return params;
}

json config_echo(const Options& opt, const std::string& command) {
  json cfg{{"command", command},
           {"output", opt.output},
           {"seed", opt.seed},
           {"threads", opt.threads},
           {"J", opt.J}};
  if (!opt.input.empty()) cfg["input"] = opt.input;
  if (!opt.basis_matrix.empty()) cfg["basis_matrix"] = opt.basis_matrix;
  cfg["basis_kind"] = opt.basis_matrix.empty() ? "sine" : "matrix";
  cfg["grid_size"] = opt.grid_size;
  cfg["grid_header"] = opt.grid_header;
  cfg["n"] = opt.n;
  if (!opt.mu.empty()) cfg["mu"] = opt.mu;
  if (!opt.tau.empty()) cfg["tau"] = opt.tau;
  if (!opt.gamma.empty()) cfg["gamma"] = opt.gamma;
  if (!opt.alpha_file.empty()) cfg["alpha_file"] = opt.alpha_file;
  cfg["estimate"] = opt.estimate;
  cfg["alpha_cap"] = opt.alpha_cap;
  cfg["grid_min"] = opt.grid_min;
  cfg["grid_max"] = opt.grid_max;
  cfg["grid_count"] = opt.grid_count;
  if (!opt.n_list.empty()) cfg["n_list"] = opt.n_list;
  cfg["reps"] = opt.reps;
  return cfg;
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw fhp::CsvError("cannot write file: " + path.string());
  out << doc.dump(2) << '\n';
}

void write_manifest(const Options& opt, const std::string& command) {
  json manifest{{"tool", "fhp"},
                {"version", kVersion},
                {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                              std::to_string(EIGEN_MAJOR_VERSION) + "." +
                              std::to_string(EIGEN_MINOR_VERSION)},
                {"seed", opt.seed},
                {"config", config_echo(opt, command)}};
  write_json(fs::path(opt.output) / "manifest.json", manifest);
}

void ensure_output(const Options& opt) {
  if (opt.output.empty()) throw std::invalid_argument("--output directory is required");
  fs::create_directories(opt.output);
}

fhp::CurveData load_curves(const Options& opt) {
  fhp::CurveData data = fhp::read_curves_csv(opt.input, opt.grid_header);
  if (data.grid.size() < 2 * opt.J)
    throw std::invalid_argument("grid too coarse for J components (need m >= 2J)");
  return data;
}

fhp::BasisSpec basis_for(const Options& opt, const fhp::CurveData& data) {
  // uniform grids only; a header grid must match the uniform layout
  const Index m = data.grid.size();
  const VectorXd uniform = VectorXd::LinSpaced(m, 0.0, 1.0);
  if ((data.grid - uniform).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("curve grid must be uniform on [0,1]");
  if (!opt.basis_matrix.empty()) {
    MatrixXd evals = fhp::read_matrix_csv(opt.basis_matrix);
    if (evals.rows() != m)
      throw std::invalid_argument("basis matrix rows must match the curve grid size");
    if (evals.cols() != opt.J)
      throw std::invalid_argument("basis matrix must have exactly J columns");
    return fhp::BasisSpec::from_matrix(std::move(evals), data.grid);
  }
  return fhp::BasisSpec::sine(opt.J, m);
}

std::string basis_kind_name(const Options& opt) {
  return opt.basis_matrix.empty() ? "sine" : "matrix";
}

int cmd_simulate(const Options& opt) {
  ensure_output(opt);
  const fhp::ModelParams params = make_params(opt);
  const fhp::SimulationDraw draw = fhp::simulate(params, 0);
  const fhp::BasisSpec spec = fhp::BasisSpec::sine(opt.J, opt.grid_size);

  const fs::path dir(opt.output);
  auto write_series = [&](const char* name, const fhp::CoefficientMatrix& coeffs) {
    fhp::CurveData data{spec.grid(), fhp::reconstruct_series(coeffs, spec)};
    fhp::write_curves_csv(dir / name, data, opt.grid_header);
  };
  write_series("x_curves.csv", draw.X);
  write_series("y_curves.csv", draw.Y);
  write_series("u_curves.csv", draw.U);
  write_series("v_curves.csv", draw.V);

  json truth{{"n", params.n},
             {"J", params.J},
             {"seed", params.seed},
             {"mu", opt.mu.empty() ? std::vector<double>(params.mu.begin(), params.mu.end())
                                   : opt.mu},
             {"tau", opt.tau.empty() ? std::vector<double>(params.tau.begin(), params.tau.end())
                                     : opt.tau},
             {"gamma", std::vector<double>(params.gamma.data(),
                                           params.gamma.data() + params.gamma.size())},
             {"basis", {{"kind", "sine"}, {"J", opt.J}, {"m", opt.grid_size}}}};
  write_json(dir / "truth.json", truth);
  write_manifest(opt, "simulate");
  return kExitOk;
}

int cmd_estimate(const Options& opt) {
  ensure_output(opt);
  const fhp::CurveData data = load_curves(opt);
  const fhp::BasisSpec spec = basis_for(opt, data);
  const fhp::CoefficientMatrix X = fhp::project_series(data.values, spec);
  const fhp::BEstimate est = fhp::estimate_B(X, opt.alpha_cap, opt.threads);

  const fs::path dir(opt.output);
  write_json(dir / "estimate.json",
             fhp::estimation_report(est, X.rows(), basis_kind_name(opt)));
  fhp::write_matrix_csv(dir / "coefficients.csv", X);
  write_manifest(opt, "estimate");
  return est.all_degenerate() ? kExitDegenerate : kExitOk;
}

int cmd_filter(const Options& opt) {
  ensure_output(opt);
  if (opt.estimate == !opt.alpha_file.empty())
    throw std::invalid_argument("filter needs exactly one of --estimate or --alpha-file");

  const fhp::CurveData data = load_curves(opt);
  const fhp::BasisSpec spec = basis_for(opt, data);
  const fhp::CoefficientMatrix X = fhp::project_series(data.values, spec);

  fhp::DiagonalOperator B{VectorXd::Zero(opt.J), fhp::OperatorLabel::smoothing};
  const fs::path dir(opt.output);
  bool degenerate = false;

  if (opt.estimate) {
    const fhp::BEstimate est = fhp::estimate_B(X, opt.alpha_cap, opt.threads);
    B = est.B;
    degenerate = est.all_degenerate();
    write_json(dir / "estimate.json",
             fhp::estimation_report(est, X.rows(), basis_kind_name(opt)));
  } else {
    const VectorXd alphas = fhp::read_vector_file(opt.alpha_file);
    if (alphas.size() != opt.J)
      throw std::invalid_argument("alpha file must supply exactly J values");
    if ((alphas.array() < 0.0).any())
      throw std::invalid_argument(
          "alpha file violates the positivity condition (negative entry)");
    B.eigenvalues = alphas;
    json supplied{{"source", "file"},
                  {"alpha", std::vector<double>(alphas.begin(), alphas.end())}};
    write_json(dir / "estimate.json", supplied);
  }

  const fhp::FilterResult result = fhp::filter(X, B, opt.threads);
  fhp::write_curves_csv(dir / "trend_curves.csv",
                        {spec.grid(), fhp::reconstruct_series(result.trend, spec)},
                        opt.grid_header);
  fhp::write_curves_csv(dir / "residual_curves.csv",
                        {spec.grid(), fhp::reconstruct_series(result.residual, spec)},
                        opt.grid_header);
  fhp::write_matrix_csv(dir / "trend_coefficients.csv", result.trend);
  write_manifest(opt, "filter");
  return degenerate ? kExitDegenerate : kExitOk;
}

int cmd_verify_optimality(const Options& opt) {
  ensure_output(opt);
  if (opt.grid_count < 1) throw std::invalid_argument("alpha grid must be nonempty");
  const fhp::ModelParams params = make_params(opt);
  const VectorXd grid = fhp::log_spaced(opt.grid_min, opt.grid_max, opt.grid_count);
  const fhp::OptimalityReport report = fhp::verify_optimality(params, grid);

  const fs::path dir(opt.output);
  write_json(dir / "verdict.json", fhp::optimality_report(report));
  // plot-ready: alpha, J_1(alpha), ..., J_J(alpha)
  MatrixXd curves(grid.size(), params.J + 1);
  curves.col(0) = grid;
  curves.rightCols(params.J) = report.curves;
  fhp::write_matrix_csv(dir / "risk_curves.csv", curves);
  write_manifest(opt, "verify-optimality");
  return report.pass ? kExitOk : kExitVerifyFail;
}

int cmd_mc_consistency(const Options& opt) {
  ensure_output(opt);
  if (opt.n_list.empty()) throw std::invalid_argument("--n-list is required");
  const fhp::ModelParams params = make_params(opt);
  const fhp::ConsistencyReport report =
      fhp::mc_consistency(params, opt.n_list, opt.reps, opt.threads);

  const fs::path dir(opt.output);
  write_json(dir / "verdict.json", fhp::consistency_report(report));
  // plot-ready: n, then rmse_mu / rmse_tau / median alpha error per component
  MatrixXd table(static_cast<Index>(report.n_list.size()), 1 + 3 * params.J);
  for (size_t i = 0; i < report.n_list.size(); ++i) {
    const Index r = static_cast<Index>(i);
    table(r, 0) = static_cast<double>(report.n_list[i]);
    for (int j = 0; j < params.J; ++j) {
      const auto& cell = report.cells[i][static_cast<size_t>(j)];
      table(r, 1 + 3 * j) = cell.rmse_mu;
      table(r, 2 + 3 * j) = cell.rmse_tau;
      table(r, 3 + 3 * j) = cell.median_abs_alpha_err;
    }
  }
  fhp::write_matrix_csv(dir / "rmse.csv", table);
  write_manifest(opt, "mc-consistency");
  return report.pass ? kExitOk : kExitVerifyFail;
}

std::string cpu_model() {
  std::ifstream in("/proc/cpuinfo");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("model name", 0) == 0) {
      const auto pos = line.find(':');
      if (pos != std::string::npos) return line.substr(pos + 2);
    }
  }
  return "unknown";
}

int cmd_bench(const Options& opt) {
  ensure_output(opt);
  std::vector<Index> sizes = opt.n_list;
  if (sizes.empty()) sizes = {1000, 10000, 100000, 1000000};

  const fs::path dir(opt.output);
  std::ofstream csv(dir / "bench.csv");
  csv << "n,banded_seconds,banded_throughput_per_s,dense_seconds,max_rel_diff\n";
  json rows = json::array();
  for (Index n : sizes) {
    fhp::NormalStream s(opt.seed, 0, 0);
    VectorXd x(n);
    s.fill(x);
    const double alpha = 1600.0;

    const auto t0 = std::chrono::steady_clock::now();
    VectorXd y = fhp::solve_smoother(x, alpha);
    const auto t1 = std::chrono::steady_clock::now();
    const double banded_s = std::chrono::duration<double>(t1 - t0).count();

    double dense_s = -1.0, rel_diff = -1.0;
    if (n <= 2000) {
      const auto d0 = std::chrono::steady_clock::now();
      MatrixXd A = MatrixXd::Identity(n, n) + alpha * (fhp::dense_P(n).transpose() * fhp::dense_P(n));
      VectorXd yd = A.ldlt().solve(x);
      const auto d1 = std::chrono::steady_clock::now();
      dense_s = std::chrono::duration<double>(d1 - d0).count();
      rel_diff = (y - yd).norm() / yd.norm();
    }
    csv << n << ',' << fhp::format_double(banded_s) << ','
        << fhp::format_double(banded_s > 0 ? static_cast<double>(n) / banded_s : 0.0) << ','
        << fhp::format_double(dense_s) << ',' << fhp::format_double(rel_diff) << '\n';
    rows.push_back(json{{"n", n},
                        {"banded_seconds", banded_s},
                        {"dense_seconds", dense_s},
                        {"max_rel_diff", rel_diff}});
  }
  json doc{{"machine",
            {{"cpu", cpu_model()},
             {"hardware_threads", std::thread::hardware_concurrency()},
             {"compiler", std::string("gcc ") + __VERSION__}}},
           {"alpha", 1600.0},
           {"rows", rows}};
  write_json(dir / "bench.json", doc);
  write_manifest(opt, "bench");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"functional Hodrick-Prescott filter pipeline"};
  app.require_subcommand(1);
  Options opt;

  app.add_option("--output", opt.output, "output directory")->envname("FHP_OUTPUT");
  app.add_option("--seed", opt.seed, "RNG seed");
  app.add_option("--threads", opt.threads, "worker threads for column/rep parallelism");
  app.set_config("--config", "", "key=value config file");

  auto* sim = app.add_subcommand("simulate", "draw one dataset from the ground-truth model");
  sim->add_option("--n", opt.n, "series length");
  sim->add_option("--J", opt.J, "number of components");
  sim->add_option("--mu", opt.mu, "noise eigenvalues (J values)")->delimiter(',');
  sim->add_option("--tau", opt.tau, "signal eigenvalues (J values)")->delimiter(',');
  sim->add_option("--gamma", opt.gamma, "trend coordinates, 2J values column-major")
      ->delimiter(',');
  sim->add_option("--grid-size", opt.grid_size, "samples per curve");
  sim->add_flag("--grid-header,!--no-grid-header", opt.grid_header,
                "write the grid as a CSV header row");

  auto* est = app.add_subcommand("estimate", "estimate the smoothing operator from curves");
  est->add_option("--input", opt.input, "curve CSV")->required();
  est->add_option("--J", opt.J, "truncation level");
  est->add_option("--basis-matrix", opt.basis_matrix,
                  "m x J basis evaluation matrix CSV (default: sine basis)");
  est->add_option("--alpha-cap", opt.alpha_cap, "alpha for signal-degenerate components");
  est->add_flag("--grid-header,!--no-grid-header", opt.grid_header,
                "input has a grid header row");

  auto* fil = app.add_subcommand("filter", "extract trend and residual curves");
  fil->add_option("--input", opt.input, "curve CSV")->required();
  fil->add_option("--J", opt.J, "truncation level");
  fil->add_option("--basis-matrix", opt.basis_matrix,
                  "m x J basis evaluation matrix CSV (default: sine basis)");
  fil->add_option("--alpha-file", opt.alpha_file, "per-component smoothing weights");
  fil->add_flag("--estimate", opt.estimate, "estimate the smoothing operator from the data");
  fil->add_option("--alpha-cap", opt.alpha_cap, "alpha for signal-degenerate components");
  fil->add_flag("--grid-header,!--no-grid-header", opt.grid_header,
                "input has a grid header row");

  auto* ver = app.add_subcommand("verify-optimality",
                                 "check the risk-curve minimizer against the noise-to-signal ratio");
  ver->add_option("--n", opt.n, "series length");
  ver->add_option("--J", opt.J, "number of components");
  ver->add_option("--mu", opt.mu, "noise eigenvalues")->delimiter(',');
  ver->add_option("--tau", opt.tau, "signal eigenvalues")->delimiter(',');
  ver->add_option("--grid-min", opt.grid_min, "alpha grid lower end");
  ver->add_option("--grid-max", opt.grid_max, "alpha grid upper end");
  ver->add_option("--grid-count", opt.grid_count, "alpha grid size");

  auto* mcc = app.add_subcommand("mc-consistency",
                                 "Monte Carlo bias/RMSE of the estimators across sample sizes");
  mcc->add_option("--n-list", opt.n_list, "sample sizes, increasing")->delimiter(',');
  mcc->add_option("--reps", opt.reps, "replications per sample size");
  mcc->add_option("--J", opt.J, "number of components");
  mcc->add_option("--mu", opt.mu, "noise eigenvalues")->delimiter(',');
  mcc->add_option("--tau", opt.tau, "signal eigenvalues")->delimiter(',');
  mcc->add_option("--gamma", opt.gamma, "trend coordinates, 2J values column-major")
      ->delimiter(',');

  auto* ben = app.add_subcommand("bench", "banded-vs-dense solver timings");
  ben->add_option("--n-list", opt.n_list, "solver sizes")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sim->parsed()) return cmd_simulate(opt);
    if (est->parsed()) return cmd_estimate(opt);
    if (fil->parsed()) return cmd_filter(opt);
    if (ver->parsed()) return cmd_verify_optimality(opt);
    if (mcc->parsed()) return cmd_mc_consistency(opt);
    if (ben->parsed()) return cmd_bench(opt);
  } catch (const fhp::CsvError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid value: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
