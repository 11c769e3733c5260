// dsproj: nearest doubly stochastic matrix with a fixed sparsity pattern.
//
// Subcommands:
//   normalize  solve the projection problem and write the result
//   check      pattern feasibility verdict with a certificate
//   compare    run admm / zass / sinkhorn side by side, emit traces
//   bench      per-instance timing rows over synthetic or directory inputs

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dsproj/admm.hpp"
#include "dsproj/baselines.hpp"
#include "dsproj/matrix_market.hpp"

namespace {

using json = nlohmann::json;
using namespace dsproj;

constexpr int kExitSolved = 0;
constexpr int kExitUsage = 1;
constexpr int kExitMaxIters = 2;
constexpr int kExitInfeasible = 3;

struct CommonOptions {
  double symmetry_tol = 0.0;
  bool abs_negatives = false;
  bool sum_duplicates = false;

  ValidationOptions validation() const {
    ValidationOptions opts;
    opts.symmetry_tolerance = symmetry_tol;
    if (abs_negatives) opts.negative_policy = NegativePolicy::kAbsoluteValue;
    if (sum_duplicates) opts.duplicate_policy = DuplicatePolicy::kSum;
    return opts;
  }
};

struct SolverOptions {
  double tol = 1e-4;
  double rho = 1.0;
  double sigma = 1.0;
  double alpha = 1.6;
  int max_iters = 100'000;
  int check_interval = 25;
  std::string backend = "auto";
  bool warm_start = false;

  SolverConfig config() const {
    SolverConfig cfg;
    cfg.eps_abs = tol;
    cfg.rho = rho;
    cfg.sigma = sigma;
    cfg.alpha = alpha;
    cfg.max_iters = max_iters;
    cfg.check_interval = check_interval;
    cfg.warm_start = warm_start;
    if (backend == "cholesky")
      cfg.backend.kind = BackendKind::kCholesky;
    else if (backend == "cg")
      cfg.backend.kind = BackendKind::kConjugateGradient;
    else if (backend == "dense")
      cfg.backend.kind = BackendKind::kShermanMorrison;
    return cfg;
  }

  json echo() const {
    return json{{"tol", tol},           {"rho", rho},
                {"sigma", sigma},       {"alpha", alpha},
                {"max_iters", max_iters}, {"check_interval", check_interval},
                {"backend", backend},   {"warm_start", warm_start}};
  }
};

void add_common_flags(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--symmetry-tol", common.symmetry_tol,
                  "Tolerance when symmetrizing `general` inputs");
  cmd->add_flag("--abs-negatives", common.abs_negatives,
                "Replace negative entries by their absolute value");
  cmd->add_flag("--sum-duplicates", common.sum_duplicates,
                "Sum duplicate coordinate entries instead of rejecting them");
}

void add_solver_flags(CLI::App* cmd, SolverOptions& solver) {
  cmd->add_option("--tol", solver.tol, "Termination tolerance (inf-norm residuals)");
  cmd->add_option("--rho", solver.rho, "Constraint step size");
  cmd->add_option("--sigma", solver.sigma, "Nonnegativity step size");
  cmd->add_option("--alpha", solver.alpha, "Over-relaxation in (0, 2)");
  cmd->add_option("--max-iters", solver.max_iters, "Iteration limit");
  cmd->add_option("--check-interval", solver.check_interval,
                  "Residual evaluation cadence");
  cmd->add_option("--backend", solver.backend, "Linear solver backend")
      ->check(CLI::IsMember({"auto", "cholesky", "cg", "dense"}));
  cmd->add_flag("--warm-start", solver.warm_start,
                "Start from the matching-certificate point");
}

double full_sum(const SymmetricSparseMatrix& m) {
  double diag = 0.0, upper = 0.0;
  for (const Entry& e : m.entries())
    (e.row == e.col ? diag : upper) += e.value;
  return 2.0 * upper + diag;
}

double max_entry(const SymmetricSparseMatrix& m) {
  double best = 0.0;
  for (const Entry& e : m.entries()) best = std::max(best, e.value);
  return best;
}

Eigen::VectorXd read_target_file(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open target file '" + path + "'");
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '%') continue;
    values.push_back(std::stod(line));
  }
  if (static_cast<int>(values.size()) != n)
    throw SpecificationError("target file has " + std::to_string(values.size()) +
                             " values, expected " + std::to_string(n));
  return Eigen::Map<Eigen::VectorXd>(values.data(), n);
}

/// `one`, `mean-sum`, `max-entry`, or a file of n values.
Eigen::VectorXd resolve_target(const std::string& target,
                               const SymmetricSparseMatrix& m) {
  const int n = m.n();
  if (target == "one") return Eigen::VectorXd::Ones(n);
  if (target == "mean-sum")
    return Eigen::VectorXd::Constant(n, full_sum(m) / static_cast<double>(n));
  if (target == "max-entry") return Eigen::VectorXd::Constant(n, max_entry(m));
  return read_target_file(target, n);
}

json run_summary(const std::string& input, const SymmetricSparseMatrix& m,
                 const std::string& method, const Solution& sol, double seconds,
                 const SolverOptions& solver) {
  return json{{"input_path", input},
              {"n", m.n()},
              {"nnz", m.nnz_full()},
              {"method", method},
              {"status", to_string(sol.status)},
              {"iterations", sol.iterations},
              {"r_prim", sol.residuals.primal},
              {"r_dual", sol.residuals.dual},
              {"objective", sol.objective},
              {"wall_time_seconds", seconds},
              {"config", solver.echo()}};
}

void write_solver_trace(const std::string& path, const Solution& sol) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open trace file '" + path + "'");
  out << "iter,r_prim,r_dual,objective\n";
  char buf[160];
  for (const TraceRow& row : sol.trace) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", row.iter, row.r_prim,
                  row.r_dual, row.objective);
    out << buf;
  }
}

int status_exit_code(SolveStatus status) {
  switch (status) {
    case SolveStatus::kSolved: return kExitSolved;
    case SolveStatus::kMaxIters: return kExitMaxIters;
    case SolveStatus::kInfeasibleInput: return kExitInfeasible;
  }
  return kExitUsage;
}

// ---------------------------------------------------------------------------
// normalize

struct NormalizeArgs {
  std::string input;
  std::string out;
  std::string target = "one";
  std::string weights;
  std::string trace;
  std::string summary;
  bool nonsymmetric = false;
  CommonOptions common;
  SolverOptions solver;
};

int cmd_normalize(const NormalizeArgs& args) {
  SymmetricSparseMatrix matrix;
  int block_rows = 0, block_cols = 0;

  if (args.nonsymmetric) {
    if (!args.weights.empty()) {
      std::cerr << "error: --weights is not supported with --nonsymmetric\n";
      return kExitUsage;
    }
    CooMatrix coo = read_matrix_market_file_general(args.input);
    block_rows = coo.n_rows;
    block_cols = coo.n_cols;
    matrix = embed_nonsymmetric(coo, args.common.validation());
  } else {
    matrix = read_matrix_market_file(args.input, args.common.validation());
  }

  ProblemSpec spec;
  spec.matrix = matrix;
  spec.target = resolve_target(args.target, matrix);
  if (!args.weights.empty())
    spec.weights = read_matrix_market_file(args.weights, args.common.validation());

  SolverConfig cfg = args.solver.config();
  cfg.record_trace = !args.trace.empty();

  const auto start = std::chrono::steady_clock::now();
  const Solution sol = solve(spec, cfg);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (sol.status == SolveStatus::kInfeasibleInput) {
    std::cerr << "error: pattern is infeasible; deficient rows:";
    for (std::size_t i = 0; i < sol.certificate.deficient_rows.size() && i < 20; ++i)
      std::cerr << ' ' << sol.certificate.deficient_rows[i];
    std::cerr << '\n';
  } else if (!args.out.empty()) {
    if (args.nonsymmetric)
      write_matrix_market_file(args.out,
                               extract_embedded_block(sol.X, block_rows, block_cols));
    else
      write_matrix_market_file(args.out, sol.X);
  }

  if (!args.trace.empty()) write_solver_trace(args.trace, sol);
  if (!args.summary.empty()) {
    std::ofstream out(args.summary, std::ios::app);
    out << run_summary(args.input, matrix, "admm", sol, seconds, args.solver) << '\n';
  }

  std::cerr << "status=" << to_string(sol.status) << " iters=" << sol.iterations
            << " r_prim=" << sol.residuals.primal << " r_dual=" << sol.residuals.dual
            << " objective=" << sol.objective << " time=" << seconds << "s\n";
  return status_exit_code(sol.status);
}

// ---------------------------------------------------------------------------
// check

int cmd_check(const std::string& input, const CommonOptions& common) {
  const auto matrix = read_matrix_market_file(input, common.validation());
  const auto cert = feasibility_check(pattern_of(matrix));
  if (cert.feasible) {
    std::cout << "feasible\n";
    const std::size_t shown = std::min<std::size_t>(cert.matching.size(), 100);
    for (std::size_t i = 0; i < shown; ++i)
      std::cout << "match " << cert.matching[i].first << ' '
                << cert.matching[i].second << '\n';
    if (shown < cert.matching.size())
      std::cout << "... (" << cert.matching.size() - shown << " more)\n";
    return kExitSolved;
  }
  std::cout << "infeasible\n";
  const std::size_t shown = std::min<std::size_t>(cert.deficient_rows.size(), 100);
  std::cout << "deficient rows:";
  for (std::size_t i = 0; i < shown; ++i) std::cout << ' ' << cert.deficient_rows[i];
  if (shown < cert.deficient_rows.size())
    std::cout << " ... (" << cert.deficient_rows.size() - shown << " more)";
  std::cout << '\n';
  return kExitInfeasible;
}

// ---------------------------------------------------------------------------
// compare

struct CompareArgs {
  std::string input;
  std::string methods = "admm,zass,sinkhorn";
  std::string trace;
  int zass_dense_cap = 20'000;
  CommonOptions common;
  SolverOptions solver;
};

double induced_inf_norm(const Eigen::MatrixXd& m) {
  return m.rows() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff();
}

int cmd_compare(const CompareArgs& args) {
  const auto matrix = read_matrix_market_file(args.input, args.common.validation());
  const Eigen::VectorXd target = Eigen::VectorXd::Ones(matrix.n());

  std::vector<std::string> methods;
  {
    std::stringstream ss(args.methods);
    std::string item;
    while (std::getline(ss, item, ',')) methods.push_back(item);
  }
  for (const auto& method : methods)
    if (method != "admm" && method != "zass" && method != "sinkhorn") {
      std::cerr << "error: unknown method '" << method << "'\n";
      return kExitUsage;
    }

  const bool wants_zass =
      std::find(methods.begin(), methods.end(), "zass") != methods.end();
  if (wants_zass && matrix.n() > args.zass_dense_cap) {
    std::cerr << "error: zass operates on dense storage; n = " << matrix.n()
              << " exceeds the cap of " << args.zass_dense_cap
              << " (raise --zass-dense-cap to force)\n";
    return kExitUsage;
  }

  std::ofstream trace_out;
  if (!args.trace.empty()) {
    trace_out.open(args.trace);
    if (!trace_out) {
      std::cerr << "error: cannot open trace file '" << args.trace << "'\n";
      return kExitUsage;
    }
    trace_out << "method,iter,r_prim,objective\n";
  }
  auto emit = [&](const std::string& method, const std::vector<TraceRow>& rows) {
    if (!trace_out.is_open()) return;
    char buf[160];
    for (const TraceRow& row : rows) {
      std::snprintf(buf, sizeof(buf), "%s,%d,%.17g,%.17g\n", method.c_str(), row.iter,
                    row.r_prim, row.objective);
      trace_out << buf;
    }
  };

  const Eigen::MatrixXd dense_input = to_dense(matrix);
  std::vector<std::pair<std::string, Eigen::MatrixXd>> results;

  for (const auto& method : methods) {
    if (method == "admm") {
      ProblemSpec spec;
      spec.matrix = matrix;
      spec.target = target;
      SolverConfig cfg = args.solver.config();
      cfg.record_trace = true;
      const Solution sol = solve(spec, cfg);
      if (sol.status == SolveStatus::kInfeasibleInput) {
        std::cerr << "error: pattern is infeasible\n";
        return kExitInfeasible;
      }
      emit("admm", sol.trace);
      std::cout << "admm: objective=" << sol.objective
                << " iters=" << sol.iterations << " r_prim=" << sol.residuals.primal
                << '\n';
      results.emplace_back("admm", to_dense(sol.X));
    } else if (method == "zass") {
      const auto res =
          zass_normalize(dense_input, args.solver.tol, args.solver.max_iters, true);
      emit("zass", res.trace);
      const double objective = 0.5 * (res.X - dense_input).squaredNorm();
      std::cout << "zass: objective=" << objective << " iters=" << res.iterations
                << " r_prim=" << res.final_primal_residual << '\n';
      results.emplace_back("zass", res.X);
    } else {
      const auto res = sinkhorn_balance(matrix, target, args.solver.tol,
                                        args.solver.max_iters, true);
      emit("sinkhorn", res.trace);
      const Eigen::MatrixXd x = to_dense(res.X);
      const double objective = 0.5 * (x - dense_input).squaredNorm();
      std::cout << "sinkhorn: objective=" << objective << " iters=" << res.iterations
                << " r_prim=" << res.final_primal_residual << '\n';
      results.emplace_back("sinkhorn", x);
    }
  }

  for (std::size_t i = 0; i < results.size(); ++i)
    for (std::size_t j = i + 1; j < results.size(); ++j)
      std::cout << "gap(" << results[i].first << ", " << results[j].first
                << ") = " << induced_inf_norm(results[i].second - results[j].second)
                << '\n';
  return kExitSolved;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  std::string synthetic;
  std::vector<int> sizes;
  int bandwidth = 5;
  std::string directory;
  std::string out;
  std::string target = "one";
  CommonOptions common;
  SolverOptions solver;
};

SymmetricSparseMatrix banded_matrix(int n, int bandwidth) {
  std::vector<Entry> entries;
  for (int col = 1; col <= n; ++col)
    for (int row = std::max(1, col - bandwidth); row <= col; ++row)
      entries.push_back({row, col, 1.0 / (1.0 + col - row)});
  return SymmetricSparseMatrix::from_upper_entries(n, std::move(entries));
}

int cmd_bench(const BenchArgs& args) {
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!args.out.empty()) {
    file.open(args.out);
    if (!file) {
      std::cerr << "error: cannot open '" << args.out << "'\n";
      return kExitUsage;
    }
    out = &file;
  }
  *out << "input,n,nnz,method,status,iterations,r_prim,r_dual,objective,"
          "wall_time_seconds,per_iter_seconds\n";

  std::vector<std::pair<std::string, SymmetricSparseMatrix>> instances;
  if (!args.synthetic.empty()) {
    if (args.synthetic != "banded") {
      std::cerr << "error: unknown synthetic family '" << args.synthetic << "'\n";
      return kExitUsage;
    }
    for (int n : args.sizes)
      instances.emplace_back("banded-" + std::to_string(n) + "-bw" +
                                 std::to_string(args.bandwidth),
                             banded_matrix(n, args.bandwidth));
  } else if (!args.directory.empty()) {
    std::vector<std::filesystem::path> paths;
    for (const auto& entry : std::filesystem::directory_iterator(args.directory))
      if (entry.path().extension() == ".mtx") paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end());
    for (const auto& path : paths)
      instances.emplace_back(
          path.string(), read_matrix_market_file(path.string(),
                                                 args.common.validation()));
  } else {
    std::cerr << "error: bench needs --synthetic or a directory\n";
    return kExitUsage;
  }

  for (const auto& [name, matrix] : instances) {
    ProblemSpec spec;
    spec.matrix = matrix;
    spec.target = resolve_target(args.target, matrix);
    const auto start = std::chrono::steady_clock::now();
    const Solution sol = solve(spec, args.solver.config());
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    const double per_iter = sol.iterations > 0 ? seconds / sol.iterations : seconds;
    char buf[320];
    std::snprintf(buf, sizeof(buf), "%s,%d,%lld,admm,%s,%d,%.9g,%.9g,%.9g,%.6f,%.9f\n",
                  name.c_str(), matrix.n(),
                  static_cast<long long>(matrix.nnz_full()),
                  to_string(sol.status).c_str(), sol.iterations,
                  sol.residuals.primal, sol.residuals.dual, sol.objective, seconds,
                  per_iter);
    *out << buf;
    out->flush();
  }
  return kExitSolved;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nearest doubly stochastic matrix with a fixed sparsity pattern"};
  app.require_subcommand(1);

  NormalizeArgs normalize;
  auto* norm_cmd =
      app.add_subcommand("normalize", "Solve the projection problem for a matrix");
  norm_cmd->add_option("input", normalize.input, "Matrix Market file")->required();
  norm_cmd->add_option("--out", normalize.out, "Output Matrix Market file");
  norm_cmd->add_option("--target", normalize.target,
                       "one | mean-sum | max-entry | <file>");
  norm_cmd->add_option("--weights", normalize.weights,
                       "Weight matrix (weighted Frobenius norm)");
  norm_cmd->add_option("--trace", normalize.trace, "Residual trace CSV");
  norm_cmd->add_option("--summary", normalize.summary, "Append a JSON summary line");
  norm_cmd->add_flag("--nonsymmetric", normalize.nonsymmetric,
                     "Treat the input as general/rectangular via block embedding");
  add_common_flags(norm_cmd, normalize.common);
  add_solver_flags(norm_cmd, normalize.solver);

  std::string check_input;
  CommonOptions check_common;
  auto* check_cmd = app.add_subcommand("check", "Pattern feasibility verdict");
  check_cmd->add_option("input", check_input, "Matrix Market file")->required();
  add_common_flags(check_cmd, check_common);

  CompareArgs compare;
  auto* compare_cmd =
      app.add_subcommand("compare", "Run admm / zass / sinkhorn side by side");
  compare_cmd->add_option("input", compare.input, "Matrix Market file")->required();
  compare_cmd->add_option("--methods", compare.methods, "Comma-separated methods");
  compare_cmd->add_option("--trace", compare.trace, "Combined trace CSV");
  compare_cmd->add_option("--zass-dense-cap", compare.zass_dense_cap,
                          "Refuse zass above this dimension");
  add_common_flags(compare_cmd, compare.common);
  add_solver_flags(compare_cmd, compare.solver);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Timing rows over instances");
  bench_cmd->add_option("directory", bench.directory, "Directory of .mtx files");
  bench_cmd->add_option("--synthetic", bench.synthetic, "Synthetic family: banded");
  bench_cmd->add_option("--sizes", bench.sizes, "Sizes for the synthetic family")
      ->delimiter(',');
  bench_cmd->add_option("--bandwidth", bench.bandwidth, "Half bandwidth");
  bench_cmd->add_option("--out", bench.out, "Output CSV (default stdout)");
  bench_cmd->add_option("--target", bench.target, "one | mean-sum | max-entry");
  add_common_flags(bench_cmd, bench.common);
  add_solver_flags(bench_cmd, bench.solver);

  CLI11_PARSE(app, argc, argv);

  try {
    if (norm_cmd->parsed()) return cmd_normalize(normalize);
    if (check_cmd->parsed()) return cmd_check(check_input, check_common);
    if (compare_cmd->parsed()) return cmd_compare(compare);
    if (bench_cmd->parsed()) return cmd_bench(bench);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SpecificationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
