#ifndef DSPROJ_ADMM_HPP_
#define DSPROJ_ADMM_HPP_

#include <Eigen/Core>
#include <string>
#include <vector>

#include "dsproj/feasibility.hpp"
#include "dsproj/linear_system.hpp"
#include "dsproj/reduced_problem.hpp"

namespace dsproj {

struct SolverConfig {
  /// Constraint step size (multiplier y).
  double rho = 1.0;
  /// Nonnegativity step size (multiplier w). A genuine step size, not a
  /// small regularizer: the bound multiplier moves at rate sigma, so keep
  /// it O(1).
  double sigma = 1.0;
  /// Over-relaxation, in (0, 2).
  double alpha = 1.6;
  /// Absolute infinity-norm tolerance on both residuals.
  double eps_abs = 1e-4;
  /// Optional relative termination: residuals are compared against
  /// eps_abs + eps_rel * scale. Off by default.
  double eps_rel = 0.0;
  int max_iters = 100'000;
  /// Residual evaluation cadence.
  int check_interval = 25;
  /// Start from the exactly feasible 0/1 matching point instead of zero.
  bool warm_start = false;
  bool record_trace = false;
  LinearBackend backend;
};

struct Residuals {
  /// || A x - r ||_inf
  double primal = 0.0;
  /// || P x - P c_u + A' y + w ||_inf
  double dual = 0.0;
};

/// ADMM iterates. x, w live on the upper-triangle variables; z, y on the row
/// sums.
struct SolverState {
  Eigen::VectorXd x, z;
  Eigen::VectorXd w, y;
  Eigen::VectorXd x_tilde, z_tilde;
  int iter = 0;
};

enum class SolveStatus { kSolved, kMaxIters, kInfeasibleInput };

std::string to_string(SolveStatus status);

struct TraceRow {
  int iter;
  double r_prim;
  double r_dual;
  double objective;
};

struct Solution {
  SymmetricSparseMatrix X;
  /// 1/2 || W .* (X - C) ||_F^2
  double objective = 0.0;
  Residuals residuals;
  int iterations = 0;
  SolveStatus status = SolveStatus::kMaxIters;
  FeasibilityCertificate certificate;
  std::vector<TraceRow> trace;
};

SolverState make_initial_state(const ReducedProblem& rp);

/// One iteration of the over-relaxed two-step-size ADMM:
///   1. KKT solve with first-block rhs  sigma x - w + A'(rho z - y) + P c_u,
///   2. x+ = proj_+(alpha x~ + (1-alpha) x + w / sigma),
///   3. z+ = r (projection onto the constant target set),
///   4. w+ = w + sigma (alpha x~ + (1-alpha) x - x+),
///   5. y+ = y + rho (alpha z~ + (1-alpha) z - z+).
void admm_step(SolverState& state, const ReducedProblem& rp, const SolverConfig& cfg,
               const KktSolver& kkt);

Residuals compute_residuals(const SolverState& state, const ReducedProblem& rp);

/// 1/2 || p .* (x - c_u) ||^2, the reduced-space objective.
double objective_value(const ReducedProblem& rp, const Eigen::VectorXd& x);

/// Full pipeline: feasibility precheck, reduction, backend selection, ADMM
/// loop with residual checks every cfg.check_interval iterations, recovery.
Solution solve(const ProblemSpec& spec, const SolverConfig& cfg = {});

}  // namespace dsproj

#endif  // DSPROJ_ADMM_HPP_
