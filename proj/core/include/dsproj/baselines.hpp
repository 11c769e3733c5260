#ifndef DSPROJ_BASELINES_HPP_
#define DSPROJ_BASELINES_HPP_

#include <Eigen/Core>
#include <vector>

#include "dsproj/admm.hpp"
#include "dsproj/sparse_matrix.hpp"

namespace dsproj {

Eigen::MatrixXd to_dense(const SymmetricSparseMatrix& m);

/// Result of a reference normalization scheme. Convergence is declared on
/// primal feasibility only (these schemes have no dual residual).
struct BaselineResult {
  Eigen::MatrixXd X;
  int iterations = 0;
  /// || X 1 - 1 ||_inf at exit.
  double final_primal_residual = 0.0;
  bool converged = false;
  /// (iter, r_prim, 0, objective) per iteration when requested.
  std::vector<TraceRow> trace;
};

/// Alternating scheme of the dense formulation: the exact projection onto
/// {X : X1 = 1, X'1 = 1} followed by clipping to the nonnegative orthant,
///   X~ = X + n^-2 (1'X1 + n) 11' - n^-1 (X 11' + 11' X),
///   X+ = proj_+(X~),
/// iterated from X0 = C. Row sums are cached, so one iteration costs O(n^2).
/// Does not exploit sparsity; callers with sparse input must densify.
BaselineResult zass_normalize(const Eigen::MatrixXd& c, double tol, int max_iters,
                              bool record_trace = false);

struct SinkhornResult {
  /// Positive scaling vector: X = diag(d) C diag(d).
  Eigen::VectorXd d;
  SymmetricSparseMatrix X;
  int iterations = 0;
  /// || row_sums(X) - target ||_inf at exit.
  double final_primal_residual = 0.0;
  bool converged = false;
  std::vector<TraceRow> trace;
};

/// Symmetric Sinkhorn-style balancing towards row sums = target:
/// d <- sqrt(d .* target ./ (C d)) until the row sums of diag(d) C diag(d)
/// match the target. The square-root damping is required: the undamped
/// alternation d <- target ./ (C d) 2-cycles on hollow matrices such as
/// [[0, 2], [2, 0]]. The output pattern equals the input pattern exactly.
/// Throws BalancingError on an empty row. Non-convergence (converged =
/// false) signals lack of total support.
SinkhornResult sinkhorn_balance(const SymmetricSparseMatrix& c,
                                const Eigen::VectorXd& target, double tol,
                                int max_iters, bool record_trace = false);

/// RBF affinity matrix C_ij = exp(-||x_i - x_j||^2 / sigma^2) over the rows
/// of `points`. Off-diagonal entries below `truncation` are removed from the
/// pattern; diagonal entries equal 1 and are always kept.
SymmetricSparseMatrix rbf_affinity(const Eigen::MatrixXd& points, double sigma,
                                   double truncation);

}  // namespace dsproj

#endif  // DSPROJ_BASELINES_HPP_
