#ifndef DSPROJ_REDUCED_PROBLEM_HPP_
#define DSPROJ_REDUCED_PROBLEM_HPP_

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "dsproj/sparse_matrix.hpp"

namespace dsproj {

/// Full problem statement: approximate `matrix` by a nonnegative symmetric X
/// with the same sparsity pattern whose row sums equal `target`, minimizing
/// the (optionally weighted) Frobenius distance.
struct ProblemSpec {
  SymmetricSparseMatrix matrix;
  /// Desired row sums r (> 0). Empty means all-ones.
  Eigen::VectorXd target;
  /// Optional weight matrix W for || W .* (X - C) ||_F. Must be strictly
  /// positive wherever C is nonzero; its pattern must contain C's.
  std::optional<SymmetricSparseMatrix> weights;
};

/// The reduced quadratic program over the upper-triangle variables x_u:
///
///   minimize   1/2 || p .* (x_u - c_u) ||^2
///   subject to A x_u = target,  x_u >= 0
///
/// The linear map A (row sums of the reconstructed symmetric matrix) is kept
/// implicit: apply_A / apply_At stream over the index map once, so a matvec
/// costs O(m). Immutable after construction; the applies are pure.
class ReducedProblem {
public:
  int n() const { return n_; }
  /// Number of upper-triangle variables.
  Eigen::Index m() const { return static_cast<Eigen::Index>(rows_.size()); }

  /// 1-based (row, col) of variable k, column-major upper triangle.
  int row_of(Eigen::Index k) const { return rows_[k]; }
  int col_of(Eigen::Index k) const { return cols_[k]; }
  bool is_diagonal(Eigen::Index k) const { return rows_[k] == cols_[k]; }

  const Eigen::VectorXd& c_u() const { return c_u_; }
  const Eigen::VectorXd& p() const { return p_; }
  /// diag(P) = p .* p
  const Eigen::VectorXd& p_squared() const { return p_sq_; }
  const Eigen::VectorXd& target() const { return target_; }

  /// y = A x: row sums of the symmetric matrix represented by x.
  /// Diagonal variables contribute 2 x_k to their row; off-diagonal
  /// variables contribute x_k to both touched rows.
  Eigen::VectorXd apply_A(const Eigen::VectorXd& x) const;

  /// y = A' v: the adjoint, entry k at (i, j) receives 2 v_i if i == j,
  /// otherwise v_i + v_j.
  Eigen::VectorXd apply_At(const Eigen::VectorXd& v) const;

  /// In-place variants reusing caller storage (solver hot path).
  void apply_A(const Eigen::VectorXd& x, Eigen::VectorXd& out) const;
  void apply_At(const Eigen::VectorXd& v, Eigen::VectorXd& out) const;

  /// Reconstructs the symmetric matrix: diagonal of X gets 2 x_k,
  /// off-diagonals get x_k mirrored. Exact zeros are dropped, so the result's
  /// pattern is contained in the original one.
  SymmetricSparseMatrix recover_X(const Eigen::VectorXd& x_u) const;

  /// Inverse of recover_X on the pattern: x_u[k] = X(i,i)/2 on the diagonal,
  /// X(i,j) off it. Positions absent from `x` yield 0.
  Eigen::VectorXd reduce(const SymmetricSparseMatrix& x) const;

  friend ReducedProblem build_reduced_problem(const ProblemSpec& spec);

private:
  int n_ = 0;
  std::vector<int> rows_;
  std::vector<int> cols_;
  Eigen::VectorXd c_u_;
  Eigen::VectorXd p_;
  Eigen::VectorXd p_sq_;
  Eigen::VectorXd target_;
};

/// Builds the reduced problem; validates target and weights.
ReducedProblem build_reduced_problem(const ProblemSpec& spec);

/// Embeds a general (possibly rectangular) nonnegative matrix C into the
/// symmetric block matrix [[0, C], [C', 0]]. Solving the symmetric problem on
/// the embedding and extracting the top-right block yields the nonsymmetric
/// approximation. Emptiness of rows/columns is left to the feasibility check.
SymmetricSparseMatrix embed_nonsymmetric(const CooMatrix& c,
                                         const ValidationOptions& opts = {});

/// Top-right n_rows x n_cols block of a symmetric (n_rows+n_cols)-embedding.
CooMatrix extract_embedded_block(const SymmetricSparseMatrix& x, int n_rows,
                                 int n_cols);

}  // namespace dsproj

#endif  // DSPROJ_REDUCED_PROBLEM_HPP_
