#ifndef DSPROJ_LINEAR_SYSTEM_HPP_
#define DSPROJ_LINEAR_SYSTEM_HPP_

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>

#include "dsproj/reduced_problem.hpp"

namespace dsproj {

enum class BackendKind { kAuto, kCholesky, kConjugateGradient, kShermanMorrison };

/// Fill-reducing ordering applied before the Cholesky factorization. The
/// same ordering is reused across all iterations of a solve.
enum class Ordering { kAmd, kNatural };

struct LinearBackend {
  BackendKind kind = BackendKind::kAuto;
  Ordering ordering = Ordering::kAmd;
  /// Relative tolerance of the inner CG solves. Must stay well below the
  /// outer termination tolerance.
  double cg_tolerance = 1e-10;
  /// 0 means 10 * n.
  int cg_max_iters = 0;
  bool cg_jacobi_preconditioner = true;
  /// Auto selection switches from Cholesky to CG above this many nonzeros
  /// in the pattern of S + I.
  std::int64_t cholesky_nnz_limit = 20'000'000;
};

/// The n x n positive definite matrix rho * A (P + sigma I)^-1 A' + I of the
/// Schur-reduced KKT step, assembled in O(m) from the structural identity
///   A diag(d) A' = S .* (D + D') + diag((S .* (D + D')) 1)
/// with D the upper-triangular matrix holding d = (p.^2 + sigma).^-1 on the
/// pattern. Its pattern equals that of S + I.
struct ReducedSystemMatrix {
  int n = 0;
  double rho = 0.0;
  double sigma = 0.0;
  /// (p_k^2 + sigma)^-1 per upper-triangle variable.
  Eigen::VectorXd diag_inv;
  /// Full symmetric storage (both triangles) for factorization and matvecs.
  Eigen::SparseMatrix<double> matrix;
};

ReducedSystemMatrix assemble_reduced_matrix(const ReducedProblem& rp, double rho,
                                            double sigma);

/// Sparse LL' factorization of a ReducedSystemMatrix. Computed once,
/// reused across all iterations.
class CholeskyFactor {
public:
  explicit CholeskyFactor(const ReducedSystemMatrix& system,
                          Ordering ordering = Ordering::kAmd);
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

private:
  std::optional<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower,
                                     Eigen::AMDOrdering<int>>>
      amd_llt_;
  std::optional<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower,
                                     Eigen::NaturalOrdering<int>>>
      natural_llt_;
};

/// Preconditioned conjugate gradients for an SPD operator given as a
/// callback. Terminates when ||op(z) - rhs||_2 <= tol * ||rhs||_2.
/// Throws IterativeSolverError when max_iters is exceeded.
Eigen::VectorXd cg_solve(
    const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& op,
    const Eigen::VectorXd& rhs, double tol, int max_iters,
    const Eigen::VectorXd* jacobi_diag = nullptr);

/// O(n) application of the closed-form inverse of the fully dense,
/// unweighted reduced matrix alpha I + beta 11' (Sherman-Morrison):
///   x = (rhs - beta 1 (1' rhs) / (alpha + beta n)) / alpha
/// with alpha = sigma rho / ((2 + sigma/2)(2 + sigma)) + n rho / (2 + sigma) + 1
/// and beta = rho / (2 + sigma).
Eigen::VectorXd dense_inverse_apply(int n, double rho, double sigma,
                                    const Eigen::VectorXd& rhs);

/// One KKT solve of the ADMM iteration, reduced via the Schur complement:
/// given the first-block right-hand side r, returns (x~, z~) with
///   (P + sigma I) x~ + rho A' z = r,  z~ = A x~.
/// Backend state (factorization or operator) is built once per instance.
class KktSolver {
public:
  KktSolver(const ReducedProblem& rp, double rho, double sigma,
            const LinearBackend& backend);

  /// Resolved backend after kAuto selection.
  BackendKind kind() const { return kind_; }
  const ReducedSystemMatrix* system() const { return system_.get(); }

  void solve(const Eigen::VectorXd& r, Eigen::VectorXd& x_tilde,
             Eigen::VectorXd& z_tilde) const;

private:
  const ReducedProblem& rp_;
  double rho_;
  double sigma_;
  BackendKind kind_;
  double cg_tolerance_ = 0.0;
  int cg_max_iters_ = 0;
  Eigen::VectorXd diag_inv_;           // (p.^2 + sigma).^-1
  std::unique_ptr<ReducedSystemMatrix> system_;
  std::unique_ptr<CholeskyFactor> factor_;
  Eigen::VectorXd jacobi_diag_;        // diagonal of the reduced matrix
  bool use_jacobi_ = false;
  mutable Eigen::VectorXd scratch_m_;  // apply_At output in the operator
  mutable Eigen::VectorXd scratch_n_;
};

/// Picks the concrete backend for a problem: Sherman-Morrison for fully
/// dense unweighted patterns, otherwise Cholesky up to the nnz limit, CG
/// above it.
BackendKind select_backend(const ReducedProblem& rp, bool unweighted,
                           const LinearBackend& backend);

}  // namespace dsproj

#endif  // DSPROJ_LINEAR_SYSTEM_HPP_
