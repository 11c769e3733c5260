#include "dsproj/linear_system.hpp"

#include <cmath>
#include <vector>

namespace dsproj {

namespace {

bool is_unweighted(const ReducedProblem& rp) {
  for (Eigen::Index k = 0; k < rp.m(); ++k)
    if (rp.p_squared()[k] != (rp.is_diagonal(k) ? 4.0 : 2.0)) return false;
  return true;
}

bool is_fully_dense(const ReducedProblem& rp) {
  return rp.m() == static_cast<Eigen::Index>(rp.n()) * (rp.n() + 1) / 2;
}

std::int64_t nnz_s_plus_i(const ReducedProblem& rp) {
  std::int64_t diag = 0;
  for (Eigen::Index k = 0; k < rp.m(); ++k)
    if (rp.is_diagonal(k)) ++diag;
  return 2 * (rp.m() - diag) + rp.n();
}

/// Diagonal of rho A (P + sigma I)^-1 A' + I in O(m), via the row sums of
/// S .* (D + D') plus the diagonal of S .* (D + D') itself.
Eigen::VectorXd reduced_matrix_diagonal(const ReducedProblem& rp, double rho,
                                        double sigma) {
  Eigen::VectorXd diag = Eigen::VectorXd::Ones(rp.n());
  for (Eigen::Index k = 0; k < rp.m(); ++k) {
    const double d = 1.0 / (rp.p_squared()[k] + sigma);
    const int i = rp.row_of(k) - 1, j = rp.col_of(k) - 1;
    if (i == j) {
      diag[i] += rho * 4.0 * d;  // 2d on the diagonal + 2d in the row sum
    } else {
      diag[i] += rho * d;
      diag[j] += rho * d;
    }
  }
  return diag;
}

}  // namespace

ReducedSystemMatrix assemble_reduced_matrix(const ReducedProblem& rp, double rho,
                                            double sigma) {
  if (rho <= 0.0) throw SpecificationError("rho must be positive");
  if (sigma < 0.0) throw SpecificationError("sigma must be nonnegative");

  ReducedSystemMatrix sys;
  sys.n = rp.n();
  sys.rho = rho;
  sys.sigma = sigma;
  sys.diag_inv = (rp.p_squared().array() + sigma).inverse();

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * rp.m() + rp.n());
  Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(rp.n());
  for (Eigen::Index k = 0; k < rp.m(); ++k) {
    const double d = sys.diag_inv[k];
    const int i = rp.row_of(k) - 1, j = rp.col_of(k) - 1;
    if (i == j) {
      // (D + D')_{ii} = 2 d, and it also contributes 2 d to the row sum.
      triplets.emplace_back(i, i, rho * 2.0 * d);
      row_sums[i] += 2.0 * d;
    } else {
      triplets.emplace_back(i, j, rho * d);
      triplets.emplace_back(j, i, rho * d);
      row_sums[i] += d;
      row_sums[j] += d;
    }
  }
  for (int i = 0; i < rp.n(); ++i)
    triplets.emplace_back(i, i, 1.0 + rho * row_sums[i]);

  sys.matrix.resize(rp.n(), rp.n());
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.matrix.makeCompressed();
  return sys;
}

CholeskyFactor::CholeskyFactor(const ReducedSystemMatrix& system,
                               Ordering ordering) {
  if (ordering == Ordering::kAmd) {
    amd_llt_.emplace();
    amd_llt_->compute(system.matrix);
    if (amd_llt_->info() != Eigen::Success)
      throw NumericalError("Cholesky factorization of the reduced matrix failed");
  } else {
    natural_llt_.emplace();
    natural_llt_->compute(system.matrix);
    if (natural_llt_->info() != Eigen::Success)
      throw NumericalError("Cholesky factorization of the reduced matrix failed");
  }
}

Eigen::VectorXd CholeskyFactor::solve(const Eigen::VectorXd& rhs) const {
  if (amd_llt_) return amd_llt_->solve(rhs);
  return natural_llt_->solve(rhs);
}

Eigen::VectorXd cg_solve(
    const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& op,
    const Eigen::VectorXd& rhs, double tol, int max_iters,
    const Eigen::VectorXd* jacobi_diag) {
  const Eigen::Index n = rhs.size();
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) return z;
  const double threshold = tol * rhs_norm;

  Eigen::VectorXd residual = rhs;  // r = rhs - op(0)
  Eigen::VectorXd precond(n), direction(n), op_dir(n);
  if (jacobi_diag)
    precond = residual.cwiseQuotient(*jacobi_diag);
  else
    precond = residual;
  direction = precond;
  double rz = residual.dot(precond);

  for (int iter = 0; iter < max_iters; ++iter) {
    if (residual.norm() <= threshold) return z;
    op(direction, op_dir);
    const double alpha = rz / direction.dot(op_dir);
    z += alpha * direction;
    residual -= alpha * op_dir;
    if (jacobi_diag)
      precond = residual.cwiseQuotient(*jacobi_diag);
    else
      precond = residual;
    const double rz_next = residual.dot(precond);
    direction = precond + (rz_next / rz) * direction;
    rz = rz_next;
  }
  if (residual.norm() <= threshold) return z;
  throw IterativeSolverError("conjugate gradients failed to converge",
                             residual.norm() / rhs_norm, max_iters);
}

Eigen::VectorXd dense_inverse_apply(int n, double rho, double sigma,
                                    const Eigen::VectorXd& rhs) {
  const double alpha =
      sigma * rho / ((2.0 + sigma / 2.0) * (2.0 + sigma)) + n * rho / (2.0 + sigma) + 1.0;
  const double beta = rho / (2.0 + sigma);
  const double shift = beta * rhs.sum() / (alpha + beta * n);
  return (rhs.array() - shift).matrix() / alpha;
}

BackendKind select_backend(const ReducedProblem& rp, bool unweighted,
                           const LinearBackend& backend) {
  if (backend.kind != BackendKind::kAuto) return backend.kind;
  if (unweighted && is_fully_dense(rp)) return BackendKind::kShermanMorrison;
  if (nnz_s_plus_i(rp) <= backend.cholesky_nnz_limit) return BackendKind::kCholesky;
  return BackendKind::kConjugateGradient;
}

KktSolver::KktSolver(const ReducedProblem& rp, double rho, double sigma,
                     const LinearBackend& backend)
    : rp_(rp), rho_(rho), sigma_(sigma) {
  kind_ = select_backend(rp, is_unweighted(rp), backend);
  diag_inv_ = (rp.p_squared().array() + sigma).inverse();

  switch (kind_) {
    case BackendKind::kCholesky:
      system_ = std::make_unique<ReducedSystemMatrix>(
          assemble_reduced_matrix(rp, rho, sigma));
      factor_ = std::make_unique<CholeskyFactor>(*system_, backend.ordering);
      break;
    case BackendKind::kConjugateGradient:
      cg_tolerance_ = backend.cg_tolerance;
      cg_max_iters_ = backend.cg_max_iters > 0 ? backend.cg_max_iters : 10 * rp.n();
      use_jacobi_ = backend.cg_jacobi_preconditioner;
      if (use_jacobi_) jacobi_diag_ = reduced_matrix_diagonal(rp, rho, sigma);
      break;
    case BackendKind::kShermanMorrison:
      if (!is_fully_dense(rp))
        throw SpecificationError(
            "sherman-morrison backend requires a fully dense pattern");
      if (!is_unweighted(rp))
        throw SpecificationError(
            "sherman-morrison backend requires the unweighted norm");
      break;
    case BackendKind::kAuto:
      break;  // unreachable, select_backend resolved it
  }
}

void KktSolver::solve(const Eigen::VectorXd& r, Eigen::VectorXd& x_tilde,
                      Eigen::VectorXd& z_tilde) const {
  // Step 1: (rho A (P+sigma I)^-1 A' + I) z = A (P+sigma I)^-1 r.
  scratch_m_ = diag_inv_.cwiseProduct(r);
  Eigen::VectorXd rhs_n(rp_.n());
  rp_.apply_A(scratch_m_, rhs_n);

  Eigen::VectorXd z;
  switch (kind_) {
    case BackendKind::kCholesky:
      z = factor_->solve(rhs_n);
      break;
    case BackendKind::kShermanMorrison:
      z = dense_inverse_apply(rp_.n(), rho_, sigma_, rhs_n);
      break;
    case BackendKind::kConjugateGradient: {
      auto op = [this](const Eigen::VectorXd& v, Eigen::VectorXd& out) {
        rp_.apply_At(v, scratch_m_);
        scratch_m_.array() *= diag_inv_.array();
        rp_.apply_A(scratch_m_, scratch_n_);
        out = v + rho_ * scratch_n_;
      };
      z = cg_solve(op, rhs_n, cg_tolerance_, cg_max_iters_,
                   use_jacobi_ ? &jacobi_diag_ : nullptr);
      break;
    }
    case BackendKind::kAuto:
      throw SpecificationError("unresolved backend");
  }

  // Step 2: x~ = (P + sigma I)^-1 (r - rho A' z); and z~ = A x~.
  rp_.apply_At(z, x_tilde);
  x_tilde = diag_inv_.cwiseProduct(r - rho_ * x_tilde);
  rp_.apply_A(x_tilde, z_tilde);
}

}  // namespace dsproj
