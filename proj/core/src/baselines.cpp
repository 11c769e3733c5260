#include "dsproj/baselines.hpp"

#include <cmath>
#include <string>

namespace dsproj {

Eigen::MatrixXd to_dense(const SymmetricSparseMatrix& m) {
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(m.n(), m.n());
  for (const Entry& e : m.entries()) {
    dense(e.row - 1, e.col - 1) = e.value;
    dense(e.col - 1, e.row - 1) = e.value;
  }
  return dense;
}

BaselineResult zass_normalize(const Eigen::MatrixXd& c, double tol, int max_iters,
                              bool record_trace) {
  const Eigen::Index n = c.rows();
  if (c.cols() != n) throw SpecificationError("zass_normalize expects a square matrix");

  BaselineResult result;
  result.X = c;

  Eigen::VectorXd row_sums(n);
  for (int it = 0; it <= max_iters; ++it) {
    row_sums = result.X.rowwise().sum();
    const double r_prim = (row_sums.array() - 1.0).abs().maxCoeff();
    if (record_trace)
      result.trace.push_back(
          {it, r_prim, 0.0, 0.5 * (result.X - c).squaredNorm()});
    result.iterations = it;
    result.final_primal_residual = r_prim;
    if (r_prim <= tol) {
      result.converged = true;
      return result;
    }
    if (it == max_iters) break;

    // Affine step: exact projection onto both sum constraints, O(n^2) with
    // cached row sums; then clip. The correction c_i + c_j is formed as one
    // symmetric sum so iterates stay bit-exactly symmetric.
    const double total = row_sums.sum();
    const double shift = (total + static_cast<double>(n)) / (static_cast<double>(n) * n);
    const Eigen::VectorXd correction = row_sums / static_cast<double>(n);
    result.X = ((result.X.array() + shift).matrix() -
                (correction.replicate(1, n) + correction.transpose().replicate(n, 1)))
                   .cwiseMax(0.0);
  }
  result.converged = false;
  return result;
}

namespace {

/// y = C d for the full symmetric matrix, streaming the upper triangle once.
Eigen::VectorXd symmetric_matvec(const SymmetricSparseMatrix& c,
                                 const Eigen::VectorXd& d) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(c.n());
  for (const Entry& e : c.entries()) {
    const int i = e.row - 1, j = e.col - 1;
    y[i] += e.value * d[j];
    if (i != j) y[j] += e.value * d[i];
  }
  return y;
}

}  // namespace

SinkhornResult sinkhorn_balance(const SymmetricSparseMatrix& c,
                                const Eigen::VectorXd& target, double tol,
                                int max_iters, bool record_trace) {
  const int n = c.n();
  if (target.size() != n)
    throw SpecificationError("balancing target has length " +
                             std::to_string(target.size()) + ", expected " +
                             std::to_string(n));
  {
    const Pattern pattern = pattern_of(c);
    for (int i = 0; i < n; ++i)
      if (pattern.row_counts[i] == 0)
        throw BalancingError("row " + std::to_string(i + 1) +
                             " is empty; balancing is undefined");
  }

  SinkhornResult result;
  result.d = Eigen::VectorXd::Ones(n);
  for (int it = 0; it <= max_iters; ++it) {
    const Eigen::VectorXd cd = symmetric_matvec(c, result.d);
    const Eigen::VectorXd row_sums = result.d.cwiseProduct(cd);
    const double r_prim = (row_sums - target).lpNorm<Eigen::Infinity>();
    if (record_trace) result.trace.push_back({it, r_prim, 0.0, 0.0});
    result.iterations = it;
    result.final_primal_residual = r_prim;
    if (r_prim <= tol) {
      result.converged = true;
      break;
    }
    if (it == max_iters) break;
    result.d = (result.d.cwiseProduct(target.cwiseQuotient(cd))).cwiseSqrt();
  }

  std::vector<Entry> scaled;
  scaled.reserve(c.entries().size());
  for (const Entry& e : c.entries())
    scaled.push_back(
        {e.row, e.col, result.d[e.row - 1] * e.value * result.d[e.col - 1]});
  result.X = SymmetricSparseMatrix::from_upper_entries(n, std::move(scaled));
  return result;
}

SymmetricSparseMatrix rbf_affinity(const Eigen::MatrixXd& points, double sigma,
                                   double truncation) {
  if (!(sigma > 0.0)) throw SpecificationError("sigma must be positive");
  if (truncation < 0.0) throw SpecificationError("truncation must be nonnegative");
  const int n = static_cast<int>(points.rows());
  const double inv_sigma_sq = 1.0 / (sigma * sigma);

  std::vector<Entry> entries;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      const double dist_sq = (points.row(i) - points.row(j)).squaredNorm();
      const double value = std::exp(-dist_sq * inv_sigma_sq);
      if (value >= truncation && value > 0.0)
        entries.push_back({i + 1, j + 1, value});
    }
    entries.push_back({j + 1, j + 1, 1.0});
  }
  return SymmetricSparseMatrix::from_upper_entries(n, std::move(entries));
}

}  // namespace dsproj
