#include "dsproj/reduced_problem.hpp"

#include <cmath>
#include <string>

namespace dsproj {

Eigen::VectorXd ReducedProblem::apply_A(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out(n_);
  apply_A(x, out);
  return out;
}

void ReducedProblem::apply_A(const Eigen::VectorXd& x, Eigen::VectorXd& out) const {
  if (x.size() != m()) throw SpecificationError("apply_A: length mismatch");
  out.setZero(n_);
  const Eigen::Index mm = m();
  for (Eigen::Index k = 0; k < mm; ++k) {
    const int i = rows_[k] - 1, j = cols_[k] - 1;
    if (i == j) {
      out[i] += 2.0 * x[k];
    } else {
      out[i] += x[k];
      out[j] += x[k];
    }
  }
}

Eigen::VectorXd ReducedProblem::apply_At(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out(m());
  apply_At(v, out);
  return out;
}

void ReducedProblem::apply_At(const Eigen::VectorXd& v, Eigen::VectorXd& out) const {
  if (v.size() != n_) throw SpecificationError("apply_At: length mismatch");
  out.resize(m());
  const Eigen::Index mm = m();
  for (Eigen::Index k = 0; k < mm; ++k) {
    const int i = rows_[k] - 1, j = cols_[k] - 1;
    out[k] = i == j ? 2.0 * v[i] : v[i] + v[j];
  }
}

SymmetricSparseMatrix ReducedProblem::recover_X(const Eigen::VectorXd& x_u) const {
  if (x_u.size() != m()) throw SpecificationError("recover_X: length mismatch");
  std::vector<Entry> entries;
  entries.reserve(x_u.size());
  for (Eigen::Index k = 0; k < m(); ++k) {
    const double v = rows_[k] == cols_[k] ? 2.0 * x_u[k] : x_u[k];
    entries.push_back({rows_[k], cols_[k], v});
  }
  // Entries are already sorted and unique; from_upper_entries drops zeros.
  return SymmetricSparseMatrix::from_upper_entries(n_, std::move(entries));
}

Eigen::VectorXd ReducedProblem::reduce(const SymmetricSparseMatrix& x) const {
  Eigen::VectorXd out(m());
  for (Eigen::Index k = 0; k < m(); ++k) {
    const double v = x.coeff(rows_[k], cols_[k]);
    out[k] = rows_[k] == cols_[k] ? 0.5 * v : v;
  }
  return out;
}

ReducedProblem build_reduced_problem(const ProblemSpec& spec) {
  const SymmetricSparseMatrix& c = spec.matrix;
  const int n = c.n();

  ReducedProblem rp;
  rp.n_ = n;

  if (spec.target.size() == 0) {
    rp.target_ = Eigen::VectorXd::Ones(n);
  } else {
    if (spec.target.size() != n)
      throw SpecificationError("target vector has length " +
                               std::to_string(spec.target.size()) + ", expected " +
                               std::to_string(n));
    for (Eigen::Index i = 0; i < spec.target.size(); ++i)
      if (!(spec.target[i] > 0.0) || !std::isfinite(spec.target[i]))
        throw SpecificationError("target entries must be positive and finite");
    rp.target_ = spec.target;
  }

  const Eigen::Index m = c.nnz_upper();
  rp.rows_.reserve(m);
  rp.cols_.reserve(m);
  rp.c_u_.resize(m);
  rp.p_.resize(m);

  const double sqrt2 = std::sqrt(2.0);
  rp.p_sq_.resize(m);
  Eigen::Index k = 0;
  for (const Entry& e : c.entries()) {
    rp.rows_.push_back(e.row);
    rp.cols_.push_back(e.col);
    const bool diag = e.row == e.col;
    rp.c_u_[k] = diag ? 0.5 * e.value : e.value;
    double weight = 1.0;
    if (spec.weights) {
      weight = spec.weights->coeff(e.row, e.col);
      if (!(weight > 0.0) || !std::isfinite(weight))
        throw SpecificationError("weight at (" + std::to_string(e.row) + ", " +
                                 std::to_string(e.col) +
                                 ") must be strictly positive on the pattern of C");
    }
    rp.p_[k] = (diag ? 2.0 : sqrt2) * weight;
    // p^2 computed structurally: squaring sqrt(2) would miss exact 2.
    rp.p_sq_[k] = (diag ? 4.0 : 2.0) * weight * weight;
    ++k;
  }
  if (spec.weights && spec.weights->n() != n)
    throw SpecificationError("weight matrix dimension mismatch");

  return rp;
}

SymmetricSparseMatrix embed_nonsymmetric(const CooMatrix& c,
                                         const ValidationOptions& opts) {
  const int nr = c.n_rows, nc = c.n_cols;
  std::vector<Entry> upper;
  upper.reserve(c.entries.size());
  // Block [[0, C], [C', 0]]: entry (i, j) of C lands at (i, nr + j), which is
  // always strictly above the diagonal.
  for (const Entry& e : c.entries) upper.push_back({e.row, nr + e.col, e.value});
  return SymmetricSparseMatrix::from_upper_entries(nr + nc, std::move(upper), opts);
}

CooMatrix extract_embedded_block(const SymmetricSparseMatrix& x, int n_rows,
                                 int n_cols) {
  if (x.n() != n_rows + n_cols)
    throw SpecificationError("embedding has dimension " + std::to_string(x.n()) +
                             ", expected " + std::to_string(n_rows + n_cols));
  CooMatrix block;
  block.n_rows = n_rows;
  block.n_cols = n_cols;
  for (const Entry& e : x.entries())
    if (e.row <= n_rows && e.col > n_rows)
      block.entries.push_back({e.row, e.col - n_rows, e.value});
  return block;
}

}  // namespace dsproj
