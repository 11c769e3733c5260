#include "oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "dsproj/feasibility.hpp"

namespace dsproj::oracle {

Eigen::MatrixXd dense_constraint_matrix(const ReducedProblem& rp) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rp.n(), rp.m());
  for (Eigen::Index k = 0; k < rp.m(); ++k) {
    a(rp.row_of(k) - 1, k) += 1.0;
    a(rp.col_of(k) - 1, k) += 1.0;  // doubles the diagonal coefficient
  }
  return a;
}

FullVariables full_variables(const SymmetricSparseMatrix& m) {
  std::vector<std::pair<int, int>> positions;
  std::vector<double> values;
  for (const Entry& e : m.entries()) {
    positions.emplace_back(e.row, e.col);
    values.push_back(e.value);
    if (e.row != e.col) {
      positions.emplace_back(e.col, e.row);
      values.push_back(e.value);
    }
  }
  // Column-major over the full matrix.
  std::vector<std::size_t> order(positions.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return positions[a].second != positions[b].second
               ? positions[a].second < positions[b].second
               : positions[a].first < positions[b].first;
  });
  FullVariables vars;
  vars.positions.reserve(order.size());
  vars.c.resize(static_cast<Eigen::Index>(order.size()));
  for (std::size_t i = 0; i < order.size(); ++i) {
    vars.positions.push_back(positions[order[i]]);
    vars.c[static_cast<Eigen::Index>(i)] = values[order[i]];
  }
  return vars;
}

Eigen::MatrixXd full_constraint_matrix(int n, const FullVariables& vars) {
  const Eigen::Index nv = static_cast<Eigen::Index>(vars.positions.size());
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(2 * n, nv);
  for (Eigen::Index k = 0; k < nv; ++k) {
    e(vars.positions[k].first - 1, k) = 1.0;       // row sum
    e(n + vars.positions[k].second - 1, k) = 1.0;  // column sum
  }
  return e;
}

QpSolution solve_projection_qp(const Eigen::VectorXd& q, const Eigen::VectorXd& c,
                               const Eigen::MatrixXd& E, const Eigen::VectorXd& d,
                               const Eigen::VectorXd& feasible_start) {
  const Eigen::Index nv = q.size();
  const Eigen::Index nc = E.rows();
  constexpr double kZeroTol = 1e-11;
  constexpr double kMultiplierTol = 1e-9;

  Eigen::VectorXd x = feasible_start;
  std::vector<char> active(nv, 0);
  for (Eigen::Index i = 0; i < nv; ++i) active[i] = x[i] <= kZeroTol ? 1 : 0;

  QpSolution sol;
  const int max_iterations = static_cast<int>(10 * nv + 100);
  Eigen::VectorXd nu = Eigen::VectorXd::Zero(nc);

  for (int iteration = 0; iteration < max_iterations; ++iteration) {
    std::vector<Eigen::Index> free_idx;
    for (Eigen::Index i = 0; i < nv; ++i)
      if (!active[i]) free_idx.push_back(i);
    const Eigen::Index nf = static_cast<Eigen::Index>(free_idx.size());

    // EQP step on the free variables:
    //   [Q_F E_F'; E_F 0] [step; nu] = [Q_F (c_F - x_F); 0],
    // reduced to the nc x nc system (E_F Q_F^-1 E_F') nu = E_F (c_F - x_F),
    // then step = (c_F - x_F) - Q_F^-1 E_F' nu. E may be rank deficient
    // (row sums vs column sums); the reduced system is consistent and the
    // step is unique, so a complete orthogonal decomposition suffices.
    Eigen::MatrixXd ef(nc, nf);
    Eigen::VectorXd residual_f(nf), qinv_f(nf);
    for (Eigen::Index a = 0; a < nf; ++a) {
      ef.col(a) = E.col(free_idx[a]);
      residual_f[a] = c[free_idx[a]] - x[free_idx[a]];
      qinv_f[a] = 1.0 / q[free_idx[a]];
    }
    const Eigen::MatrixXd schur = ef * qinv_f.asDiagonal() * ef.transpose();
    nu = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(schur).solve(
        ef * residual_f);
    const Eigen::VectorXd packed =
        residual_f - qinv_f.cwiseProduct(ef.transpose() * nu);

    double step_norm = 0.0;
    for (Eigen::Index a = 0; a < nf; ++a)
      step_norm = std::max(step_norm, std::abs(packed[a]));

    if (step_norm <= kZeroTol) {
      // Multipliers of the held bounds: mu = Q (x - c) + E' nu on the
      // active set; all must be nonnegative at an optimum.
      Eigen::VectorXd grad = q.cwiseProduct(x - c) + E.transpose() * nu;
      Eigen::Index worst = -1;
      double worst_value = -kMultiplierTol;
      for (Eigen::Index i = 0; i < nv; ++i)
        if (active[i] && grad[i] < worst_value) {
          worst_value = grad[i];
          worst = i;
        }
      if (worst < 0) {
        sol.x = x;
        sol.equality_multipliers = nu;
        sol.bound_multipliers = grad.cwiseMax(0.0);
        for (Eigen::Index i = 0; i < nv; ++i)
          if (!active[i]) sol.bound_multipliers[i] = 0.0;
        sol.active_set_iterations = iteration;
        return sol;
      }
      active[worst] = 0;
      continue;
    }

    // Ratio test against the bounds of the free variables.
    double step_scale = 1.0;
    Eigen::Index blocking = -1;
    for (Eigen::Index a = 0; a < nf; ++a) {
      if (packed[a] < -kZeroTol) {
        const double limit = -x[free_idx[a]] / packed[a];
        if (limit < step_scale) {
          step_scale = limit;
          blocking = free_idx[a];
        }
      }
    }
    for (Eigen::Index a = 0; a < nf; ++a) x[free_idx[a]] += step_scale * packed[a];
    if (blocking >= 0) {
      x[blocking] = 0.0;
      active[blocking] = 1;
    }
  }
  throw std::runtime_error("active-set oracle failed to terminate");
}

namespace {

/// Exactly feasible start: the permutation matrix of a perfect matching,
/// scaled by the uniform target.
Eigen::VectorXd matching_start(const SymmetricSparseMatrix& m,
                               const FullVariables& vars, double target) {
  const FeasibilityCertificate cert = feasibility_check(pattern_of(m));
  if (!cert.feasible)
    throw std::runtime_error("oracle requires a feasible pattern");
  Eigen::VectorXd x = Eigen::VectorXd::Zero(vars.c.size());
  for (auto [r, c] : cert.matching) {
    auto it = std::find(vars.positions.begin(), vars.positions.end(),
                        std::make_pair(r, c));
    x[it - vars.positions.begin()] = target;
  }
  return x;
}

}  // namespace

Eigen::MatrixXd solve_full_qp(const SymmetricSparseMatrix& m, double target) {
  const FullVariables vars = full_variables(m);
  const Eigen::MatrixXd e = full_constraint_matrix(m.n(), vars);
  const Eigen::VectorXd d = Eigen::VectorXd::Constant(2 * m.n(), target);
  const Eigen::VectorXd q = Eigen::VectorXd::Ones(vars.c.size());
  const QpSolution sol =
      solve_projection_qp(q, vars.c, e, d, matching_start(m, vars, target));

  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(m.n(), m.n());
  for (Eigen::Index k = 0; k < sol.x.size(); ++k)
    x(vars.positions[k].first - 1, vars.positions[k].second - 1) = sol.x[k];
  return x;
}

QpSolution solve_reduced_qp(const ReducedProblem& rp) {
  const Eigen::MatrixXd a = dense_constraint_matrix(rp);

  // Feasible start: symmetrized matching point (exact for uniform targets;
  // the tests only use uniform ones here).
  const double target = rp.target()[0];
  Eigen::VectorXd start = Eigen::VectorXd::Zero(rp.m());
  {
    std::vector<Entry> entries;
    for (Eigen::Index k = 0; k < rp.m(); ++k)
      entries.push_back({rp.row_of(k), rp.col_of(k), 1.0});
    SymmetricSparseMatrix pattern_matrix =
        SymmetricSparseMatrix::from_upper_entries(rp.n(), std::move(entries));
    const FeasibilityCertificate cert =
        feasibility_check(pattern_of(pattern_matrix));
    if (!cert.feasible)
      throw std::runtime_error("oracle requires a feasible pattern");
    auto find_variable = [&rp](int row, int col) {
      if (row > col) std::swap(row, col);
      for (Eigen::Index k = 0; k < rp.m(); ++k)
        if (rp.row_of(k) == row && rp.col_of(k) == col) return k;
      throw std::runtime_error("matching outside pattern");
    };
    for (auto [r, c] : cert.matching) start[find_variable(r, c)] += 0.5 * target;
  }

  return solve_projection_qp(rp.p_squared(), rp.c_u(), a, rp.target(), start);
}

SymmetricSparseMatrix random_feasible_matrix(std::mt19937_64& rng, int n,
                                             double density) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (;;) {
    std::vector<Entry> entries;
    for (int col = 1; col <= n; ++col)
      for (int row = 1; row <= col; ++row)
        if (unif(rng) < density) entries.push_back({row, col, unif(rng)});
    SymmetricSparseMatrix m =
        SymmetricSparseMatrix::from_upper_entries(n, std::move(entries));
    if (feasibility_check(pattern_of(m)).feasible) return m;
  }
}

bool feasible_by_enumeration(const Pattern& pattern) {
  const int n = pattern.n;
  std::vector<std::vector<char>> has(n, std::vector<char>(n, 0));
  for (const auto& [r, c] : pattern.upper_entries) {
    has[r - 1][c - 1] = 1;
    has[c - 1][r - 1] = 1;
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) ok = has[i][perm[i]];
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace dsproj::oracle
