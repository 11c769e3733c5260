#ifndef DSPROJ_SPARSE_MATRIX_HPP_
#define DSPROJ_SPARSE_MATRIX_HPP_

#include <cstdint>
#include <vector>

#include "dsproj/errors.hpp"

namespace dsproj {

/// One stored coefficient. Indices are 1-based throughout (Matrix Market
/// convention).
struct Entry {
  int row;
  int col;
  double value;
};

enum class NegativePolicy { kReject, kAbsoluteValue };
enum class DuplicatePolicy { kReject, kSum };

struct ValidationOptions {
  /// Maximum allowed |C(i,j) - C(j,i)| when both triangles are given.
  double symmetry_tolerance = 0.0;
  NegativePolicy negative_policy = NegativePolicy::kReject;
  DuplicatePolicy duplicate_policy = DuplicatePolicy::kReject;
};

/// Symmetric nonnegative sparse matrix, stored as the upper triangle only
/// (row <= col), column-major sorted, no duplicates, no explicit zeros.
/// Immutable after construction.
class SymmetricSparseMatrix {
public:
  SymmetricSparseMatrix() = default;

  /// Validates and normalizes raw upper-triangle entries:
  ///  - indices must satisfy 1 <= row <= col <= n,
  ///  - values must be finite; negatives handled per policy,
  ///  - duplicates handled per policy,
  ///  - entries that end up exactly zero are dropped (they would otherwise
  ///    join the sparsity pattern and change the feasible set).
  static SymmetricSparseMatrix from_upper_entries(int n, std::vector<Entry> entries,
                                                  const ValidationOptions& opts = {});

  int n() const { return n_; }
  /// Number of stored (upper-triangle) entries.
  std::int64_t nnz_upper() const { return static_cast<std::int64_t>(entries_.size()); }
  /// Number of nonzeros of the full symmetric matrix.
  std::int64_t nnz_full() const { return 2 * nnz_upper() - diagonal_count_; }
  std::int64_t diagonal_count() const { return diagonal_count_; }

  const std::vector<Entry>& entries() const { return entries_; }

  /// Coefficient lookup by (1-based) position; zero when not stored.
  /// O(log nnz). Intended for tests and small cases.
  double coeff(int row, int col) const;

private:
  int n_ = 0;
  std::vector<Entry> entries_;
  std::int64_t diagonal_count_ = 0;
};

/// Structural nonzero positions of a SymmetricSparseMatrix: the stored upper
/// triangle S_u plus the per-row nonzero counts of the full symmetric
/// pattern S. S is symmetric, so row and column counts coincide.
struct Pattern {
  int n = 0;
  /// (row, col) of the stored upper triangle, column-major sorted, 1-based.
  std::vector<std::pair<int, int>> upper_entries;
  /// Nonzero count of each row (= column) of S.
  std::vector<std::int64_t> row_counts;
  std::int64_t diagonal_count = 0;

  std::int64_t nnz_upper() const { return static_cast<std::int64_t>(upper_entries.size()); }
  std::int64_t nnz_full() const { return 2 * nnz_upper() - diagonal_count; }
  bool is_fully_dense() const {
    return nnz_upper() == static_cast<std::int64_t>(n) * (n + 1) / 2;
  }
};

Pattern pattern_of(const SymmetricSparseMatrix& m);

/// General (possibly rectangular, possibly asymmetric) coordinate matrix.
/// Raw form produced by the Matrix Market reader before symmetrization, and
/// the input of the nonsymmetric block embedding.
struct CooMatrix {
  int n_rows = 0;
  int n_cols = 0;
  std::vector<Entry> entries;
};

}  // namespace dsproj

#endif  // DSPROJ_SPARSE_MATRIX_HPP_
