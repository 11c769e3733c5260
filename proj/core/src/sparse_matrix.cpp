#include "dsproj/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dsproj {

SymmetricSparseMatrix SymmetricSparseMatrix::from_upper_entries(
    int n, std::vector<Entry> entries, const ValidationOptions& opts) {
  if (n < 0) throw ValidationError("matrix dimension must be nonnegative");

  for (Entry& e : entries) {
    if (e.row < 1 || e.col < 1 || e.row > n || e.col > n)
      throw ValidationError("entry (" + std::to_string(e.row) + ", " +
                            std::to_string(e.col) + ") outside " +
                            std::to_string(n) + "x" + std::to_string(n) + " matrix");
    if (e.row > e.col)
      throw ValidationError("entry (" + std::to_string(e.row) + ", " +
                            std::to_string(e.col) + ") is below the diagonal");
    if (!std::isfinite(e.value))
      throw ValidationError("non-finite value at (" + std::to_string(e.row) + ", " +
                            std::to_string(e.col) + ")");
    if (e.value < 0.0) {
      if (opts.negative_policy == NegativePolicy::kReject)
        throw ValidationError("negative value at (" + std::to_string(e.row) + ", " +
                              std::to_string(e.col) + ")");
      e.value = std::abs(e.value);
    }
  }

  // Column-major over the upper triangle.
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });

  std::vector<Entry> merged;
  merged.reserve(entries.size());
  for (const Entry& e : entries) {
    if (!merged.empty() && merged.back().row == e.row && merged.back().col == e.col) {
      if (opts.duplicate_policy == DuplicatePolicy::kReject)
        throw ValidationError("duplicate entry at (" + std::to_string(e.row) + ", " +
                              std::to_string(e.col) + ")");
      merged.back().value += e.value;
    } else {
      merged.push_back(e);
    }
  }

  // Exact zeros do not belong to the pattern.
  std::erase_if(merged, [](const Entry& e) { return e.value == 0.0; });

  SymmetricSparseMatrix m;
  m.n_ = n;
  m.entries_ = std::move(merged);
  for (const Entry& e : m.entries_)
    if (e.row == e.col) ++m.diagonal_count_;
  return m;
}

double SymmetricSparseMatrix::coeff(int row, int col) const {
  if (row > col) std::swap(row, col);
  auto it = std::lower_bound(entries_.begin(), entries_.end(), std::make_pair(col, row),
                             [](const Entry& e, const std::pair<int, int>& key) {
                               return e.col != key.first ? e.col < key.first
                                                         : e.row < key.second;
                             });
  if (it != entries_.end() && it->row == row && it->col == col) return it->value;
  return 0.0;
}

Pattern pattern_of(const SymmetricSparseMatrix& m) {
  Pattern p;
  p.n = m.n();
  p.upper_entries.reserve(m.entries().size());
  p.row_counts.assign(m.n(), 0);
  for (const Entry& e : m.entries()) {
    p.upper_entries.emplace_back(e.row, e.col);
    ++p.row_counts[e.row - 1];
    if (e.row != e.col)
      ++p.row_counts[e.col - 1];
    else
      ++p.diagonal_count;
  }
  return p;
}

}  // namespace dsproj
