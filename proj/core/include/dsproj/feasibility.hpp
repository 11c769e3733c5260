#ifndef DSPROJ_FEASIBILITY_HPP_
#define DSPROJ_FEASIBILITY_HPP_

#include <utility>
#include <vector>

#include "dsproj/sparse_matrix.hpp"

namespace dsproj {

/// Outcome of the pattern feasibility check. A doubly stochastic matrix with
/// pattern inside S exists iff S admits a selection of exactly one nonzero
/// per row and per column, i.e. a perfect matching of the bipartite
/// row-column graph of S.
struct FeasibilityCertificate {
  bool feasible = false;
  /// When feasible: n pairs (row, col), one nonzero per row and column,
  /// 1-based.
  std::vector<std::pair<int, int>> matching;
  /// When infeasible: a set of rows R with |neighbors(R)| < |R| (Hall
  /// violation), 1-based.
  std::vector<int> deficient_rows;
};

/// Maximum bipartite matching (Hopcroft-Karp) on the full symmetric pattern.
/// O(E sqrt(V)); deterministic for a fixed input order.
FeasibilityCertificate feasibility_check(const Pattern& pattern);

}  // namespace dsproj

#endif  // DSPROJ_FEASIBILITY_HPP_
