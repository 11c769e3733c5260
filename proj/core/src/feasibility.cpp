#include "dsproj/feasibility.hpp"

#include <limits>
#include <vector>

namespace dsproj {

namespace {

constexpr int kInf = std::numeric_limits<int>::max();

// Adjacency of the bipartite row-column graph of the full symmetric pattern,
// CSR over rows, 0-based.
struct RowGraph {
  std::vector<int> offsets;
  std::vector<int> cols;
};

RowGraph build_row_graph(const Pattern& pattern) {
  const int n = pattern.n;
  std::vector<int> degree(n, 0);
  for (const auto& [r, c] : pattern.upper_entries) {
    ++degree[r - 1];
    if (r != c) ++degree[c - 1];
  }
  RowGraph g;
  g.offsets.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) g.offsets[i + 1] = g.offsets[i] + degree[i];
  g.cols.resize(g.offsets[n]);
  std::vector<int> cursor(g.offsets.begin(), g.offsets.end() - 1);
  for (const auto& [r, c] : pattern.upper_entries) {
    g.cols[cursor[r - 1]++] = c - 1;
    if (r != c) g.cols[cursor[c - 1]++] = r - 1;
  }
  return g;
}

class HopcroftKarp {
public:
  HopcroftKarp(const RowGraph& graph, int n)
      : graph_(graph), n_(n), match_row_(n, -1), match_col_(n, -1), dist_(n, kInf) {}

  int run() {
    int matched = 0;
    while (bfs()) {
      for (int u = 0; u < n_; ++u)
        if (match_row_[u] < 0 && dfs(u)) ++matched;
    }
    return matched;
  }

  const std::vector<int>& match_row() const { return match_row_; }

  /// Rows reachable from free rows by alternating paths in the final layered
  /// graph; a Hall violator when the matching is not perfect.
  std::vector<int> reachable_rows() const {
    std::vector<char> seen(n_, 0);
    std::vector<int> queue;
    for (int u = 0; u < n_; ++u)
      if (match_row_[u] < 0) {
        seen[u] = 1;
        queue.push_back(u);
      }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int u = queue[head];
      for (int e = graph_.offsets[u]; e < graph_.offsets[u + 1]; ++e) {
        const int partner = match_col_[graph_.cols[e]];
        if (partner >= 0 && !seen[partner]) {
          seen[partner] = 1;
          queue.push_back(partner);
        }
      }
    }
    return queue;
  }

private:
  bool bfs() {
    std::vector<int> queue;
    for (int u = 0; u < n_; ++u) {
      if (match_row_[u] < 0) {
        dist_[u] = 0;
        queue.push_back(u);
      } else {
        dist_[u] = kInf;
      }
    }
    bool found_free_col = false;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int u = queue[head];
      for (int e = graph_.offsets[u]; e < graph_.offsets[u + 1]; ++e) {
        const int v = graph_.cols[e];
        const int partner = match_col_[v];
        if (partner < 0) {
          found_free_col = true;
        } else if (dist_[partner] == kInf) {
          dist_[partner] = dist_[u] + 1;
          queue.push_back(partner);
        }
      }
    }
    return found_free_col;
  }

  bool dfs(int u) {
    for (int e = graph_.offsets[u]; e < graph_.offsets[u + 1]; ++e) {
      const int v = graph_.cols[e];
      const int partner = match_col_[v];
      if (partner < 0 || (dist_[partner] == dist_[u] + 1 && dfs(partner))) {
        match_row_[u] = v;
        match_col_[v] = u;
        return true;
      }
    }
    dist_[u] = kInf;
    return false;
  }

  const RowGraph& graph_;
  int n_;
  std::vector<int> match_row_;
  std::vector<int> match_col_;
  std::vector<int> dist_;
};

}  // namespace

FeasibilityCertificate feasibility_check(const Pattern& pattern) {
  const RowGraph graph = build_row_graph(pattern);
  HopcroftKarp hk(graph, pattern.n);
  const int matched = hk.run();

  FeasibilityCertificate cert;
  cert.feasible = (matched == pattern.n);
  if (cert.feasible) {
    cert.matching.reserve(pattern.n);
    for (int u = 0; u < pattern.n; ++u)
      cert.matching.emplace_back(u + 1, hk.match_row()[u] + 1);
  } else {
    for (int u : hk.reachable_rows()) cert.deficient_rows.push_back(u + 1);
  }
  return cert;
}

}  // namespace dsproj
