#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dsproj/sparse_matrix.hpp"

using namespace dsproj;

TEST_CASE("validation sorts, rejects bad indices and keeps the upper triangle") {
  auto m = SymmetricSparseMatrix::from_upper_entries(
      3, {{2, 3, 1.0}, {1, 1, 2.0}, {1, 3, 0.5}});
  REQUIRE(m.nnz_upper() == 3);
  // Column-major order: (1,1), (1,3), (2,3).
  CHECK(m.entries()[0].row == 1);
  CHECK(m.entries()[0].col == 1);
  CHECK(m.entries()[1].col == 3);
  CHECK(m.entries()[1].row == 1);
  CHECK(m.entries()[2].row == 2);

  CHECK_THROWS_AS(SymmetricSparseMatrix::from_upper_entries(2, {{2, 1, 1.0}}),
                  ValidationError);
  CHECK_THROWS_AS(SymmetricSparseMatrix::from_upper_entries(2, {{0, 1, 1.0}}),
                  ValidationError);
  CHECK_THROWS_AS(SymmetricSparseMatrix::from_upper_entries(2, {{1, 3, 1.0}}),
                  ValidationError);
}

TEST_CASE("negative and duplicate policies") {
  CHECK_THROWS_AS(SymmetricSparseMatrix::from_upper_entries(2, {{1, 2, -1.0}}),
                  ValidationError);

  ValidationOptions abs_opts;
  abs_opts.negative_policy = NegativePolicy::kAbsoluteValue;
  auto m = SymmetricSparseMatrix::from_upper_entries(2, {{1, 2, -1.5}}, abs_opts);
  CHECK(m.coeff(1, 2) == 1.5);

  CHECK_THROWS_AS(
      SymmetricSparseMatrix::from_upper_entries(2, {{1, 2, 0.3}, {1, 2, 0.2}}),
      ValidationError);
  ValidationOptions sum_opts;
  sum_opts.duplicate_policy = DuplicatePolicy::kSum;
  auto s = SymmetricSparseMatrix::from_upper_entries(2, {{1, 2, 0.3}, {1, 2, 0.2}},
                                                     sum_opts);
  REQUIRE(s.nnz_upper() == 1);
  CHECK(s.coeff(1, 2) == 0.5);
}

TEST_CASE("exact zeros are dropped from the pattern") {
  auto m = SymmetricSparseMatrix::from_upper_entries(2, {{1, 1, 0.0}, {1, 2, 1.0}});
  CHECK(m.nnz_upper() == 1);
  CHECK(m.coeff(1, 1) == 0.0);
  CHECK(m.coeff(2, 1) == 1.0);  // mirrored lookup
}

TEST_CASE("non-finite values are rejected") {
  CHECK_THROWS_AS(SymmetricSparseMatrix::from_upper_entries(
                      1, {{1, 1, std::numeric_limits<double>::quiet_NaN()}}),
                  ValidationError);
  CHECK_THROWS_AS(SymmetricSparseMatrix::from_upper_entries(
                      1, {{1, 1, std::numeric_limits<double>::infinity()}}),
                  ValidationError);
}

TEST_CASE("pattern of a dense 2x2 and a diagonal 3x3") {
  auto dense = SymmetricSparseMatrix::from_upper_entries(
      2, {{1, 1, 1.0}, {1, 2, 1.0}, {2, 2, 1.0}});
  Pattern p = pattern_of(dense);
  REQUIRE(p.upper_entries.size() == 3);
  CHECK(p.upper_entries[0] == std::pair{1, 1});
  CHECK(p.upper_entries[1] == std::pair{1, 2});
  CHECK(p.upper_entries[2] == std::pair{2, 2});
  CHECK(p.row_counts == std::vector<std::int64_t>{2, 2});
  CHECK(p.is_fully_dense());

  auto diag = SymmetricSparseMatrix::from_upper_entries(
      3, {{1, 1, 1.0}, {2, 2, 1.0}, {3, 3, 1.0}});
  Pattern d = pattern_of(diag);
  CHECK(d.row_counts == std::vector<std::int64_t>{1, 1, 1});
  CHECK(d.nnz_full() == 3);
}

TEST_CASE("the 3x3 counterexample pattern has 7 full and 5 upper nonzeros") {
  auto m = SymmetricSparseMatrix::from_upper_entries(
      3, {{1, 1, 0.1}, {1, 2, 0.9}, {2, 2, 0.1}, {1, 3, 0.9}, {3, 3, 0.9}});
  Pattern p = pattern_of(m);
  CHECK(p.nnz_full() == 7);
  CHECK(p.nnz_upper() == 5);
}

TEST_CASE("nnz bookkeeping identity on random matrices") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 12);
    std::vector<Entry> entries;
    for (int col = 1; col <= n; ++col)
      for (int row = 1; row <= col; ++row)
        if (unif(rng) < 0.4) entries.push_back({row, col, unif(rng)});
    auto m = SymmetricSparseMatrix::from_upper_entries(n, entries);
    CHECK(m.nnz_full() == 2 * m.nnz_upper() - m.diagonal_count());
    Pattern p = pattern_of(m);
    std::int64_t total = 0;
    for (auto c : p.row_counts) total += c;
    CHECK(total == p.nnz_full());
  }
}
