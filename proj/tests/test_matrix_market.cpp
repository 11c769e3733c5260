#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "dsproj/matrix_market.hpp"

using namespace dsproj;

namespace {

SymmetricSparseMatrix parse(const std::string& text, ValidationOptions opts = {}) {
  std::istringstream in(text);
  return parse_matrix_market(in, opts);
}

}  // namespace

TEST_CASE("parses a symmetric identity file") {
  auto m = parse(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "2 2 2\n"
      "1 1 1.0\n"
      "2 2 1.0\n");
  CHECK(m.n() == 2);
  REQUIRE(m.nnz_upper() == 2);
  CHECK(m.coeff(1, 1) == 1.0);
  CHECK(m.coeff(2, 2) == 1.0);
  CHECK(m.coeff(1, 2) == 0.0);
}

TEST_CASE("comments and blank lines are skipped") {
  auto m = parse(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "% a comment\n"
      "\n"
      "2 2 1\n"
      "% another\n"
      "2 1 0.25\n");
  CHECK(m.coeff(1, 2) == 0.25);  // lower-triangle input folds up
}

TEST_CASE("duplicate entries follow the configured policy") {
  const std::string text =
      "%%MatrixMarket matrix coordinate real general\n"
      "2 2 4\n"
      "1 2 0.3\n"
      "1 2 0.2\n"
      "2 1 0.3\n"
      "2 1 0.2\n";
  CHECK_THROWS_AS(parse(text), ValidationError);
  ValidationOptions opts;
  opts.duplicate_policy = DuplicatePolicy::kSum;
  auto m = parse(text, opts);
  REQUIRE(m.nnz_upper() == 1);
  CHECK(m.coeff(1, 2) == 0.5);
}

TEST_CASE("general inputs must be symmetric within tolerance") {
  const std::string text =
      "%%MatrixMarket matrix coordinate real general\n"
      "2 2 2\n"
      "1 2 1.0\n"
      "2 1 2.0\n";
  ValidationOptions strict;
  strict.symmetry_tolerance = 1e-12;
  CHECK_THROWS_AS(parse(text, strict), ValidationError);

  ValidationOptions loose;
  loose.symmetry_tolerance = 2.0;
  auto m = parse(text, loose);
  CHECK(m.coeff(1, 2) == 1.0);  // upper triangle taken

  // One-sided off-diagonal entries are asymmetric too.
  const std::string one_sided =
      "%%MatrixMarket matrix coordinate real general\n"
      "2 2 1\n"
      "1 2 1.0\n";
  CHECK_THROWS_AS(parse(one_sided, strict), ValidationError);
}

TEST_CASE("parse errors carry line numbers") {
  try {
    parse("%%MatrixMarket matrix coordinate real symmetric\n"
          "2 2 1\n"
          "1 x 1.0\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse("%%MatrixMarket matrix coordinate complex symmetric\n1 1 0\n"),
                  ParseError);
  CHECK_THROWS_AS(parse("%%MatrixMarket matrix array real general\n1 1\n0\n"),
                  ParseError);
  CHECK_THROWS_AS(parse("not a matrix market file\n"), ParseError);
  CHECK_THROWS_AS(parse("%%MatrixMarket matrix coordinate real symmetric\n"
                        "2 2 3\n"
                        "1 1 1.0\n"),
                  ParseError);
}

TEST_CASE("entry count and index range are enforced") {
  CHECK_THROWS_AS(parse("%%MatrixMarket matrix coordinate real symmetric\n"
                        "2 2 1\n"
                        "3 1 1.0\n"),
                  ParseError);
  CHECK_THROWS_AS(parse("%%MatrixMarket matrix coordinate real general\n"
                        "2 3 0\n"),
                  ValidationError);  // not square
}

TEST_CASE("writer emits the symmetric header and round-trips the identity") {
  auto m = parse(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "2 2 2\n"
      "1 1 1.0\n"
      "2 2 1.0\n");
  std::ostringstream out;
  write_matrix_market(out, m);
  const std::string text = out.str();
  CHECK(text.find("%%MatrixMarket matrix coordinate real symmetric") == 0);
  CHECK(text.find("2 2 2") != std::string::npos);
  auto back = parse(text);
  CHECK(back.n() == 2);
  CHECK(back.nnz_upper() == 2);
}

TEST_CASE("17-digit printing round-trips awkward values") {
  auto m = SymmetricSparseMatrix::from_upper_entries(
      2, {{1, 1, 1.0 / 3.0}, {1, 2, 0.1 + 0.2}});
  std::ostringstream out;
  write_matrix_market(out, m);
  std::istringstream in(out.str());
  auto back = parse_matrix_market(in);
  CHECK(back.coeff(1, 1) == 1.0 / 3.0);
  CHECK(back.coeff(1, 2) == 0.1 + 0.2);
}

TEST_CASE("parse(write(m)) is the identity on random matrices") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 15);
    std::vector<Entry> entries;
    for (int col = 1; col <= n; ++col)
      for (int row = 1; row <= col; ++row)
        if (unif(rng) < 0.35) entries.push_back({row, col, unif(rng)});
    auto m = SymmetricSparseMatrix::from_upper_entries(n, entries);

    std::ostringstream out;
    write_matrix_market(out, m);
    std::istringstream in(out.str());
    auto back = parse_matrix_market(in);

    REQUIRE(back.n() == m.n());
    REQUIRE(back.nnz_upper() == m.nnz_upper());
    for (std::size_t k = 0; k < m.entries().size(); ++k) {
      CHECK(back.entries()[k].row == m.entries()[k].row);
      CHECK(back.entries()[k].col == m.entries()[k].col);
      CHECK(back.entries()[k].value == m.entries()[k].value);
    }
  }
}

TEST_CASE("general reader keeps rectangular matrices as-is") {
  std::istringstream in(
      "%%MatrixMarket matrix coordinate real general\n"
      "1 2 2\n"
      "1 1 1.0\n"
      "1 2 2.0\n");
  CooMatrix coo = parse_matrix_market_general(in);
  CHECK(coo.n_rows == 1);
  CHECK(coo.n_cols == 2);
  REQUIRE(coo.entries.size() == 2);

  std::ostringstream out;
  write_matrix_market(out, coo);
  CHECK(out.str().find("general") != std::string::npos);
}
