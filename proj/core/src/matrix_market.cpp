#include "dsproj/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace dsproj {

namespace {

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

struct RawFile {
  CooMatrix coo;
  bool symmetric_header = false;
};

bool is_blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

RawFile read_raw(std::istream& in) {
  std::string line;
  long lineno = 0;

  if (!std::getline(in, line)) throw ParseError("empty input");
  ++lineno;
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket")
    throw ParseError("missing %%MatrixMarket banner", lineno);
  if (to_lower(object) != "matrix")
    throw ParseError("unsupported object '" + object + "'", lineno);
  if (to_lower(format) != "coordinate")
    throw ParseError("unsupported format '" + format + "' (only coordinate)", lineno);
  if (to_lower(field) != "real")
    throw ParseError("unsupported field '" + field + "' (only real)", lineno);
  std::string sym = to_lower(symmetry);
  if (sym != "general" && sym != "symmetric")
    throw ParseError("unsupported symmetry '" + symmetry +
                     "' (only general or symmetric)", lineno);

  RawFile raw;
  raw.symmetric_header = (sym == "symmetric");

  // Size line: first non-comment, non-blank line.
  long declared_nnz = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    if (is_blank(line)) continue;
    long long rows, cols, nnz;
    if (std::sscanf(line.c_str(), "%lld %lld %lld", &rows, &cols, &nnz) != 3)
      throw ParseError("malformed size line (expected rows cols nnz)", lineno);
    if (rows < 0 || cols < 0 || nnz < 0)
      throw ParseError("negative size", lineno);
    if (rows > INT32_MAX || cols > INT32_MAX)
      throw ParseError("dimension too large", lineno);
    raw.coo.n_rows = static_cast<int>(rows);
    raw.coo.n_cols = static_cast<int>(cols);
    declared_nnz = static_cast<long>(nnz);
    break;
  }
  if (declared_nnz < 0) throw ParseError("missing size line");

  raw.coo.entries.reserve(declared_nnz);
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    if (is_blank(line)) continue;
    const char* s = line.c_str();
    char* end = nullptr;
    long row = std::strtol(s, &end, 10);
    if (end == s) throw ParseError("malformed entry (row index)", lineno);
    s = end;
    long col = std::strtol(s, &end, 10);
    if (end == s) throw ParseError("malformed entry (column index)", lineno);
    s = end;
    double value = std::strtod(s, &end);
    if (end == s) throw ParseError("malformed entry (value)", lineno);
    while (*end && std::isspace(static_cast<unsigned char>(*end))) ++end;
    if (*end) throw ParseError("trailing characters after entry", lineno);
    if (row < 1 || col < 1 || row > raw.coo.n_rows || col > raw.coo.n_cols)
      throw ParseError("index (" + std::to_string(row) + ", " + std::to_string(col) +
                       ") outside declared " + std::to_string(raw.coo.n_rows) + "x" +
                       std::to_string(raw.coo.n_cols) + " matrix", lineno);
    raw.coo.entries.push_back(
        {static_cast<int>(row), static_cast<int>(col), value});
    if (static_cast<long>(raw.coo.entries.size()) > declared_nnz)
      throw ParseError("more entries than declared in size line", lineno);
  }
  if (static_cast<long>(raw.coo.entries.size()) != declared_nnz)
    throw ParseError("expected " + std::to_string(declared_nnz) + " entries, got " +
                     std::to_string(raw.coo.entries.size()));
  return raw;
}

// Merge duplicate positions in place; input must be sorted by (col, row).
void merge_duplicates(std::vector<Entry>& entries, DuplicatePolicy policy) {
  std::vector<Entry> merged;
  merged.reserve(entries.size());
  for (const Entry& e : entries) {
    if (!merged.empty() && merged.back().row == e.row && merged.back().col == e.col) {
      if (policy == DuplicatePolicy::kReject)
        throw ValidationError("duplicate entry at (" + std::to_string(e.row) + ", " +
                              std::to_string(e.col) + ")");
      merged.back().value += e.value;
    } else {
      merged.push_back(e);
    }
  }
  entries = std::move(merged);
}

void sort_col_major(std::vector<Entry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });
}

}  // namespace

SymmetricSparseMatrix parse_matrix_market(std::istream& in,
                                          const ValidationOptions& opts) {
  if (opts.symmetry_tolerance < 0.0)
    throw SpecificationError("symmetry tolerance must be nonnegative");
  RawFile raw = read_raw(in);
  if (raw.coo.n_rows != raw.coo.n_cols)
    throw ValidationError("matrix is " + std::to_string(raw.coo.n_rows) + "x" +
                          std::to_string(raw.coo.n_cols) + ", expected square");

  std::vector<Entry> upper;
  if (raw.symmetric_header) {
    // Entries may sit in either triangle; fold onto the upper one.
    upper = std::move(raw.coo.entries);
    for (Entry& e : upper)
      if (e.row > e.col) std::swap(e.row, e.col);
  } else {
    // general: both triangles are explicit and must agree within tolerance.
    std::vector<Entry> lower;
    for (const Entry& e : raw.coo.entries) {
      if (e.row <= e.col)
        upper.push_back(e);
      else
        lower.push_back({e.col, e.row, e.value});  // keyed by mirror position
    }
    sort_col_major(upper);
    sort_col_major(lower);
    merge_duplicates(upper, opts.duplicate_policy);
    merge_duplicates(lower, opts.duplicate_policy);

    std::size_t ui = 0, li = 0;
    auto precedes = [](const Entry& a, const Entry& b) {
      return a.col != b.col ? a.col < b.col : a.row < b.row;
    };
    while (ui < upper.size() || li < lower.size()) {
      const Entry* u = ui < upper.size() ? &upper[ui] : nullptr;
      const Entry* l = li < lower.size() ? &lower[li] : nullptr;
      double above, below;
      int row, col;
      if (u && (!l || precedes(*u, *l))) {
        above = u->value; below = 0.0; row = u->row; col = u->col; ++ui;
      } else if (l && (!u || precedes(*l, *u))) {
        above = 0.0; below = l->value; row = l->row; col = l->col; ++li;
      } else {
        above = u->value; below = l->value; row = u->row; col = u->col; ++ui; ++li;
      }
      if (row == col) continue;  // diagonal has no mirror
      if (std::abs(above - below) > opts.symmetry_tolerance)
        throw ValidationError("asymmetric at (" + std::to_string(row) + ", " +
                              std::to_string(col) + "): " + std::to_string(above) +
                              " vs " + std::to_string(below));
    }
  }
  return SymmetricSparseMatrix::from_upper_entries(raw.coo.n_cols, std::move(upper),
                                                   opts);
}

CooMatrix parse_matrix_market_general(std::istream& in) {
  RawFile raw = read_raw(in);
  if (!raw.symmetric_header) return std::move(raw.coo);
  CooMatrix full;
  full.n_rows = raw.coo.n_rows;
  full.n_cols = raw.coo.n_cols;
  full.entries.reserve(2 * raw.coo.entries.size());
  for (const Entry& e : raw.coo.entries) {
    full.entries.push_back(e);
    if (e.row != e.col) full.entries.push_back({e.col, e.row, e.value});
  }
  return full;
}

namespace {

void print_entry(std::ostream& out, int row, int col, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", row, col, value);
  out << buf;
}

}  // namespace

void write_matrix_market(std::ostream& out, const SymmetricSparseMatrix& m) {
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << m.n() << ' ' << m.n() << ' ' << m.nnz_upper() << '\n';
  // Lower-triangle coordinates, per Matrix Market convention.
  for (const Entry& e : m.entries()) print_entry(out, e.col, e.row, e.value);
}

void write_matrix_market(std::ostream& out, const CooMatrix& m) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.n_rows << ' ' << m.n_cols << ' ' << m.entries.size() << '\n';
  for (const Entry& e : m.entries) print_entry(out, e.row, e.col, e.value);
}

namespace {

std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

SymmetricSparseMatrix read_matrix_market_file(const std::string& path,
                                              const ValidationOptions& opts) {
  auto in = open_for_read(path);
  return parse_matrix_market(in, opts);
}

CooMatrix read_matrix_market_file_general(const std::string& path) {
  auto in = open_for_read(path);
  return parse_matrix_market_general(in);
}

void write_matrix_market_file(const std::string& path, const SymmetricSparseMatrix& m) {
  auto out = open_for_write(path);
  write_matrix_market(out, m);
  if (!out) throw ParseError("write failure on '" + path + "'");
}

void write_matrix_market_file(const std::string& path, const CooMatrix& m) {
  auto out = open_for_write(path);
  write_matrix_market(out, m);
  if (!out) throw ParseError("write failure on '" + path + "'");
}

}  // namespace dsproj
