#ifndef DSPROJ_MATRIX_MARKET_HPP_
#define DSPROJ_MATRIX_MARKET_HPP_

#include <iosfwd>
#include <string>

#include "dsproj/sparse_matrix.hpp"

namespace dsproj {

/// Reads a Matrix Market coordinate file (`real`, `general` or `symmetric`)
/// into validated upper-triangle storage. `general` inputs must be square and
/// symmetric within opts.symmetry_tolerance; their upper triangle is taken.
/// `symmetric` inputs may store either triangle. Comment lines (%) are
/// skipped. Throws ParseError / ValidationError.
SymmetricSparseMatrix parse_matrix_market(std::istream& in,
                                          const ValidationOptions& opts = {});

/// Same, but keeps the matrix as raw coordinates: no symmetry requirement,
/// rectangular allowed. A `symmetric` header is expanded to both triangles.
CooMatrix parse_matrix_market_general(std::istream& in);

/// Emits `symmetric` coordinate format. Values are printed with 17
/// significant digits, so parse(write(m)) reproduces m bit-exactly.
void write_matrix_market(std::ostream& out, const SymmetricSparseMatrix& m);

/// Emits `general` coordinate format (used for rectangular results).
void write_matrix_market(std::ostream& out, const CooMatrix& m);

SymmetricSparseMatrix read_matrix_market_file(const std::string& path,
                                              const ValidationOptions& opts = {});
CooMatrix read_matrix_market_file_general(const std::string& path);
void write_matrix_market_file(const std::string& path, const SymmetricSparseMatrix& m);
void write_matrix_market_file(const std::string& path, const CooMatrix& m);

}  // namespace dsproj

#endif  // DSPROJ_MATRIX_MARKET_HPP_
