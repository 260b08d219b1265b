#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "spgemm/csr.hpp"

namespace spgemm {

struct MatrixMarketInfo {
  std::string field;     // real | integer | pattern
  std::string symmetry;  // general | symmetric | skew-symmetric
  std::size_t entries_read = 0;
  std::size_t duplicates_fused = 0;
};

template <class T>
struct LoadedMatrix {
  CsrMatrix<T> matrix;
  MatrixMarketInfo info;
};

/// Reads a coordinate-format Matrix Market stream. With expand_symmetric the
/// mirrored triangle is materialised (diagonal entries are not doubled);
/// otherwise only the stored triangle is kept. Throws Error on malformed input.
template <class T>
LoadedMatrix<T> parse_matrix_market(std::istream& in, bool expand_symmetric = true);

template <class T>
LoadedMatrix<T> read_matrix_market(const std::filesystem::path& path,
                                   bool expand_symmetric = true);

/// Writes `coordinate real general` with enough digits to round-trip exactly.
template <class T>
void write_matrix_market(std::ostream& out, const CsrMatrix<T>& m);

template <class T>
void write_matrix_market(const std::filesystem::path& path, const CsrMatrix<T>& m);

}  // namespace spgemm
