#include "spgemm/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <vector>

namespace spgemm {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool is_blank_or_comment(const std::string& line) {
  for (char c : line) {
    if (c == '%') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

template <class T>
LoadedMatrix<T> parse_matrix_market(std::istream& in, bool expand_symmetric) {
  std::string line;
  if (!std::getline(in, line)) throw Error("matrix market: empty input");

  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix") {
    throw Error("matrix market: malformed header '" + line + "'");
  }
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (format != "coordinate") throw Error("matrix market: only coordinate format is supported");
  if (field != "real" && field != "integer" && field != "pattern" && field != "double") {
    throw Error("matrix market: unsupported field '" + field + "'");
  }
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric") {
    throw Error("matrix market: unsupported symmetry '" + symmetry + "'");
  }

  while (std::getline(in, line) && is_blank_or_comment(line)) {
  }
  long long rows = -1, cols = -1, entries = -1;
  {
    std::istringstream size_line(line);
    if (!(size_line >> rows >> cols >> entries) || rows < 0 || cols < 0 || entries < 0) {
      throw Error("matrix market: malformed size line '" + line + "'");
    }
    if (rows >= std::numeric_limits<Index>::max() || cols >= std::numeric_limits<Index>::max()) {
      throw Error("matrix market: dimensions exceed 32-bit index range");
    }
  }

  const bool pattern = field == "pattern";
  const bool mirrored = symmetry != "general" && expand_symmetric;
  const bool skew = symmetry == "skew-symmetric";

  std::vector<CooTriplet<T>> triplets;
  triplets.reserve(static_cast<std::size_t>(entries) * (mirrored ? 2 : 1));
  long long read = 0;
  while (read < entries && std::getline(in, line)) {
    if (is_blank_or_comment(line)) continue;
    std::istringstream entry(line);
    long long r = 0, c = 0;
    T v = T(1);
    if (!(entry >> r >> c) || (!pattern && !(entry >> v))) {
      throw Error("matrix market: malformed entry '" + line + "'");
    }
    if (r < 1 || r > rows || c < 1 || c > cols) {
      throw Error("matrix market: entry (" + std::to_string(r) + ", " + std::to_string(c) +
                  ") out of range");
    }
    const auto ri = static_cast<Index>(r - 1);
    const auto cj = static_cast<Index>(c - 1);
    triplets.push_back({ri, cj, v});
    if (mirrored && ri != cj) triplets.push_back({cj, ri, skew ? -v : v});
    ++read;
  }
  if (read != entries) {
    throw Error("matrix market: expected " + std::to_string(entries) + " entries, found " +
                std::to_string(read));
  }

  TripletStats stats;
  auto m = from_triplets<T>(static_cast<Index>(rows), static_cast<Index>(cols),
                            std::move(triplets), &stats);
  return {std::move(m), {field, symmetry, static_cast<std::size_t>(read), stats.duplicates_fused}};
}

template <class T>
LoadedMatrix<T> read_matrix_market(const std::filesystem::path& path, bool expand_symmetric) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_matrix_market<T>(in, expand_symmetric);
}

template <class T>
void write_matrix_market(std::ostream& out, const CsrMatrix<T>& m) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.num_rows() << ' ' << m.num_cols() << ' ' << m.nnz() << '\n';
  out << std::setprecision(std::numeric_limits<T>::max_digits10);
  for (Index i = 0; i < m.num_rows(); ++i) {
    const auto r = m.row(i);
    for (std::size_t p = 0; p < r.size(); ++p) {
      out << i + 1 << ' ' << r.cols[p] + 1 << ' ' << r.values[p] << '\n';
    }
  }
}

template <class T>
void write_matrix_market(const std::filesystem::path& path, const CsrMatrix<T>& m) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_matrix_market(out, m);
}

template LoadedMatrix<float> parse_matrix_market(std::istream&, bool);
template LoadedMatrix<double> parse_matrix_market(std::istream&, bool);
template LoadedMatrix<float> read_matrix_market(const std::filesystem::path&, bool);
template LoadedMatrix<double> read_matrix_market(const std::filesystem::path&, bool);
template void write_matrix_market(std::ostream&, const CsrMatrix<float>&);
template void write_matrix_market(std::ostream&, const CsrMatrix<double>&);
template void write_matrix_market(const std::filesystem::path&, const CsrMatrix<float>&);
template void write_matrix_market(const std::filesystem::path&, const CsrMatrix<double>&);

}  // namespace spgemm
