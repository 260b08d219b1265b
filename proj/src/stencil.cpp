#include "spgemm/stencil.hpp"

#include <array>
#include <cstdlib>
#include <charconv>
#include <limits>

namespace spgemm {
namespace {

struct Offset3 {
  int dx, dy, dz;
};

std::vector<Offset3> neighbourhood(Stencil s) {
  std::vector<Offset3> out;
  const bool three_d = dimensions(s) == 3;
  const bool full = s == Stencil::k2d9pt || s == Stencil::k3d27pt;
  const int zr = three_d ? 1 : 0;
  // lexicographic (dz, dy, dx) keeps generated columns ascending
  for (int dz = -zr; dz <= zr; ++dz) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int manhattan = std::abs(dx) + std::abs(dy) + std::abs(dz);
        if (full || manhattan <= 1) out.push_back({dx, dy, dz});
      }
    }
  }
  return out;
}

}  // namespace

std::string to_string(Stencil s) {
  switch (s) {
    case Stencil::k2d5pt: return "2d5pt";
    case Stencil::k2d9pt: return "2d9pt";
    case Stencil::k3d7pt: return "3d7pt";
    case Stencil::k3d27pt: return "3d27pt";
  }
  return "?";
}

int dimensions(Stencil s) { return (s == Stencil::k2d5pt || s == Stencil::k2d9pt) ? 2 : 3; }

std::string StencilSpec::to_string() const {
  std::string out = spgemm::to_string(stencil) + ":";
  for (std::size_t d = 0; d < dims.size(); ++d) {
    if (d) out += "x";
    out += std::to_string(dims[d]);
  }
  return out;
}

StencilSpec parse_stencil_spec(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw Error("stencil spec '" + std::string(text) + "' must look like <name>:<dims>");
  }
  const auto name = text.substr(0, colon);
  StencilSpec spec{};
  if (name == "2d5pt") spec.stencil = Stencil::k2d5pt;
  else if (name == "2d9pt") spec.stencil = Stencil::k2d9pt;
  else if (name == "3d7pt") spec.stencil = Stencil::k3d7pt;
  else if (name == "3d27pt") spec.stencil = Stencil::k3d27pt;
  else throw Error("unknown stencil '" + std::string(name) + "'");

  auto rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto x = rest.find('x');
    const auto token = rest.substr(0, x);
    unsigned long long value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() ||
        value > std::numeric_limits<Index>::max()) {
      throw Error("bad grid extent '" + std::string(token) + "'");
    }
    spec.dims.push_back(static_cast<Index>(value));
    if (x == std::string_view::npos) break;
    rest = rest.substr(x + 1);
  }
  const auto want = static_cast<std::size_t>(dimensions(spec.stencil));
  if (spec.dims.size() == 1) spec.dims.assign(want, spec.dims[0]);
  if (spec.dims.size() != want) {
    throw Error("stencil " + std::string(name) + " needs " + std::to_string(want) + " extents");
  }
  return spec;
}

template <class T>
CsrMatrix<T> gen_poisson(Stencil stencil, const std::vector<Index>& dims) {
  const auto nd = static_cast<std::size_t>(dimensions(stencil));
  if (dims.size() != nd) throw Error("gen_poisson: wrong number of grid extents");
  std::array<std::uint64_t, 3> ext{1, 1, 1};
  std::uint64_t n = 1;
  for (std::size_t d = 0; d < nd; ++d) {
    if (dims[d] < 1) throw Error("gen_poisson: grid extents must be >= 1");
    ext[d] = dims[d];
    n *= ext[d];
    if (n >= std::numeric_limits<Index>::max()) {
      throw Error("gen_poisson: grid has too many points for 32-bit indices");
    }
  }

  const auto stencil_pts = neighbourhood(stencil);
  const T diag = static_cast<T>(stencil_pts.size() - 1);
  std::vector<Offset> row_ptr(n + 1, 0);
  std::vector<Index> cols;
  std::vector<T> vals;
  cols.reserve(n * stencil_pts.size());
  vals.reserve(n * stencil_pts.size());

  const auto nx = static_cast<std::int64_t>(ext[0]);
  const auto ny = static_cast<std::int64_t>(ext[1]);
  const auto nz = static_cast<std::int64_t>(ext[2]);
  std::uint64_t row = 0;
  for (std::int64_t z = 0; z < nz; ++z) {
    for (std::int64_t y = 0; y < ny; ++y) {
      for (std::int64_t x = 0; x < nx; ++x, ++row) {
        for (const auto& o : stencil_pts) {
          const auto xx = x + o.dx, yy = y + o.dy, zz = z + o.dz;
          if (xx < 0 || xx >= nx || yy < 0 || yy >= ny || zz < 0 || zz >= nz) continue;
          cols.push_back(static_cast<Index>(xx + nx * (yy + ny * zz)));
          vals.push_back((o.dx == 0 && o.dy == 0 && o.dz == 0) ? diag : T(-1));
        }
        row_ptr[row + 1] = cols.size();
      }
    }
  }
  return CsrMatrix<T>(static_cast<Index>(n), static_cast<Index>(n), std::move(row_ptr),
                      std::move(cols), std::move(vals));
}

template CsrMatrix<float> gen_poisson(Stencil, const std::vector<Index>&);
template CsrMatrix<double> gen_poisson(Stencil, const std::vector<Index>&);

}  // namespace spgemm
