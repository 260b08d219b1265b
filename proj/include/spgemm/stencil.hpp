#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "spgemm/csr.hpp"

namespace spgemm {

enum class Stencil { k2d5pt, k2d9pt, k3d7pt, k3d27pt };

std::string to_string(Stencil s);
int dimensions(Stencil s);

struct StencilSpec {
  Stencil stencil;
  std::vector<Index> dims;

  std::string to_string() const;
};

/// Parses `<name>:<dims>`, e.g. `2d5pt:64x64` or `3d27pt:24x24x24`. A single
/// extent is broadcast to every dimension (`3d7pt:16`).
StencilSpec parse_stencil_spec(std::string_view text);

/// Finite-difference Poisson operator on a regular grid with Dirichlet
/// boundaries. Off-diagonal entries are -1 for every in-grid neighbour; the
/// diagonal is the neighbour count of the full stencil. Grid points are
/// numbered with the first extent varying fastest.
template <class T>
CsrMatrix<T> gen_poisson(Stencil stencil, const std::vector<Index>& dims);

template <class T>
CsrMatrix<T> gen_poisson(const StencilSpec& spec) {
  return gen_poisson<T>(spec.stencil, spec.dims);
}

}  // namespace spgemm
