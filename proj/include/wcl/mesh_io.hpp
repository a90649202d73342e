#pragma once

// Plain-text export of a MeshedLagrangian.
//
//   # wcl-mesh 1
//   n Na Nb Nv
//   a0 a1 b0 b1 v0 v1
//   # i j k a b v x_1..x_n y_1..y_n z v_image flags
//   <one line per node, k slowest, i fastest>
//
// Numbers are written with %.17g, so a read-back mesh is bit-identical.

#include <iosfwd>
#include <string>

#include "wcl/symplectization.hpp"

namespace wcl {

void write_mesh(std::ostream& os, const MeshedLagrangian& mesh);
std::string serialize_mesh(const MeshedLagrangian& mesh);

// Throws DomainError on malformed input.
MeshedLagrangian read_mesh(std::istream& is);
MeshedLagrangian parse_mesh(const std::string& text);

}  // namespace wcl
