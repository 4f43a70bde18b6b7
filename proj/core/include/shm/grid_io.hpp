#pragma once

// Plain-text grid files, one record per grid point.
//
//   # shm-grid 1
//   # size <n1> <n2> <L1> <L2>
//   # generators <N>
//   # field <name> <twist1> <twist2>          (one line per field)
//   # columns i j x1 x2 <name>[<generators>] ...
//   <i> <j> <x1> <x2> <value> ...
//
// Column <name>[g1,g2,...] holds the coefficient of theta_g1 theta_g2 ... of
// field <name>; <name>[] is the body. Only monomials present in a field get
// a column. Rows run over i (along x^1) then j; values are printed with 17
// significant digits so that a write/read round trip is exact.

#include <iosfwd>
#include <string>
#include <vector>

#include "shm/geometry.hpp"

namespace shm {

struct NamedField {
  std::string name;
  ScalarField field;
};

void write_grid_text(std::ostream& out, const std::vector<NamedField>& fields);

// Reads a file written for `grid` (sizes and periods must match). Throws
// ConfigParse on malformed input and ShapeMismatch on a different grid.
std::vector<NamedField> read_grid_text(std::istream& in, const GridPtr& grid);

// Frame fields use the names e11, e12, e21, e22 for e_k^mu.
void write_frame_text(std::ostream& out, const FrameField<ScalarField>& frame);
FrameField<ScalarField> read_frame_text(std::istream& in, const GridPtr& grid);

}  // namespace shm
