#pragma once

#include <string>
#include <vector>

#include "plcalib/scene.hpp"

namespace plcalib {

// Plain-text corner exchange format, one detected corner per row:
//   pose_id, corner_row, corner_col, board_x, board_y, u, v
// Values are written with 17 significant digits so a round-trip through the
// file reproduces every double bit for bit.

// Writes the sets in order; corner_row/col are reconstructed from the
// row-major corner order, so the sets must hold full `board` grids (as
// render_corners produces). IoError on write failure.
void write_corner_file(const std::string& path, const std::vector<ObservationSet>& sets,
                       const Checkerboard& board);

// Reads the file back into observation sets, one per pose_id in order of first
// appearance, corners sorted by (corner_row, corner_col). noise_sigma is NaN
// (unknown) and seed 0. Throws ParseError (bad header, malformed row, a pose
// with fewer than 4 corners, duplicate corner ids) with line numbers, and
// InconsistentBoard when poses disagree on the corner grid or its board
// coordinates.
std::vector<ObservationSet> ingest_corner_file(const std::string& path);

// String-level worker for ingest_corner_file, exposed for tests.
std::vector<ObservationSet> parse_corner_csv(const std::string& text);

// String-level worker for write_corner_file, exposed for tests.
std::string render_corner_csv(const std::vector<ObservationSet>& sets,
                              const Checkerboard& board);

}  // namespace plcalib
