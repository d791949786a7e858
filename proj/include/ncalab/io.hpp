#pragma once

#include <string>
#include <vector>

#include "ncalab/grid.hpp"

namespace ncalab {

// Shortest round-trip decimal representation (std::to_chars); used everywhere
// a double lands in a CSV or log so reruns are byte-identical.
std::string format_double(double v);

// P1 bitmap of the alive channel.
void write_pbm(const GridState& grid, const std::string& path);

// P2 graymap of the signal channel, maxval 255.
void write_pgm(const GridState& grid, const std::string& path);

// frame_0000.pbm/.pgm ... frame_NNNN for every grid in the sequence.
void export_frames(const std::vector<GridState>& grids, const std::string& dir);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// '#' for alive cells (shaded by signal), '.' for dead ones.
std::string ascii_render(const GridState& grid);

}  // namespace ncalab
