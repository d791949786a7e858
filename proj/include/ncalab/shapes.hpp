#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ncalab {

// Binary target mask the CA is evolved to grow into and hold.
struct TargetShape {
    int size = 0;
    std::vector<std::uint8_t> mask;
    std::string name;

    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(size) +
               static_cast<std::size_t>(col);
    }
    int cell_count() const {
        int n = 0;
        for (std::uint8_t v : mask) n += v;
        return n;
    }
    bool contains_seed() const;
};

// Axis-aligned square with top-left at offset floor((M - side)/2) in both
// axes; for even side on an odd grid it sits one cell high-left of center.
TargetShape square_target(int grid_size, int side);

// Up-pointing isoceles triangle, (base+1)/2 rows. Row r below the apex spans
// 2r+1 cells centered on the seed column; the bottom row lies on the seed row.
TargetShape triangle_target(int grid_size, int base);

// Both diagonals through the seed cell, thickness 1, `arm` cells per branch:
// 4*arm + 1 cells total.
TargetShape x_target(int grid_size, int arm);

// Reads a plain text grid (M lines of M '0'/'1' characters) or a PBM (P1)
// file. Rejects masks that do not contain the seed cell unless
// allow_seed_outside is set, in which case a warning goes to stderr.
TargetShape load_target(const std::string& path, bool allow_seed_outside = false);

// Writes P1 when the path ends in .pbm, the plain text format otherwise.
void save_target(const TargetShape& shape, const std::string& path);

// Accepts "square:SIDE", "triangle:BASE", "x:ARM" and "file:PATH"; generated
// shapes are built at grid_size, loaded ones must match it.
TargetShape parse_target_spec(const std::string& spec, int grid_size);

}  // namespace ncalab
