#pragma once

#include <cstdint>
#include <vector>

namespace ncalab {

// One time step of the CA: a binary live/dead channel plus an 8-bit signal
// channel, both row-major M*M. Dead cells always carry signal 0.
struct GridState {
    int size = 0;
    std::vector<std::uint8_t> alive;
    std::vector<std::uint8_t> signal;

    GridState() = default;
    explicit GridState(int m)
        : size(m),
          alive(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0),
          signal(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0) {}

    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(size) +
               static_cast<std::size_t>(col);
    }
    bool in_bounds(int row, int col) const {
        return row >= 0 && row < size && col >= 0 && col < size;
    }
    int alive_count() const {
        int n = 0;
        for (std::uint8_t a : alive) n += a;
        return n;
    }
    bool operator==(const GridState&) const = default;
};

inline int seed_row(int grid_size) { return grid_size / 2; }
inline int seed_col(int grid_size) { return grid_size / 2; }

// Single live cell in the center of an M x M grid, zero signal everywhere.
// Throws std::invalid_argument for M < 3.
GridState new_seed_grid(int grid_size);

}  // namespace ncalab
