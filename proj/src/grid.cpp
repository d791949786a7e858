#include "ncalab/grid.hpp"

#include <stdexcept>

namespace ncalab {

GridState new_seed_grid(int grid_size) {
    if (grid_size < 3) {
        throw std::invalid_argument("new_seed_grid: grid size must be >= 3, got " +
                                    std::to_string(grid_size));
    }
    GridState g(grid_size);
    g.alive[g.index(seed_row(grid_size), seed_col(grid_size))] = 1;
    return g;
}

}  // namespace ncalab
