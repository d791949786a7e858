#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ncalab/genome.hpp"
#include "ncalab/grid.hpp"

namespace ncalab {

// What a replication bit of 0 means. LiteralReplicate only ever writes live
// state into neighbours, so cells never die; OverwriteAlways writes the bit
// value itself, which is what makes shrinkage and cell death possible.
enum class DeathRule { LiteralReplicate, OverwriteAlways };

// InPlaceRaster (default): a cell senses neighbours already updated earlier
// in the same pass. DoubleBuffered reads every input from the pre-step grid.
enum class UpdateMode { InPlaceRaster, DoubleBuffered };

struct StepOptions {
    DeathRule death_rule = DeathRule::OverwriteAlways;
    UpdateMode update_mode = UpdateMode::InPlaceRaster;
};

struct NetworkOutput {
    std::array<bool, 4> replicate{};  // up, down, left, right
    std::uint8_t new_signal = 0;
};

// Per-cell record of one update. action/sensor are meaningful only when
// executed is true: the cell was alive when the pass began and still alive
// when the raster reached it.
struct CellStep {
    int row = 0;
    int col = 0;
    int step = 0;  // 1..N
    std::uint8_t action = 0;
    std::uint8_t sensor = 0;
    bool executed = false;
};

// Actions, sensors and executed flags for every cell at every step of a
// rollout, stored step-major in flat arrays. grids is filled only on request
// and then holds N+1 states, index 0 being the seed.
struct RolloutTrace {
    int grid_size = 0;  // M
    int steps = 0;      // N
    std::vector<std::uint8_t> actions;
    std::vector<std::uint8_t> sensors;
    std::vector<std::uint8_t> executed;
    std::vector<GridState> grids;

    std::size_t flat(int step, int row, int col) const {
        const std::size_t cells =
            static_cast<std::size_t>(grid_size) * static_cast<std::size_t>(grid_size);
        return (static_cast<std::size_t>(step) - 1) * cells +
               static_cast<std::size_t>(row) * static_cast<std::size_t>(grid_size) +
               static_cast<std::size_t>(col);
    }
    CellStep at(int row, int col, int step) const {
        const std::size_t i = flat(step, row, col);
        return CellStep{row, col, step, actions[i], sensors[i], executed[i] != 0};
    }
    bool has_grids() const { return !grids.empty(); }
    bool any_executed() const {
        for (std::uint8_t e : executed)
            if (e) return true;
        return false;
    }
};

// Fixed input order: alive (up, down, left, right, self) then the same five
// signals scaled by 1/255. Off-grid neighbours read as dead with signal 0.
std::array<double, kNetworkInputs> cell_inputs(const GridState& grid, int row, int col);

// z_o = bias_o + sum_i w[o][i] * in[i]; bits are z > 0, the signal output is
// floor(256 * logistic(z)) clamped to 255.
NetworkOutput network_forward(const Genome& genome, const std::array<double, kNetworkInputs>& inputs);

// One raster pass (top-left to bottom-right). When out_steps is given, one
// CellStep per grid cell is appended in raster order with step = step_index.
GridState step(const GridState& grid, const Genome& genome, const StepOptions& opts = {},
               std::vector<CellStep>* out_steps = nullptr, int step_index = 1);

// N passes from the seed grid. Pure: identical arguments give bit-identical
// traces.
RolloutTrace rollout(const Genome& genome, int grid_size, int steps, bool record_grids,
                     const StepOptions& opts = {});

}  // namespace ncalab
