#include "ncalab/nca.hpp"

#include <cmath>
#include <stdexcept>

namespace ncalab {

namespace {

constexpr int kDirRow[4] = {-1, 1, 0, 0};  // up, down, left, right
constexpr int kDirCol[4] = {0, 0, -1, 1};

struct CellReadout {
    std::array<double, kNetworkInputs> inputs;
    int raw_signal_sum;  // un-normalized sum of the five sensed signals
};

CellReadout read_cell(const GridState& g, int row, int col) {
    CellReadout out{};
    int sum = 0;
    for (int d = 0; d < 4; ++d) {
        const int r = row + kDirRow[d];
        const int c = col + kDirCol[d];
        if (g.in_bounds(r, c)) {
            const std::size_t i = g.index(r, c);
            out.inputs[d] = g.alive[i] ? 1.0 : 0.0;
            out.inputs[5 + d] = g.signal[i] * (1.0 / 255.0);
            sum += g.signal[i];
        }
    }
    const std::size_t self = g.index(row, col);
    out.inputs[4] = g.alive[self] ? 1.0 : 0.0;
    out.inputs[9] = g.signal[self] * (1.0 / 255.0);
    sum += g.signal[self];
    out.raw_signal_sum = sum;
    return out;
}

NetworkOutput forward_unchecked(const Genome& genome,
                                const std::array<double, kNetworkInputs>& in) {
    NetworkOutput out;
    double z[kNetworkOutputs];
    for (int o = 0; o < kNetworkOutputs; ++o) {
        double acc = genome.bias[o];
        for (int i = 0; i < kNetworkInputs; ++i) acc += genome.weights[o][i] * in[i];
        z[o] = acc;
    }
    for (int d = 0; d < 4; ++d) out.replicate[d] = z[d] > 0.0;
    const double sig = 1.0 / (1.0 + std::exp(-z[4]));
    int binned = static_cast<int>(std::floor(256.0 * sig));
    if (binned > 255) binned = 255;
    if (binned < 0) binned = 0;
    out.new_signal = static_cast<std::uint8_t>(binned);
    return out;
}

// Round-half-up of sum/5 for sum >= 0.
inline std::uint8_t bin_sensor(int raw_sum) {
    return static_cast<std::uint8_t>((2 * raw_sum + 5) / 10);
}

// One raster pass over `g`, mutating it in place. sink(row, col, executed,
// action, sensor) is invoked once per cell in raster order. A cell executes
// only if it was alive when the pass began AND is still alive when the raster
// reaches it: cells born earlier in the same pass wait until the next step,
// cells killed earlier in the same pass stay silent.
template <typename Sink>
void raster_pass(GridState& g, const Genome& genome, const StepOptions& opts, Sink&& sink) {
    const int m = g.size;
    GridState snapshot;
    std::vector<std::uint8_t> start_alive;
    const bool buffered = opts.update_mode == UpdateMode::DoubleBuffered;
    if (buffered)
        snapshot = g;
    else
        start_alive = g.alive;
    const GridState& read = buffered ? snapshot : g;
    const std::uint8_t* eligible = buffered ? snapshot.alive.data() : start_alive.data();

    for (int row = 0; row < m; ++row) {
        for (int col = 0; col < m; ++col) {
            const std::size_t self = read.index(row, col);
            if (!eligible[self] || !read.alive[self]) {
                sink(row, col, false, std::uint8_t{0}, std::uint8_t{0});
                continue;
            }
            const CellReadout cell = read_cell(read, row, col);
            const NetworkOutput net = forward_unchecked(genome, cell.inputs);

            g.signal[self] = net.new_signal;  // output 5 applies before the directional writes
            for (int d = 0; d < 4; ++d) {
                const int r = row + kDirRow[d];
                const int c = col + kDirCol[d];
                if (!g.in_bounds(r, c)) continue;
                const std::size_t t = g.index(r, c);
                if (net.replicate[d]) {
                    g.alive[t] = 1;
                    g.signal[t] = net.new_signal;
                } else if (opts.death_rule == DeathRule::OverwriteAlways) {
                    g.alive[t] = 0;
                    g.signal[t] = 0;
                }
            }
            sink(row, col, true, net.new_signal, bin_sensor(cell.raw_signal_sum));
        }
    }
    const std::size_t cells = g.alive.size();
    for (std::size_t i = 0; i < cells; ++i)
        if (!g.alive[i]) g.signal[i] = 0;
}

}  // namespace

std::array<double, kNetworkInputs> cell_inputs(const GridState& grid, int row, int col) {
    if (!grid.in_bounds(row, col))
        throw std::invalid_argument("cell_inputs: position out of bounds");
    return read_cell(grid, row, col).inputs;
}

NetworkOutput network_forward(const Genome& genome,
                              const std::array<double, kNetworkInputs>& inputs) {
    validate_genome(genome);
    return forward_unchecked(genome, inputs);
}

GridState step(const GridState& grid, const Genome& genome, const StepOptions& opts,
               std::vector<CellStep>* out_steps, int step_index) {
    validate_genome(genome);
    GridState next = grid;
    raster_pass(next, genome, opts,
                [&](int row, int col, bool executed, std::uint8_t action, std::uint8_t sensor) {
                    if (out_steps)
                        out_steps->push_back(
                            CellStep{row, col, step_index, action, sensor, executed});
                });
    return next;
}

RolloutTrace rollout(const Genome& genome, int grid_size, int steps, bool record_grids,
                     const StepOptions& opts) {
    if (steps < 1)
        throw std::invalid_argument("rollout: steps must be >= 1, got " + std::to_string(steps));
    validate_genome(genome);

    RolloutTrace trace;
    trace.grid_size = grid_size;
    trace.steps = steps;
    const std::size_t cells =
        static_cast<std::size_t>(grid_size) * static_cast<std::size_t>(grid_size);
    trace.actions.assign(cells * steps, 0);
    trace.sensors.assign(cells * steps, 0);
    trace.executed.assign(cells * steps, 0);

    GridState g = new_seed_grid(grid_size);
    if (record_grids) {
        trace.grids.reserve(static_cast<std::size_t>(steps) + 1);
        trace.grids.push_back(g);
    }
    for (int n = 1; n <= steps; ++n) {
        std::uint8_t* actions = trace.actions.data() + cells * (n - 1);
        std::uint8_t* sensors = trace.sensors.data() + cells * (n - 1);
        std::uint8_t* executed = trace.executed.data() + cells * (n - 1);
        std::size_t i = 0;
        raster_pass(g, genome, opts,
                    [&](int, int, bool exec, std::uint8_t action, std::uint8_t sensor) {
                        if (exec) {
                            actions[i] = action;
                            sensors[i] = sensor;
                            executed[i] = 1;
                        }
                        ++i;
                    });
        if (record_grids) trace.grids.push_back(g);
    }
    return trace;
}

}  // namespace ncalab
