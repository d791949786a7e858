#pragma once

#include <cstdint>
#include <vector>

#include "ncalab/nca.hpp"
#include "ncalab/shapes.hpp"

namespace ncalab {

struct LossPoint {
    int step = 0;
    double loss = 0.0;
};

// Rolls out evolved_steps + extra_steps updates and reports the normalized
// Hamming distance to the target after every update.
std::vector<LossPoint> extended_loss_series(const Genome& genome, int grid_size, int evolved_steps,
                                            int extra_steps, const TargetShape& target,
                                            const StepOptions& opts = {});

// Ordinary least-squares slope of loss vs. step over [from_step, to_step]
// (inclusive). Throws if the window covers fewer than two points.
double stability_slope(const std::vector<LossPoint>& series, int from_step, int to_step);

// Normalized Hamming distance between the alive masks after 2N and N updates;
// target-free, measuring homeostasis only.
double instability(const Genome& genome, int grid_size, int steps, const StepOptions& opts = {});

struct Transiency {
    double mean_per_cell = 0.0;  // mean flips per ever-alive cell
    std::uint64_t total = 0;     // flips summed over the whole CA
    bool degenerate = false;     // no cell was ever alive
};

// For each cell that is ever alive, counts alive/dead flips strictly after
// its first alive step. Requires recorded grids.
Transiency transiency(const RolloutTrace& trace);

enum class Connectivity { Four, Eight };

// Number of connected components of the alive mask (Von Neumann adjacency by
// default, matching the CA's sensing neighbourhood).
int connected_components(const GridState& grid, Connectivity connectivity = Connectivity::Four);

// Fraction of alive cells whose row or column lies on the grid border; 0 for
// an empty grid.
double boundary_proportion(const GridState& grid);

// Fraction of positions where the two alive masks differ.
double normalized_mask_distance(const GridState& a, const GridState& b);

struct RankSumResult {
    double u_statistic = 0.0;  // U for the first sample
    double p_two_sided = 1.0;
};

// Mann-Whitney U with midrank ties, normal approximation with tie and
// continuity corrections. Requires at least 3 observations per sample.
RankSumResult rank_sum_test(const std::vector<double>& sample_a,
                            const std::vector<double>& sample_b);

// One-sided p for the alternative "sample_a tends smaller than sample_b".
double rank_sum_p_less(const std::vector<double>& sample_a, const std::vector<double>& sample_b);

}  // namespace ncalab
