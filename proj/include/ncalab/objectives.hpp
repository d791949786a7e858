#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncalab/nca.hpp"
#include "ncalab/shapes.hpp"

namespace ncalab {

// Pooled (action, sensor) pairs at lag k across all cells: the raw material
// of the empowerment estimate.
struct SensorActionPairs {
    int horizon = 0;
    std::vector<std::pair<std::uint8_t, std::uint8_t>> pairs;
};

enum class ObjectiveKind { Age, Loss, Empowerment, LocalActionEntropy, GlobalActionEntropy };
enum class Direction { Minimize, Maximize };

struct ObjectiveSpec {
    ObjectiveKind kind = ObjectiveKind::Loss;
    Direction direction = Direction::Minimize;
    int n0 = 0, n1 = 0;            // Loss interval
    int k = 1;                     // Empowerment horizon
    std::optional<int> crop_last;  // Empowerment: keep only this many latest pairs per cell

    static ObjectiveSpec age() { return {ObjectiveKind::Age, Direction::Minimize, 0, 0, 1, {}}; }
    static ObjectiveSpec loss(int n0, int n1) {
        return {ObjectiveKind::Loss, Direction::Minimize, n0, n1, 1, {}};
    }
    static ObjectiveSpec empowerment(int k, std::optional<int> crop_last = {}) {
        return {ObjectiveKind::Empowerment, Direction::Maximize, 0, 0, k, crop_last};
    }
    static ObjectiveSpec local_action_entropy(Direction d) {
        return {ObjectiveKind::LocalActionEntropy, d, 0, 0, 1, {}};
    }
    static ObjectiveSpec global_action_entropy() {
        return {ObjectiveKind::GlobalActionEntropy, Direction::Minimize, 0, 0, 1, {}};
    }
    std::string label() const;
    bool operator==(const ObjectiveSpec&) const = default;
};

// Mean over updates n0+1..n1 of the normalized Hamming distance between the
// alive mask and the target (the seed state, index 0, is excluded so the
// divisor n1-n0 equals the number of summed states). Requires recorded grids.
double loss(const RolloutTrace& trace, const TargetShape& target, int n0, int n1);

// For every cell and every n in [1, N-k] where the cell executed at both n
// and n+k, emit (action_n, sensor_{n+k}); pairs from all cells are pooled.
SensorActionPairs build_pairs(const RolloutTrace& trace, int k,
                              std::optional<int> crop_last = {});

// Plug-in mutual information in bits over the empirical 256x256 joint
// distribution. Throws on an empty pair set.
double mutual_information(const SensorActionPairs& pairs);

// mutual_information(build_pairs(...)); 0 for empty or single-symbol pair
// sets so pathological genomes score unfit instead of erroring.
double empowerment(const RolloutTrace& trace, int k, std::optional<int> crop_last = {});

// Mean over cells (with at least one executed step) of the Shannon entropy of
// each cell's own action multiset. Degenerate traces score 0 and set the flag.
double local_action_entropy(const RolloutTrace& trace, bool* degenerate = nullptr);

// Shannon entropy of the action multiset pooled across all cells and steps.
double global_action_entropy(const RolloutTrace& trace, bool* degenerate = nullptr);

// Evaluates one non-Age objective on a trace. Age has no trace evaluation and
// throws here; the evolutionary loop fills it from the individual.
double evaluate_objective(const ObjectiveSpec& spec, const RolloutTrace& trace,
                          const TargetShape& target);

bool objectives_need_grids(const std::vector<ObjectiveSpec>& specs);

}  // namespace ncalab
