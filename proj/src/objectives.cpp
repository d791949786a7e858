#include "ncalab/objectives.hpp"

#include <cmath>
#include <stdexcept>

namespace ncalab {

namespace {

constexpr int kAlphabet = 256;

double entropy_bits_from_counts(const std::uint32_t* counts, int n_bins, double total) {
    double h = 0.0;
    for (int i = 0; i < n_bins; ++i) {
        if (counts[i] == 0) continue;
        const double p = counts[i] / total;
        h -= p * std::log2(p);
    }
    return h;
}

}  // namespace

std::string ObjectiveSpec::label() const {
    switch (kind) {
        case ObjectiveKind::Age:
            return "age";
        case ObjectiveKind::Loss:
            return "loss(" + std::to_string(n0) + "," + std::to_string(n1) + ")";
        case ObjectiveKind::Empowerment:
            return crop_last ? "empowerment(k=" + std::to_string(k) +
                                   ",crop=" + std::to_string(*crop_last) + ")"
                             : "empowerment(k=" + std::to_string(k) + ")";
        case ObjectiveKind::LocalActionEntropy:
            return direction == Direction::Minimize ? "local_action_entropy_min"
                                                    : "local_action_entropy_max";
        case ObjectiveKind::GlobalActionEntropy:
            return "global_action_entropy_min";
    }
    return "?";
}

double loss(const RolloutTrace& trace, const TargetShape& target, int n0, int n1) {
    if (!trace.has_grids())
        throw std::invalid_argument("loss: trace was recorded without grids");
    if (target.size != trace.grid_size)
        throw std::invalid_argument("loss: target is " + std::to_string(target.size) +
                                    "x" + std::to_string(target.size) + " but the grid is " +
                                    std::to_string(trace.grid_size) + "x" +
                                    std::to_string(trace.grid_size));
    if (!(0 <= n0 && n0 < n1 && n1 <= trace.steps))
        throw std::invalid_argument("loss: interval must satisfy 0 <= n0 < n1 <= N");

    const std::size_t cells = target.mask.size();
    const double denom = static_cast<double>(cells);
    double acc = 0.0;
    for (int n = n0 + 1; n <= n1; ++n) {
        const GridState& g = trace.grids[static_cast<std::size_t>(n)];
        int mismatches = 0;
        for (std::size_t i = 0; i < cells; ++i) mismatches += g.alive[i] != target.mask[i];
        acc += mismatches / denom;
    }
    return acc / (n1 - n0);
}

SensorActionPairs build_pairs(const RolloutTrace& trace, int k, std::optional<int> crop_last) {
    if (k < 1 || k > trace.steps - 1)
        throw std::invalid_argument("build_pairs: horizon k must be in [1, N-1], got k=" +
                                    std::to_string(k) + " with N=" + std::to_string(trace.steps));
    if (crop_last && *crop_last < 1)
        throw std::invalid_argument("build_pairs: crop_last must be >= 1");

    SensorActionPairs out;
    out.horizon = k;
    const std::size_t cells =
        static_cast<std::size_t>(trace.grid_size) * static_cast<std::size_t>(trace.grid_size);
    std::vector<std::pair<std::uint8_t, std::uint8_t>> cell_pairs;
    for (std::size_t cell = 0; cell < cells; ++cell) {
        cell_pairs.clear();
        for (int n = 1; n <= trace.steps - k; ++n) {
            const std::size_t at_n = (static_cast<std::size_t>(n) - 1) * cells + cell;
            const std::size_t at_nk = (static_cast<std::size_t>(n + k) - 1) * cells + cell;
            if (trace.executed[at_n] && trace.executed[at_nk])
                cell_pairs.emplace_back(trace.actions[at_n], trace.sensors[at_nk]);
        }
        std::size_t first = 0;
        if (crop_last && cell_pairs.size() > static_cast<std::size_t>(*crop_last))
            first = cell_pairs.size() - static_cast<std::size_t>(*crop_last);
        out.pairs.insert(out.pairs.end(), cell_pairs.begin() + first, cell_pairs.end());
    }
    return out;
}

double mutual_information(const SensorActionPairs& pairs) {
    if (pairs.pairs.empty())
        throw std::invalid_argument("mutual_information: empty pair set has no distribution");

    std::vector<std::uint32_t> joint(static_cast<std::size_t>(kAlphabet) * kAlphabet, 0);
    std::uint32_t action_marginal[kAlphabet] = {};
    std::uint32_t sensor_marginal[kAlphabet] = {};
    for (const auto& [a, s] : pairs.pairs) {
        ++joint[static_cast<std::size_t>(a) * kAlphabet + s];
        ++action_marginal[a];
        ++sensor_marginal[s];
    }
    const double n = static_cast<double>(pairs.pairs.size());
    double mi = 0.0;
    for (int a = 0; a < kAlphabet; ++a) {
        if (action_marginal[a] == 0) continue;
        const std::uint32_t* row = joint.data() + static_cast<std::size_t>(a) * kAlphabet;
        for (int s = 0; s < kAlphabet; ++s) {
            if (row[s] == 0) continue;
            const double pj = row[s] / n;
            mi += pj * std::log2(row[s] * n /
                                 (static_cast<double>(action_marginal[a]) * sensor_marginal[s]));
        }
    }
    return mi;
}

double empowerment(const RolloutTrace& trace, int k, std::optional<int> crop_last) {
    const SensorActionPairs pairs = build_pairs(trace, k, crop_last);
    if (pairs.pairs.empty()) return 0.0;
    bool action_varies = false, sensor_varies = false;
    for (std::size_t i = 1; i < pairs.pairs.size() && !(action_varies && sensor_varies); ++i) {
        action_varies |= pairs.pairs[i].first != pairs.pairs[0].first;
        sensor_varies |= pairs.pairs[i].second != pairs.pairs[0].second;
    }
    if (!action_varies || !sensor_varies) return 0.0;  // constant margin: exactly zero
    return mutual_information(pairs);
}

double local_action_entropy(const RolloutTrace& trace, bool* degenerate) {
    const std::size_t cells =
        static_cast<std::size_t>(trace.grid_size) * static_cast<std::size_t>(trace.grid_size);
    double sum = 0.0;
    int cells_with_steps = 0;
    std::uint32_t counts[kAlphabet];
    for (std::size_t cell = 0; cell < cells; ++cell) {
        std::fill(std::begin(counts), std::end(counts), 0);
        std::uint32_t total = 0;
        for (int n = 1; n <= trace.steps; ++n) {
            const std::size_t i = (static_cast<std::size_t>(n) - 1) * cells + cell;
            if (trace.executed[i]) {
                ++counts[trace.actions[i]];
                ++total;
            }
        }
        if (total == 0) continue;
        ++cells_with_steps;
        sum += entropy_bits_from_counts(counts, kAlphabet, total);
    }
    if (degenerate) *degenerate = cells_with_steps == 0;
    return cells_with_steps == 0 ? 0.0 : sum / cells_with_steps;
}

double global_action_entropy(const RolloutTrace& trace, bool* degenerate) {
    std::uint32_t counts[kAlphabet] = {};
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < trace.executed.size(); ++i) {
        if (trace.executed[i]) {
            ++counts[trace.actions[i]];
            ++total;
        }
    }
    if (degenerate) *degenerate = total == 0;
    return total == 0 ? 0.0 : entropy_bits_from_counts(counts, kAlphabet, static_cast<double>(total));
}

double evaluate_objective(const ObjectiveSpec& spec, const RolloutTrace& trace,
                          const TargetShape& target) {
    switch (spec.kind) {
        case ObjectiveKind::Age:
            throw std::logic_error("evaluate_objective: Age is filled by the evolutionary loop");
        case ObjectiveKind::Loss:
            return loss(trace, target, spec.n0, spec.n1);
        case ObjectiveKind::Empowerment:
            return empowerment(trace, spec.k, spec.crop_last);
        case ObjectiveKind::LocalActionEntropy:
            return local_action_entropy(trace);
        case ObjectiveKind::GlobalActionEntropy:
            return global_action_entropy(trace);
    }
    throw std::logic_error("evaluate_objective: unknown kind");
}

bool objectives_need_grids(const std::vector<ObjectiveSpec>& specs) {
    for (const auto& s : specs)
        if (s.kind == ObjectiveKind::Loss) return true;
    return false;
}

}  // namespace ncalab
