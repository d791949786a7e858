#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncalab/nca.hpp"
#include "ncalab/objectives.hpp"

namespace ncalab {

// Config validation failure; message carries the offending field path.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& field, const std::string& message)
        : std::runtime_error("config." + field + ": " + message), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

enum class Variant {
    BiLoss,
    TriLoss,
    TriLossEmpowerment,
    TriLossLocalEntropyMin,
    TriLossLocalEntropyMax,
    TriLossGlobalEntropyMin,
};

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& name);

// Declarative description of one evolutionary experiment: the unit the CLI
// harness runs, sweeps and replays.
struct ExperimentConfig {
    Variant variant = Variant::BiLoss;
    int k = 1;                     // empowerment horizon, used by the empowerment variant
    std::optional<int> crop_last;  // empowerment: keep only the latest pairs per cell
    int grid_size = 25;
    int steps = 50;
    int population_size = 100;
    int generations = 200;
    int replicates = 1;
    std::uint64_t master_seed = 0;
    std::string target = "square:12";
    DeathRule death_rule = DeathRule::OverwriteAlways;
    UpdateMode update_mode = UpdateMode::InPlaceRaster;
    std::string seed_population_path;  // empty: random initial population
    std::string output_dir;
    int checkpoint_every = 0;
    int workers = 0;  // 0: NCALAB_WORKERS env var, else hardware count

    // Objective lists per variant: BiLoss {Age, L(0,N)}; TriLoss
    // {Age, L(0,N/2), L(N/2,N)}; the rest {Age, L(0,N), <third objective>}.
    std::vector<ObjectiveSpec> objective_specs() const;
    int resolved_workers() const;
    void validate() const;  // throws ConfigError

    std::string to_json_string() const;
    // Accepts a bare config object or a manifest ({"config": {...}, ...});
    // unknown keys are rejected with their field path.
    static ExperimentConfig from_json_string(const std::string& text);
    static ExperimentConfig from_json_file(const std::string& path);

    // P=100, G=200, replicates=10: finishes on a desk in minutes.
    static ExperimentConfig desk_preset();
    // P=400, G=2000, replicates=35: the full-scale protocol, hours to days.
    static ExperimentConfig paper_preset();
};

}  // namespace ncalab
