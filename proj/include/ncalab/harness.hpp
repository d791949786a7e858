#pragma once

#include <string>
#include <vector>

#include "ncalab/config.hpp"
#include "ncalab/evolution.hpp"

namespace ncalab {

// Runs config.replicates independent runs with seeds master_seed + r and
// writes per-replicate run logs and champion genomes, a manifest and a
// summary CSV under config.output_dir. Returns the output directory.
std::string cmd_evolve(const ExperimentConfig& config, bool quiet = false);

// One TriLossEmpowerment run per k in k_list plus the bi-loss and tri-loss
// controls, then a per-replicate summary, per-variant stats with 95% CIs and
// Bonferroni-corrected rank-sum p-values against both controls.
std::string cmd_sweep_k(const ExperimentConfig& base, const std::vector<int>& k_list,
                        bool quiet = false);

// Seeds the initial population from the champion genomes found under
// champions_dir and evolves on a new target.
std::string cmd_finetune(const std::string& champions_dir, const std::string& target_spec,
                         Variant variant, ExperimentConfig config, bool quiet = false);

struct SimulateOptions {
    std::string genome_path;
    int grid_size = 25;
    int steps = 50;
    StepOptions step_options;
    std::string frames_dir;  // empty: no frame export
    std::string trace_path;  // empty: no NDJSON trace
    std::string target;      // empty: no loss field in the trace
    bool ascii = true;
};

// Single rollout with optional PBM/PGM frames, an NDJSON per-step trace and
// an ASCII rendering of the final state on stdout.
void cmd_simulate(const SimulateOptions& opts);

struct AnalyzeOptions {
    std::string champions_dir;
    std::string output_dir;
    std::string target;    // empty: taken from the run manifest
    int extra_steps = -1;  // -1: same as the evolved step count
};

// Homeostasis battery for every champion (stability slope over the extension
// window, instability, transiency, connected components, boundary proportion)
// plus a cross-variant rank-sum report. Returns the output directory.
std::string cmd_analyze(const AnalyzeOptions& opts);

// Champion genome files under dir: replicate_*/champion.json when present,
// otherwise any top-level *.json except manifests/summaries. Sorted.
std::vector<std::string> find_champion_files(const std::string& dir);

}  // namespace ncalab
