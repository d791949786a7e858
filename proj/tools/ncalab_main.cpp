// Command-line harness: evolve / sweep-k / finetune / simulate / analyze.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ncalab/config.hpp"
#include "ncalab/harness.hpp"

namespace {

struct CommonOverrides {
    std::string config_path;
    std::string preset;
    std::string target;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = -1;
    int generations = -1;
    int population = -1;
    int replicates = -1;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOverrides& o) {
    cmd->add_option("--config", o.config_path, "experiment config JSON (or a manifest to replay)");
    cmd->add_option("--preset", o.preset, "named preset: desk or paper")
        ->check(CLI::IsMember({"desk", "paper"}));
    cmd->add_option("--target", o.target, "target spec: square:12 | triangle:13 | x:5 | file:PATH");
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option_function<std::uint64_t>(
           "--seed", [&](std::uint64_t v) { o.seed = v; o.seed_set = true; }, "master seed");
    cmd->add_option("--workers", o.workers, "worker threads (default: NCALAB_WORKERS or all cores)");
    cmd->add_option("--generations", o.generations, "override generation count");
    cmd->add_option("--population", o.population, "override population size");
    cmd->add_option("--replicates", o.replicates, "override replicate count");
    cmd->add_flag("--quiet", o.quiet, "suppress progress lines");
}

ncalab::ExperimentConfig resolve_config(const CommonOverrides& o) {
    ncalab::ExperimentConfig cfg;
    if (!o.config_path.empty())
        cfg = ncalab::ExperimentConfig::from_json_file(o.config_path);
    else if (o.preset == "desk")
        cfg = ncalab::ExperimentConfig::desk_preset();
    else if (o.preset == "paper")
        cfg = ncalab::ExperimentConfig::paper_preset();
    else
        throw ncalab::ConfigError("", "pass --config FILE or --preset desk|paper");
    if (!o.target.empty()) cfg.target = o.target;
    if (!o.out_dir.empty()) cfg.output_dir = o.out_dir;
    if (o.seed_set) cfg.master_seed = o.seed;
    if (o.workers >= 0) cfg.workers = o.workers;
    if (o.generations >= 0) cfg.generations = o.generations;
    if (o.population >= 0) cfg.population_size = o.population;
    if (o.replicates >= 0) cfg.replicates = o.replicates;
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ncalab: evolving neural cellular automata toward morphogenesis and homeostasis"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "ncalab 0.1.0");

    CommonOverrides evolve_opts;
    auto* evolve_cmd = app.add_subcommand("evolve", "run one experiment (all replicates)");
    add_common(evolve_cmd, evolve_opts);
    std::string evolve_variant;
    int evolve_k = -1;
    evolve_cmd->add_option("--variant", evolve_variant, "override the config's variant");
    evolve_cmd->add_option("--k", evolve_k, "override the empowerment horizon");

    CommonOverrides sweep_opts;
    auto* sweep_cmd = app.add_subcommand("sweep-k", "run the horizon sweep plus both controls");
    add_common(sweep_cmd, sweep_opts);
    std::vector<int> k_list;
    sweep_cmd->add_option("--k-list", k_list, "horizons, e.g. --k-list 1,5,10,17,25,32,40,45")
        ->required()
        ->delimiter(',');

    CommonOverrides fine_opts;
    auto* fine_cmd = app.add_subcommand("finetune", "seed from champions and evolve a new target");
    add_common(fine_cmd, fine_opts);
    std::string fine_champions;
    std::string fine_variant = "bi_loss";
    int fine_k = 1;
    fine_cmd->add_option("--champions", fine_champions, "run directory with champion genomes")
        ->required();
    fine_cmd->add_option("--variant", fine_variant, "bi_loss or tri_loss_empowerment")
        ->check(CLI::IsMember({"bi_loss", "tri_loss_empowerment"}));
    fine_cmd->add_option("--k", fine_k, "empowerment horizon for fine-tuning (default 1)");

    ncalab::SimulateOptions sim;
    std::string sim_death = "overwrite_always", sim_mode = "raster";
    bool sim_no_ascii = false;
    auto* sim_cmd = app.add_subcommand("simulate", "roll out one genome and export artifacts");
    sim_cmd->add_option("--genome", sim.genome_path, "genome JSON file")->required();
    sim_cmd->add_option("--grid-size", sim.grid_size, "grid side length M (default 25)");
    sim_cmd->add_option("--steps", sim.steps, "update count N (default 50)");
    sim_cmd->add_option("--frames", sim.frames_dir, "directory for PBM/PGM frames");
    sim_cmd->add_option("--trace", sim.trace_path, "NDJSON per-step trace file");
    sim_cmd->add_option("--target", sim.target, "target spec for the per-step loss field");
    sim_cmd->add_option("--death-rule", sim_death, "overwrite_always | literal_replicate")
        ->check(CLI::IsMember({"overwrite_always", "literal_replicate"}));
    sim_cmd->add_option("--update-mode", sim_mode, "raster | double_buffered")
        ->check(CLI::IsMember({"raster", "double_buffered"}));
    sim_cmd->add_flag("--no-ascii", sim_no_ascii, "skip the ASCII rendering");

    ncalab::AnalyzeOptions ana;
    auto* ana_cmd = app.add_subcommand("analyze", "homeostasis metrics for evolved champions");
    ana_cmd->add_option("--champions", ana.champions_dir, "run or sweep directory")->required();
    ana_cmd->add_option("--out", ana.output_dir, "output directory for the metrics CSVs")
        ->required();
    ana_cmd->add_option("--target", ana.target, "override the manifest target");
    ana_cmd->add_option("--extra-steps", ana.extra_steps,
                        "extension beyond the evolved horizon (default: the horizon itself)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*evolve_cmd) {
            ncalab::ExperimentConfig cfg = resolve_config(evolve_opts);
            if (!evolve_variant.empty()) cfg.variant = ncalab::variant_from_name(evolve_variant);
            if (evolve_k >= 0) cfg.k = evolve_k;
            cfg.validate();
            std::cout << ncalab::cmd_evolve(cfg, evolve_opts.quiet) << "\n";
        } else if (*sweep_cmd) {
            const ncalab::ExperimentConfig cfg = resolve_config(sweep_opts);
            std::cout << ncalab::cmd_sweep_k(cfg, k_list, sweep_opts.quiet) << "\n";
        } else if (*fine_cmd) {
            if (fine_opts.generations < 0) fine_opts.generations = 500;
            ncalab::ExperimentConfig cfg = resolve_config(fine_opts);
            cfg.k = fine_k;
            if (cfg.target.empty()) throw ncalab::ConfigError("target", "required for finetune");
            std::cout << ncalab::cmd_finetune(fine_champions, cfg.target,
                                              ncalab::variant_from_name(fine_variant), cfg,
                                              fine_opts.quiet)
                      << "\n";
        } else if (*sim_cmd) {
            sim.step_options.death_rule = sim_death == "overwrite_always"
                                              ? ncalab::DeathRule::OverwriteAlways
                                              : ncalab::DeathRule::LiteralReplicate;
            sim.step_options.update_mode = sim_mode == "raster"
                                               ? ncalab::UpdateMode::InPlaceRaster
                                               : ncalab::UpdateMode::DoubleBuffered;
            sim.ascii = !sim_no_ascii;
            ncalab::cmd_simulate(sim);
        } else if (*ana_cmd) {
            std::cout << ncalab::cmd_analyze(ana) << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
