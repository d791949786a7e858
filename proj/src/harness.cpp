#include "ncalab/harness.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "ncalab/io.hpp"
#include "ncalab/metrics.hpp"
#include "ncalab/threading.hpp"

namespace fs = std::filesystem;

namespace ncalab {

namespace {

std::mutex g_console_mutex;

void progress(bool quiet, const std::string& line) {
    if (quiet) return;
    std::lock_guard<std::mutex> lock(g_console_mutex);
    std::cout << line << "\n" << std::flush;
}

std::string iso_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string replicate_dir_name(int r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "replicate_%03d", r);
    return buf;
}

void write_manifest(const ExperimentConfig& config, const std::string& dir) {
    nlohmann::json m;
    m["tool"] = "ncalab";
    m["version"] = "0.1.0";
    m["created_at"] = iso_timestamp();
    m["config"] = nlohmann::json::parse(config.to_json_string());
    nlohmann::json seeds = nlohmann::json::array();
    for (int r = 0; r < config.replicates; ++r) seeds.push_back(config.master_seed + r);
    m["replicate_seeds"] = seeds;
    write_text_file(dir + "/manifest.json", m.dump(2) + "\n");
}

void write_run_log_csv(const RunLog& log, std::size_t n_objectives, const std::string& path) {
    std::ostringstream out;
    out << "generation,best_loss,mean_loss,best_obj3,mean_obj3,best_age,pop_size\n";
    for (const auto& row : log.rows) {
        out << row.generation << ',' << format_double(row.best_loss) << ','
            << format_double(row.mean_loss) << ',';
        if (n_objectives >= 3) {
            out << format_double(row.best_objectives[2]) << ','
                << format_double(row.mean_objectives[2]);
        } else {
            out << ',';
        }
        out << ',' << row.best_age << ',' << row.population_size << '\n';
    }
    write_text_file(path, out.str());
}

struct ReplicateOutcome {
    Individual champion;
    double best_ever_loss = 0.0;
};

std::string k_column(const ExperimentConfig& config) {
    return config.variant == Variant::TriLossEmpowerment ? std::to_string(config.k) : "";
}

void write_summary_csv(const ExperimentConfig& config,
                       const std::vector<ReplicateOutcome>& outcomes, const std::string& path) {
    std::ostringstream out;
    out << "replicate,seed,variant,k,champion_id,champion_age,champion_loss,objective2,"
           "objective3\n";
    for (std::size_t r = 0; r < outcomes.size(); ++r) {
        const Individual& ch = outcomes[r].champion;
        out << r << ',' << config.master_seed + r << ',' << variant_name(config.variant) << ','
            << k_column(config) << ',' << ch.genome.id << ',' << ch.age << ','
            << format_double(ch.comparison_loss) << ',' << format_double(ch.objectives[1]) << ',';
        if (ch.objectives.size() >= 3) out << format_double(ch.objectives[2]);
        out << '\n';
    }
    write_text_file(path, out.str());
}

std::vector<Genome> load_seed_genomes(const std::string& path) {
    const auto files = find_champion_files(path);
    if (files.empty())
        throw std::runtime_error("no champion genome files found under " + path);
    std::vector<Genome> genomes;
    genomes.reserve(files.size());
    for (const auto& f : files) genomes.push_back(load_genome(f));
    return genomes;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Normal-approximation 95% CI over replicate champion losses.
std::pair<double, double> ci95(const std::vector<double>& v) {
    const double m = mean_of(v);
    if (v.size() < 2) return {m, m};
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    const double se = std::sqrt(ss / static_cast<double>(v.size() - 1)) /
                      std::sqrt(static_cast<double>(v.size()));
    const double z = 1.959963984540054;
    return {m - z * se, m + z * se};
}

}  // namespace

std::vector<std::string> find_champion_files(const std::string& dir) {
    std::vector<std::string> files;
    if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir);
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_directory() &&
            entry.path().filename().string().rfind("replicate_", 0) == 0) {
            const fs::path champ = entry.path() / "champion.json";
            if (fs::exists(champ)) files.push_back(champ.string());
        }
    }
    if (files.empty()) {
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
            const std::string name = entry.path().filename().string();
            if (name == "manifest.json" || name.rfind("checkpoint_", 0) == 0) continue;
            files.push_back(entry.path().string());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::string cmd_evolve(const ExperimentConfig& config, bool quiet) {
    config.validate();
    if (config.output_dir.empty())
        throw ConfigError("output_dir", "required (set it in the config or pass --out)");
    const TargetShape target = parse_target_spec(config.target, config.grid_size);

    std::vector<Genome> seed_genomes;
    if (!config.seed_population_path.empty())
        seed_genomes = load_seed_genomes(config.seed_population_path);

    fs::create_directories(config.output_dir);
    write_manifest(config, config.output_dir);

    const int total_workers = config.resolved_workers();
    const int concurrent = std::max(1, std::min(total_workers, config.replicates));
    const int inner_workers = std::max(1, total_workers / concurrent);

    std::vector<ReplicateOutcome> outcomes(static_cast<std::size_t>(config.replicates));
    parallel_for(static_cast<std::size_t>(config.replicates), concurrent, [&](std::size_t r) {
        const auto started = std::chrono::steady_clock::now();
        const std::string rdir = config.output_dir + "/" + replicate_dir_name(static_cast<int>(r));
        fs::create_directories(rdir);

        EvolutionConfig ecfg;
        ecfg.population_size = config.population_size;
        ecfg.generations = config.generations;
        ecfg.objectives = config.objective_specs();
        ecfg.grid_size = config.grid_size;
        ecfg.steps = config.steps;
        ecfg.step_options = {config.death_rule, config.update_mode};
        ecfg.target = target;
        ecfg.master_seed = config.master_seed + r;
        ecfg.workers = inner_workers;
        ecfg.seed_genomes = seed_genomes;
        ecfg.checkpoint_every = config.checkpoint_every;
        ecfg.checkpoint_dir = rdir;

        const EvolutionResult result = evolve(ecfg);
        write_run_log_csv(result.log, ecfg.objectives.size(), rdir + "/run_log.csv");
        save_genome(result.champion.genome, rdir + "/champion.json");
        outcomes[r] = {result.champion, result.log.best_ever_loss};

        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        std::ostringstream line;
        line << "[evolve " << variant_name(config.variant) << "] replicate " << r << "/"
             << config.replicates << " done: champion loss "
             << format_double(outcomes[r].champion.comparison_loss) << " ("
             << format_double(secs) << "s)";
        progress(quiet, line.str());
    });

    write_summary_csv(config, outcomes, config.output_dir + "/summary.csv");
    return config.output_dir;
}

std::string cmd_sweep_k(const ExperimentConfig& base, const std::vector<int>& k_list, bool quiet) {
    base.validate();
    if (base.output_dir.empty()) throw ConfigError("output_dir", "required for sweep-k");
    if (k_list.empty()) throw std::invalid_argument("sweep-k: empty k list");
    for (int k : k_list)
        if (k < 1 || k > base.steps - 1)
            throw std::invalid_argument("sweep-k: k=" + std::to_string(k) +
                                        " out of range [1, " + std::to_string(base.steps - 1) +
                                        "]");
    if (base.steps % 2 != 0)
        throw std::invalid_argument("sweep-k: steps must be even (the tri-loss control needs it)");

    struct SweepRun {
        std::string label;
        Variant variant;
        int k = 0;  // 0 for controls
    };
    std::vector<SweepRun> runs{{"bi_loss", Variant::BiLoss, 0}, {"tri_loss", Variant::TriLoss, 0}};
    for (int k : k_list) {
        char label[32];
        std::snprintf(label, sizeof label, "empowerment_k%02d", k);
        runs.push_back({label, Variant::TriLossEmpowerment, k});
    }

    fs::create_directories(base.output_dir);
    write_manifest(base, base.output_dir);

    std::map<std::string, std::vector<double>> losses;  // label -> per-replicate champion loss
    for (const auto& run : runs) {
        ExperimentConfig cfg = base;
        cfg.variant = run.variant;
        if (run.variant == Variant::TriLossEmpowerment) cfg.k = run.k;
        if (run.variant != Variant::TriLossEmpowerment) cfg.crop_last.reset();
        cfg.output_dir = base.output_dir + "/" + run.label;
        cmd_evolve(cfg, quiet);

        // champion losses come back out of the per-run summary
        std::vector<double>& vals = losses[run.label];
        std::ifstream in(cfg.output_dir + "/summary.csv");
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            std::stringstream ss(line);
            std::string field;
            for (int i = 0; i < 7 && std::getline(ss, field, ','); ++i) {
            }
            vals.push_back(std::stod(field));
        }
    }

    std::ostringstream summary;
    summary << "variant,k,replicate,seed,champion_loss\n";
    for (const auto& run : runs) {
        const auto& vals = losses[run.label];
        for (std::size_t r = 0; r < vals.size(); ++r) {
            summary << variant_name(run.variant) << ','
                    << (run.variant == Variant::TriLossEmpowerment ? std::to_string(run.k) : "")
                    << ',' << r << ',' << base.master_seed + r << ',' << format_double(vals[r])
                    << '\n';
        }
    }
    write_text_file(base.output_dir + "/sweep_summary.csv", summary.str());

    const double alpha = 0.05 / (2.0 * static_cast<double>(k_list.size()));
    std::ostringstream stats;
    stats << "variant,k,n,mean_loss,ci95_lo,ci95_hi,p_vs_bi_loss,p_vs_tri_loss,alpha_bonferroni,"
             "sig_vs_bi_loss,sig_vs_tri_loss\n";
    for (const auto& run : runs) {
        const auto& vals = losses[run.label];
        const auto [lo, hi] = ci95(vals);
        stats << variant_name(run.variant) << ','
              << (run.variant == Variant::TriLossEmpowerment ? std::to_string(run.k) : "") << ','
              << vals.size() << ',' << format_double(mean_of(vals)) << ',' << format_double(lo)
              << ',' << format_double(hi) << ',';
        if (run.variant == Variant::TriLossEmpowerment && vals.size() >= 3 &&
            losses["bi_loss"].size() >= 3) {
            const double p_bi = rank_sum_test(vals, losses["bi_loss"]).p_two_sided;
            const double p_tri = rank_sum_test(vals, losses["tri_loss"]).p_two_sided;
            stats << format_double(p_bi) << ',' << format_double(p_tri) << ','
                  << format_double(alpha) << ',' << (p_bi < alpha ? 1 : 0) << ','
                  << (p_tri < alpha ? 1 : 0);
        } else {
            stats << ",," << format_double(alpha) << ",,";
        }
        stats << '\n';
    }
    write_text_file(base.output_dir + "/sweep_stats.csv", stats.str());
    return base.output_dir;
}

std::string cmd_finetune(const std::string& champions_dir, const std::string& target_spec,
                         Variant variant, ExperimentConfig config, bool quiet) {
    config.variant = variant;
    config.target = target_spec;
    config.seed_population_path = champions_dir;
    if (variant != Variant::TriLossEmpowerment) config.crop_last.reset();
    return cmd_evolve(config, quiet);
}

void cmd_simulate(const SimulateOptions& opts) {
    const Genome genome = load_genome(opts.genome_path);
    const RolloutTrace trace =
        rollout(genome, opts.grid_size, opts.steps, /*record_grids=*/true, opts.step_options);

    if (!opts.frames_dir.empty()) export_frames(trace.grids, opts.frames_dir);

    if (!opts.trace_path.empty()) {
        std::optional<TargetShape> target;
        if (!opts.target.empty()) target = parse_target_spec(opts.target, opts.grid_size);
        const std::size_t cells =
            static_cast<std::size_t>(opts.grid_size) * static_cast<std::size_t>(opts.grid_size);
        std::ostringstream out;
        for (int n = 1; n <= opts.steps; ++n) {
            nlohmann::json line;
            line["step"] = n;
            line["alive"] = trace.grids[static_cast<std::size_t>(n)].alive_count();
            if (target) {
                int mismatches = 0;
                for (std::size_t i = 0; i < cells; ++i)
                    mismatches +=
                        trace.grids[static_cast<std::size_t>(n)].alive[i] != target->mask[i];
                line["loss"] = mismatches / static_cast<double>(cells);
            }
            nlohmann::json actions = nlohmann::json::object();
            nlohmann::json sensors = nlohmann::json::object();
            std::map<int, int> action_counts, sensor_counts;
            for (std::size_t i = 0; i < cells; ++i) {
                const std::size_t at = (static_cast<std::size_t>(n) - 1) * cells + i;
                if (!trace.executed[at]) continue;
                ++action_counts[trace.actions[at]];
                ++sensor_counts[trace.sensors[at]];
            }
            for (const auto& [v, c] : action_counts) actions[std::to_string(v)] = c;
            for (const auto& [v, c] : sensor_counts) sensors[std::to_string(v)] = c;
            line["actions"] = actions;
            line["sensors"] = sensors;
            out << line.dump() << '\n';
        }
        write_text_file(opts.trace_path, out.str());
    }

    if (opts.ascii) {
        const GridState& final_grid = trace.grids.back();
        std::cout << ascii_render(final_grid) << "alive " << final_grid.alive_count() << " after "
                  << opts.steps << " steps\n";
    }
}

namespace {

struct AnalysisGroup {
    std::string label;  // variant label, or the directory name when unknown
    std::string k;      // empty unless the empowerment variant
    std::string dir;
    std::string target_spec;
    int grid_size = 25;
    int steps = 50;
};

AnalysisGroup group_from_run_dir(const std::string& dir, const std::string& target_override) {
    AnalysisGroup g;
    g.dir = dir;
    g.label = fs::path(dir).filename().string();
    const std::string manifest_path = dir + "/manifest.json";
    if (fs::exists(manifest_path)) {
        const ExperimentConfig cfg =
            ExperimentConfig::from_json_string(read_text_file(manifest_path));
        g.label = variant_name(cfg.variant);
        if (cfg.variant == Variant::TriLossEmpowerment) g.k = std::to_string(cfg.k);
        g.target_spec = cfg.target;
        g.grid_size = cfg.grid_size;
        g.steps = cfg.steps;
    }
    if (!target_override.empty()) g.target_spec = target_override;
    if (g.target_spec.empty())
        throw std::runtime_error("analyze: no target for " + dir +
                                 " (no manifest found; pass --target)");
    return g;
}

}  // namespace

std::string cmd_analyze(const AnalyzeOptions& opts) {
    if (opts.output_dir.empty()) throw std::runtime_error("analyze: output dir required");
    if (!fs::is_directory(opts.champions_dir))
        throw std::runtime_error("not a directory: " + opts.champions_dir);

    // A sweep directory holds one run directory per variant; a single run
    // directory holds the replicates directly.
    std::vector<AnalysisGroup> groups;
    std::vector<std::string> subruns;
    for (const auto& entry : fs::directory_iterator(opts.champions_dir))
        if (entry.is_directory() && fs::exists(entry.path() / "manifest.json") &&
            !find_champion_files(entry.path().string()).empty())
            subruns.push_back(entry.path().string());
    std::sort(subruns.begin(), subruns.end());
    if (!subruns.empty() && find_champion_files(opts.champions_dir).empty()) {
        for (const auto& dir : subruns) groups.push_back(group_from_run_dir(dir, opts.target));
    } else {
        groups.push_back(group_from_run_dir(opts.champions_dir, opts.target));
    }

    fs::create_directories(opts.output_dir);
    fs::create_directories(opts.output_dir + "/series");

    const std::vector<std::string> metric_names = {
        "stability_slope",      "instability",        "transiency_mean",
        "transiency_total",     "connected_components", "boundary_proportion"};

    std::ostringstream csv;
    csv << "run_id,variant,k,metric,value\n";
    // metric -> group label -> values, for the cross-variant report
    std::map<std::string, std::map<std::string, std::vector<double>>> by_metric;

    for (const auto& group : groups) {
        const TargetShape target = parse_target_spec(group.target_spec, group.grid_size);
        const int extra = opts.extra_steps < 0 ? group.steps : opts.extra_steps;
        for (const auto& file : find_champion_files(group.dir)) {
            const Genome genome = load_genome(file);
            const std::string rep = fs::path(file).parent_path().filename().string();
            const std::string run_id =
                group.label + "/" +
                (rep == fs::path(group.dir).filename().string() ? fs::path(file).stem().string()
                                                                : rep);

            std::map<std::string, double> values;
            const auto series =
                extended_loss_series(genome, group.grid_size, group.steps, extra, target);
            values["stability_slope"] =
                extra >= 2 ? stability_slope(series, group.steps + 1, group.steps + extra) : 0.0;
            values["instability"] = instability(genome, group.grid_size, group.steps);

            const RolloutTrace trace =
                rollout(genome, group.grid_size, group.steps + extra, /*record_grids=*/true);
            const Transiency t = transiency(trace);
            values["transiency_mean"] = t.mean_per_cell;
            values["transiency_total"] = static_cast<double>(t.total);
            values["connected_components"] =
                static_cast<double>(connected_components(trace.grids.back()));
            values["boundary_proportion"] = boundary_proportion(trace.grids.back());

            for (const auto& name : metric_names) {
                csv << run_id << ',' << group.label << ',' << group.k << ',' << name << ','
                    << format_double(values[name]) << '\n';
                by_metric[name][group.label].push_back(values[name]);
            }

            std::ostringstream s;
            s << "step,loss\n";
            for (const auto& p : series) s << p.step << ',' << format_double(p.loss) << '\n';
            std::string fname = run_id;
            std::replace(fname.begin(), fname.end(), '/', '_');
            write_text_file(opts.output_dir + "/series/" + fname + ".csv", s.str());
        }
    }
    write_text_file(opts.output_dir + "/metrics.csv", csv.str());

    // Cross-variant rank-sum report, Bonferroni over all performed comparisons.
    if (groups.size() >= 2) {
        std::vector<std::array<std::string, 2>> pairs;
        for (std::size_t i = 0; i < groups.size(); ++i)
            for (std::size_t j = i + 1; j < groups.size(); ++j)
                pairs.push_back({groups[i].label, groups[j].label});
        int comparisons = 0;
        for (const auto& name : metric_names)
            for (const auto& pr : pairs)
                if (by_metric[name][pr[0]].size() >= 3 && by_metric[name][pr[1]].size() >= 3)
                    ++comparisons;
        const double alpha = comparisons > 0 ? 0.05 / comparisons : 0.05;

        std::ostringstream rs;
        rs << "metric,variant_a,variant_b,u,p,alpha_bonferroni,significant\n";
        for (const auto& name : metric_names) {
            for (const auto& pr : pairs) {
                const auto& va = by_metric[name][pr[0]];
                const auto& vb = by_metric[name][pr[1]];
                if (va.size() < 3 || vb.size() < 3) continue;
                const RankSumResult r = rank_sum_test(va, vb);
                rs << name << ',' << pr[0] << ',' << pr[1] << ',' << format_double(r.u_statistic)
                   << ',' << format_double(r.p_two_sided) << ',' << format_double(alpha) << ','
                   << (r.p_two_sided < alpha ? 1 : 0) << '\n';
            }
        }
        write_text_file(opts.output_dir + "/ranksum.csv", rs.str());
    }
    return opts.output_dir;
}

}  // namespace ncalab
