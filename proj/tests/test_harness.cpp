#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ncalab/evolution.hpp"
#include "ncalab/harness.hpp"
#include "ncalab/io.hpp"

using namespace ncalab;
namespace fs = std::filesystem;

namespace {

std::string temp_dir(const std::string& name) {
    const std::string path = (fs::temp_directory_path() / name).string();
    fs::remove_all(path);
    return path;
}

ExperimentConfig tiny_config(const std::string& out) {
    ExperimentConfig cfg;
    cfg.variant = Variant::BiLoss;
    cfg.grid_size = 9;
    cfg.steps = 10;
    cfg.population_size = 4;
    cfg.generations = 2;
    cfg.replicates = 2;
    cfg.master_seed = 11;
    cfg.target = "square:4";
    cfg.output_dir = out;
    cfg.workers = 1;
    return cfg;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("cmd_evolve writes logs, champions, manifest and summary") {
    const std::string out = temp_dir("harness_evolve");
    const ExperimentConfig cfg = tiny_config(out);
    CHECK(cmd_evolve(cfg, true) == out);

    CHECK(fs::exists(out + "/manifest.json"));
    CHECK(fs::exists(out + "/replicate_000/run_log.csv"));
    CHECK(fs::exists(out + "/replicate_000/champion.json"));
    CHECK(fs::exists(out + "/replicate_001/run_log.csv"));
    CHECK(fs::exists(out + "/replicate_001/champion.json"));

    const auto log = read_lines(out + "/replicate_000/run_log.csv");
    REQUIRE(log.size() == 3);  // header + one row per generation
    CHECK(log[0] == "generation,best_loss,mean_loss,best_obj3,mean_obj3,best_age,pop_size");
    CHECK(log[1].rfind("1,", 0) == 0);
    CHECK(log[2].rfind("2,", 0) == 0);

    const auto summary = read_lines(out + "/summary.csv");
    REQUIRE(summary.size() == 3);
    CHECK(summary[0] ==
          "replicate,seed,variant,k,champion_id,champion_age,champion_loss,objective2,objective3");
    CHECK(summary[1].rfind("0,11,bi_loss,", 0) == 0);
    CHECK(summary[2].rfind("1,12,bi_loss,", 0) == 0);

    // champion files load back as genomes
    const Genome champ = load_genome(out + "/replicate_000/champion.json");
    CHECK(champ.finite());
}

TEST_CASE("identical configs give byte-identical summaries; manifests replay") {
    const std::string out_a = temp_dir("harness_repro_a");
    const std::string out_b = temp_dir("harness_repro_b");
    ExperimentConfig cfg = tiny_config(out_a);
    cmd_evolve(cfg, true);
    cfg.output_dir = out_b;
    cmd_evolve(cfg, true);
    CHECK(read_text_file(out_a + "/summary.csv") == read_text_file(out_b + "/summary.csv"));
    CHECK(read_text_file(out_a + "/replicate_000/run_log.csv") ==
          read_text_file(out_b + "/replicate_000/run_log.csv"));
    CHECK(read_text_file(out_a + "/replicate_001/champion.json") ==
          read_text_file(out_b + "/replicate_001/champion.json"));

    // replay from the manifest
    ExperimentConfig replay = ExperimentConfig::from_json_file(out_a + "/manifest.json");
    const std::string out_c = temp_dir("harness_repro_c");
    replay.output_dir = out_c;
    cmd_evolve(replay, true);
    CHECK(read_text_file(out_a + "/summary.csv") == read_text_file(out_c + "/summary.csv"));
}

TEST_CASE("sweep-k runs the controls plus one run per horizon") {
    const std::string out = temp_dir("harness_sweep");
    ExperimentConfig cfg = tiny_config(out);
    cfg.replicates = 3;
    cmd_sweep_k(cfg, {1}, true);

    CHECK(fs::exists(out + "/bi_loss/summary.csv"));
    CHECK(fs::exists(out + "/tri_loss/summary.csv"));
    CHECK(fs::exists(out + "/empowerment_k01/summary.csv"));

    const auto summary = read_lines(out + "/sweep_summary.csv");
    REQUIRE(summary.size() == 10);  // header + 3 variants x 3 replicates
    CHECK(summary[0] == "variant,k,replicate,seed,champion_loss");

    const auto stats = read_lines(out + "/sweep_stats.csv");
    REQUIRE(stats.size() == 4);
    CHECK(stats[0].rfind("variant,k,n,mean_loss,ci95_lo,ci95_hi,", 0) == 0);
    // Bonferroni level for one horizon and two controls: 0.05/2
    CHECK(stats[3].find(",0.025,") != std::string::npos);

    CHECK_THROWS_AS(cmd_sweep_k(cfg, {0}, true), std::invalid_argument);
    CHECK_THROWS_AS(cmd_sweep_k(cfg, {10}, true), std::invalid_argument);
    CHECK_THROWS_AS(cmd_sweep_k(cfg, {}, true), std::invalid_argument);
}

TEST_CASE("finetune with zero generations re-evaluates the champions verbatim") {
    const std::string base = temp_dir("harness_fine_base");
    ExperimentConfig cfg = tiny_config(base);
    cfg.replicates = 2;
    cmd_evolve(cfg, true);

    ExperimentConfig fine = tiny_config(temp_dir("harness_fine_out"));
    fine.replicates = 1;
    fine.generations = 0;
    fine.population_size = 2;  // exactly the two champions, no mutants
    const std::string out = cmd_finetune(base, "x:3", Variant::BiLoss, fine, true);

    // best summary loss equals the best direct re-evaluation on the new target
    const TargetShape target = parse_target_spec("x:3", 9);
    double best_direct = 1e9;
    for (const auto& file : find_champion_files(base)) {
        const RolloutTrace t = rollout(load_genome(file), 9, 10, true);
        best_direct = std::min(best_direct, loss(t, target, 0, 10));
    }
    const auto summary = read_lines(out + "/summary.csv");
    REQUIRE(summary.size() == 2);
    std::stringstream ss(summary[1]);
    std::string field;
    for (int i = 0; i < 7; ++i) std::getline(ss, field, ',');
    CHECK(std::stod(field) == doctest::Approx(best_direct).epsilon(1e-12));
}

TEST_CASE("simulate: frames, trace and per-step loss") {
    const std::string dir = temp_dir("harness_sim");
    fs::create_directories(dir);
    save_genome(Genome{}, dir + "/zero.json");

    SimulateOptions opts;
    opts.genome_path = dir + "/zero.json";
    opts.grid_size = 25;
    opts.steps = 5;
    opts.frames_dir = dir + "/frames";
    opts.trace_path = dir + "/trace.ndjson";
    opts.target = "square:12";
    opts.ascii = false;
    cmd_simulate(opts);

    int frames = 0;
    for (const auto& entry : fs::directory_iterator(dir + "/frames")) {
        (void)entry;
        ++frames;
    }
    CHECK(frames == 12);  // 6 steps x two formats
    CHECK(fs::exists(dir + "/frames/frame_0000.pbm"));
    CHECK(fs::exists(dir + "/frames/frame_0005.pgm"));

    const auto trace = read_lines(dir + "/trace.ndjson");
    REQUIRE(trace.size() == 5);
    for (const auto& line : trace) {
        CHECK(line.find("\"alive\":1") != std::string::npos);
        CHECK(line.find("\"loss\":0.2288") != std::string::npos);
        CHECK(line.find("\"actions\":{\"128\":1}") != std::string::npos);
    }
}

TEST_CASE("analyze: metric rows for a single run and a cross-variant report") {
    // hand-built champion directory with a frozen genome and no manifest
    const std::string dir = temp_dir("harness_analyze");
    fs::create_directories(dir);
    save_genome(Genome{}, dir + "/champ0.json");

    AnalyzeOptions opts;
    opts.champions_dir = dir;
    opts.output_dir = dir + "_out";
    opts.target = "square:12";
    cmd_analyze(opts);

    const auto lines = read_lines(opts.output_dir + "/metrics.csv");
    REQUIRE(lines.size() == 7);  // header + 6 metrics
    CHECK(lines[0] == "run_id,variant,k,metric,value");
    bool saw_instability = false, saw_slope = false;
    for (const auto& line : lines) {
        if (line.find(",instability,0") != std::string::npos) saw_instability = true;
        if (line.find(",stability_slope,0") != std::string::npos) saw_slope = true;
    }
    CHECK(saw_instability);  // the zero genome is a fixed point
    CHECK(saw_slope);

    // sweep layout: per-variant groups and a rank-sum report
    const std::string sweep = temp_dir("harness_analyze_sweep");
    ExperimentConfig cfg = tiny_config(sweep);
    cfg.replicates = 3;
    cfg.generations = 1;
    cmd_sweep_k(cfg, {1}, true);

    AnalyzeOptions sweep_opts;
    sweep_opts.champions_dir = sweep;
    sweep_opts.output_dir = sweep + "_out";
    cmd_analyze(sweep_opts);
    const auto metric_lines = read_lines(sweep_opts.output_dir + "/metrics.csv");
    CHECK(metric_lines.size() == 1 + 3 * 3 * 6);  // 3 variants x 3 replicates x 6 metrics
    const auto rs = read_lines(sweep_opts.output_dir + "/ranksum.csv");
    CHECK(rs[0] == "metric,variant_a,variant_b,u,p,alpha_bonferroni,significant");
    CHECK(rs.size() == 1 + 6 * 3);  // 6 metrics x 3 variant pairs
}
