#include "ncalab/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ncalab/threading.hpp"

namespace ncalab {

std::string variant_name(Variant v) {
    switch (v) {
        case Variant::BiLoss: return "bi_loss";
        case Variant::TriLoss: return "tri_loss";
        case Variant::TriLossEmpowerment: return "tri_loss_empowerment";
        case Variant::TriLossLocalEntropyMin: return "tri_loss_local_entropy_min";
        case Variant::TriLossLocalEntropyMax: return "tri_loss_local_entropy_max";
        case Variant::TriLossGlobalEntropyMin: return "tri_loss_global_entropy_min";
    }
    return "?";
}

Variant variant_from_name(const std::string& name) {
    if (name == "bi_loss") return Variant::BiLoss;
    if (name == "tri_loss") return Variant::TriLoss;
    if (name == "tri_loss_empowerment") return Variant::TriLossEmpowerment;
    if (name == "tri_loss_local_entropy_min") return Variant::TriLossLocalEntropyMin;
    if (name == "tri_loss_local_entropy_max") return Variant::TriLossLocalEntropyMax;
    if (name == "tri_loss_global_entropy_min") return Variant::TriLossGlobalEntropyMin;
    throw ConfigError("variant", "unknown variant '" + name + "'");
}

std::vector<ObjectiveSpec> ExperimentConfig::objective_specs() const {
    std::vector<ObjectiveSpec> specs{ObjectiveSpec::age()};
    switch (variant) {
        case Variant::BiLoss:
            specs.push_back(ObjectiveSpec::loss(0, steps));
            break;
        case Variant::TriLoss:
            specs.push_back(ObjectiveSpec::loss(0, steps / 2));
            specs.push_back(ObjectiveSpec::loss(steps / 2, steps));
            break;
        case Variant::TriLossEmpowerment:
            specs.push_back(ObjectiveSpec::loss(0, steps));
            specs.push_back(ObjectiveSpec::empowerment(k, crop_last));
            break;
        case Variant::TriLossLocalEntropyMin:
            specs.push_back(ObjectiveSpec::loss(0, steps));
            specs.push_back(ObjectiveSpec::local_action_entropy(Direction::Minimize));
            break;
        case Variant::TriLossLocalEntropyMax:
            specs.push_back(ObjectiveSpec::loss(0, steps));
            specs.push_back(ObjectiveSpec::local_action_entropy(Direction::Maximize));
            break;
        case Variant::TriLossGlobalEntropyMin:
            specs.push_back(ObjectiveSpec::loss(0, steps));
            specs.push_back(ObjectiveSpec::global_action_entropy());
            break;
    }
    return specs;
}

int ExperimentConfig::resolved_workers() const {
    if (workers > 0) return workers;
    if (const char* env = std::getenv("NCALAB_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return default_worker_count();
}

void ExperimentConfig::validate() const {
    if (grid_size < 3) throw ConfigError("grid_size", "must be >= 3");
    if (steps < 1) throw ConfigError("steps", "must be >= 1");
    if (population_size < 2) throw ConfigError("population_size", "must be >= 2");
    if (generations < 0) throw ConfigError("generations", "must be >= 0");
    if (replicates < 1) throw ConfigError("replicates", "must be >= 1");
    if (checkpoint_every < 0) throw ConfigError("checkpoint_every", "must be >= 0");
    if (workers < 0) throw ConfigError("workers", "must be >= 0");
    if (variant == Variant::TriLoss && steps % 2 != 0)
        throw ConfigError("steps", "must be even for variant tri_loss");
    if (variant == Variant::TriLossEmpowerment) {
        if (k < 1 || k > steps - 1)
            throw ConfigError("k", "must be in [1, steps-1], got " + std::to_string(k));
        if (crop_last && *crop_last < 1) throw ConfigError("crop_last", "must be >= 1");
    } else if (crop_last) {
        throw ConfigError("crop_last", "only valid for variant tri_loss_empowerment");
    }
    if (target.empty()) throw ConfigError("target", "must not be empty");
}

namespace {

const std::set<std::string> kKnownKeys = {
    "variant",        "k",           "crop_last",       "grid_size",
    "steps",          "population_size", "generations", "replicates",
    "master_seed",    "target",      "death_rule",      "update_mode",
    "seed_population_path", "output_dir", "checkpoint_every", "workers",
};

template <typename T>
T get_field(const nlohmann::json& j, const std::string& key, const T& fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(key, "has the wrong type");
    }
}

}  // namespace

std::string ExperimentConfig::to_json_string() const {
    nlohmann::json j;
    j["variant"] = variant_name(variant);
    if (variant == Variant::TriLossEmpowerment) {
        j["k"] = k;
        if (crop_last) j["crop_last"] = *crop_last;
    }
    j["grid_size"] = grid_size;
    j["steps"] = steps;
    j["population_size"] = population_size;
    j["generations"] = generations;
    j["replicates"] = replicates;
    j["master_seed"] = master_seed;
    j["target"] = target;
    j["death_rule"] =
        death_rule == DeathRule::OverwriteAlways ? "overwrite_always" : "literal_replicate";
    j["update_mode"] =
        update_mode == UpdateMode::InPlaceRaster ? "raster" : "double_buffered";
    if (!seed_population_path.empty()) j["seed_population_path"] = seed_population_path;
    if (!output_dir.empty()) j["output_dir"] = output_dir;
    if (checkpoint_every > 0) j["checkpoint_every"] = checkpoint_every;
    if (workers > 0) j["workers"] = workers;
    return j.dump(2) + "\n";
}

ExperimentConfig ExperimentConfig::from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("", std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("", "top level must be an object");
    if (j.contains("config")) j = j.at("config");  // manifest replay

    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!kKnownKeys.count(key)) throw ConfigError(key, "unknown key");
    }

    ExperimentConfig cfg;
    if (!j.contains("variant")) throw ConfigError("variant", "required");
    cfg.variant = variant_from_name(get_field<std::string>(j, "variant", ""));
    cfg.k = get_field<int>(j, "k", cfg.k);
    if (j.contains("crop_last")) cfg.crop_last = get_field<int>(j, "crop_last", 0);
    cfg.grid_size = get_field<int>(j, "grid_size", cfg.grid_size);
    cfg.steps = get_field<int>(j, "steps", cfg.steps);
    cfg.population_size = get_field<int>(j, "population_size", cfg.population_size);
    cfg.generations = get_field<int>(j, "generations", cfg.generations);
    cfg.replicates = get_field<int>(j, "replicates", cfg.replicates);
    cfg.master_seed = get_field<std::uint64_t>(j, "master_seed", cfg.master_seed);
    cfg.target = get_field<std::string>(j, "target", cfg.target);

    const std::string death = get_field<std::string>(j, "death_rule", "overwrite_always");
    if (death == "overwrite_always")
        cfg.death_rule = DeathRule::OverwriteAlways;
    else if (death == "literal_replicate")
        cfg.death_rule = DeathRule::LiteralReplicate;
    else
        throw ConfigError("death_rule", "expected overwrite_always or literal_replicate");

    const std::string mode = get_field<std::string>(j, "update_mode", "raster");
    if (mode == "raster")
        cfg.update_mode = UpdateMode::InPlaceRaster;
    else if (mode == "double_buffered")
        cfg.update_mode = UpdateMode::DoubleBuffered;
    else
        throw ConfigError("update_mode", "expected raster or double_buffered");

    cfg.seed_population_path = get_field<std::string>(j, "seed_population_path", "");
    cfg.output_dir = get_field<std::string>(j, "output_dir", "");
    cfg.checkpoint_every = get_field<int>(j, "checkpoint_every", 0);
    cfg.workers = get_field<int>(j, "workers", 0);
    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json_string(buf.str());
}

ExperimentConfig ExperimentConfig::desk_preset() {
    ExperimentConfig cfg;
    cfg.variant = Variant::BiLoss;
    cfg.grid_size = 25;
    cfg.steps = 50;
    cfg.population_size = 100;
    cfg.generations = 200;
    cfg.replicates = 10;
    cfg.target = "square:12";
    return cfg;
}

ExperimentConfig ExperimentConfig::paper_preset() {
    ExperimentConfig cfg;
    cfg.variant = Variant::BiLoss;
    cfg.grid_size = 25;
    cfg.steps = 50;
    cfg.population_size = 400;
    cfg.generations = 2000;
    cfg.replicates = 35;
    cfg.target = "square:12";
    return cfg;
}

}  // namespace ncalab
