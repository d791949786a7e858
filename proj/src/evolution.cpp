#include "ncalab/evolution.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ncalab/threading.hpp"

namespace ncalab {

namespace {

constexpr int kContractionRetryFactor = 16;  // pair draws per removal = factor * pop size

double clamp_unit(double v) { return v < -1.0 ? -1.0 : (v > 1.0 ? 1.0 : v); }

void validate_config(const EvolutionConfig& cfg) {
    if (cfg.population_size < 2)
        throw std::invalid_argument("evolution config: population_size must be >= 2");
    if (cfg.generations < 0)
        throw std::invalid_argument("evolution config: generations must be >= 0");
    if (cfg.objectives.empty() || cfg.objectives.front().kind != ObjectiveKind::Age)
        throw std::invalid_argument("evolution config: the first objective must be Age");
    for (std::size_t i = 1; i < cfg.objectives.size(); ++i)
        if (cfg.objectives[i].kind == ObjectiveKind::Age)
            throw std::invalid_argument("evolution config: Age may appear only once");
    if (cfg.target.size != cfg.grid_size)
        throw std::invalid_argument("evolution config: target/grid dimension mismatch");
}

// Index pairs drawn uniformly over distinct (i, j), i != j.
std::pair<std::size_t, std::size_t> draw_distinct(Rng& rng, std::size_t n) {
    const std::size_t i = rng.below(n);
    std::size_t j = rng.below(n - 1);
    if (j >= i) ++j;
    return {i, j};
}

bool identical_objectives(const Individual& a, const Individual& b) {
    return a.objectives == b.objectives;
}

std::vector<std::uint8_t> dominated_flags(const std::vector<Individual>& pop,
                                          const std::vector<ObjectiveSpec>& specs) {
    std::vector<std::uint8_t> dominated(pop.size(), 0);
    for (std::size_t i = 0; i < pop.size(); ++i)
        for (std::size_t j = 0; j < pop.size(); ++j)
            if (i != j && dominates(pop[j], pop[i], specs)) {
                dominated[i] = 1;
                break;
            }
    return dominated;
}

void evaluate_population(std::vector<Individual>& pop, const EvolutionConfig& cfg) {
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < pop.size(); ++i)
        if (!pop[i].evaluated) todo.push_back(i);
    parallel_for(todo.size(), cfg.workers,
                 [&](std::size_t t) { evaluate_individual(pop[todo[t]], cfg); });
}

void sync_age_objective(std::vector<Individual>& pop) {
    for (auto& ind : pop) ind.objectives[0] = ind.age;
}

nlohmann::json individual_to_json(const Individual& ind) {
    nlohmann::json j;
    j["genome"] = nlohmann::json::parse(genome_to_json(ind.genome));
    j["age"] = ind.age;
    j["objectives"] = ind.objectives;
    j["evaluated"] = ind.evaluated;
    j["comparison_loss"] = ind.comparison_loss;
    return j;
}

Individual individual_from_json(const nlohmann::json& j) {
    Individual ind;
    ind.genome = genome_from_json(j.at("genome").dump());
    ind.age = j.at("age").get<int>();
    ind.objectives = j.at("objectives").get<std::vector<double>>();
    ind.evaluated = j.at("evaluated").get<bool>();
    ind.comparison_loss = j.at("comparison_loss").get<double>();
    return ind;
}

GenerationStats make_stats(int generation, const std::vector<Individual>& pop,
                           const EvolutionConfig& cfg, GenerationEvents events) {
    GenerationStats s;
    s.generation = generation;
    s.population_size = static_cast<int>(pop.size());
    s.best_loss = pop.front().comparison_loss;
    s.mean_loss = 0.0;
    s.best_age = pop.front().age;
    const std::size_t nobj = cfg.objectives.size();
    s.best_objectives.assign(nobj, 0.0);
    s.mean_objectives.assign(nobj, 0.0);
    for (std::size_t o = 0; o < nobj; ++o) s.best_objectives[o] = pop.front().objectives[o];
    for (const auto& ind : pop) {
        s.best_loss = std::min(s.best_loss, ind.comparison_loss);
        s.mean_loss += ind.comparison_loss;
        s.best_age = std::min(s.best_age, ind.age);
        for (std::size_t o = 0; o < nobj; ++o) {
            const double v = ind.objectives[o];
            s.mean_objectives[o] += v;
            if (cfg.objectives[o].direction == Direction::Minimize)
                s.best_objectives[o] = std::min(s.best_objectives[o], v);
            else
                s.best_objectives[o] = std::max(s.best_objectives[o], v);
        }
    }
    s.mean_loss /= static_cast<double>(pop.size());
    for (std::size_t o = 0; o < nobj; ++o) s.mean_objectives[o] /= static_cast<double>(pop.size());
    s.events = std::move(events);
    return s;
}

EvolutionResult run_generations(const EvolutionConfig& cfg, std::vector<Individual> pop,
                                Rng rng, std::uint64_t next_id, int first_generation,
                                const GenerationObserver& observer) {
    EvolutionResult result;
    auto track_best_ever = [&](const std::vector<Individual>& p) {
        for (const auto& ind : p) {
            if (ind.comparison_loss < result.log.best_ever_loss) {
                result.log.best_ever_loss = ind.comparison_loss;
                result.log.best_ever_id = ind.genome.id;
            }
        }
    };
    track_best_ever(pop);

    for (int g = first_generation; g <= cfg.generations; ++g) {
        GenerationEvents events = afpo_generation(pop, cfg, rng, next_id);
        track_best_ever(pop);
        result.log.rows.push_back(make_stats(g, pop, cfg, events));
        if (observer) observer(g, pop, result.log.rows.back().events);
        if (cfg.checkpoint_every > 0 && !cfg.checkpoint_dir.empty() &&
            g % cfg.checkpoint_every == 0) {
            char name[32];
            std::snprintf(name, sizeof name, "checkpoint_%06d.json", g);
            save_checkpoint(cfg.checkpoint_dir + "/" + name, g, pop, rng, next_id);
        }
    }

    const Individual* champion = &pop.front();
    for (const auto& ind : pop) {
        if (ind.comparison_loss < champion->comparison_loss ||
            (ind.comparison_loss == champion->comparison_loss &&
             (ind.age < champion->age ||
              (ind.age == champion->age && ind.genome.id < champion->genome.id))))
            champion = &ind;
    }
    result.champion = *champion;
    return result;
}

}  // namespace

Genome random_genome(Rng& rng, std::uint64_t id) {
    Genome g;
    for (int i = 0; i < kGenomeParams; ++i) g.set_param(i, rng.uniform(-1.0, 1.0));
    g.id = id;
    return g;
}

Genome mutate(const Genome& parent, Rng& rng, std::uint64_t child_id) {
    Genome child = parent;
    const int idx = static_cast<int>(rng.below(kGenomeParams));
    child.set_param(idx, clamp_unit(child.param(idx) + rng.gaussian(0.0, 0.5)));
    child.id = child_id;
    child.parent_id = parent.id;
    return child;
}

bool dominates(const Individual& a, const Individual& b, const std::vector<ObjectiveSpec>& specs) {
    if (a.objectives.size() != specs.size() || b.objectives.size() != specs.size())
        throw std::invalid_argument("dominates: objective vectors do not match the spec list");
    bool strictly_better = false;
    for (std::size_t o = 0; o < specs.size(); ++o) {
        const double va = a.objectives[o], vb = b.objectives[o];
        if (specs[o].direction == Direction::Minimize) {
            if (va > vb) return false;
            if (va < vb) strictly_better = true;
        } else {
            if (va < vb) return false;
            if (va > vb) strictly_better = true;
        }
    }
    return strictly_better;
}

void evaluate_individual(Individual& ind, const EvolutionConfig& config) {
    const RolloutTrace trace = rollout(ind.genome, config.grid_size, config.steps,
                                       /*record_grids=*/true, config.step_options);
    ind.objectives.assign(config.objectives.size(), 0.0);
    ind.objectives[0] = ind.age;
    for (std::size_t o = 1; o < config.objectives.size(); ++o)
        ind.objectives[o] = evaluate_objective(config.objectives[o], trace, config.target);
    ind.comparison_loss = loss(trace, config.target, 0, config.steps);
    ind.evaluated = true;
}

GenerationEvents afpo_generation(std::vector<Individual>& population, const EvolutionConfig& config,
                                 Rng& rng, std::uint64_t& next_genome_id) {
    validate_config(config);
    for (const auto& ind : population)
        if (!ind.evaluated) throw std::invalid_argument("afpo_generation: unevaluated individual");

    const std::size_t parents = population.size();
    population.reserve(parents * 2 + 1);
    for (std::size_t p = 0; p < parents; ++p) {
        Individual child;
        child.genome = mutate(population[p].genome, rng, next_genome_id++);
        child.age = population[p].age;  // lineage age
        population.push_back(std::move(child));
    }
    Individual newcomer;
    newcomer.genome = random_genome(rng, next_genome_id++);
    newcomer.age = 0;
    GenerationEvents events;
    events.injected_id = newcomer.genome.id;
    population.push_back(std::move(newcomer));

    evaluate_population(population, config);
    sync_age_objective(population);

    const std::size_t target_size = static_cast<std::size_t>(config.population_size);
    while (population.size() > target_size) {
        const int retries = kContractionRetryFactor * static_cast<int>(population.size());
        bool removed = false;
        for (int attempt = 0; attempt < retries && !removed; ++attempt) {
            const auto [i, j] = draw_distinct(rng, population.size());
            if (dominates(population[i], population[j], config.objectives)) {
                population.erase(population.begin() + static_cast<std::ptrdiff_t>(j));
                removed = true;
            } else if (dominates(population[j], population[i], config.objectives)) {
                population.erase(population.begin() + static_cast<std::ptrdiff_t>(i));
                removed = true;
            } else if (identical_objectives(population[i], population[j])) {
                const std::size_t victim = rng.below(2) ? i : j;
                population.erase(population.begin() + static_cast<std::ptrdiff_t>(victim));
                removed = true;
            }
        }
        if (!removed) {
            // Escape hatch: no removable pair surfaced. Drop a random member of
            // the oldest dominated cohort, or anyone if the set is a clean front.
            ++events.escape_hatch_firings;
            const auto dominated = dominated_flags(population, config.objectives);
            int max_age = -1;
            for (std::size_t i = 0; i < population.size(); ++i)
                if (dominated[i]) max_age = std::max(max_age, population[i].age);
            std::vector<std::size_t> candidates;
            for (std::size_t i = 0; i < population.size(); ++i)
                if (dominated[i] && population[i].age == max_age) candidates.push_back(i);
            const std::size_t victim = candidates.empty()
                                           ? rng.below(population.size())
                                           : candidates[rng.below(candidates.size())];
            population.erase(population.begin() + static_cast<std::ptrdiff_t>(victim));
        }
    }

    const auto dominated = dominated_flags(population, config.objectives);
    for (std::size_t i = 0; i < population.size(); ++i)
        if (dominated[i]) events.retained_dominated_ids.push_back(population[i].genome.id);

    for (auto& ind : population) ++ind.age;
    sync_age_objective(population);
    return events;
}

std::vector<Individual> seed_population(const std::vector<Genome>& champions,
                                        const EvolutionConfig& config, Rng& rng,
                                        std::uint64_t& next_genome_id) {
    if (champions.empty())
        throw std::invalid_argument("seed_population: need at least one champion");
    std::vector<Individual> pop;
    pop.reserve(static_cast<std::size_t>(config.population_size));
    const std::size_t verbatim =
        std::min(champions.size(), static_cast<std::size_t>(config.population_size));
    for (std::size_t i = 0; i < verbatim; ++i) {
        Individual ind;
        ind.genome = champions[i];
        ind.genome.id = next_genome_id++;
        ind.genome.parent_id.reset();
        ind.age = 0;
        pop.push_back(std::move(ind));
    }
    std::size_t source = 0;
    while (pop.size() < static_cast<std::size_t>(config.population_size)) {
        Individual ind;
        ind.genome = mutate(pop[source % verbatim].genome, rng, next_genome_id++);
        ind.age = 0;
        pop.push_back(std::move(ind));
        ++source;
    }
    return pop;
}

EvolutionResult evolve(const EvolutionConfig& config, const GenerationObserver& observer) {
    validate_config(config);
    Rng rng(config.master_seed);
    std::uint64_t next_id = 0;

    std::vector<Individual> pop;
    if (!config.seed_genomes.empty()) {
        pop = seed_population(config.seed_genomes, config, rng, next_id);
    } else {
        pop.reserve(static_cast<std::size_t>(config.population_size));
        for (int i = 0; i < config.population_size; ++i) {
            Individual ind;
            ind.genome = random_genome(rng, next_id++);
            ind.age = 0;
            pop.push_back(std::move(ind));
        }
    }
    evaluate_population(pop, config);
    sync_age_objective(pop);
    return run_generations(config, std::move(pop), rng, next_id, 1, observer);
}

void save_checkpoint(const std::string& path, int generation,
                     const std::vector<Individual>& population, const Rng& rng,
                     std::uint64_t next_genome_id) {
    nlohmann::json j;
    j["generation"] = generation;
    j["rng_state"] = rng.state();
    j["next_genome_id"] = next_genome_id;
    nlohmann::json pop = nlohmann::json::array();
    for (const auto& ind : population) pop.push_back(individual_to_json(ind));
    j["population"] = pop;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out << j.dump() << "\n";
}

EvolutionResult evolve_resume(const EvolutionConfig& config, const std::string& checkpoint_path,
                              const GenerationObserver& observer) {
    validate_config(config);
    std::ifstream in(checkpoint_path);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + checkpoint_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("checkpoint parse failure: ") + e.what());
    }
    const int generation = j.at("generation").get<int>();
    Rng rng(0);
    rng.set_state(j.at("rng_state").get<std::uint64_t>());
    std::uint64_t next_id = j.at("next_genome_id").get<std::uint64_t>();
    std::vector<Individual> pop;
    for (const auto& item : j.at("population")) pop.push_back(individual_from_json(item));
    if (pop.size() != static_cast<std::size_t>(config.population_size))
        throw std::runtime_error("checkpoint population size does not match the config");
    return run_generations(config, std::move(pop), rng, next_id, generation + 1, observer);
}

}  // namespace ncalab
