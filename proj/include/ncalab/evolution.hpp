#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "ncalab/genome.hpp"
#include "ncalab/objectives.hpp"
#include "ncalab/rng.hpp"
#include "ncalab/shapes.hpp"

namespace ncalab {

struct Individual {
    Genome genome;
    int age = 0;  // generations since the lineage was injected
    std::vector<double> objectives;
    bool evaluated = false;
    // Full-interval loss L(0, N): the comparison quantity used for champion
    // selection and run logs, identical across variants.
    double comparison_loss = std::numeric_limits<double>::infinity();
};

struct EvolutionConfig {
    int population_size = 100;
    int generations = 200;
    std::vector<ObjectiveSpec> objectives;  // first entry must be Age
    int grid_size = 25;
    int steps = 50;  // N
    StepOptions step_options;
    TargetShape target;
    std::uint64_t master_seed = 0;
    int workers = 1;
    std::vector<Genome> seed_genomes;  // non-empty: seeded initial population
    int checkpoint_every = 0;          // generations between checkpoints; 0 = off
    std::string checkpoint_dir;
};

// What happened inside one generation, for logging and invariant checks.
struct GenerationEvents {
    std::uint64_t injected_id = 0;
    int escape_hatch_firings = 0;
    // Survivors that are still dominated by another survivor once contraction
    // hit the size floor; retained because removal stops at exactly P.
    std::vector<std::uint64_t> retained_dominated_ids;
};

struct GenerationStats {
    int generation = 0;
    double best_loss = 0.0;
    double mean_loss = 0.0;
    std::vector<double> best_objectives;  // direction-aware best per spec
    std::vector<double> mean_objectives;
    int best_age = 0;  // minimum age in the population
    int population_size = 0;
    GenerationEvents events;
};

struct RunLog {
    std::vector<GenerationStats> rows;
    double best_ever_loss = std::numeric_limits<double>::infinity();
    std::uint64_t best_ever_id = 0;
};

struct EvolutionResult {
    Individual champion;
    RunLog log;
};

using GenerationObserver =
    std::function<void(int generation, const std::vector<Individual>&, const GenerationEvents&)>;

// All 55 parameters i.i.d. uniform in [-1, 1].
Genome random_genome(Rng& rng, std::uint64_t id);

// Copies the parent, then perturbs one uniformly chosen parameter with
// Gaussian noise (sigma = 0.5) clamped to [-1, 1].
Genome mutate(const Genome& parent, Rng& rng, std::uint64_t child_id);

// True iff a is no worse than b on every objective (direction-aware) and
// strictly better on at least one.
bool dominates(const Individual& a, const Individual& b, const std::vector<ObjectiveSpec>& specs);

// Evaluates one individual: rollout plus every non-Age objective, and the
// comparison loss. The Age slot is refreshed from the individual's age.
void evaluate_individual(Individual& ind, const EvolutionConfig& config);

// One AFPO generation: mutate every survivor, inject one random newcomer,
// evaluate, contract back to P by randomized dominance tournaments, then age
// every survivor by 1.
GenerationEvents afpo_generation(std::vector<Individual>& population, const EvolutionConfig& config,
                                 Rng& rng, std::uint64_t& next_genome_id);

// Population of size P: the champions verbatim at age 0, the remainder
// single-mutation variants of the champions round-robin.
std::vector<Individual> seed_population(const std::vector<Genome>& champions,
                                        const EvolutionConfig& config, Rng& rng,
                                        std::uint64_t& next_genome_id);

// Runs G generations from a random (or seeded) population. Deterministic in
// master_seed for any worker count.
EvolutionResult evolve(const EvolutionConfig& config, const GenerationObserver& observer = {});

// Checkpoint persistence: full population plus RNG/id state for exact resume.
void save_checkpoint(const std::string& path, int generation,
                     const std::vector<Individual>& population, const Rng& rng,
                     std::uint64_t next_genome_id);
EvolutionResult evolve_resume(const EvolutionConfig& config, const std::string& checkpoint_path,
                              const GenerationObserver& observer = {});

}  // namespace ncalab
