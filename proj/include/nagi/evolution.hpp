#pragma once

#include <cstdint>
#include <vector>

#include "nagi/environment.hpp"
#include "nagi/genome.hpp"
#include "nagi/lifetime.hpp"

namespace nagi {

struct EvolutionParams {
    std::size_t population_size = 100;
    std::uint64_t generations = 100;
    int elitism = 1;                  // per species
    double survival_fraction = 0.3;   // breeding pool share, per species
    std::uint64_t stagnation_limit = 15;
    double compatibility_threshold = 3.0;
    CompatibilityCoeffs compatibility;
    MutationRates mutation;
    AmplitudeBounds amplitudes;
    // Test hook: pins the schedule seed and the weight-seed epoch to
    // generation 0, so re-evaluating an elite reproduces its fitness exactly.
    bool frozen_schedule = false;
};

struct Individual {
    std::uint64_t id = 0;
    Genome genome;
    double fitness = 0.0;        // raw lifetime mean
    std::uint32_t species = 0;   // filled during the generation that scored it
};

struct GenerationStats {
    std::uint64_t generation = 0;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
    double median_fitness = 0.0;
    std::size_t species_count = 0;
    double mean_nodes = 0.0;
    double mean_connections = 0.0;
    std::uint64_t schedule_seed = 0;
    std::uint64_t champion_id = 0;
    std::vector<std::uint64_t> champion_weight_seeds;  // one per trial
    Genome champion;
};

struct EngineConfig {
    EnvironmentConfig env;
    EvaluationConfig eval;
    EvolutionParams evolution;
};

struct RunResult {
    std::vector<GenerationStats> history;  // one record per completed generation
    std::vector<Individual> population;    // last evaluated generation
};

// Optional per-generation callback (progress reporting, champion dumping).
using GenerationObserver = std::function<void(const GenerationStats&)>;

// The generational loop. Generation 0 is drawn as minimal genomes; each
// generation builds a fresh environment schedule, scores every genome
// (workers > 1 evaluates in parallel with identical results), speciates,
// shares fitness, retires stagnant species, and breeds the next population.
// Bit-reproducible in (config, master_seed) for any worker count.
// Throws std::runtime_error when every species has stagnated.
RunResult run_evolution(const EngineConfig& config, std::uint64_t master_seed, int workers,
                        const GenerationObserver* observer = nullptr);

// Total order used for ranking individuals: higher fitness first, then
// smaller genome, then lower id.
bool ranks_before(const Individual& a, const Individual& b);

}  // namespace nagi
