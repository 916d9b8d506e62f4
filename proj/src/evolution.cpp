#include "nagi/evolution.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace nagi {

bool ranks_before(const Individual& a, const Individual& b) {
    if (a.fitness != b.fitness) return a.fitness > b.fitness;
    if (a.genome.size() != b.genome.size()) return a.genome.size() < b.genome.size();
    return a.id < b.id;
}

namespace {

struct SpeciesRecord {
    std::uint32_t id = 0;
    Genome representative;
    double best_fitness = -std::numeric_limits<double>::infinity();
    std::uint64_t last_improved = 0;
};

void evaluate_population(std::vector<Individual>& pop, const GenerationSchedule& schedule,
                         std::uint64_t master_seed, std::uint64_t epoch,
                         const EvaluationConfig& eval, int workers) {
    const std::size_t n = pop.size();
    auto score_one = [&](std::size_t i) {
        pop[i].fitness =
            fitness(pop[i].genome, schedule, master_seed, epoch, pop[i].id, eval);
    };

    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) score_one(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                score_one(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    threads.reserve(count);
    for (std::size_t t = 0; t < count; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// Largest-remainder apportionment of population_size offspring slots across
// species, proportional to shares. The champion's species always gets >= 1.
std::vector<std::size_t> apportion(const std::vector<double>& shares, std::size_t total,
                                   std::size_t champion_slot) {
    const std::size_t k = shares.size();
    double sum = 0.0;
    for (double s : shares) sum += s;

    std::vector<std::size_t> quota(k, 0);
    std::vector<std::pair<double, std::size_t>> remainder;  // (-fraction, slot)
    std::size_t assigned = 0;
    for (std::size_t s = 0; s < k; ++s) {
        const double exact =
            sum > 0.0 ? shares[s] / sum * static_cast<double>(total)
                      : static_cast<double>(total) / static_cast<double>(k);
        quota[s] = static_cast<std::size_t>(exact);
        assigned += quota[s];
        remainder.emplace_back(-(exact - static_cast<double>(quota[s])), s);
    }
    std::sort(remainder.begin(), remainder.end());
    for (std::size_t r = 0; assigned < total; r = (r + 1) % k) {
        ++quota[remainder[r].second];
        ++assigned;
    }

    if (quota[champion_slot] == 0) {
        std::size_t donor = champion_slot;
        for (std::size_t s = 0; s < k; ++s) {
            if (quota[s] > quota[donor]) donor = s;
        }
        --quota[donor];
        ++quota[champion_slot];
    }
    return quota;
}

const Individual* tournament(const std::vector<const Individual*>& pool, RngStream& rng) {
    const Individual* a = pool[rng.uniform_index(pool.size())];
    const Individual* b = pool[rng.uniform_index(pool.size())];
    return ranks_before(*b, *a) ? b : a;
}

std::vector<Individual> reproduce_species(const std::vector<const Individual*>& ranked,
                                          std::size_t quota, InnovationRegistry& registry,
                                          RngStream& rng, const EvolutionParams& params,
                                          std::uint64_t& next_genome_id) {
    std::vector<Individual> offspring;
    offspring.reserve(quota);

    const std::size_t elites =
        std::min<std::size_t>({static_cast<std::size_t>(std::max(params.elitism, 0)),
                               quota, ranked.size()});
    for (std::size_t e = 0; e < elites; ++e) {
        offspring.push_back(*ranked[e]);  // id kept: the same individual carries over
    }

    const std::size_t pool_size = std::max<std::size_t>(
        1, static_cast<std::size_t>(
               std::ceil(static_cast<double>(ranked.size()) * params.survival_fraction)));
    std::vector<const Individual*> pool(ranked.begin(),
                                        ranked.begin() + static_cast<std::ptrdiff_t>(
                                                             std::min(pool_size, ranked.size())));

    while (offspring.size() < quota) {
        const Individual* p1 = tournament(pool, rng);
        const Individual* p2 = tournament(pool, rng);
        const Individual* fitter = ranks_before(*p2, *p1) ? p2 : p1;
        const Individual* other = fitter == p1 ? p2 : p1;
        Individual child;
        child.id = next_genome_id++;
        child.genome = crossover(fitter->genome, other->genome, rng);
        mutate(child.genome, registry, rng, params.mutation, params.amplitudes);
        offspring.push_back(std::move(child));
    }
    return offspring;
}

}  // namespace

RunResult run_evolution(const EngineConfig& config, std::uint64_t master_seed, int workers,
                        const GenerationObserver* observer) {
    const EvolutionParams& params = config.evolution;
    if (params.population_size < 2) {
        throw std::invalid_argument("run_evolution: population_size must be >= 2");
    }
    if (!(params.survival_fraction > 0.0 && params.survival_fraction <= 1.0)) {
        throw std::invalid_argument("run_evolution: survival_fraction must be in (0, 1]");
    }

    const std::size_t n_sensors = sensor_count(config.env.variant);
    const std::size_t n_actions = static_cast<std::size_t>(config.env.action_count);

    std::uint64_t next_genome_id = 0;
    std::vector<Individual> pop;
    pop.reserve(params.population_size);
    for (std::size_t i = 0; i < params.population_size; ++i) {
        RngStream rng({master_seed, stream_tag::kInitPopulation, i});
        Individual ind;
        ind.id = next_genome_id++;
        ind.genome = minimal_genome(n_sensors, n_actions, rng, params.amplitudes);
        pop.push_back(std::move(ind));
    }

    const Genome& proto = pop.front().genome;
    InnovationRegistry registry(proto.connections.back().innovation + 1,
                                proto.nodes.back().id + 1);

    std::vector<SpeciesRecord> species;
    std::uint32_t next_species_id = 0;

    RunResult result;
    result.history.reserve(params.generations);

    for (std::uint64_t g = 0; g < params.generations; ++g) {
        const std::uint64_t schedule_epoch = params.frozen_schedule ? 0 : g;
        const std::uint64_t schedule_seed =
            derive_key({master_seed, stream_tag::kSchedule, schedule_epoch});
        const GenerationSchedule schedule = generate_schedule(schedule_seed, config.env);

        evaluate_population(pop, schedule, master_seed, schedule_epoch, config.eval, workers);

        std::vector<const Genome*> genomes(pop.size());
        for (std::size_t i = 0; i < pop.size(); ++i) genomes[i] = &pop[i].genome;
        std::vector<const Genome*> reps(species.size());
        for (std::size_t s = 0; s < species.size(); ++s) reps[s] = &species[s].representative;
        const SpeciationResult spec =
            speciate(genomes, reps, params.compatibility_threshold, params.compatibility);

        for (std::size_t f : spec.founders) {
            SpeciesRecord rec;
            rec.id = next_species_id++;
            rec.representative = pop[f].genome;
            rec.last_improved = g;
            species.push_back(std::move(rec));
        }

        std::vector<std::vector<const Individual*>> members(species.size());
        for (std::size_t i = 0; i < pop.size(); ++i) {
            pop[i].species = species[spec.assignment[i]].id;
            members[spec.assignment[i]].push_back(&pop[i]);
        }

        // Drop species that attracted no members before any bookkeeping.
        {
            std::size_t w = 0;
            for (std::size_t s = 0; s < species.size(); ++s) {
                if (members[s].empty()) continue;
                if (w != s) {
                    species[w] = std::move(species[s]);
                    members[w] = std::move(members[s]);
                }
                ++w;
            }
            species.resize(w);
            members.resize(w);
        }

        for (auto& m : members) {
            std::sort(m.begin(), m.end(),
                      [](const Individual* a, const Individual* b) {
                          return ranks_before(*a, *b);
                      });
        }
        for (std::size_t s = 0; s < species.size(); ++s) {
            const double best = members[s].front()->fitness;
            if (best > species[s].best_fitness) {
                species[s].best_fitness = best;
                species[s].last_improved = g;
            }
        }

        std::size_t champion_index = 0;
        for (std::size_t i = 1; i < pop.size(); ++i) {
            if (ranks_before(pop[i], pop[champion_index])) champion_index = i;
        }
        const Individual& champion = pop[champion_index];

        GenerationStats stats;
        stats.generation = g;
        stats.schedule_seed = schedule_seed;
        stats.species_count = species.size();
        stats.champion_id = champion.id;
        stats.champion = champion.genome;
        stats.best_fitness = champion.fitness;
        for (int t = 0; t < config.eval.n_trials; ++t) {
            stats.champion_weight_seeds.push_back(
                trial_weight_seed(master_seed, schedule_epoch, champion.id, t));
        }
        {
            double fit_sum = 0.0, node_sum = 0.0, conn_sum = 0.0;
            std::vector<double> fits(pop.size());
            for (std::size_t i = 0; i < pop.size(); ++i) {
                fits[i] = pop[i].fitness;
                fit_sum += pop[i].fitness;
                node_sum += static_cast<double>(pop[i].genome.nodes.size());
                conn_sum += static_cast<double>(pop[i].genome.connections.size());
            }
            std::sort(fits.begin(), fits.end());
            const std::size_t n = fits.size();
            stats.mean_fitness = fit_sum / static_cast<double>(n);
            stats.median_fitness =
                n % 2 == 1 ? fits[n / 2] : 0.5 * (fits[n / 2 - 1] + fits[n / 2]);
            stats.mean_nodes = node_sum / static_cast<double>(n);
            stats.mean_connections = conn_sum / static_cast<double>(n);
        }
        if (observer) (*observer)(stats);
        result.history.push_back(std::move(stats));

        if (g + 1 == params.generations) break;

        // Retire stagnant species; the champion's species is immune.
        std::vector<char> stagnant(species.size(), 0);
        std::size_t stagnant_count = 0;
        for (std::size_t s = 0; s < species.size(); ++s) {
            if (g - species[s].last_improved >= params.stagnation_limit) {
                stagnant[s] = 1;
                ++stagnant_count;
            }
        }
        if (stagnant_count == species.size() && stagnant_count > 0) {
            throw std::runtime_error(
                "run_evolution: every species has stagnated; restart with a different "
                "seed, a higher stagnation limit, or a lower compatibility threshold");
        }
        const std::uint32_t champion_species = champion.species;
        {
            std::size_t w = 0;
            for (std::size_t s = 0; s < species.size(); ++s) {
                if (stagnant[s] && species[s].id != champion_species) continue;
                if (w != s) {
                    species[w] = std::move(species[s]);
                    members[w] = std::move(members[s]);
                }
                ++w;
            }
            species.resize(w);
            members.resize(w);
        }

        std::size_t champion_slot = 0;
        std::vector<double> shares(species.size(), 0.0);
        for (std::size_t s = 0; s < species.size(); ++s) {
            for (const Individual* m : members[s]) {
                shares[s] += m->fitness / static_cast<double>(members[s].size());
            }
            if (species[s].id == champion_species) champion_slot = s;
        }
        const std::vector<std::size_t> quotas =
            apportion(shares, params.population_size, champion_slot);

        registry.begin_generation();
        std::vector<Individual> next_pop;
        next_pop.reserve(params.population_size);
        std::vector<SpeciesRecord> next_species;
        for (std::size_t s = 0; s < species.size(); ++s) {
            RngStream rng({master_seed, stream_tag::kReproduction, g, species[s].id});
            std::vector<Individual> brood = reproduce_species(
                members[s], quotas[s], registry, rng, params, next_genome_id);
            for (auto& child : brood) next_pop.push_back(std::move(child));

            if (quotas[s] == 0) continue;  // extinct: no record carried forward
            RngStream rep_rng({master_seed, stream_tag::kRepresentative, g, species[s].id});
            SpeciesRecord rec = species[s];
            rec.representative =
                members[s][rep_rng.uniform_index(members[s].size())]->genome;
            next_species.push_back(std::move(rec));
        }
        species = std::move(next_species);
        pop = std::move(next_pop);
    }

    result.population = std::move(pop);
    return result;
}

}  // namespace nagi
