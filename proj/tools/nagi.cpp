#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nagi/config.hpp"
#include "nagi/environment.hpp"
#include "nagi/evolution.hpp"
#include "nagi/genome_io.hpp"
#include "nagi/lifetime.hpp"
#include "nagi/metrics.hpp"

namespace fs = std::filesystem;
using namespace nagi;

namespace {

constexpr int kExitError = 1;
constexpr int kExitConfig = 2;

const char* action_name(int action) {
    return action == kActionEat ? "eat" : "avoid";
}

int resolve_workers(int cli_workers, int config_workers) {
    if (cli_workers > 0) return cli_workers;
    if (const char* env = std::getenv("NAGI_WORKERS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) return n;
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring invalid NAGI_WORKERS=" << env << "\n";
    }
    return config_workers;
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            std::optional<std::string> out_dir, int cli_workers) {
    RunConfig cfg;
    try {
        cfg = load_run_config(config_path);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    if (seed) cfg.master_seed = *seed;
    if (out_dir) cfg.out_dir = *out_dir;
    cfg.workers = resolve_workers(cli_workers, cfg.workers);

    const fs::path out(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) {
        std::cerr << "error: cannot create " << out.string() << ": " << ec.message() << "\n";
        return kExitError;
    }

    {
        std::ofstream resolved(out / "config.resolved.json");
        resolved << resolved_config_json(cfg);
        if (!resolved) {
            std::cerr << "error: write failed: " << (out / "config.resolved.json").string()
                      << "\n";
            return kExitError;
        }
    }

    GenerationObserver observer = [&](const GenerationStats& s) {
        ChampionMeta meta;
        meta.generation = s.generation;
        meta.genome_id = s.champion_id;
        meta.fitness = s.best_fitness;
        meta.schedule_seed = s.schedule_seed;
        meta.weight_seeds = s.champion_weight_seeds;
        save_genome_file(out / ("champion_gen_" + std::to_string(s.generation) + ".json"),
                         s.champion, meta);
        std::cout << "generation " << s.generation << " best " << format_double(s.best_fitness)
                  << " mean " << format_double(s.mean_fitness) << " species "
                  << s.species_count << "\n";
    };

    RunResult result;
    try {
        result = run_evolution(cfg.engine, cfg.master_seed, cfg.workers, &observer);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    write_metrics(result.history, out / "metrics.csv");
    std::cout << "wrote " << (out / "metrics.csv").string() << "\n";
    return 0;
}

struct TraceWriter {
    std::ofstream file;
    const NetworkActionSource* agent = nullptr;
    std::vector<std::uint64_t> innovations;
    bool header_written = false;
    std::uint64_t rows = 0;

    void write_header(std::size_t n_outputs) {
        file << "step,spec,cycle,label,action,reward,penalty,health";
        for (std::size_t i = 0; i < n_outputs; ++i) file << ",spike_out" << i;
        for (std::uint64_t innov : innovations) file << ",w_" << innov;
        file << "\n";
        header_written = true;
    }

    void row(const LifetimeStep& step) {
        if (!header_written) write_header(agent->last_output().size());
        file << step.step << ',' << step.spec_index << ',' << step.cycle << ','
             << action_name(step.sample->label) << ',' << action_name(step.action) << ','
             << (step.reward ? 1 : 0) << ',' << (step.penalty ? 1 : 0) << ','
             << format_double(step.health);
        for (std::uint8_t s : agent->last_output()) file << ',' << int(s);
        for (const Synapse& syn : agent->network().synapses)
            file << ',' << format_double(syn.magnitude);
        file << "\n";
        ++rows;
    }
};

int cmd_eval(const std::string& genome_path, const std::string& config_path,
             std::optional<std::uint64_t> env_seed,
             std::optional<std::uint64_t> weight_seed,
             const std::string& trace_path) {
    RunConfig cfg;
    try {
        cfg = load_run_config(config_path);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    std::optional<ChampionMeta> meta;
    Genome genome;
    try {
        genome = load_genome_file(genome_path, &meta);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    std::uint64_t schedule_seed;
    if (env_seed) {
        schedule_seed = *env_seed;
    } else if (meta) {
        schedule_seed = meta->schedule_seed;
    } else {
        std::cerr << "error: need --env-seed (genome file carries no meta block)\n";
        return kExitConfig;
    }
    std::vector<std::uint64_t> weight_seeds;
    if (weight_seed) {
        weight_seeds.push_back(*weight_seed);
    } else if (meta && !meta->weight_seeds.empty()) {
        weight_seeds = meta->weight_seeds;
    } else {
        std::cerr << "error: need --weight-seed (genome file carries no meta block)\n";
        return kExitConfig;
    }

    GenerationSchedule schedule;
    try {
        schedule = generate_schedule(schedule_seed, cfg.engine.env);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }

    double total = 0.0;
    for (std::size_t t = 0; t < weight_seeds.size(); ++t) {
        NetworkActionSource agent(genome, weight_seeds[t], cfg.engine.eval.sim,
                                  cfg.engine.eval.codec, cfg.engine.env.action_count);

        TraceWriter trace;
        const bool tracing = !trace_path.empty() && t == 0;
        if (tracing) {
            trace.file.open(trace_path);
            if (!trace.file) {
                std::cerr << "error: cannot open " << trace_path << " for writing\n";
                return kExitError;
            }
            trace.agent = &agent;
            for (const ConnectionGene& c : genome.connections)
                if (c.enabled) trace.innovations.push_back(c.innovation);
        }

        // Per-sample action tally, printed as the log.
        const std::size_t sample_steps = cfg.engine.eval.health.sample_steps;
        struct SampleLog {
            std::size_t spec;
            int label;
            std::size_t counts[2] = {0, 0};
        };
        std::vector<SampleLog> log;
        StepObserver observer = [&](const LifetimeStep& step) {
            const std::size_t sample_idx =
                static_cast<std::size_t>((step.step - 1) / sample_steps);
            if (sample_idx >= log.size())
                log.push_back({step.spec_index, step.sample->label, {0, 0}});
            ++log[sample_idx].counts[step.action == kActionEat ? 0 : 1];
            if (tracing) trace.row(step);
        };

        std::uint64_t lifetime;
        try {
            lifetime = run_lifetime(agent, schedule, cfg.engine.eval.health, &observer);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitError;
        }
        total += static_cast<double>(lifetime);

        std::cout << "weight_seed " << weight_seeds[t] << "\n";
        for (std::size_t i = 0; i < log.size(); ++i) {
            std::cout << "  sample " << i << " spec " << log[i].spec << " label "
                      << action_name(log[i].label) << " eat " << log[i].counts[0]
                      << " avoid " << log[i].counts[1] << "\n";
        }
        std::cout << "lifetime " << lifetime << "\n";
    }
    if (weight_seeds.size() > 1) {
        std::cout << "mean_lifetime "
                  << format_double(total / static_cast<double>(weight_seeds.size())) << "\n";
    }
    return 0;
}

int cmd_inspect(const std::string& genome_path) {
    std::optional<ChampionMeta> meta;
    Genome genome;
    try {
        genome = load_genome_file(genome_path, &meta);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    std::cout << "nodes " << genome.nodes.size() << " (input "
              << genome.count_kind(NodeKind::Input) << ", hidden "
              << genome.count_kind(NodeKind::Hidden) << ", output "
              << genome.count_kind(NodeKind::Output) << ")\n";
    std::size_t enabled = 0;
    for (const ConnectionGene& c : genome.connections)
        if (c.enabled) ++enabled;
    std::cout << "connections " << genome.connections.size() << " (" << enabled
              << " enabled)\n";
    for (const NodeGene& n : genome.nodes) {
        std::cout << "node " << n.id << " " << to_string(n.kind);
        if (n.kind != NodeKind::Input) {
            std::cout << " " << to_string(n.neurotransmitter) << " "
                      << to_string(n.plasticity_kind) << " a+ " << format_double(n.a_plus)
                      << " a- " << format_double(n.a_minus);
        }
        std::cout << "\n";
    }
    for (const ConnectionGene& c : genome.connections) {
        std::cout << "conn " << c.innovation << ": " << c.in_node << " -> " << c.out_node
                  << (c.enabled ? "" : " (disabled)") << "\n";
    }
    if (meta) {
        std::cout << "meta: generation " << meta->generation << " genome " << meta->genome_id
                  << " fitness " << format_double(meta->fitness) << " schedule_seed "
                  << meta->schedule_seed << " trials " << meta->weight_seeds.size() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Neuroevolution of self-learning spiking networks"};
    app.require_subcommand(1);

    std::string config_path, genome_path, trace_path, out_dir_raw;
    std::uint64_t seed_raw = 0, env_seed_raw = 0, weight_seed_raw = 0;
    int workers = 0;

    CLI::App* run = app.add_subcommand("run", "Run evolution from a config file");
    run->add_option("--config", config_path, "Run config (JSON)")->required();
    CLI::Option* seed_opt = run->add_option("--seed", seed_raw, "Master seed override");
    CLI::Option* out_opt = run->add_option("--out", out_dir_raw, "Output directory override");
    run->add_option("--workers", workers, "Evaluation threads (or NAGI_WORKERS)");

    CLI::App* eval = app.add_subcommand("eval", "Replay one genome's lifetime");
    eval->add_option("--genome", genome_path, "Genome file (JSON)")->required();
    eval->add_option("--config", config_path, "Run config (JSON)")->required();
    CLI::Option* env_opt =
        eval->add_option("--env-seed", env_seed_raw, "Environment schedule seed");
    CLI::Option* weight_opt =
        eval->add_option("--weight-seed", weight_seed_raw, "Synapse magnitude seed");
    eval->add_option("--trace", trace_path, "Per-step trace CSV path");

    CLI::App* inspect = app.add_subcommand("inspect", "Pretty-print a genome file");
    inspect->add_option("--genome", genome_path, "Genome file (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return cmd_run(config_path,
                           seed_opt->count() ? std::optional(seed_raw) : std::nullopt,
                           out_opt->count() ? std::optional(out_dir_raw) : std::nullopt,
                           workers);
        }
        if (eval->parsed()) {
            return cmd_eval(genome_path, config_path,
                            env_opt->count() ? std::optional(env_seed_raw) : std::nullopt,
                            weight_opt->count() ? std::optional(weight_seed_raw)
                                                : std::nullopt,
                            trace_path);
        }
        return cmd_inspect(genome_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}
