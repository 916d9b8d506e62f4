#include "nagi/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace nagi {

namespace {

using json = nlohmann::ordered_json;

std::size_t line_of_byte(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

// Pulls typed values out of one JSON object while tracking which keys were
// consumed, so leftovers can be reported by path.
class Block {
public:
    Block(const json& obj, std::string path) : obj_(&obj), path_(std::move(path)) {
        if (!obj.is_object()) throw ConfigError(path_ + ": expected an object");
    }

    template <typename T>
    void get(const char* key, T& out) {
        if (!obj_->contains(key)) return;
        seen_.push_back(key);
        try {
            out = obj_->at(key).get<T>();
        } catch (const nlohmann::json::exception&) {
            throw ConfigError(path_ + "/" + key + ": wrong type");
        }
        if constexpr (std::is_floating_point_v<T>) {
            if (!std::isfinite(out)) throw ConfigError(path_ + "/" + key + ": not finite");
        }
    }

    bool has(const char* key) const { return obj_->contains(key); }

    const json& sub(const char* key) {
        seen_.push_back(key);
        return obj_->at(key);
    }

    // Call last: anything not consumed is an unknown key.
    void finish() const {
        for (auto it = obj_->begin(); it != obj_->end(); ++it) {
            const std::string& k = it.key();
            bool known = false;
            for (const std::string& s : seen_) {
                if (s == k) { known = true; break; }
            }
            if (!known) throw ConfigError(path_ + "/" + k + ": unknown key");
        }
    }

    const std::string& path() const { return path_; }

private:
    const json* obj_;
    std::string path_;
    std::vector<std::string> seen_;
};

void check(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config parse error at line " +
                          std::to_string(line_of_byte(text, e.byte)) + ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
        // Overflowing numbers surface as out_of_range, without a byte offset.
        throw ConfigError(std::string("config parse error: ") + e.what());
    }

    RunConfig cfg;
    Block root(doc, "");
    root.get("master_seed", cfg.master_seed);
    root.get("out_dir", cfg.out_dir);
    root.get("workers", cfg.workers);

    SimConfig& sim = cfg.engine.eval.sim;
    if (root.has("neuron")) {
        Block b(root.sub("neuron"), "/neuron");
        b.get("a", sim.izhikevich.a);
        b.get("b", sim.izhikevich.b);
        b.get("c", sim.izhikevich.c);
        b.get("d", sim.izhikevich.d);
        b.get("spike_threshold", sim.izhikevich.spike_threshold);
        b.finish();
    }
    if (root.has("synapse")) {
        Block b(root.sub("synapse"), "/synapse");
        b.get("i_scale", sim.synapse.i_scale);
        b.get("w_max", sim.synapse.w_max);
        b.get("w_init_lo", sim.synapse.w_init_lo);
        b.get("w_init_hi", sim.synapse.w_init_hi);
        b.finish();
    }
    if (root.has("plasticity")) {
        Block b(root.sub("plasticity"), "/plasticity");
        b.get("tau_plus", sim.plasticity.tau_plus);
        b.get("tau_minus", sim.plasticity.tau_minus);
        b.get("sigma_plus", sim.plasticity.sigma_plus);
        b.get("sigma_minus", sim.plasticity.sigma_minus);
        b.get("a_min", sim.plasticity.a_min);
        b.get("a_max", sim.plasticity.a_max);
        b.get("w_cap", sim.plasticity.w_cap);
        b.finish();
    }
    if (root.has("codec")) {
        Block b(root.sub("codec"), "/codec");
        b.get("p_max", cfg.engine.eval.codec.p_max);
        b.get("window_len", cfg.engine.eval.codec.window_len);
        b.finish();
    }
    if (root.has("health")) {
        Block b(root.sub("health"), "/health");
        HealthParams& h = cfg.engine.eval.health;
        b.get("h0", h.h0);
        b.get("r_reward", h.r_reward);
        b.get("r_penalty", h.r_penalty);
        b.get("k_size", h.k_size);
        b.get("sample_steps", h.sample_steps);
        b.finish();
    }
    if (root.has("environment")) {
        Block b(root.sub("environment"), "/environment");
        EnvironmentConfig& e = cfg.engine.env;
        std::string variant = to_string(e.variant);
        b.get("variant", variant);
        try {
            e.variant = environment_variant_from_string(variant);
        } catch (const std::invalid_argument& ex) {
            throw ConfigError(std::string("/environment/variant: ") + ex.what());
        }
        b.get("dataset_size", e.dataset_size);
        b.get("specs_per_cycle", e.specs_per_cycle);
        b.get("eat_fraction_lo", e.eat_fraction_lo);
        b.get("eat_fraction_hi", e.eat_fraction_hi);
        b.get("action_count", e.action_count);
        b.finish();
    }
    if (root.has("evolution")) {
        Block b(root.sub("evolution"), "/evolution");
        EvolutionParams& ev = cfg.engine.evolution;
        b.get("population_size", ev.population_size);
        b.get("generations", ev.generations);
        b.get("elitism", ev.elitism);
        b.get("survival_fraction", ev.survival_fraction);
        b.get("stagnation_limit", ev.stagnation_limit);
        b.get("compatibility_threshold", ev.compatibility_threshold);
        b.get("c1", ev.compatibility.c1);
        b.get("c2", ev.compatibility.c2);
        b.get("c3", ev.compatibility.c3);
        b.get("n_trials", cfg.engine.eval.n_trials);
        b.get("frozen_schedule", ev.frozen_schedule);
        b.finish();
    }
    if (root.has("mutation")) {
        Block b(root.sub("mutation"), "/mutation");
        MutationRates& m = cfg.engine.evolution.mutation;
        b.get("add_connection", m.add_connection);
        b.get("add_node", m.add_node);
        b.get("toggle_enable", m.toggle_enable);
        b.get("flip_neurotransmitter", m.flip_neurotransmitter);
        b.get("switch_plasticity", m.switch_plasticity);
        b.get("perturb_amplitudes", m.perturb_amplitudes);
        b.get("perturb_sigma", m.perturb_sigma);
        b.finish();
    }
    root.finish();

    cfg.engine.evolution.amplitudes.lo = sim.plasticity.a_min;
    cfg.engine.evolution.amplitudes.hi = sim.plasticity.a_max;

    // Semantic checks, each naming the key it rejects.
    const EnvironmentConfig& e = cfg.engine.env;
    const HealthParams& h = cfg.engine.eval.health;
    const EvolutionParams& ev = cfg.engine.evolution;
    check(cfg.workers >= 1, "/workers: must be >= 1");
    check(sim.izhikevich.a > 0.0, "/neuron/a: must be positive");
    check(sim.synapse.i_scale > 0.0, "/synapse/i_scale: must be positive");
    check(sim.synapse.w_max > 0.0, "/synapse/w_max: must be positive");
    check(sim.synapse.w_init_lo >= 0.0, "/synapse/w_init_lo: must be >= 0");
    check(sim.synapse.w_init_hi >= sim.synapse.w_init_lo,
          "/synapse/w_init_hi: must be >= w_init_lo");
    check(sim.synapse.w_init_hi <= sim.synapse.w_max,
          "/synapse/w_init_hi: must be <= w_max");
    check(sim.plasticity.tau_plus > 0.0, "/plasticity/tau_plus: must be positive");
    check(sim.plasticity.tau_minus > 0.0, "/plasticity/tau_minus: must be positive");
    check(sim.plasticity.sigma_plus > 0.0, "/plasticity/sigma_plus: must be positive");
    check(sim.plasticity.sigma_minus > sim.plasticity.sigma_plus,
          "/plasticity/sigma_minus: must exceed sigma_plus");
    check(sim.plasticity.a_min > 0.0, "/plasticity/a_min: must be positive");
    check(sim.plasticity.a_max >= sim.plasticity.a_min,
          "/plasticity/a_max: must be >= a_min");
    check(sim.plasticity.w_cap > 0.0, "/plasticity/w_cap: must be positive");
    check(cfg.engine.eval.codec.p_max > 0.0 && cfg.engine.eval.codec.p_max <= 1.0,
          "/codec/p_max: must be in (0, 1]");
    check(cfg.engine.eval.codec.window_len >= 1, "/codec/window_len: must be >= 1");
    check(h.h0 > 0.0, "/health/h0: must be positive");
    check(h.r_reward > 0.0, "/health/r_reward: must be positive");
    check(h.r_penalty > 0.0, "/health/r_penalty: must be positive");
    check(h.k_size >= 0.0, "/health/k_size: must be >= 0");
    check(h.sample_steps >= 1, "/health/sample_steps: must be >= 1");
    check(e.dataset_size >= 2, "/environment/dataset_size: must be >= 2");
    check(e.variant != EnvironmentVariant::Binary1D || e.dataset_size % 2 == 0,
          "/environment/dataset_size: binary1d needs an even dataset");
    check(e.specs_per_cycle >= 1, "/environment/specs_per_cycle: must be >= 1");
    check(e.eat_fraction_lo > 0.0 && e.eat_fraction_lo < 1.0,
          "/environment/eat_fraction_lo: must be in (0, 1)");
    check(e.eat_fraction_hi >= e.eat_fraction_lo && e.eat_fraction_hi < 1.0,
          "/environment/eat_fraction_hi: must be in [eat_fraction_lo, 1)");
    check(e.action_count == 2, "/environment/action_count: only 2 actions ship");
    check(ev.population_size >= 2, "/evolution/population_size: must be >= 2");
    check(ev.elitism >= 0, "/evolution/elitism: must be >= 0");
    check(ev.survival_fraction > 0.0 && ev.survival_fraction <= 1.0,
          "/evolution/survival_fraction: must be in (0, 1]");
    check(ev.stagnation_limit >= 1, "/evolution/stagnation_limit: must be >= 1");
    check(ev.compatibility_threshold > 0.0,
          "/evolution/compatibility_threshold: must be positive");
    check(cfg.engine.eval.n_trials >= 1, "/evolution/n_trials: must be >= 1");
    const MutationRates& m = ev.mutation;
    for (auto [value, name] : {std::pair<double, const char*>{m.add_connection, "add_connection"},
                               {m.add_node, "add_node"},
                               {m.toggle_enable, "toggle_enable"},
                               {m.flip_neurotransmitter, "flip_neurotransmitter"},
                               {m.switch_plasticity, "switch_plasticity"},
                               {m.perturb_amplitudes, "perturb_amplitudes"}}) {
        check(value >= 0.0 && value <= 1.0,
              std::string("/mutation/") + name + ": must be in [0, 1]");
    }
    check(m.perturb_sigma > 0.0, "/mutation/perturb_sigma: must be positive");
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_run_config(buffer.str());
}

std::string resolved_config_json(const RunConfig& cfg) {
    const SimConfig& sim = cfg.engine.eval.sim;
    const EnvironmentConfig& e = cfg.engine.env;
    const HealthParams& h = cfg.engine.eval.health;
    const EvolutionParams& ev = cfg.engine.evolution;
    const MutationRates& m = ev.mutation;
    json doc;
    doc["master_seed"] = cfg.master_seed;
    doc["out_dir"] = cfg.out_dir;
    doc["workers"] = cfg.workers;
    doc["neuron"] = {{"a", sim.izhikevich.a},
                     {"b", sim.izhikevich.b},
                     {"c", sim.izhikevich.c},
                     {"d", sim.izhikevich.d},
                     {"spike_threshold", sim.izhikevich.spike_threshold}};
    doc["synapse"] = {{"i_scale", sim.synapse.i_scale},
                      {"w_max", sim.synapse.w_max},
                      {"w_init_lo", sim.synapse.w_init_lo},
                      {"w_init_hi", sim.synapse.w_init_hi}};
    doc["plasticity"] = {{"tau_plus", sim.plasticity.tau_plus},
                         {"tau_minus", sim.plasticity.tau_minus},
                         {"sigma_plus", sim.plasticity.sigma_plus},
                         {"sigma_minus", sim.plasticity.sigma_minus},
                         {"a_min", sim.plasticity.a_min},
                         {"a_max", sim.plasticity.a_max},
                         {"w_cap", sim.plasticity.w_cap}};
    doc["codec"] = {{"p_max", cfg.engine.eval.codec.p_max},
                    {"window_len", cfg.engine.eval.codec.window_len}};
    doc["health"] = {{"h0", h.h0},
                     {"r_reward", h.r_reward},
                     {"r_penalty", h.r_penalty},
                     {"k_size", h.k_size},
                     {"sample_steps", h.sample_steps}};
    doc["environment"] = {{"variant", to_string(e.variant)},
                          {"dataset_size", e.dataset_size},
                          {"specs_per_cycle", e.specs_per_cycle},
                          {"eat_fraction_lo", e.eat_fraction_lo},
                          {"eat_fraction_hi", e.eat_fraction_hi},
                          {"action_count", e.action_count}};
    doc["evolution"] = {{"population_size", ev.population_size},
                        {"generations", ev.generations},
                        {"elitism", ev.elitism},
                        {"survival_fraction", ev.survival_fraction},
                        {"stagnation_limit", ev.stagnation_limit},
                        {"compatibility_threshold", ev.compatibility_threshold},
                        {"c1", ev.compatibility.c1},
                        {"c2", ev.compatibility.c2},
                        {"c3", ev.compatibility.c3},
                        {"n_trials", cfg.engine.eval.n_trials},
                        {"frozen_schedule", ev.frozen_schedule}};
    doc["mutation"] = {{"add_connection", m.add_connection},
                       {"add_node", m.add_node},
                       {"toggle_enable", m.toggle_enable},
                       {"flip_neurotransmitter", m.flip_neurotransmitter},
                       {"switch_plasticity", m.switch_plasticity},
                       {"perturb_amplitudes", m.perturb_amplitudes},
                       {"perturb_sigma", m.perturb_sigma}};
    return doc.dump(2) + "\n";
}

}  // namespace nagi
