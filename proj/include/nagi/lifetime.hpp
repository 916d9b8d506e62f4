#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "nagi/codec.hpp"
#include "nagi/environment.hpp"
#include "nagi/genome.hpp"
#include "nagi/network.hpp"

namespace nagi {

struct HealthParams {
    double h0 = 100.0;
    double r_reward = 0.1;    // per-step cost of a correct action
    double r_penalty = 0.4;   // per-step cost of a wrong action
    double k_size = 0.01;     // per-step cost per hidden neuron
    std::size_t sample_steps = 200;  // how long one sample is held
};

// Accumulated decrements never land exactly on zero in floating point, so
// death is declared at this epsilon instead.
inline constexpr double kDeathEpsilon = 1e-9;

struct AgentState {
    double health = 100.0;
    std::uint64_t lifetime = 0;
    bool reward_flag = false;
    bool penalty_flag = false;
};

inline bool dead(const AgentState& s) { return s.health <= kDeathEpsilon; }

// One step of metabolism: subtracts the reward or penalty cost plus the
// network-size cost, and advances the lifetime counter.
void health_step(AgentState& state, std::size_t n_hidden, const HealthParams& params);

// Anything that can pick an action each step. The network-backed source lives
// here too; scripted sources stand in for it in tests.
class ActionSource {
public:
    virtual ~ActionSource() = default;
    // One environment step: observe (sample, previous reward/penalty flags),
    // return the chosen action.
    virtual int act(const Sample& sample, bool reward, bool penalty) = 0;
    virtual std::size_t hidden_count() const = 0;
};

struct EvaluationConfig {
    SimConfig sim;
    CodecParams codec;
    HealthParams health;
    int n_trials = 3;
};

// Drives a spiking network for one environment step per act() call:
// stochastic spike encoding in, windowed spike-count decoding out.
class NetworkActionSource : public ActionSource {
public:
    NetworkActionSource(const Genome& genome, std::uint64_t weight_seed,
                        const SimConfig& sim, const CodecParams& codec, int action_count);

    int act(const Sample& sample, bool reward, bool penalty) override;
    std::size_t hidden_count() const override { return net_.hidden_count(); }

    const NetworkPhenotype& network() const { return net_; }
    const SpikeVector& last_output() const { return last_output_; }

private:
    NetworkPhenotype net_;
    SpikeCountWindow window_;
    RngStream encoder_rng_;
    double p_max_;
    SpikeVector last_output_;
};

struct LifetimeStep {
    std::uint64_t step;  // 1-based
    std::size_t spec_index;
    std::uint64_t cycle;
    const Sample* sample;
    int action;
    bool reward;
    bool penalty;
    double health;
};

using StepObserver = std::function<void(const LifetimeStep&)>;

// The agent's whole life: stream samples from the schedule, hold each for
// sample_steps steps, feed back reward/penalty with a one-step delay, drain
// health every step. Returns steps survived.
std::uint64_t run_lifetime(ActionSource& agent, const GenerationSchedule& schedule,
                           const HealthParams& params, const StepObserver* observer = nullptr);

// Lifetime of one genome with freshly drawn weights. Deterministic in
// (genome, schedule, weight_seed, config).
std::uint64_t evaluate(const Genome& genome, const GenerationSchedule& schedule,
                       std::uint64_t weight_seed, const EvaluationConfig& config,
                       const StepObserver* observer = nullptr);

std::uint64_t trial_weight_seed(std::uint64_t master_seed, std::uint64_t epoch,
                                std::uint64_t genome_id, int trial);

// Mean lifetime over n_trials independent weight draws.
double fitness(const Genome& genome, const GenerationSchedule& schedule,
               std::uint64_t master_seed, std::uint64_t epoch, std::uint64_t genome_id,
               const EvaluationConfig& config);

}  // namespace nagi
