#include "nagi/lifetime.hpp"

#include <stdexcept>

namespace nagi {

void health_step(AgentState& state, std::size_t n_hidden, const HealthParams& params) {
    double decrement = params.k_size * static_cast<double>(n_hidden);
    if (state.reward_flag) decrement += params.r_reward;
    if (state.penalty_flag) decrement += params.r_penalty;
    state.health -= decrement;
    ++state.lifetime;
}

NetworkActionSource::NetworkActionSource(const Genome& genome, std::uint64_t weight_seed,
                                         const SimConfig& sim, const CodecParams& codec,
                                         int action_count)
    : net_(build_phenotype(genome, weight_seed, sim)),
      window_(static_cast<std::size_t>(action_count), codec.window_len, kActionAvoid),
      encoder_rng_({weight_seed, stream_tag::kEncoder}),
      p_max_(codec.p_max) {
    if (net_.output_indices.size() != static_cast<std::size_t>(action_count)) {
        throw std::invalid_argument("NetworkActionSource: output count != action count");
    }
    if (net_.input_count < 4 || net_.input_count % 2 != 0) {
        throw std::invalid_argument("NetworkActionSource: input count is not 2k+2");
    }
}

int NetworkActionSource::act(const Sample& sample, bool reward, bool penalty) {
    SpikeVector input = encode_sample(sample.sensors, reward, penalty, encoder_rng_, p_max_);
    if (input.size() != net_.input_count) {
        throw std::invalid_argument("NetworkActionSource: sample arity does not match network");
    }
    last_output_ = net_.step(input);
    return decode_action(window_, last_output_);
}

std::uint64_t run_lifetime(ActionSource& agent, const GenerationSchedule& schedule,
                           const HealthParams& params, const StepObserver* observer) {
    SampleCursor cursor(schedule);
    AgentState state;
    state.health = params.h0;
    const std::size_t n_hidden = agent.hidden_count();

    for (;;) {
        const Sample& sample = cursor.next();
        state.reward_flag = false;
        state.penalty_flag = false;
        for (std::size_t hold = 0; hold < params.sample_steps; ++hold) {
            const int action = agent.act(sample, state.reward_flag, state.penalty_flag);
            state.reward_flag = (action == sample.label);
            state.penalty_flag = !state.reward_flag;
            health_step(state, n_hidden, params);
            if (observer) {
                (*observer)({state.lifetime, cursor.spec_index(), cursor.cycle(), &sample,
                             action, state.reward_flag, state.penalty_flag, state.health});
            }
            if (dead(state)) return state.lifetime;
        }
    }
}

std::uint64_t evaluate(const Genome& genome, const GenerationSchedule& schedule,
                       std::uint64_t weight_seed, const EvaluationConfig& config,
                       const StepObserver* observer) {
    NetworkActionSource agent(genome, weight_seed, config.sim, config.codec,
                              schedule.config.action_count);
    return run_lifetime(agent, schedule, config.health, observer);
}

std::uint64_t trial_weight_seed(std::uint64_t master_seed, std::uint64_t epoch,
                                std::uint64_t genome_id, int trial) {
    return derive_key({master_seed, stream_tag::kTrial, epoch, genome_id,
                       static_cast<std::uint64_t>(trial)});
}

double fitness(const Genome& genome, const GenerationSchedule& schedule,
               std::uint64_t master_seed, std::uint64_t epoch, std::uint64_t genome_id,
               const EvaluationConfig& config) {
    if (config.n_trials < 1) throw std::invalid_argument("fitness: n_trials must be >= 1");
    double total = 0.0;
    for (int trial = 0; trial < config.n_trials; ++trial) {
        total += static_cast<double>(evaluate(
            genome, schedule, trial_weight_seed(master_seed, epoch, genome_id, trial),
            config));
    }
    return total / static_cast<double>(config.n_trials);
}

}  // namespace nagi
