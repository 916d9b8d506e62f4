#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nagi/network.hpp"
#include "nagi/rng.hpp"

namespace nagi {

struct CodecParams {
    double p_max = 0.1;          // per-step spike probability at full drive
    std::size_t window_len = 20;  // decode window, steps
};

// Bernoulli(x * p_max) draw: discrete-time stand-in for Poisson rate coding.
// x must lie in [0, 1]; x = 0 never spikes.
bool encode_value(double x, RngStream& rng, double p_max);

// Complement-coded sensors plus reward and penalty flag channels, in the
// order [s1, 1-s1, s2, 1-s2, ..., reward, penalty].
SpikeVector encode_sample(const std::vector<double>& sensors, bool reward, bool penalty,
                          RngStream& rng, double p_max);

constexpr std::size_t channel_count(std::size_t sensor_count) {
    return 2 * sensor_count + 2;
}

// Trailing spike counts per output over the last window_len steps.
class SpikeCountWindow {
public:
    SpikeCountWindow(std::size_t action_count, std::size_t window_len, int default_action);

    void push(const SpikeVector& output_spikes);

    const std::vector<std::uint64_t>& counts() const { return counts_; }
    int current_action() const { return current_action_; }
    std::size_t window_len() const { return window_len_; }
    bool any_spike_seen() const { return any_spike_seen_; }

private:
    friend int decode_action(SpikeCountWindow&, const SpikeVector&);
    std::size_t window_len_;
    std::vector<SpikeVector> ring_;  // last window_len raw vectors
    std::size_t ring_pos_ = 0;
    std::vector<std::uint64_t> counts_;
    int current_action_;
    bool any_spike_seen_ = false;
};

// Pushes the step's spikes, then picks the action with the highest windowed
// count. Ties keep the current action; before any output spike has ever
// occurred the default (avoid) is returned.
int decode_action(SpikeCountWindow& window, const SpikeVector& output_spikes);

}  // namespace nagi
