#include "nagi/codec.hpp"

#include <algorithm>
#include <stdexcept>

namespace nagi {

bool encode_value(double x, RngStream& rng, double p_max) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::invalid_argument("encode_value: input outside [0, 1]");
    }
    return rng.bernoulli(x * p_max);
}

SpikeVector encode_sample(const std::vector<double>& sensors, bool reward, bool penalty,
                          RngStream& rng, double p_max) {
    SpikeVector out;
    out.reserve(channel_count(sensors.size()));
    for (double s : sensors) {
        out.push_back(encode_value(s, rng, p_max) ? 1 : 0);
        out.push_back(encode_value(1.0 - s, rng, p_max) ? 1 : 0);
    }
    out.push_back(encode_value(reward ? 1.0 : 0.0, rng, p_max) ? 1 : 0);
    out.push_back(encode_value(penalty ? 1.0 : 0.0, rng, p_max) ? 1 : 0);
    return out;
}

SpikeCountWindow::SpikeCountWindow(std::size_t action_count, std::size_t window_len,
                                   int default_action)
    : window_len_(window_len),
      ring_(window_len, SpikeVector(action_count, 0)),
      counts_(action_count, 0),
      current_action_(default_action) {
    if (action_count == 0) throw std::invalid_argument("SpikeCountWindow: no actions");
    if (window_len == 0) throw std::invalid_argument("SpikeCountWindow: empty window");
}

void SpikeCountWindow::push(const SpikeVector& output_spikes) {
    if (output_spikes.size() != counts_.size()) {
        throw std::invalid_argument("SpikeCountWindow: spike vector arity mismatch");
    }
    SpikeVector& slot = ring_[ring_pos_];
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        counts_[i] -= slot[i];
        counts_[i] += output_spikes[i];
        if (output_spikes[i]) any_spike_seen_ = true;
    }
    slot = output_spikes;
    ring_pos_ = (ring_pos_ + 1) % window_len_;
}

int decode_action(SpikeCountWindow& window, const SpikeVector& output_spikes) {
    window.push(output_spikes);
    if (!window.any_spike_seen_) return window.current_action_;

    const auto& counts = window.counts_;
    std::uint64_t best = *std::max_element(counts.begin(), counts.end());
    std::vector<int> best_actions;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == best) best_actions.push_back(static_cast<int>(i));
    }
    if (best_actions.size() > 1) {
        // Tie: retain the current action if it is among the leaders,
        // otherwise fall back to the lowest-indexed leader.
        bool held = std::find(best_actions.begin(), best_actions.end(),
                              window.current_action_) != best_actions.end();
        if (!held) window.current_action_ = best_actions.front();
    } else {
        window.current_action_ = best_actions.front();
    }
    return window.current_action_;
}

}  // namespace nagi
