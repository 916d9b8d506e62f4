#include "nagi/plasticity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nagi/network.hpp"

namespace nagi {

const char* to_string(PlasticityKind kind) {
    switch (kind) {
        case PlasticityKind::AsymmetricHebbian: return "asymmetric_hebbian";
        case PlasticityKind::SymmetricHebbian: return "symmetric_hebbian";
        case PlasticityKind::AsymmetricAntiHebbian: return "asymmetric_anti_hebbian";
        case PlasticityKind::SymmetricAntiHebbian: return "symmetric_anti_hebbian";
    }
    return "?";
}

PlasticityKind plasticity_kind_from_string(const std::string& s) {
    if (s == "asymmetric_hebbian") return PlasticityKind::AsymmetricHebbian;
    if (s == "symmetric_hebbian") return PlasticityKind::SymmetricHebbian;
    if (s == "asymmetric_anti_hebbian") return PlasticityKind::AsymmetricAntiHebbian;
    if (s == "symmetric_anti_hebbian") return PlasticityKind::SymmetricAntiHebbian;
    throw std::invalid_argument("unknown plasticity kind: " + s);
}

double stdp_delta(const PlasticityRule& rule, double delta_t) {
    switch (rule.kind) {
        case PlasticityKind::AsymmetricHebbian:
            if (delta_t > 0.0) return rule.a_plus * std::exp(-delta_t / rule.tau_plus);
            if (delta_t < 0.0) return -rule.a_minus * std::exp(delta_t / rule.tau_minus);
            return 0.0;
        case PlasticityKind::SymmetricHebbian: {
            const double sq = delta_t * delta_t;
            return rule.a_plus * std::exp(-sq / (2.0 * rule.sigma_plus * rule.sigma_plus)) -
                   rule.a_minus * std::exp(-sq / (2.0 * rule.sigma_minus * rule.sigma_minus));
        }
        case PlasticityKind::AsymmetricAntiHebbian: {
            PlasticityRule mirror = rule;
            mirror.kind = PlasticityKind::AsymmetricHebbian;
            return -stdp_delta(mirror, delta_t);
        }
        case PlasticityKind::SymmetricAntiHebbian: {
            PlasticityRule mirror = rule;
            mirror.kind = PlasticityKind::SymmetricHebbian;
            return -stdp_delta(mirror, delta_t);
        }
    }
    return 0.0;
}

namespace {

void apply_delta(NetworkPhenotype& net, std::uint32_t synapse_index, double delta) {
    Synapse& syn = net.synapses[synapse_index];
    syn.magnitude =
        std::clamp(syn.magnitude + delta, 0.0, net.config.synapse.w_max);
}

}  // namespace

void on_post_spike(NetworkPhenotype& net, std::uint32_t neuron_index, std::int64_t now) {
    const PlasticityRule& rule = net.neurons[neuron_index].rule;
    for (const std::uint32_t s : net.incoming[neuron_index]) {
        const std::int64_t pre_spike = net.neurons[net.synapses[s].pre].last_spike_step;
        if (pre_spike == kNeverSpiked) continue;
        apply_delta(net, s, stdp_delta(rule, static_cast<double>(now - pre_spike)));
    }
    normalize_incoming(net, neuron_index, net.config.plasticity.w_cap);
}

void on_pre_spike(NetworkPhenotype& net, std::uint32_t synapse_index, std::int64_t now) {
    const std::uint32_t post = net.synapses[synapse_index].post;
    const std::int64_t post_spike = net.neurons[post].last_spike_step;
    if (post_spike == kNeverSpiked) return;
    apply_delta(net, synapse_index,
                stdp_delta(net.neurons[post].rule, static_cast<double>(post_spike - now)));
    normalize_incoming(net, post, net.config.plasticity.w_cap);
}

void normalize_incoming(NetworkPhenotype& net, std::uint32_t neuron_index, double cap) {
    double sum = 0.0;
    for (const std::uint32_t s : net.incoming[neuron_index]) sum += net.synapses[s].magnitude;
    if (sum <= cap) return;
    const double scale = cap / sum;
    for (const std::uint32_t s : net.incoming[neuron_index]) net.synapses[s].magnitude *= scale;
}

}  // namespace nagi
