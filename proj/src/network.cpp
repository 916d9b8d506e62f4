#include "nagi/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace nagi {

namespace {

PlasticityRule resolve_rule(const NodeGene& node, const PlasticityParams& params) {
    PlasticityRule rule;
    rule.kind = node.plasticity_kind;
    rule.a_plus = node.a_plus;
    rule.a_minus = node.a_minus;
    rule.tau_plus = params.tau_plus;
    rule.tau_minus = params.tau_minus;
    rule.sigma_plus = params.sigma_plus;
    rule.sigma_minus = params.sigma_minus;
    return rule;
}

void draw_magnitudes(NetworkPhenotype& net, std::uint64_t weight_seed) {
    RngStream rng({weight_seed, stream_tag::kWeights});
    const auto& sp = net.config.synapse;
    for (auto& syn : net.synapses) syn.magnitude = rng.uniform_real(sp.w_init_lo, sp.w_init_hi);
    // Dense nodes can draw past the cap; the invariant must hold from step 0.
    for (std::uint32_t n = 0; n < net.neurons.size(); ++n)
        normalize_incoming(net, n, net.config.plasticity.w_cap);
}

}  // namespace

NetworkPhenotype build_phenotype(const Genome& genome, std::uint64_t weight_seed,
                                 const SimConfig& config) {
    NetworkPhenotype net;
    net.genome = genome;
    net.config = config;

    // Dense order: inputs first (genome order), then hidden/output by id.
    std::map<std::uint32_t, std::uint32_t> index_of;
    for (const auto& node : genome.nodes)
        if (node.kind == NodeKind::Input) {
            index_of.emplace(node.id, static_cast<std::uint32_t>(net.node_ids.size()));
            net.node_ids.push_back(node.id);
        }
    net.input_count = net.node_ids.size();
    for (const auto& node : genome.nodes)
        if (node.kind != NodeKind::Input) {
            index_of.emplace(node.id, static_cast<std::uint32_t>(net.node_ids.size()));
            net.node_ids.push_back(node.id);
        }

    net.neurons.resize(net.node_ids.size());
    const double v0 = config.izhikevich.c;
    for (const auto& node : genome.nodes) {
        auto& state = net.neurons[index_of.at(node.id)];
        state.membrane_potential = v0;
        state.recovery = config.izhikevich.b * v0;
        state.last_spike_step = kNeverSpiked;
        if (node.kind != NodeKind::Input) state.rule = resolve_rule(node, config.plasticity);
        if (node.kind == NodeKind::Output)
            net.output_indices.push_back(index_of.at(node.id));
    }

    net.incoming.assign(net.neurons.size(), {});
    net.outgoing.assign(net.neurons.size(), {});
    for (const auto& gene : genome.connections) {
        if (!gene.enabled) continue;
        auto in_it = index_of.find(gene.in_node);
        auto out_it = index_of.find(gene.out_node);
        if (in_it == index_of.end() || out_it == index_of.end())
            throw std::invalid_argument("connection gene references undefined node id");
        const NodeGene* pre = genome.find_node(gene.in_node);
        Synapse syn;
        syn.pre = in_it->second;
        syn.post = out_it->second;
        syn.sign = (pre->kind == NodeKind::Input ||
                    pre->neurotransmitter == Neurotransmitter::Excitatory)
                       ? 1.0
                       : -1.0;
        const auto syn_index = static_cast<std::uint32_t>(net.synapses.size());
        net.synapses.push_back(syn);
        net.incoming[syn.post].push_back(syn_index);
        net.outgoing[syn.pre].push_back(syn_index);
    }

    net.pending_.assign(net.neurons.size(), 0.0);
    net.current_.assign(net.neurons.size(), 0.0);
    net.step_counter = 0;
    draw_magnitudes(net, weight_seed);
    return net;
}

void NetworkPhenotype::reset(std::uint64_t weight_seed) {
    const double v0 = config.izhikevich.c;
    for (std::size_t i = 0; i < neurons.size(); ++i) {
        neurons[i].membrane_potential = v0;
        neurons[i].recovery = config.izhikevich.b * v0;
        neurons[i].last_spike_step = kNeverSpiked;
    }
    std::fill(pending_.begin(), pending_.end(), 0.0);
    std::fill(current_.begin(), current_.end(), 0.0);
    step_counter = 0;
    draw_magnitudes(*this, weight_seed);
}

std::size_t NetworkPhenotype::hidden_count() const {
    return genome.count_kind(NodeKind::Hidden);
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> NetworkPhenotype::edge_set() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    edges.reserve(synapses.size());
    for (const auto& syn : synapses)
        edges.emplace_back(node_ids[syn.pre], node_ids[syn.post]);
    std::sort(edges.begin(), edges.end());
    return edges;
}

void NetworkPhenotype::integrate_and_fire(std::int64_t now) {
    const auto& p = config.izhikevich;
    fired_.clear();
    for (std::size_t n = input_count; n < neurons.size(); ++n) {
        auto& state = neurons[n];
        double v = state.membrane_potential;
        double u = state.recovery;
        const double current = current_[n];
        // Two 0.5 ms half-steps on v, then one full step on u.
        v += 0.5 * (0.04 * v * v + 5.0 * v + 140.0 - u + current);
        v += 0.5 * (0.04 * v * v + 5.0 * v + 140.0 - u + current);
        u += p.a * (p.b * v - u);
        if (!std::isfinite(v))
            throw std::runtime_error("non-finite membrane potential (simulation bug)");
        if (v >= p.spike_threshold) {
            v = p.c;
            u += p.d;
            fired_.push_back(static_cast<std::uint32_t>(n));
        }
        state.membrane_potential = v;
        state.recovery = u;
    }
    for (const std::uint32_t n : fired_) neurons[n].last_spike_step = now;
}

SpikeVector NetworkPhenotype::step(const SpikeVector& input_spikes) {
    if (input_spikes.size() != input_count)
        throw std::invalid_argument("input spike vector length mismatch");
    const std::int64_t now = step_counter;
    const double i_scale = config.synapse.i_scale;

    std::swap(current_, pending_);
    std::fill(pending_.begin(), pending_.end(), 0.0);

    for (std::size_t i = 0; i < input_count; ++i) {
        if (!input_spikes[i]) continue;
        neurons[i].last_spike_step = now;
        for (const std::uint32_t s : outgoing[i]) {
            const Synapse& syn = synapses[s];
            current_[syn.post] += syn.sign * syn.magnitude * i_scale;
        }
    }
    for (std::size_t i = 0; i < input_count; ++i) {
        if (!input_spikes[i]) continue;
        for (const std::uint32_t s : outgoing[i]) on_pre_spike(*this, s, now);
    }

    integrate_and_fire(now);

    for (const std::uint32_t n : fired_) {
        on_post_spike(*this, n, now);
        for (const std::uint32_t s : outgoing[n]) {
            const Synapse& syn = synapses[s];
            pending_[syn.post] += syn.sign * syn.magnitude * i_scale;
            on_pre_spike(*this, s, now);
        }
    }

    SpikeVector out(output_indices.size(), 0);
    for (std::size_t k = 0; k < output_indices.size(); ++k)
        if (neurons[output_indices[k]].last_spike_step == now) out[k] = 1;
    ++step_counter;
    return out;
}

}  // namespace nagi
