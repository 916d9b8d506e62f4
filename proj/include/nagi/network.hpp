#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "nagi/genome.hpp"
#include "nagi/plasticity.hpp"
#include "nagi/rng.hpp"

namespace nagi {

using SpikeVector = std::vector<std::uint8_t>;

constexpr std::int64_t kNeverSpiked = -1;

// Izhikevich two-variable dynamics, regular-spiking defaults.
struct IzhikevichParams {
    double a = 0.02;
    double b = 0.2;
    double c = -65.0;  // reset potential, mV
    double d = 8.0;    // recovery increment on spike
    double spike_threshold = 30.0;  // mV
};

struct SynapseParams {
    double i_scale = 15.0;  // current injected per spike per unit magnitude
    double w_max = 1.0;
    double w_init_lo = 0.1;
    double w_init_hi = 1.0;
};

struct SimConfig {
    IzhikevichParams izhikevich;
    SynapseParams synapse;
    PlasticityParams plasticity;
};

// Per-neuron dynamic state. Input nodes use only last_spike_step; their
// membrane fields are untouched.
struct NeuronState {
    double membrane_potential = -65.0;
    double recovery = -13.0;
    std::int64_t last_spike_step = kNeverSpiked;
    PlasticityRule rule;
};

struct Synapse {
    std::uint32_t pre = 0;   // node index
    std::uint32_t post = 0;  // node index
    double sign = 1.0;       // +1 excitatory presynaptic neuron, -1 inhibitory
    double magnitude = 0.0;  // in [0, w_max]
};

// Executable spiking network. Edge set mirrors the genome's enabled
// connection genes; magnitudes are randomized at build time and belong to the
// phenotype only. Single-threaded during simulation; distinct phenotypes are
// independent.
struct NetworkPhenotype {
    Genome genome;  // source genotype, kept for reset and topology reports
    SimConfig config;

    std::vector<std::uint32_t> node_ids;  // dense index -> node id, inputs first
    std::size_t input_count = 0;
    std::vector<std::uint32_t> output_indices;  // dense indices, action order

    std::vector<NeuronState> neurons;  // one per node (inputs: spike time only)
    std::vector<Synapse> synapses;     // enabled genes in innovation order
    std::vector<std::vector<std::uint32_t>> incoming;  // per node: synapse indices
    std::vector<std::vector<std::uint32_t>> outgoing;

    std::int64_t step_counter = 0;

    // Advances the network by one 1 ms step. Input spikes inject current into
    // this step's integration; spikes detected this step are delivered on the
    // next one. Returns the output neurons' spike flags.
    SpikeVector step(const SpikeVector& input_spikes);

    // Fresh lifetime: same topology, magnitudes redrawn from the new seed, all
    // dynamic state cleared. Same seed as build -> identical phenotype.
    void reset(std::uint64_t weight_seed);

    std::size_t hidden_count() const;

    // Enabled edge set as (pre id, post id) pairs, sorted.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edge_set() const;

private:
    std::vector<double> pending_;  // current queued for the next step
    std::vector<double> current_;
    std::vector<std::uint32_t> fired_;

    friend NetworkPhenotype build_phenotype(const Genome&, std::uint64_t, const SimConfig&);
    void integrate_and_fire(std::int64_t now);
};

// Builds the executable network: one neuron per node gene, one synapse per
// enabled connection gene, magnitudes uniform in [w_init_lo, w_init_hi), sign
// from the presynaptic neurotransmitter (inputs count as excitatory). Nodes
// whose initial incoming sum exceeds the plasticity cap are rescaled to it, so
// the cap invariant holds before the first step. Deterministic for a fixed
// (genome, weight_seed). Throws on genomes that reference undefined node ids.
NetworkPhenotype build_phenotype(const Genome& genome, std::uint64_t weight_seed,
                                 const SimConfig& config);

}  // namespace nagi
