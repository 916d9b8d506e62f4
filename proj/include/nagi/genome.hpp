#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nagi/plasticity.hpp"
#include "nagi/rng.hpp"

namespace nagi {

enum class NodeKind : std::uint8_t { Input = 0, Hidden = 1, Output = 2 };

enum class Neurotransmitter : std::uint8_t { Excitatory = 0, Inhibitory = 1 };

const char* to_string(NodeKind kind);
const char* to_string(Neurotransmitter t);
NodeKind node_kind_from_string(const std::string& s);
Neurotransmitter neurotransmitter_from_string(const std::string& s);

// Node gene. Input nodes are pure spike sources and carry no neurotransmitter
// or plasticity attributes; the fields are ignored for them.
struct NodeGene {
    std::uint32_t id = 0;
    NodeKind kind = NodeKind::Hidden;
    Neurotransmitter neurotransmitter = Neurotransmitter::Excitatory;
    PlasticityKind plasticity_kind = PlasticityKind::AsymmetricHebbian;
    double a_plus = 0.01;
    double a_minus = 0.01;

    bool operator==(const NodeGene&) const = default;
};

// Connection gene. Weight-free: magnitudes exist only in the phenotype.
struct ConnectionGene {
    std::uint64_t innovation = 0;
    std::uint32_t in_node = 0;
    std::uint32_t out_node = 0;
    bool enabled = true;

    bool operator==(const ConnectionGene&) const = default;
};

struct Genome {
    std::vector<NodeGene> nodes;              // sorted by id
    std::vector<ConnectionGene> connections;  // sorted by innovation

    const NodeGene* find_node(std::uint32_t id) const;
    std::size_t count_kind(NodeKind kind) const;
    std::size_t size() const { return nodes.size() + connections.size(); }

    bool operator==(const Genome&) const = default;
};

// Historical markings shared by one generation's mutations. The pair->number
// memo is cleared between generations; the counters persist for the whole run.
// A genome takes at most one mutation pass per memo window: splitting the same
// connection again inside one window replays the memoized node id.
class InnovationRegistry {
public:
    InnovationRegistry(std::uint64_t next_innovation, std::uint32_t next_node_id)
        : next_innovation_(next_innovation), next_node_id_(next_node_id) {}

    // Same (in, out) pair within one generation -> same innovation number.
    std::uint64_t connection_innovation(std::uint32_t in_node, std::uint32_t out_node);

    // Same split of the same connection within one generation -> same new node
    // id and the same two connection innovations.
    struct NodeSplit {
        std::uint32_t node_id;
        std::uint64_t innovation_in;   // in_node -> new node
        std::uint64_t innovation_out;  // new node -> out_node
    };
    NodeSplit node_split(std::uint64_t split_innovation, std::uint32_t in_node,
                         std::uint32_t out_node);

    void begin_generation();  // clears the memos, keeps the counters

    std::uint64_t next_innovation() const { return next_innovation_; }
    std::uint32_t next_node_id() const { return next_node_id_; }

private:
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> connection_memo_;
    std::map<std::uint64_t, NodeSplit> split_memo_;
    std::uint64_t next_innovation_;
    std::uint32_t next_node_id_;
};

struct MutationRates {
    double add_connection = 0.10;
    double add_node = 0.03;
    double toggle_enable = 0.02;
    double flip_neurotransmitter = 0.05;
    double switch_plasticity = 0.05;
    double perturb_amplitudes = 0.10;
    double perturb_sigma = 0.01;  // stddev of the Gaussian amplitude perturbation
};

struct CompatibilityCoeffs {
    double c1 = 1.0;  // excess
    double c2 = 1.0;  // disjoint
    double c3 = 0.5;  // attribute mismatch
};

// Amplitude bounds used wherever genomes draw or perturb a_plus/a_minus.
struct AmplitudeBounds {
    double lo = 0.001;
    double hi = 0.1;
};

// Structural validity: unique ids, endpoints exist, no connection into an
// input, unique (in,out) pairs, innovations strictly increasing, amplitudes in
// range. Returns an error description, or nullopt when valid.
std::optional<std::string> validate_genome(const Genome& g, const AmplitudeBounds& amps);

// Minimal full-bipartite genotype: 2*n_sensors + 2 input nodes (complement
// channels + reward + penalty), n_actions output nodes, no hidden nodes,
// innovations 0..(inputs*outputs - 1). Output attributes drawn uniformly.
Genome minimal_genome(std::size_t n_sensors, std::size_t n_actions, RngStream& rng,
                      const AmplitudeBounds& amps);

std::size_t minimal_genome_inputs(std::size_t n_sensors);

// Individual structural mutations; each returns true when it changed the
// genome (add-connection no-ops on a saturated genome, add-node when no
// enabled connection exists).
bool mutate_add_connection(Genome& g, InnovationRegistry& registry, RngStream& rng);
bool mutate_add_node(Genome& g, InnovationRegistry& registry, RngStream& rng,
                     const AmplitudeBounds& amps);
bool mutate_toggle_enable(Genome& g, RngStream& rng);
bool mutate_flip_neurotransmitter(Genome& g, RngStream& rng);
bool mutate_switch_plasticity(Genome& g, RngStream& rng);
bool mutate_perturb_amplitudes(Genome& g, RngStream& rng, double sigma,
                               const AmplitudeBounds& amps);

// Applies each operator independently with its configured probability.
void mutate(Genome& g, InnovationRegistry& registry, RngStream& rng,
            const MutationRates& rates, const AmplitudeBounds& amps);

// NEAT-style crossover. Matching genes (same innovation) take their enabled
// flag from a uniformly random parent; disjoint and excess genes come from the
// fitter parent; matching node ids mix attributes per node at random.
Genome crossover(const Genome& fitter, const Genome& other, RngStream& rng);

// delta = c1*E/N + c2*D/N + c3*A with N = max connection-gene count (>= 1) and
// A = fraction of shared non-input node ids whose (neurotransmitter,
// plasticity kind) pair differs.
double compatibility(const Genome& g1, const Genome& g2, const CompatibilityCoeffs& coeffs);

// First-fit speciation. Slots [0, representatives.size()) are the existing
// species; genomes outside every threshold found new slots in encounter order,
// with the founding genome acting as the new slot's representative.
struct SpeciationResult {
    std::vector<std::size_t> assignment;  // genome index -> species slot
    std::size_t species_count = 0;
    std::vector<std::size_t> founders;  // genome index founding slot representatives.size()+k
};
SpeciationResult speciate(const std::vector<const Genome*>& population,
                          const std::vector<const Genome*>& representatives,
                          double threshold, const CompatibilityCoeffs& coeffs);

}  // namespace nagi
