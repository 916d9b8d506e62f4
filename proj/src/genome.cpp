#include "nagi/genome.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace nagi {

const char* to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::Input: return "input";
        case NodeKind::Hidden: return "hidden";
        case NodeKind::Output: return "output";
    }
    return "?";
}

const char* to_string(Neurotransmitter t) {
    return t == Neurotransmitter::Excitatory ? "excitatory" : "inhibitory";
}

NodeKind node_kind_from_string(const std::string& s) {
    if (s == "input") return NodeKind::Input;
    if (s == "hidden") return NodeKind::Hidden;
    if (s == "output") return NodeKind::Output;
    throw std::invalid_argument("unknown node kind: " + s);
}

Neurotransmitter neurotransmitter_from_string(const std::string& s) {
    if (s == "excitatory") return Neurotransmitter::Excitatory;
    if (s == "inhibitory") return Neurotransmitter::Inhibitory;
    throw std::invalid_argument("unknown neurotransmitter: " + s);
}

const NodeGene* Genome::find_node(std::uint32_t id) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                               [](const NodeGene& n, std::uint32_t v) { return n.id < v; });
    if (it == nodes.end() || it->id != id) return nullptr;
    return &*it;
}

std::size_t Genome::count_kind(NodeKind kind) const {
    std::size_t n = 0;
    for (const auto& node : nodes)
        if (node.kind == kind) ++n;
    return n;
}

std::uint64_t InnovationRegistry::connection_innovation(std::uint32_t in_node,
                                                        std::uint32_t out_node) {
    auto key = std::make_pair(in_node, out_node);
    auto it = connection_memo_.find(key);
    if (it != connection_memo_.end()) return it->second;
    const std::uint64_t innov = next_innovation_++;
    connection_memo_.emplace(key, innov);
    return innov;
}

InnovationRegistry::NodeSplit InnovationRegistry::node_split(std::uint64_t split_innovation,
                                                             std::uint32_t in_node,
                                                             std::uint32_t out_node) {
    auto it = split_memo_.find(split_innovation);
    if (it != split_memo_.end()) return it->second;
    NodeSplit split;
    split.node_id = next_node_id_++;
    split.innovation_in = connection_innovation(in_node, split.node_id);
    split.innovation_out = connection_innovation(split.node_id, out_node);
    split_memo_.emplace(split_innovation, split);
    return split;
}

void InnovationRegistry::begin_generation() {
    connection_memo_.clear();
    split_memo_.clear();
}

std::optional<std::string> validate_genome(const Genome& g, const AmplitudeBounds& amps) {
    std::set<std::uint32_t> ids;
    for (const auto& node : g.nodes) {
        if (!ids.insert(node.id).second)
            return "duplicate node id " + std::to_string(node.id);
        if (node.kind != NodeKind::Input) {
            if (node.a_plus < amps.lo || node.a_plus > amps.hi ||
                node.a_minus < amps.lo || node.a_minus > amps.hi)
                return "amplitude out of range on node " + std::to_string(node.id);
        }
    }
    for (std::size_t i = 1; i < g.nodes.size(); ++i)
        if (g.nodes[i - 1].id >= g.nodes[i].id) return "node ids not sorted";

    std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
    std::uint64_t prev_innov = 0;
    bool first = true;
    for (const auto& c : g.connections) {
        if (!first && c.innovation <= prev_innov)
            return "innovations not strictly increasing at " + std::to_string(c.innovation);
        first = false;
        prev_innov = c.innovation;
        const NodeGene* in = g.find_node(c.in_node);
        const NodeGene* out = g.find_node(c.out_node);
        if (in == nullptr || out == nullptr)
            return "connection " + std::to_string(c.innovation) + " references a missing node";
        if (out->kind == NodeKind::Input)
            return "connection " + std::to_string(c.innovation) + " targets an input node";
        if (!pairs.emplace(c.in_node, c.out_node).second)
            return "duplicate connection pair " + std::to_string(c.in_node) + "->" +
                   std::to_string(c.out_node);
    }
    return std::nullopt;
}

namespace {

void randomize_attributes(NodeGene& node, RngStream& rng, const AmplitudeBounds& amps) {
    node.neurotransmitter = rng.uniform_index(2) == 0 ? Neurotransmitter::Excitatory
                                                      : Neurotransmitter::Inhibitory;
    node.plasticity_kind =
        static_cast<PlasticityKind>(rng.uniform_index(kPlasticityKindCount));
    node.a_plus = rng.uniform_real(amps.lo, amps.hi);
    node.a_minus = rng.uniform_real(amps.lo, amps.hi);
}

void insert_connection(Genome& g, ConnectionGene gene) {
    auto it = std::lower_bound(g.connections.begin(), g.connections.end(), gene.innovation,
                               [](const ConnectionGene& c, std::uint64_t v) {
                                   return c.innovation < v;
                               });
    g.connections.insert(it, gene);
}

void insert_node(Genome& g, NodeGene node) {
    auto it = std::lower_bound(g.nodes.begin(), g.nodes.end(), node.id,
                               [](const NodeGene& n, std::uint32_t v) { return n.id < v; });
    g.nodes.insert(it, node);
}

// Indices of nodes mutations may retarget (hidden and output).
std::vector<std::size_t> mutable_node_indices(const Genome& g) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        if (g.nodes[i].kind != NodeKind::Input) out.push_back(i);
    return out;
}

double clamp_amp(double v, const AmplitudeBounds& amps) {
    return std::min(amps.hi, std::max(amps.lo, v));
}

}  // namespace

std::size_t minimal_genome_inputs(std::size_t n_sensors) { return 2 * n_sensors + 2; }

Genome minimal_genome(std::size_t n_sensors, std::size_t n_actions, RngStream& rng,
                      const AmplitudeBounds& amps) {
    if (n_sensors < 1 || n_actions < 2)
        throw std::invalid_argument("minimal_genome needs n_sensors >= 1, n_actions >= 2");
    const std::size_t n_in = minimal_genome_inputs(n_sensors);
    Genome g;
    for (std::size_t i = 0; i < n_in; ++i) {
        NodeGene node;
        node.id = static_cast<std::uint32_t>(i);
        node.kind = NodeKind::Input;
        g.nodes.push_back(node);
    }
    for (std::size_t i = 0; i < n_actions; ++i) {
        NodeGene node;
        node.id = static_cast<std::uint32_t>(n_in + i);
        node.kind = NodeKind::Output;
        randomize_attributes(node, rng, amps);
        g.nodes.push_back(node);
    }
    std::uint64_t innov = 0;
    for (std::size_t i = 0; i < n_in; ++i) {
        for (std::size_t j = 0; j < n_actions; ++j) {
            ConnectionGene c;
            c.innovation = innov++;
            c.in_node = static_cast<std::uint32_t>(i);
            c.out_node = static_cast<std::uint32_t>(n_in + j);
            c.enabled = true;
            g.connections.push_back(c);
        }
    }
    return g;
}

bool mutate_add_connection(Genome& g, InnovationRegistry& registry, RngStream& rng) {
    std::set<std::pair<std::uint32_t, std::uint32_t>> existing;
    for (const auto& c : g.connections) existing.emplace(c.in_node, c.out_node);

    // Any node may be a source; targets exclude inputs. Self-loops allowed.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> candidates;
    for (const auto& from : g.nodes) {
        for (const auto& to : g.nodes) {
            if (to.kind == NodeKind::Input) continue;
            if (existing.count({from.id, to.id})) continue;
            candidates.emplace_back(from.id, to.id);
        }
    }
    if (candidates.empty()) return false;
    const auto pick = candidates[rng.uniform_index(candidates.size())];
    ConnectionGene c;
    c.innovation = registry.connection_innovation(pick.first, pick.second);
    c.in_node = pick.first;
    c.out_node = pick.second;
    c.enabled = true;
    insert_connection(g, c);
    return true;
}

bool mutate_add_node(Genome& g, InnovationRegistry& registry, RngStream& rng,
                     const AmplitudeBounds& amps) {
    std::vector<std::size_t> enabled;
    for (std::size_t i = 0; i < g.connections.size(); ++i)
        if (g.connections[i].enabled) enabled.push_back(i);
    if (enabled.empty()) return false;

    const std::size_t idx = enabled[rng.uniform_index(enabled.size())];
    ConnectionGene& split = g.connections[idx];
    split.enabled = false;
    const auto result = registry.node_split(split.innovation, split.in_node, split.out_node);

    NodeGene node;
    node.id = result.node_id;
    node.kind = NodeKind::Hidden;
    randomize_attributes(node, rng, amps);
    const std::uint32_t in_node = split.in_node;
    const std::uint32_t out_node = split.out_node;
    insert_node(g, node);
    insert_connection(g, {result.innovation_in, in_node, result.node_id, true});
    insert_connection(g, {result.innovation_out, result.node_id, out_node, true});
    return true;
}

bool mutate_toggle_enable(Genome& g, RngStream& rng) {
    if (g.connections.empty()) return false;
    auto& c = g.connections[rng.uniform_index(g.connections.size())];
    c.enabled = !c.enabled;
    return true;
}

bool mutate_flip_neurotransmitter(Genome& g, RngStream& rng) {
    const auto idx = mutable_node_indices(g);
    if (idx.empty()) return false;
    auto& node = g.nodes[idx[rng.uniform_index(idx.size())]];
    node.neurotransmitter = node.neurotransmitter == Neurotransmitter::Excitatory
                                ? Neurotransmitter::Inhibitory
                                : Neurotransmitter::Excitatory;
    return true;
}

bool mutate_switch_plasticity(Genome& g, RngStream& rng) {
    const auto idx = mutable_node_indices(g);
    if (idx.empty()) return false;
    auto& node = g.nodes[idx[rng.uniform_index(idx.size())]];
    // Draw among the other three kinds so the switch always changes something.
    const auto offset = 1 + rng.uniform_index(kPlasticityKindCount - 1);
    node.plasticity_kind = static_cast<PlasticityKind>(
        (static_cast<std::uint64_t>(node.plasticity_kind) + offset) % kPlasticityKindCount);
    return true;
}

bool mutate_perturb_amplitudes(Genome& g, RngStream& rng, double sigma,
                               const AmplitudeBounds& amps) {
    bool changed = false;
    for (auto& node : g.nodes) {
        if (node.kind == NodeKind::Input) continue;
        node.a_plus = clamp_amp(node.a_plus + rng.gaussian(0.0, sigma), amps);
        node.a_minus = clamp_amp(node.a_minus + rng.gaussian(0.0, sigma), amps);
        changed = true;
    }
    return changed;
}

void mutate(Genome& g, InnovationRegistry& registry, RngStream& rng,
            const MutationRates& rates, const AmplitudeBounds& amps) {
    if (rng.bernoulli(rates.add_connection)) mutate_add_connection(g, registry, rng);
    if (rng.bernoulli(rates.add_node)) mutate_add_node(g, registry, rng, amps);
    if (rng.bernoulli(rates.toggle_enable)) mutate_toggle_enable(g, rng);
    if (rng.bernoulli(rates.flip_neurotransmitter)) mutate_flip_neurotransmitter(g, rng);
    if (rng.bernoulli(rates.switch_plasticity)) mutate_switch_plasticity(g, rng);
    if (rng.bernoulli(rates.perturb_amplitudes))
        mutate_perturb_amplitudes(g, rng, rates.perturb_sigma, amps);
}

Genome crossover(const Genome& fitter, const Genome& other, RngStream& rng) {
    Genome child;
    child.nodes = fitter.nodes;

    // Mix attributes on node ids both parents carry.
    for (auto& node : child.nodes) {
        if (node.kind == NodeKind::Input) continue;
        const NodeGene* twin = other.find_node(node.id);
        if (twin == nullptr || twin->kind == NodeKind::Input) continue;
        if (rng.uniform_index(2) == 1) {
            node.neurotransmitter = twin->neurotransmitter;
            node.plasticity_kind = twin->plasticity_kind;
            node.a_plus = twin->a_plus;
            node.a_minus = twin->a_minus;
        }
    }

    std::map<std::uint64_t, const ConnectionGene*> other_by_innov;
    for (const auto& c : other.connections) other_by_innov.emplace(c.innovation, &c);

    child.connections = fitter.connections;
    for (auto& c : child.connections) {
        auto it = other_by_innov.find(c.innovation);
        if (it == other_by_innov.end()) continue;  // disjoint/excess: keep fitter's
        if (rng.uniform_index(2) == 1) c.enabled = it->second->enabled;
    }
    return child;
}

double compatibility(const Genome& g1, const Genome& g2, const CompatibilityCoeffs& coeffs) {
    const auto& c1 = g1.connections;
    const auto& c2 = g2.connections;
    const std::uint64_t max1 = c1.empty() ? 0 : c1.back().innovation;
    const std::uint64_t max2 = c2.empty() ? 0 : c2.back().innovation;
    const std::uint64_t shared_max = std::min(max1, max2);

    std::size_t excess = 0, disjoint = 0;
    std::size_t i = 0, j = 0;
    while (i < c1.size() || j < c2.size()) {
        if (i < c1.size() && j < c2.size() && c1[i].innovation == c2[j].innovation) {
            ++i;
            ++j;
            continue;
        }
        std::uint64_t innov;
        if (j == c2.size() || (i < c1.size() && c1[i].innovation < c2[j].innovation))
            innov = c1[i++].innovation;
        else
            innov = c2[j++].innovation;
        if (innov > shared_max)
            ++excess;
        else
            ++disjoint;
    }

    std::size_t shared_nodes = 0, mismatched = 0;
    for (const auto& node : g1.nodes) {
        if (node.kind == NodeKind::Input) continue;
        const NodeGene* twin = g2.find_node(node.id);
        if (twin == nullptr || twin->kind == NodeKind::Input) continue;
        ++shared_nodes;
        if (node.neurotransmitter != twin->neurotransmitter ||
            node.plasticity_kind != twin->plasticity_kind)
            ++mismatched;
    }

    const double n = static_cast<double>(std::max<std::size_t>({c1.size(), c2.size(), 1}));
    const double attr =
        shared_nodes == 0 ? 0.0 : static_cast<double>(mismatched) / static_cast<double>(shared_nodes);
    return coeffs.c1 * static_cast<double>(excess) / n +
           coeffs.c2 * static_cast<double>(disjoint) / n + coeffs.c3 * attr;
}

SpeciationResult speciate(const std::vector<const Genome*>& population,
                          const std::vector<const Genome*>& representatives,
                          double threshold, const CompatibilityCoeffs& coeffs) {
    SpeciationResult result;
    result.assignment.resize(population.size());
    std::vector<const Genome*> reps(representatives);
    for (std::size_t i = 0; i < population.size(); ++i) {
        bool placed = false;
        for (std::size_t s = 0; s < reps.size(); ++s) {
            if (compatibility(*population[i], *reps[s], coeffs) <= threshold) {
                result.assignment[i] = s;
                placed = true;
                break;
            }
        }
        if (!placed) {
            result.assignment[i] = reps.size();
            reps.push_back(population[i]);
            result.founders.push_back(i);
        }
    }
    result.species_count = reps.size();
    return result;
}

}  // namespace nagi
