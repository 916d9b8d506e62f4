#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "nagi/genome.hpp"
#include "nagi/network.hpp"
#include "nagi/rng.hpp"

using namespace nagi;

namespace {

Genome minimal(std::size_t sensors = 1) {
    RngStream rng({1234, sensors});
    return minimal_genome(sensors, 2, rng, AmplitudeBounds{});
}

}  // namespace

TEST_CASE("resting network stays silent") {
    NetworkPhenotype net = build_phenotype(minimal(), 7, SimConfig{});
    const SpikeVector quiet(net.input_count, 0);
    for (int t = 0; t < 1000; ++t) {
        SpikeVector out = net.step(quiet);
        CHECK(std::count(out.begin(), out.end(), 1) == 0);
    }
    for (std::size_t n = net.input_count; n < net.neurons.size(); ++n) {
        CHECK(net.neurons[n].membrane_potential < 0.0);
    }
}

TEST_CASE("sustained input drive produces output spikes") {
    NetworkPhenotype net = build_phenotype(minimal(), 7, SimConfig{});
    const SpikeVector all_on(net.input_count, 1);
    int spikes = 0;
    for (int t = 0; t < 1000; ++t) {
        SpikeVector out = net.step(all_on);
        spikes += static_cast<int>(std::count(out.begin(), out.end(), 1));
    }
    CHECK(spikes > 0);
}

TEST_CASE("phenotype build is deterministic in the weight seed") {
    const Genome g = minimal();
    NetworkPhenotype a = build_phenotype(g, 42, SimConfig{});
    NetworkPhenotype b = build_phenotype(g, 42, SimConfig{});
    NetworkPhenotype c = build_phenotype(g, 43, SimConfig{});
    REQUIRE(a.synapses.size() == b.synapses.size());
    bool all_equal_ac = true;
    for (std::size_t i = 0; i < a.synapses.size(); ++i) {
        CHECK(a.synapses[i].magnitude == b.synapses[i].magnitude);
        if (a.synapses[i].magnitude != c.synapses[i].magnitude) all_equal_ac = false;
    }
    CHECK_FALSE(all_equal_ac);
}

TEST_CASE("initial magnitudes live inside the init range") {
    // 4 incoming per output: the sum cannot reach the cap, so draws survive.
    const Genome g = minimal(1);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        NetworkPhenotype net = build_phenotype(g, seed, SimConfig{});
        for (const Synapse& s : net.synapses) {
            CHECK(s.magnitude >= net.config.synapse.w_init_lo);
            CHECK(s.magnitude < net.config.synapse.w_init_hi);
        }
    }
}

TEST_CASE("dense builds are rescaled to the incoming cap") {
    const Genome g = minimal(5);  // 12 incoming per output
    SimConfig sim;
    sim.synapse.w_init_lo = 0.9;  // forces every output past the cap
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        NetworkPhenotype net = build_phenotype(g, seed, sim);
        for (const std::uint32_t out : net.output_indices) {
            double sum = 0.0;
            for (const std::uint32_t s : net.incoming[out]) sum += net.synapses[s].magnitude;
            CHECK(sum == doctest::Approx(sim.plasticity.w_cap).epsilon(1e-9));
        }
    }
}

TEST_CASE("reset replays a lifetime exactly") {
    NetworkPhenotype net = build_phenotype(minimal(), 3, SimConfig{});
    RngStream drive(55);
    std::vector<SpikeVector> inputs;
    for (int t = 0; t < 400; ++t) {
        SpikeVector in(net.input_count, 0);
        for (auto& bit : in) bit = drive.bernoulli(0.3) ? 1 : 0;
        inputs.push_back(in);
    }
    std::vector<SpikeVector> first;
    for (const auto& in : inputs) first.push_back(net.step(in));
    net.reset(3);
    for (std::size_t t = 0; t < inputs.size(); ++t) {
        CHECK(net.step(inputs[t]) == first[t]);
    }
}

TEST_CASE("input neurotransmitter is always excitatory") {
    Genome g = minimal();
    NetworkPhenotype net = build_phenotype(g, 1, SimConfig{});
    for (const Synapse& s : net.synapses) {
        if (s.pre < net.input_count) CHECK(s.sign == 1.0);
    }
}

TEST_CASE("inhibitory presynaptic neurons flip the synapse sign") {
    Genome g = minimal();
    // Make output 4 inhibitory and wire it into output 5.
    for (NodeGene& n : g.nodes) {
        if (n.id == 4) n.neurotransmitter = Neurotransmitter::Inhibitory;
    }
    g.connections.push_back({8, 4, 5, true});
    NetworkPhenotype net = build_phenotype(g, 1, SimConfig{});
    bool saw = false;
    for (const Synapse& s : net.synapses) {
        if (net.node_ids[s.pre] == 4 && net.node_ids[s.post] == 5) {
            CHECK(s.sign == -1.0);
            saw = true;
        }
    }
    CHECK(saw);
}

TEST_CASE("edge set mirrors enabled genes only") {
    Genome g = minimal();
    g.connections[2].enabled = false;
    g.connections[5].enabled = false;
    NetworkPhenotype net = build_phenotype(g, 9, SimConfig{});
    std::set<std::pair<std::uint32_t, std::uint32_t>> expected;
    for (const ConnectionGene& c : g.connections) {
        if (c.enabled) expected.insert({c.in_node, c.out_node});
    }
    const auto edges = net.edge_set();
    CHECK(edges.size() == expected.size());
    for (const auto& e : edges) CHECK(expected.count(e) == 1);
}

TEST_CASE("undefined node references are rejected") {
    Genome g = minimal();
    g.connections.push_back({8, 77, 4, true});
    CHECK_THROWS_AS(build_phenotype(g, 1, SimConfig{}), std::invalid_argument);
}

TEST_CASE("wrong input arity is rejected") {
    NetworkPhenotype net = build_phenotype(minimal(), 1, SimConfig{});
    SpikeVector bad(net.input_count + 1, 0);
    CHECK_THROWS_AS(net.step(bad), std::invalid_argument);
}

TEST_CASE("self-loops simulate without faults") {
    Genome g = minimal();
    g.connections.push_back({8, 4, 4, true});  // output onto itself
    NetworkPhenotype net = build_phenotype(g, 2, SimConfig{});
    const SpikeVector all_on(net.input_count, 1);
    for (int t = 0; t < 500; ++t) net.step(all_on);
    for (std::size_t n = net.input_count; n < net.neurons.size(); ++n) {
        CHECK(std::isfinite(net.neurons[n].membrane_potential));
    }
}
