#include <doctest.h>

#include <cmath>

#include "nagi/network.hpp"
#include "nagi/plasticity.hpp"
#include "nagi/rng.hpp"

using namespace nagi;

namespace {

PlasticityRule make_rule(PlasticityKind kind, double a_plus = 0.01, double a_minus = 0.01) {
    PlasticityRule r;
    r.kind = kind;
    r.a_plus = a_plus;
    r.a_minus = a_minus;
    return r;
}

// Two-input, one-output genome for hand-driven plasticity checks.
Genome two_in_one_out() {
    Genome g;
    g.nodes.push_back({0, NodeKind::Input, {}, {}, 0, 0});
    g.nodes.push_back({1, NodeKind::Input, {}, {}, 0, 0});
    NodeGene out;
    out.id = 2;
    out.kind = NodeKind::Output;
    out.neurotransmitter = Neurotransmitter::Excitatory;
    out.plasticity_kind = PlasticityKind::AsymmetricHebbian;
    out.a_plus = 0.01;
    out.a_minus = 0.01;
    g.nodes.push_back(out);
    g.connections.push_back({0, 0, 2, true});
    g.connections.push_back({1, 1, 2, true});
    return g;
}

}  // namespace

TEST_CASE("asymmetric hebbian window values") {
    const PlasticityRule r = make_rule(PlasticityKind::AsymmetricHebbian);
    CHECK(stdp_delta(r, 20.0) == doctest::Approx(0.0036787944117144233).epsilon(1e-12));
    CHECK(stdp_delta(r, -20.0) == doctest::Approx(-0.0036787944117144233).epsilon(1e-12));
    CHECK(stdp_delta(r, 0.0) == 0.0);
    CHECK(stdp_delta(r, 1e-9) > 0.0);
    CHECK(stdp_delta(r, -1e-9) < 0.0);
}

TEST_CASE("symmetric rule at zero equals amplitude difference") {
    const PlasticityRule r = make_rule(PlasticityKind::SymmetricHebbian, 0.03, 0.01);
    CHECK(stdp_delta(r, 0.0) == doctest::Approx(0.02).epsilon(1e-12));
}

TEST_CASE("symmetric rules are even functions") {
    for (PlasticityKind kind :
         {PlasticityKind::SymmetricHebbian, PlasticityKind::SymmetricAntiHebbian}) {
        const PlasticityRule r = make_rule(kind, 0.02, 0.007);
        for (double dt = 0.0; dt <= 120.0; dt += 0.7) {
            CHECK(stdp_delta(r, dt) == doctest::Approx(stdp_delta(r, -dt)).epsilon(1e-14));
        }
    }
}

TEST_CASE("anti rules negate their hebbian counterparts") {
    const std::pair<PlasticityKind, PlasticityKind> pairs[] = {
        {PlasticityKind::AsymmetricHebbian, PlasticityKind::AsymmetricAntiHebbian},
        {PlasticityKind::SymmetricHebbian, PlasticityKind::SymmetricAntiHebbian},
    };
    for (auto [hebb, anti] : pairs) {
        const PlasticityRule rh = make_rule(hebb, 0.05, 0.013);
        const PlasticityRule ra = make_rule(anti, 0.05, 0.013);
        for (double dt = -150.0; dt <= 150.0; dt += 1.3) {
            CHECK(stdp_delta(ra, dt) == doctest::Approx(-stdp_delta(rh, dt)).epsilon(1e-14));
        }
    }
}

TEST_CASE("windows decay to nothing far from coincidence") {
    for (int k = 0; k < kPlasticityKindCount; ++k) {
        const PlasticityRule r = make_rule(static_cast<PlasticityKind>(k), 0.1, 0.1);
        // 10 time constants: tau = 20 for asymmetric, sigma_minus = 20 wider
        // of the symmetric pair.
        for (double dt : {200.0, 250.0, 400.0, -200.0, -400.0}) {
            CHECK(std::abs(stdp_delta(r, dt)) < 1e-4 * r.a_plus);
        }
    }
}

TEST_CASE("normalize_incoming rescales an over-cap sum") {
    NetworkPhenotype net = build_phenotype(two_in_one_out(), 1, SimConfig{});
    REQUIRE(net.synapses.size() == 2);
    net.synapses[0].magnitude = 3.0;
    net.synapses[1].magnitude = 3.0;
    normalize_incoming(net, 2, 5.0);
    CHECK(net.synapses[0].magnitude == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(net.synapses[1].magnitude == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("normalize_incoming leaves an under-cap sum alone") {
    NetworkPhenotype net = build_phenotype(two_in_one_out(), 1, SimConfig{});
    net.synapses[0].magnitude = 2.0;
    net.synapses[1].magnitude = 2.9;
    normalize_incoming(net, 2, 5.0);
    CHECK(net.synapses[0].magnitude == 2.0);
    CHECK(net.synapses[1].magnitude == 2.9);
}

TEST_CASE("normalize_incoming preserves ratios") {
    NetworkPhenotype net = build_phenotype(two_in_one_out(), 1, SimConfig{});
    net.synapses[0].magnitude = 6.0;
    net.synapses[1].magnitude = 2.0;
    normalize_incoming(net, 2, 5.0);
    CHECK(net.synapses[0].magnitude / net.synapses[1].magnitude ==
          doctest::Approx(3.0).epsilon(1e-12));
    CHECK(net.synapses[0].magnitude + net.synapses[1].magnitude ==
          doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("post-spike pairing applies the postsynaptic neuron's window") {
    NetworkPhenotype net = build_phenotype(two_in_one_out(), 1, SimConfig{});
    net.synapses[0].magnitude = 0.5;
    net.synapses[1].magnitude = 0.5;
    // Pre neuron 0 fired at step 90, post fires at step 100: dt = +10.
    net.neurons[0].last_spike_step = 90;
    net.neurons[1].last_spike_step = kNeverSpiked;
    const double expected =
        0.5 + stdp_delta(net.neurons[2].rule, 10.0);
    on_post_spike(net, 2, 100);
    CHECK(net.synapses[0].magnitude == doctest::Approx(expected).epsilon(1e-12));
    // Never-spiked pre contributes no pairing.
    CHECK(net.synapses[1].magnitude == 0.5);
}

TEST_CASE("pre-spike pairing uses the anti-causal branch") {
    NetworkPhenotype net = build_phenotype(two_in_one_out(), 1, SimConfig{});
    net.synapses[0].magnitude = 0.5;
    // Post fired at 100, pre fires now at 104: dt = 100 - 104 = -4.
    net.neurons[2].last_spike_step = 100;
    const double expected = 0.5 + stdp_delta(net.neurons[2].rule, -4.0);
    on_pre_spike(net, 0, 104);
    CHECK(net.synapses[0].magnitude == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("magnitudes clamp to the configured range") {
    SimConfig cfg;
    cfg.synapse.w_max = 1.0;
    NetworkPhenotype net = build_phenotype(two_in_one_out(), 1, cfg);
    net.neurons[2].rule.a_plus = 0.1;
    net.neurons[2].rule.a_minus = 0.1;

    net.synapses[0].magnitude = 0.999;
    net.neurons[0].last_spike_step = 99;
    on_post_spike(net, 2, 100);  // strong potentiation, would exceed 1.0
    CHECK(net.synapses[0].magnitude <= 1.0);

    net.synapses[0].magnitude = 0.0005;
    net.neurons[2].last_spike_step = 200;
    on_pre_spike(net, 0, 201);  // strong depression, would go negative
    CHECK(net.synapses[0].magnitude >= 0.0);
}
