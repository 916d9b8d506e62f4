#pragma once

#include <cstdint>
#include <string>

namespace nagi {

struct NetworkPhenotype;

// The four evolvable STDP shapes. Asymmetric kinds use exponential windows,
// symmetric kinds a Mexican-hat difference of Gaussians; anti kinds are exact
// negations of their Hebbian counterparts.
enum class PlasticityKind : std::uint8_t {
    AsymmetricHebbian = 0,
    SymmetricHebbian = 1,
    AsymmetricAntiHebbian = 2,
    SymmetricAntiHebbian = 3,
};

constexpr int kPlasticityKindCount = 4;

const char* to_string(PlasticityKind kind);
PlasticityKind plasticity_kind_from_string(const std::string& s);

// Per-neuron learning rule. Amplitudes are genomic; time constants come from
// global config (filled in when the phenotype is built).
struct PlasticityRule {
    PlasticityKind kind = PlasticityKind::AsymmetricHebbian;
    double a_plus = 0.01;     // potentiation amplitude
    double a_minus = 0.01;    // depression amplitude
    double tau_plus = 20.0;   // ms, asymmetric potentiation window
    double tau_minus = 20.0;  // ms, asymmetric depression window
    double sigma_plus = 10.0;   // ms, symmetric center width
    double sigma_minus = 20.0;  // ms, symmetric surround width (> sigma_plus)
};

struct PlasticityParams {
    double tau_plus = 20.0;
    double tau_minus = 20.0;
    double sigma_plus = 10.0;
    double sigma_minus = 20.0;
    double a_min = 0.001;  // legal amplitude range for genomic a_plus/a_minus
    double a_max = 0.1;
    double w_cap = 5.0;  // max total incoming magnitude per neuron
};

// Weight-magnitude change for a spike pair separated by delta_t = t_post - t_pre
// (ms). Pure function; positive return potentiates.
double stdp_delta(const PlasticityRule& rule, double delta_t);

// Event-driven updates with nearest-neighbor pairing. Each applies stdp_delta
// to the affected synapse(s), clamps magnitudes to [0, w_max], then rescales
// the postsynaptic neuron's incoming magnitudes to the cap.
void on_post_spike(NetworkPhenotype& net, std::uint32_t neuron_index, std::int64_t now);
void on_pre_spike(NetworkPhenotype& net, std::uint32_t synapse_index, std::int64_t now);

// If the incoming magnitude sum exceeds cap, scales every incoming magnitude
// by cap/sum; ratios are preserved.
void normalize_incoming(NetworkPhenotype& net, std::uint32_t neuron_index, double cap);

}  // namespace nagi
