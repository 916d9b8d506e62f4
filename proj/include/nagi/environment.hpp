#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "nagi/rng.hpp"

namespace nagi {

// Action indices, also used as sample labels.
inline constexpr int kActionEat = 0;
inline constexpr int kActionAvoid = 1;

struct Sample {
    std::vector<double> sensors;  // each in [0, 1]
    int label;                    // correct action
};

enum class EnvironmentVariant { Binary1D, Linear2D };

std::string to_string(EnvironmentVariant v);
EnvironmentVariant environment_variant_from_string(const std::string& s);

// One environment: a labeling rule over sensor space. Binary1D reads a single
// black/white sensor; Linear2D labels by a half-plane over [0,1]^2.
struct EnvironmentSpec {
    EnvironmentVariant variant;
    bool flipped = false;
    // Linear2D only:
    double normal_x = 1.0;
    double normal_y = 0.0;
    double offset = 0.0;
};

std::size_t sensor_count(EnvironmentVariant v);

// Labels a sensor vector under a spec. Throws on arity mismatch.
int label(const EnvironmentSpec& spec, const std::vector<double>& sensors);

struct EnvironmentConfig {
    EnvironmentVariant variant = EnvironmentVariant::Binary1D;
    std::size_t dataset_size = 40;
    std::size_t specs_per_cycle = 4;
    double eat_fraction_lo = 0.4;
    double eat_fraction_hi = 0.6;
    int action_count = 2;
};

// The full environment sequence for one generation: ordered specs plus a
// labeled dataset per spec. Identical for every genome evaluated against it,
// and a pure function of (generation_seed, config). Immutable once built;
// cursors reading it may run concurrently.
struct GenerationSchedule {
    std::uint64_t generation_seed = 0;
    EnvironmentConfig config;
    std::vector<EnvironmentSpec> specs;
    std::vector<std::vector<Sample>> datasets;  // canonical order, pre-labeled
};

// Binary1D: alternating unflipped/flipped specs over a balanced black/white
// dataset. Linear2D: a fresh rejection-sampled boundary per spec pair with an
// eat-fraction inside the configured band; every second spec flips its
// predecessor. Throws std::runtime_error if 10^4 boundary draws never balance.
GenerationSchedule generate_schedule(std::uint64_t generation_seed,
                                     const EnvironmentConfig& config);

// Streams samples from a schedule: one shuffled pass over each spec's dataset
// in turn, cycling forever with fresh per-(spec, cycle) shuffles. Iteration
// order depends only on the schedule, never on the consumer.
class SampleCursor {
public:
    explicit SampleCursor(const GenerationSchedule& schedule);

    const Sample& next();

    std::size_t spec_index() const {
        return static_cast<std::size_t>(pass_ % schedule_->specs.size());
    }
    std::uint64_t cycle() const { return pass_ / schedule_->specs.size(); }
    std::uint64_t draws() const { return draws_; }

private:
    void reshuffle();

    const GenerationSchedule* schedule_;
    std::uint64_t pass_ = 0;   // completed + current spec passes
    std::size_t pos_ = 0;      // position within the current pass
    std::uint64_t draws_ = 0;
    std::vector<std::uint32_t> order_;
};

}  // namespace nagi
