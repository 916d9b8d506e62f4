#include "nagi/environment.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nagi {

std::string to_string(EnvironmentVariant v) {
    switch (v) {
        case EnvironmentVariant::Binary1D: return "binary1d";
        case EnvironmentVariant::Linear2D: return "linear2d";
    }
    throw std::logic_error("unknown environment variant");
}

EnvironmentVariant environment_variant_from_string(const std::string& s) {
    if (s == "binary1d") return EnvironmentVariant::Binary1D;
    if (s == "linear2d") return EnvironmentVariant::Linear2D;
    throw std::invalid_argument("unknown environment variant: " + s);
}

std::size_t sensor_count(EnvironmentVariant v) {
    return v == EnvironmentVariant::Binary1D ? 1 : 2;
}

int label(const EnvironmentSpec& spec, const std::vector<double>& sensors) {
    if (sensors.size() != sensor_count(spec.variant)) {
        throw std::invalid_argument("label: sensor arity does not match variant");
    }
    bool eat;
    if (spec.variant == EnvironmentVariant::Binary1D) {
        eat = sensors[0] >= 0.5;  // white is edible
    } else {
        eat = spec.normal_x * sensors[0] + spec.normal_y * sensors[1] + spec.offset >= 0.0;
    }
    if (spec.flipped) eat = !eat;
    return eat ? kActionEat : kActionAvoid;
}

namespace {

constexpr int kMaxBoundaryTries = 10000;

std::vector<Sample> binary_dataset(std::size_t dataset_size) {
    std::vector<Sample> data;
    data.reserve(dataset_size);
    const std::size_t half = dataset_size / 2;
    for (std::size_t i = 0; i < dataset_size; ++i) {
        data.push_back({{i < half ? 0.0 : 1.0}, 0});
    }
    return data;
}

std::vector<Sample> planar_points(std::size_t dataset_size, RngStream& rng) {
    std::vector<Sample> data;
    data.reserve(dataset_size);
    for (std::size_t i = 0; i < dataset_size; ++i) {
        data.push_back({{rng.uniform_double(), rng.uniform_double()}, 0});
    }
    return data;
}

double eat_fraction(const EnvironmentSpec& spec, const std::vector<Sample>& data) {
    std::size_t eats = 0;
    for (const Sample& s : data) {
        if (label(spec, s.sensors) == kActionEat) ++eats;
    }
    return static_cast<double>(eats) / static_cast<double>(data.size());
}

void apply_labels(const EnvironmentSpec& spec, std::vector<Sample>& data) {
    for (Sample& s : data) s.label = label(spec, s.sensors);
}

}  // namespace

GenerationSchedule generate_schedule(std::uint64_t generation_seed,
                                     const EnvironmentConfig& config) {
    if (config.dataset_size < 2) {
        throw std::invalid_argument("generate_schedule: dataset_size must be >= 2");
    }
    if (config.specs_per_cycle == 0) {
        throw std::invalid_argument("generate_schedule: specs_per_cycle must be >= 1");
    }

    GenerationSchedule sched;
    sched.generation_seed = generation_seed;
    sched.config = config;
    sched.specs.reserve(config.specs_per_cycle);
    sched.datasets.reserve(config.specs_per_cycle);

    if (config.variant == EnvironmentVariant::Binary1D) {
        if (config.dataset_size % 2 != 0) {
            throw std::invalid_argument("generate_schedule: binary1d needs an even dataset");
        }
        for (std::size_t i = 0; i < config.specs_per_cycle; ++i) {
            EnvironmentSpec spec{EnvironmentVariant::Binary1D};
            spec.flipped = (i % 2 == 1);
            std::vector<Sample> data = binary_dataset(config.dataset_size);
            apply_labels(spec, data);
            sched.specs.push_back(spec);
            sched.datasets.push_back(std::move(data));
        }
        return sched;
    }

    for (std::size_t i = 0; i < config.specs_per_cycle; ++i) {
        if (i % 2 == 1) {
            // Same boundary and points as the predecessor, labels inverted.
            EnvironmentSpec spec = sched.specs.back();
            spec.flipped = !spec.flipped;
            std::vector<Sample> data = sched.datasets.back();
            apply_labels(spec, data);
            sched.specs.push_back(spec);
            sched.datasets.push_back(std::move(data));
            continue;
        }

        RngStream points_rng({generation_seed, stream_tag::kEnvPoints, i});
        std::vector<Sample> data = planar_points(config.dataset_size, points_rng);

        RngStream boundary_rng({generation_seed, stream_tag::kEnvBoundary, i});
        EnvironmentSpec spec{EnvironmentVariant::Linear2D};
        bool balanced = false;
        for (int attempt = 0; attempt < kMaxBoundaryTries; ++attempt) {
            const double theta = boundary_rng.uniform_real(0.0, 2.0 * 3.14159265358979323846);
            spec.normal_x = std::cos(theta);
            spec.normal_y = std::sin(theta);
            spec.offset = boundary_rng.uniform_real(-1.5, 1.5);
            const double f = eat_fraction(spec, data);
            if (f >= config.eat_fraction_lo && f <= config.eat_fraction_hi) {
                balanced = true;
                break;
            }
        }
        if (!balanced) {
            throw std::runtime_error(
                "generate_schedule: no balanced boundary after 10000 draws; "
                "check the eat-fraction band");
        }
        apply_labels(spec, data);
        sched.specs.push_back(spec);
        sched.datasets.push_back(std::move(data));
    }
    return sched;
}

SampleCursor::SampleCursor(const GenerationSchedule& schedule) : schedule_(&schedule) {
    if (schedule.specs.empty() || schedule.datasets.size() != schedule.specs.size()) {
        throw std::invalid_argument("SampleCursor: malformed schedule");
    }
    reshuffle();
}

void SampleCursor::reshuffle() {
    const std::size_t n = schedule_->datasets[spec_index()].size();
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0u);
    RngStream rng({schedule_->generation_seed, stream_tag::kEnvOrder,
                   static_cast<std::uint64_t>(spec_index()), cycle()});
    rng.shuffle(order_);
    pos_ = 0;
}

const Sample& SampleCursor::next() {
    if (pos_ == order_.size()) {
        ++pass_;
        reshuffle();
    }
    const Sample& s = schedule_->datasets[spec_index()][order_[pos_]];
    ++pos_;
    ++draws_;
    return s;
}

}  // namespace nagi
