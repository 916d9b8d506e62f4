#pragma once

#include <filesystem>
#include <string>

#include "nagi/evolution.hpp"

namespace nagi {

// Everything a run needs, in one self-describing document. A run is
// reproducible from this file alone.
struct RunConfig {
    std::uint64_t master_seed = 1;
    std::string out_dir = "out";
    int workers = 1;
    EngineConfig engine;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Strict parse: every key optional, defaults fill the gaps, unknown keys are
// an error naming their JSON path. Malformed JSON reports the line number.
// Semantic violations (out-of-range values, odd binary datasets, ...) name
// the offending key. All failures throw ConfigError.
RunConfig parse_run_config(const std::string& text);

RunConfig load_run_config(const std::filesystem::path& path);

// The config with every default materialized; parsing it again yields the
// same RunConfig. Stable formatting, suitable for byte comparison.
std::string resolved_config_json(const RunConfig& config);

}  // namespace nagi
