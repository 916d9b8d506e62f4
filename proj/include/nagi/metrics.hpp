#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nagi/evolution.hpp"

namespace nagi {

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

// CSV: one header line, one row per generation record, round-trip numbers.
std::string metrics_csv(const std::vector<GenerationStats>& history);

void write_metrics(const std::vector<GenerationStats>& history,
                   const std::filesystem::path& path);

}  // namespace nagi
