#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nagi/genome.hpp"

namespace nagi {

// Provenance block attached to champion files so a run can be replayed
// without the original metrics: which generation, which environment seed,
// and which weight draws produced the recorded fitness.
struct ChampionMeta {
    std::uint64_t generation = 0;
    std::uint64_t genome_id = 0;
    double fitness = 0.0;
    std::uint64_t schedule_seed = 0;
    std::vector<std::uint64_t> weight_seeds;
};

// Serializes to the genome document: format_version, nodes, connections,
// and, when provided, meta. Stable key order; numbers round-trip exactly.
std::string save_genome(const Genome& g,
                        const std::optional<ChampionMeta>& meta = std::nullopt);

// Strict parse: unknown keys anywhere are rejected, as is any document
// containing a "weight" key at any depth. Throws std::runtime_error with a
// line-numbered message on malformed JSON, std::invalid_argument on schema
// violations. A meta block, when present, is returned through meta_out.
Genome load_genome(const std::string& text, std::optional<ChampionMeta>* meta_out = nullptr);

void save_genome_file(const std::filesystem::path& path, const Genome& g,
                      const std::optional<ChampionMeta>& meta = std::nullopt);
Genome load_genome_file(const std::filesystem::path& path,
                        std::optional<ChampionMeta>* meta_out = nullptr);

}  // namespace nagi
