#include "nagi/metrics.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace nagi {

std::string format_double(double v) {
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), v);
    if (result.ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buf, result.ptr);
}

std::string metrics_csv(const std::vector<GenerationStats>& history) {
    std::string out =
        "generation,best_fitness,mean_fitness,median_fitness,species,mean_nodes,"
        "mean_connections\n";
    for (const GenerationStats& s : history) {
        out += std::to_string(s.generation);
        out += ',';
        out += format_double(s.best_fitness);
        out += ',';
        out += format_double(s.mean_fitness);
        out += ',';
        out += format_double(s.median_fitness);
        out += ',';
        out += std::to_string(s.species_count);
        out += ',';
        out += format_double(s.mean_nodes);
        out += ',';
        out += format_double(s.mean_connections);
        out += '\n';
    }
    return out;
}

void write_metrics(const std::vector<GenerationStats>& history,
                   const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << metrics_csv(history);
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace nagi
