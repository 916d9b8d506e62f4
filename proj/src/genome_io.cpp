#include "nagi/genome_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace nagi {

namespace {

using json = nlohmann::ordered_json;

void require_keys(const json& obj, const char* where,
                  std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional) {
    for (const char* k : required) {
        if (!obj.contains(k)) {
            throw std::invalid_argument(std::string(where) + ": missing key '" + k + "'");
        }
    }
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        const std::string& k = it.key();
        auto match = [&k](const char* c) { return k == c; };
        if (std::any_of(required.begin(), required.end(), match)) continue;
        if (std::any_of(optional.begin(), optional.end(), match)) continue;
        throw std::invalid_argument(std::string(where) + ": unknown key '" + k + "'");
    }
}

void reject_weight_keys(const json& j, const std::string& path) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.key() == "weight") {
                throw std::invalid_argument("genome document carries a weight at " + path +
                                            "/weight; weights are never persisted");
            }
            reject_weight_keys(it.value(), path + "/" + it.key());
        }
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            reject_weight_keys(j[i], path + "/" + std::to_string(i));
        }
    }
}

std::size_t line_of_byte(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

double finite_number(const json& v, const char* where) {
    if (!v.is_number()) throw std::invalid_argument(std::string(where) + ": not a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw std::invalid_argument(std::string(where) + ": not finite");
    return d;
}

}  // namespace

std::string save_genome(const Genome& g, const std::optional<ChampionMeta>& meta) {
    json doc;
    doc["format_version"] = 1;
    doc["nodes"] = json::array();
    for (const NodeGene& n : g.nodes) {
        json jn;
        jn["id"] = n.id;
        jn["kind"] = to_string(n.kind);
        if (n.kind != NodeKind::Input) {
            jn["neurotransmitter"] = to_string(n.neurotransmitter);
            jn["plasticity"] = {{"kind", to_string(n.plasticity_kind)},
                                {"a_plus", n.a_plus},
                                {"a_minus", n.a_minus}};
        }
        doc["nodes"].push_back(std::move(jn));
    }
    doc["connections"] = json::array();
    for (const ConnectionGene& c : g.connections) {
        doc["connections"].push_back({{"innovation", c.innovation},
                                      {"in", c.in_node},
                                      {"out", c.out_node},
                                      {"enabled", c.enabled}});
    }
    if (meta) {
        doc["meta"] = {{"generation", meta->generation},
                       {"genome_id", meta->genome_id},
                       {"fitness", meta->fitness},
                       {"schedule_seed", meta->schedule_seed},
                       {"weight_seeds", meta->weight_seeds}};
    }
    return doc.dump(2) + "\n";
}

Genome load_genome(const std::string& text, std::optional<ChampionMeta>* meta_out) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("genome parse error at line " +
                                 std::to_string(line_of_byte(text, e.byte)) + ": " +
                                 e.what());
    } catch (const nlohmann::json::exception& e) {
        // Overflowing numbers surface as out_of_range, without a byte offset.
        throw std::runtime_error(std::string("genome parse error: ") + e.what());
    }

    if (!doc.is_object()) throw std::invalid_argument("genome document: not an object");
    reject_weight_keys(doc, "");
    require_keys(doc, "genome document", {"format_version", "nodes", "connections"},
                 {"meta"});
    if (!doc["format_version"].is_number_integer() || doc["format_version"].get<int>() != 1) {
        throw std::invalid_argument("genome document: unsupported format_version");
    }

    Genome g;
    for (const json& jn : doc["nodes"]) {
        NodeGene n;
        n.id = jn.at("id").get<std::uint32_t>();
        n.kind = node_kind_from_string(jn.at("kind").get<std::string>());
        if (n.kind == NodeKind::Input) {
            require_keys(jn, "input node", {"id", "kind"}, {});
        } else {
            require_keys(jn, "node", {"id", "kind", "neurotransmitter", "plasticity"}, {});
            n.neurotransmitter =
                neurotransmitter_from_string(jn.at("neurotransmitter").get<std::string>());
            const json& jp = jn.at("plasticity");
            require_keys(jp, "plasticity", {"kind", "a_plus", "a_minus"}, {});
            n.plasticity_kind = plasticity_kind_from_string(jp.at("kind").get<std::string>());
            n.a_plus = finite_number(jp.at("a_plus"), "a_plus");
            n.a_minus = finite_number(jp.at("a_minus"), "a_minus");
            if (n.a_plus <= 0.0 || n.a_minus <= 0.0) {
                throw std::invalid_argument("plasticity amplitudes must be positive");
            }
        }
        g.nodes.push_back(n);
    }
    for (const json& jc : doc["connections"]) {
        require_keys(jc, "connection", {"innovation", "in", "out", "enabled"}, {});
        ConnectionGene c;
        c.innovation = jc.at("innovation").get<std::uint64_t>();
        c.in_node = jc.at("in").get<std::uint32_t>();
        c.out_node = jc.at("out").get<std::uint32_t>();
        c.enabled = jc.at("enabled").get<bool>();
        g.connections.push_back(c);
    }

    std::sort(g.nodes.begin(), g.nodes.end(),
              [](const NodeGene& a, const NodeGene& b) { return a.id < b.id; });
    std::sort(g.connections.begin(), g.connections.end(),
              [](const ConnectionGene& a, const ConnectionGene& b) {
                  return a.innovation < b.innovation;
              });

    const AmplitudeBounds permissive{0.0, std::numeric_limits<double>::infinity()};
    if (auto err = validate_genome(g, permissive)) {
        throw std::invalid_argument("genome document: " + *err);
    }

    if (meta_out != nullptr) {
        meta_out->reset();
        if (doc.contains("meta")) {
            const json& jm = doc["meta"];
            require_keys(jm, "meta",
                         {"generation", "genome_id", "fitness", "schedule_seed",
                          "weight_seeds"},
                         {});
            ChampionMeta meta;
            meta.generation = jm.at("generation").get<std::uint64_t>();
            meta.genome_id = jm.at("genome_id").get<std::uint64_t>();
            meta.fitness = finite_number(jm.at("fitness"), "meta fitness");
            meta.schedule_seed = jm.at("schedule_seed").get<std::uint64_t>();
            for (const json& s : jm.at("weight_seeds")) {
                meta.weight_seeds.push_back(s.get<std::uint64_t>());
            }
            *meta_out = std::move(meta);
        }
    }
    return g;
}

void save_genome_file(const std::filesystem::path& path, const Genome& g,
                      const std::optional<ChampionMeta>& meta) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << save_genome(g, meta);
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

Genome load_genome_file(const std::filesystem::path& path,
                        std::optional<ChampionMeta>* meta_out) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_genome(buffer.str(), meta_out);
}

}  // namespace nagi
