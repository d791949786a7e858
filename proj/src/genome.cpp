#include "ncalab/genome.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ncalab {

bool Genome::finite() const {
    for (int i = 0; i < kGenomeParams; ++i)
        if (!std::isfinite(param(i))) return false;
    return true;
}

void validate_genome(const Genome& g) {
    if (!g.finite()) {
        throw std::invalid_argument("invalid genome: non-finite parameter (id " +
                                    std::to_string(g.id) + ")");
    }
}

std::string genome_to_json(const Genome& g) {
    nlohmann::json j;
    j["id"] = g.id;
    if (g.parent_id)
        j["parent_id"] = *g.parent_id;
    else
        j["parent_id"] = nullptr;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : g.weights) rows.push_back(row);
    j["weights"] = rows;
    j["bias"] = g.bias;
    return j.dump(2) + "\n";
}

Genome genome_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("genome parse failure: ") + e.what());
    }
    Genome g;
    try {
        g.id = j.at("id").get<std::uint64_t>();
        if (!j.at("parent_id").is_null()) g.parent_id = j["parent_id"].get<std::uint64_t>();
        const auto& rows = j.at("weights");
        if (rows.size() != kNetworkOutputs)
            throw std::runtime_error("genome: expected 5 weight rows");
        for (int o = 0; o < kNetworkOutputs; ++o) {
            if (rows[o].size() != kNetworkInputs)
                throw std::runtime_error("genome: expected 10 weights per row");
            for (int i = 0; i < kNetworkInputs; ++i) g.weights[o][i] = rows[o][i].get<double>();
        }
        const auto& bias = j.at("bias");
        if (bias.size() != kNetworkOutputs) throw std::runtime_error("genome: expected 5 bias values");
        for (int o = 0; o < kNetworkOutputs; ++o) g.bias[o] = bias[o].get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("genome schema error: ") + e.what());
    }
    validate_genome(g);
    return g;
}

Genome load_genome(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open genome file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return genome_from_json(buf.str());
}

void save_genome(const Genome& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write genome file: " + path);
    out << genome_to_json(g);
}

}  // namespace ncalab
