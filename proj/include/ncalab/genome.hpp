#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace ncalab {

inline constexpr int kNetworkInputs = 10;
inline constexpr int kNetworkOutputs = 5;
inline constexpr int kGenomeParams = kNetworkOutputs * kNetworkInputs + kNetworkOutputs;

// Parameters of the per-cell network: a 10 -> 5 linear map plus bias, every
// entry in [-1, 1]. This is the unit of evolution.
struct Genome {
    std::array<std::array<double, kNetworkInputs>, kNetworkOutputs> weights{};
    std::array<double, kNetworkOutputs> bias{};
    std::uint64_t id = 0;
    std::optional<std::uint64_t> parent_id;

    // Flat view over the 55 parameters: weights row-major, then bias.
    double param(int i) const {
        return i < kNetworkOutputs * kNetworkInputs ? weights[i / kNetworkInputs][i % kNetworkInputs]
                                                    : bias[i - kNetworkOutputs * kNetworkInputs];
    }
    void set_param(int i, double v) {
        if (i < kNetworkOutputs * kNetworkInputs)
            weights[i / kNetworkInputs][i % kNetworkInputs] = v;
        else
            bias[i - kNetworkOutputs * kNetworkInputs] = v;
    }
    bool finite() const;
    bool same_parameters(const Genome& other) const {
        return weights == other.weights && bias == other.bias;
    }
};

// Throws std::invalid_argument when any parameter is non-finite.
void validate_genome(const Genome& g);

std::string genome_to_json(const Genome& g);
Genome genome_from_json(const std::string& text);
Genome load_genome(const std::string& path);
void save_genome(const Genome& g, const std::string& path);

}  // namespace ncalab
