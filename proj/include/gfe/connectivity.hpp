#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "gfe/error.hpp"
#include "gfe/landmarks.hpp"

namespace gfe {

class InvalidOutputCount : public Error {
public:
    explicit InvalidOutputCount(int k)
        : Error("output neuron count must be in 2..9, got " + std::to_string(k)) {}
};

inline constexpr int kMinOutputs = 2;
inline constexpr int kMaxOutputs = 9;
inline constexpr int kH1Size = kNumPoints;   // one neuron per attribute point
inline constexpr int kH2Size = kNumRegions;  // one neuron per face region
inline constexpr int kNumWeightLayers = 3;

/// Per-neuron input index sets defining the masked topology. There are
/// always four layers: 300 inputs, 100 H1 neurons, 10 H2 neurons, K
/// outputs; only the edges differ between presets.
struct ConnectivitySpec {
    std::string preset;              // "structured" or "fc"
    std::array<int, 4> layer_sizes;  // {300, 100, 10, K}

    // in_edges[l][j]: source indices read by neuron j of weight layer l
    // (l = 0 into H1, 1 into H2, 2 into output).
    std::vector<std::vector<std::vector<int>>> in_edges;

    // out_edges[l][i]: (target neuron, edge position) pairs in weight
    // layer l reading source neuron i. Derived from in_edges.
    std::vector<std::vector<std::vector<std::pair<int, int>>>> out_edges;

    int num_outputs() const { return layer_sizes[3]; }

    /// In-degree of neuron j in weight layer l.
    int fan_in(int layer, int j) const { return static_cast<int>(in_edges[layer][j].size()); }

    /// Out-degree of neuron j of the layer feeding weight layer `layer`
    /// (0 for output-layer neurons, which feed nothing).
    int fan_out(int layer, int j) const {
        if (layer >= kNumWeightLayers) return 0;
        return static_cast<int>(out_edges[layer][j].size());
    }
};

namespace detail {

inline void build_out_edges(ConnectivitySpec& spec) {
    spec.out_edges.assign(kNumWeightLayers, {});
    for (int l = 0; l < kNumWeightLayers; ++l) {
        spec.out_edges[l].assign(spec.layer_sizes[l], {});
        for (int j = 0; j < spec.layer_sizes[l + 1]; ++j) {
            const auto& sources = spec.in_edges[l][j];
            for (int e = 0; e < static_cast<int>(sources.size()); ++e)
                spec.out_edges[l][sources[e]].emplace_back(j, e);
        }
    }
}

}  // namespace detail

/// Checks structural invariants: four layers of the fixed sizes, K in
/// 2..9, every edge index in range, no duplicate edge into one neuron,
/// every source neuron consumed at least once.
inline void validate_spec(const ConnectivitySpec& spec) {
    if (spec.layer_sizes[0] != kFrameDim || spec.layer_sizes[1] != kH1Size ||
        spec.layer_sizes[2] != kH2Size)
        throw Error("connectivity spec has wrong hidden/input layer sizes");
    if (spec.num_outputs() < kMinOutputs || spec.num_outputs() > kMaxOutputs)
        throw InvalidOutputCount(spec.num_outputs());
    if (spec.preset != "structured" && spec.preset != "fc")
        throw Error("unknown connectivity preset: " + spec.preset);
    if (static_cast<int>(spec.in_edges.size()) != kNumWeightLayers)
        throw Error("connectivity spec must have exactly 3 weight layers");
    for (int l = 0; l < kNumWeightLayers; ++l) {
        int n_src = spec.layer_sizes[l], n_dst = spec.layer_sizes[l + 1];
        if (static_cast<int>(spec.in_edges[l].size()) != n_dst)
            throw Error("weight layer " + std::to_string(l) + " has wrong neuron count");
        std::vector<int> consumed(n_src, 0);
        for (int j = 0; j < n_dst; ++j) {
            std::vector<char> seen(n_src, 0);
            for (int src : spec.in_edges[l][j]) {
                if (src < 0 || src >= n_src)
                    throw Error("edge source index out of range in layer " + std::to_string(l));
                if (seen[src]) throw Error("duplicate edge into one neuron");
                seen[src] = 1;
                ++consumed[src];
            }
            if (spec.in_edges[l][j].empty())
                throw Error("neuron with no inputs in layer " + std::to_string(l));
        }
        for (int i = 0; i < n_src; ++i)
            if (consumed[i] == 0)
                throw Error("source neuron " + std::to_string(i) + " of layer " +
                            std::to_string(l) + " is never consumed");
    }
}

/// The masked topology: H1 neuron n reads the (x, y, z) triple of
/// attribute point n, i.e. inputs {3n, 3n+1, 3n+2}; H2 neuron r reads the
/// H1 neurons of face region r; every output neuron reads all 10 H2
/// neurons.
inline ConnectivitySpec build_structured_spec(int num_outputs) {
    if (num_outputs < kMinOutputs || num_outputs > kMaxOutputs)
        throw InvalidOutputCount(num_outputs);
    ConnectivitySpec spec;
    spec.preset = "structured";
    spec.layer_sizes = {kFrameDim, kH1Size, kH2Size, num_outputs};
    spec.in_edges.resize(kNumWeightLayers);

    spec.in_edges[0].resize(kH1Size);
    for (int n = 0; n < kH1Size; ++n) spec.in_edges[0][n] = {3 * n, 3 * n + 1, 3 * n + 2};

    spec.in_edges[1].resize(kH2Size);
    for (int r = 0; r < kH2Size; ++r)
        for (int p = kRegions[r].first; p <= kRegions[r].last; ++p)
            spec.in_edges[1][r].push_back(p);

    spec.in_edges[2].resize(num_outputs);
    for (int k = 0; k < num_outputs; ++k)
        for (int r = 0; r < kH2Size; ++r) spec.in_edges[2][k].push_back(r);

    detail::build_out_edges(spec);
    return spec;
}

/// Fully connected baseline with the same layer sizes.
inline ConnectivitySpec build_fc_spec(int num_outputs) {
    if (num_outputs < kMinOutputs || num_outputs > kMaxOutputs)
        throw InvalidOutputCount(num_outputs);
    ConnectivitySpec spec;
    spec.preset = "fc";
    spec.layer_sizes = {kFrameDim, kH1Size, kH2Size, num_outputs};
    spec.in_edges.resize(kNumWeightLayers);
    for (int l = 0; l < kNumWeightLayers; ++l) {
        spec.in_edges[l].resize(spec.layer_sizes[l + 1]);
        for (auto& sources : spec.in_edges[l]) {
            sources.resize(spec.layer_sizes[l]);
            for (int i = 0; i < spec.layer_sizes[l]; ++i) sources[i] = i;
        }
    }
    detail::build_out_edges(spec);
    return spec;
}

inline ConnectivitySpec build_spec(const std::string& preset, int num_outputs) {
    if (preset == "structured") return build_structured_spec(num_outputs);
    if (preset == "fc") return build_fc_spec(num_outputs);
    throw ConfigError("unknown preset: " + preset);
}

/// Total number of parameters: one weight per edge plus one bias per
/// non-input neuron.
inline long param_count(const ConnectivitySpec& spec) {
    long count = 0;
    for (int l = 0; l < kNumWeightLayers; ++l) {
        for (const auto& sources : spec.in_edges[l]) count += static_cast<long>(sources.size());
        count += spec.layer_sizes[l + 1];  // biases
    }
    return count;
}

}  // namespace gfe
