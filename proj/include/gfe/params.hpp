#pragma once

#include <cstddef>
#include <vector>

#include "gfe/connectivity.hpp"
#include "gfe/error.hpp"

namespace gfe {

class ShapeMismatch : public Error {
public:
    ShapeMismatch() : Error("parameter/gradient structures have different shapes") {}
};

/// Weights and biases in edge-compact (ragged) storage: weights[l][j][e]
/// pairs with spec.in_edges[l][j][e], biases[l][j] with neuron j of weight
/// layer l. No storage exists for a masked edge, so mask invariance holds
/// by construction. Gradients and optimizer moments share this shape.
struct NetworkParams {
    std::vector<std::vector<std::vector<double>>> weights;
    std::vector<std::vector<double>> biases;

    bool operator==(const NetworkParams&) const = default;
};

using Gradients = NetworkParams;

inline NetworkParams zero_params(const ConnectivitySpec& spec) {
    NetworkParams p;
    p.weights.resize(kNumWeightLayers);
    p.biases.resize(kNumWeightLayers);
    for (int l = 0; l < kNumWeightLayers; ++l) {
        p.weights[l].resize(spec.layer_sizes[l + 1]);
        for (int j = 0; j < spec.layer_sizes[l + 1]; ++j)
            p.weights[l][j].assign(spec.in_edges[l][j].size(), 0.0);
        p.biases[l].assign(spec.layer_sizes[l + 1], 0.0);
    }
    return p;
}

inline bool same_shape(const NetworkParams& a, const NetworkParams& b) {
    if (a.weights.size() != b.weights.size() || a.biases.size() != b.biases.size()) return false;
    for (std::size_t l = 0; l < a.weights.size(); ++l) {
        if (a.weights[l].size() != b.weights[l].size()) return false;
        if (a.biases[l].size() != b.biases[l].size()) return false;
        for (std::size_t j = 0; j < a.weights[l].size(); ++j)
            if (a.weights[l][j].size() != b.weights[l][j].size()) return false;
    }
    return true;
}

inline bool shape_matches_spec(const NetworkParams& p, const ConnectivitySpec& spec) {
    return same_shape(p, zero_params(spec));
}

inline double sum_squared_weights(const NetworkParams& p) {
    double sum = 0.0;
    for (const auto& layer : p.weights)
        for (const auto& neuron : layer)
            for (double w : neuron) sum += w * w;
    return sum;
}

/// Applies fn(value&) to every parameter in canonical order: per weight
/// layer, all weights neuron-by-neuron and edge-by-edge, then all biases.
template <typename Fn>
void visit_params(NetworkParams& p, Fn&& fn) {
    for (std::size_t l = 0; l < p.weights.size(); ++l) {
        for (auto& neuron : p.weights[l])
            for (double& w : neuron) fn(w);
        for (double& b : p.biases[l]) fn(b);
    }
}

template <typename Fn>
void visit_params(const NetworkParams& p, Fn&& fn) {
    for (std::size_t l = 0; l < p.weights.size(); ++l) {
        for (const auto& neuron : p.weights[l])
            for (double w : neuron) fn(w);
        for (double b : p.biases[l]) fn(b);
    }
}

/// Dense views of the three weight matrices with zeros at masked
/// positions; matrices[l] is layer_sizes[l+1] x layer_sizes[l] row-major.
inline std::vector<std::vector<double>> densify(const ConnectivitySpec& spec,
                                                const NetworkParams& params) {
    std::vector<std::vector<double>> dense(kNumWeightLayers);
    for (int l = 0; l < kNumWeightLayers; ++l) {
        int rows = spec.layer_sizes[l + 1], cols = spec.layer_sizes[l];
        dense[l].assign(static_cast<std::size_t>(rows) * cols, 0.0);
        for (int j = 0; j < rows; ++j) {
            const auto& sources = spec.in_edges[l][j];
            for (std::size_t e = 0; e < sources.size(); ++e)
                dense[l][static_cast<std::size_t>(j) * cols + sources[e]] = params.weights[l][j][e];
        }
    }
    return dense;
}

}  // namespace gfe
