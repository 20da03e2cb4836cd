#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "gfe/connectivity.hpp"
#include "gfe/loss.hpp"
#include "gfe/params.hpp"

namespace gfe {

class NonFiniteInput : public Error {
public:
    NonFiniteInput() : Error("network input contains NaN or Inf") {}
};

enum class XavierFans {
    Masked,  // per-neuron in/out edge counts under the mask
    Dense,   // dense layer widths, for comparison runs
};

inline XavierFans xavier_fans_from_string(std::string_view s) {
    if (s == "masked") return XavierFans::Masked;
    if (s == "dense") return XavierFans::Dense;
    throw ConfigError("unknown xavier fans mode: " + std::string(s));
}

/// Xavier/Glorot uniform initialization: each weight is drawn from
/// +-sqrt(6 / (fan_in + fan_out)). In Masked mode the fans are the owning
/// neuron's in-degree and out-degree under the mask (an output neuron has
/// out-degree 0); Dense mode uses the surrounding layer widths. Biases
/// start at 0. Deterministic given the seed.
inline NetworkParams xavier_init(const ConnectivitySpec& spec, std::uint64_t seed,
                                 XavierFans fans = XavierFans::Masked) {
    NetworkParams params = zero_params(spec);
    std::mt19937_64 rng(seed);
    for (int l = 0; l < kNumWeightLayers; ++l) {
        for (int j = 0; j < spec.layer_sizes[l + 1]; ++j) {
            double fan_in, fan_out;
            if (fans == XavierFans::Masked) {
                fan_in = spec.fan_in(l, j);
                fan_out = spec.fan_out(l + 1, j);
            } else {
                fan_in = spec.layer_sizes[l];
                fan_out = spec.layer_sizes[l + 1];
            }
            double bound = std::sqrt(6.0 / (fan_in + fan_out));
            std::uniform_real_distribution<double> dist(-bound, bound);
            for (double& w : params.weights[l][j]) w = dist(rng);
        }
    }
    return params;
}

/// Per-layer pre-activations and activations cached by one forward pass;
/// act[2] holds the output probabilities.
struct ForwardTrace {
    std::array<double, kFrameDim> input{};
    std::array<std::vector<double>, kNumWeightLayers> pre;
    std::array<std::vector<double>, kNumWeightLayers> act;

    const std::vector<double>& probabilities() const { return act[kNumWeightLayers - 1]; }
};

/// Forward pass: tanh on both hidden layers, stable softmax on the
/// output. Writes into `trace` so hot loops can reuse the buffers.
inline void forward_into(const ConnectivitySpec& spec, const NetworkParams& params,
                         std::span<const double> input, ForwardTrace& trace) {
    if (input.size() != static_cast<std::size_t>(kFrameDim))
        throw Error("network input must have 300 values, got " + std::to_string(input.size()));
    for (double v : input)
        if (!std::isfinite(v)) throw NonFiniteInput();
    std::copy(input.begin(), input.end(), trace.input.begin());

    const double* src = trace.input.data();
    for (int l = 0; l < kNumWeightLayers; ++l) {
        int n = spec.layer_sizes[l + 1];
        trace.pre[l].resize(n);
        trace.act[l].resize(n);
        for (int j = 0; j < n; ++j) {
            const auto& sources = spec.in_edges[l][j];
            const auto& w = params.weights[l][j];
            double z = params.biases[l][j];
            for (std::size_t e = 0; e < sources.size(); ++e) z += w[e] * src[sources[e]];
            trace.pre[l][j] = z;
        }
        if (l < kNumWeightLayers - 1) {
            for (int j = 0; j < n; ++j) trace.act[l][j] = std::tanh(trace.pre[l][j]);
        } else {
            trace.act[l] = stable_softmax(trace.pre[l]);
        }
        src = trace.act[l].data();
    }
}

inline ForwardTrace forward(const ConnectivitySpec& spec, const NetworkParams& params,
                            std::span<const double> input) {
    ForwardTrace trace;
    forward_into(spec, params, input, trace);
    return trace;
}

inline std::vector<double> predict_probabilities(const ConnectivitySpec& spec,
                                                 const NetworkParams& params,
                                                 std::span<const double> input) {
    return forward(spec, params, input).probabilities();
}

/// Accumulates the analytic gradient of the data loss for one sample into
/// `grads` (which must be spec-shaped). The L2 term is added separately
/// so batch loops can accumulate sample gradients first.
inline void backward_into(const ConnectivitySpec& spec, const NetworkParams& params,
                          const ForwardTrace& trace, std::span<const double> target,
                          LossKind kind, Gradients& grads) {
    std::vector<double> delta = output_delta(trace.probabilities(), target, kind);
    for (int l = kNumWeightLayers - 1; l >= 0; --l) {
        const double* src_act = l == 0 ? trace.input.data() : trace.act[l - 1].data();
        for (int j = 0; j < spec.layer_sizes[l + 1]; ++j) {
            const auto& sources = spec.in_edges[l][j];
            auto& gw = grads.weights[l][j];
            for (std::size_t e = 0; e < sources.size(); ++e) gw[e] += delta[j] * src_act[sources[e]];
            grads.biases[l][j] += delta[j];
        }
        if (l == 0) break;
        // delta for the source layer: backpropagate through the mask,
        // then through tanh'(z) = 1 - act^2
        std::vector<double> prev_delta(spec.layer_sizes[l], 0.0);
        for (int i = 0; i < spec.layer_sizes[l]; ++i) {
            double sum = 0.0;
            for (const auto& [j, e] : spec.out_edges[l][i]) sum += delta[j] * params.weights[l][j][e];
            double a = trace.act[l - 1][i];
            prev_delta[i] = sum * (1.0 - a * a);
        }
        delta = std::move(prev_delta);
    }
}

/// Adds the gradient of the L2 penalty, d(beta * sum w^2)/dw = 2*beta*w.
inline void add_regularization_gradient(const NetworkParams& params, double reg_beta,
                                        Gradients& grads) {
    if (reg_beta == 0.0) return;
    for (std::size_t l = 0; l < params.weights.size(); ++l)
        for (std::size_t j = 0; j < params.weights[l].size(); ++j)
            for (std::size_t e = 0; e < params.weights[l][j].size(); ++e)
                grads.weights[l][j][e] += 2.0 * reg_beta * params.weights[l][j][e];
}

/// Exact analytic gradient of the full loss (data term plus L2 penalty)
/// for one sample. Masked edges have no gradient storage at all.
inline Gradients backward(const ConnectivitySpec& spec, const NetworkParams& params,
                          const ForwardTrace& trace, std::span<const double> target,
                          const LossConfig& config) {
    Gradients grads = zero_params(spec);
    backward_into(spec, params, trace, target, config.kind, grads);
    add_regularization_gradient(params, config.reg_beta, grads);
    return grads;
}

inline Gradients backward(const ConnectivitySpec& spec, const NetworkParams& params,
                          const ForwardTrace& trace, int target_class, const LossConfig& config) {
    auto y = one_hot(target_class, spec.num_outputs());
    return backward(spec, params, trace, y, config);
}

}  // namespace gfe
