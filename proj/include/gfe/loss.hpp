#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gfe/error.hpp"
#include "gfe/params.hpp"

namespace gfe {

class LossUndefined : public Error {
public:
    explicit LossUndefined(const std::string& kind) : Error("unknown loss kind: " + kind) {}
};

enum class LossKind { MSE, CrossEntropy };

inline std::string_view loss_name(LossKind kind) {
    return kind == LossKind::MSE ? "mse" : "cross_entropy";
}

inline LossKind loss_from_string(std::string_view s) {
    if (s == "mse") return LossKind::MSE;
    if (s == "cross_entropy" || s == "ce") return LossKind::CrossEntropy;
    throw LossUndefined(std::string(s));
}

struct LossConfig {
    LossKind kind = LossKind::CrossEntropy;
    double reg_beta = 0.05;  // L2 penalty: reg_beta * sum(w^2), biases excluded
};

inline constexpr double kLogClamp = 1e-12;

/// Numerically stable softmax: subtracts the max logit before
/// exponentiating. Output is non-negative and sums to 1.
inline std::vector<double> stable_softmax(std::span<const double> logits) {
    double max_logit = logits[0];
    for (double z : logits) max_logit = std::max(max_logit, z);
    std::vector<double> probs(logits.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < logits.size(); ++k) {
        probs[k] = std::exp(logits[k] - max_logit);
        sum += probs[k];
    }
    for (double& p : probs) p /= sum;
    return probs;
}

inline std::vector<double> one_hot(int class_index, int num_classes) {
    if (class_index < 0 || class_index >= num_classes)
        throw Error("class index " + std::to_string(class_index) + " outside 0.." +
                    std::to_string(num_classes - 1));
    std::vector<double> y(num_classes, 0.0);
    y[class_index] = 1.0;
    return y;
}

/// Data term of the loss, without the regularization penalty.
/// MSE: (1/K) * sum_k (p_k - y_k)^2.  Cross entropy: -sum_k y_k * log p_k
/// with probabilities clamped at 1e-12.
inline double data_loss(std::span<const double> probabilities, std::span<const double> target,
                        LossKind kind) {
    const auto k_count = probabilities.size();
    switch (kind) {
        case LossKind::MSE: {
            double sum = 0.0;
            for (std::size_t k = 0; k < k_count; ++k) {
                double d = probabilities[k] - target[k];
                sum += d * d;
            }
            return sum / static_cast<double>(k_count);
        }
        case LossKind::CrossEntropy: {
            double sum = 0.0;
            for (std::size_t k = 0; k < k_count; ++k)
                if (target[k] != 0.0)
                    sum -= target[k] * std::log(std::max(probabilities[k], kLogClamp));
            return sum;
        }
    }
    throw LossUndefined("(invalid enum value)");
}

/// Full training loss: data term plus reg_beta * sum of squared weights.
inline double compute_loss(std::span<const double> probabilities, std::span<const double> target,
                           const NetworkParams& params, const LossConfig& config) {
    double loss = data_loss(probabilities, target, config.kind);
    if (config.reg_beta != 0.0) loss += config.reg_beta * sum_squared_weights(params);
    return loss;
}

inline double compute_loss(std::span<const double> probabilities, int target_class,
                           const NetworkParams& params, const LossConfig& config) {
    auto y = one_hot(target_class, static_cast<int>(probabilities.size()));
    return compute_loss(probabilities, y, params, config);
}

/// Derivative of the data loss with respect to the output-layer logits,
/// with softmax folded in.
///   cross entropy: delta = p - y
///   MSE through softmax: delta_j = sum_k (2/K)(p_k - y_k) p_k (1{j=k} - p_j)
inline std::vector<double> output_delta(std::span<const double> probabilities,
                                        std::span<const double> target, LossKind kind) {
    const auto k_count = probabilities.size();
    std::vector<double> delta(k_count);
    switch (kind) {
        case LossKind::CrossEntropy:
            for (std::size_t k = 0; k < k_count; ++k) delta[k] = probabilities[k] - target[k];
            return delta;
        case LossKind::MSE: {
            const double scale = 2.0 / static_cast<double>(k_count);
            double weighted = 0.0;  // sum_k scale * (p_k - y_k) * p_k
            for (std::size_t k = 0; k < k_count; ++k)
                weighted += scale * (probabilities[k] - target[k]) * probabilities[k];
            for (std::size_t j = 0; j < k_count; ++j)
                delta[j] = scale * (probabilities[j] - target[j]) * probabilities[j] -
                           probabilities[j] * weighted;
            return delta;
        }
    }
    throw LossUndefined("(invalid enum value)");
}

}  // namespace gfe
