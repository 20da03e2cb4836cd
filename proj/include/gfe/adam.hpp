#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include "gfe/params.hpp"

namespace gfe {

/// Staircase learning-rate schedule: the rate is multiplied by
/// decay_ratio once per decay_step optimization steps.
struct LrSchedule {
    double initial_rate = 0.01;
    double decay_ratio = 0.9;
    long decay_step = 7000;
};

inline void validate_schedule(const LrSchedule& s) {
    if (!(s.initial_rate > 0.0)) throw ConfigError("initial learning rate must be > 0");
    if (!(s.decay_ratio > 0.0 && s.decay_ratio <= 1.0))
        throw ConfigError("decay ratio must be in (0, 1]");
    if (s.decay_step < 1) throw ConfigError("decay step must be >= 1");
}

/// Learning rate in effect at a given 0-based step:
/// initial_rate * decay_ratio^floor(step / decay_step).
inline double lr_at(const LrSchedule& schedule, long step) {
    if (step < 0) throw ConfigError("schedule step must be >= 0");
    long decays = step / schedule.decay_step;
    return schedule.initial_rate * std::pow(schedule.decay_ratio, static_cast<double>(decays));
}

/// First/second moment accumulators and step counter, shaped exactly like
/// the parameters they update.
struct AdamState {
    NetworkParams m;
    NetworkParams v;
    long t = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

inline AdamState make_adam_state(const ConnectivitySpec& spec, double beta1 = 0.9,
                                 double beta2 = 0.999, double epsilon = 1e-8) {
    AdamState state;
    state.m = zero_params(spec);
    state.v = zero_params(spec);
    state.beta1 = beta1;
    state.beta2 = beta2;
    state.epsilon = epsilon;
    return state;
}

namespace detail {

inline void adam_update(double& m, double& v, double& param, double g, const AdamState& s,
                        double lr, double bc1, double bc2) {
    m = s.beta1 * m + (1.0 - s.beta1) * g;
    v = s.beta2 * v + (1.0 - s.beta2) * g * g;
    double m_hat = m / bc1;
    double v_hat = v / bc2;
    param -= lr * m_hat / (std::sqrt(v_hat) + s.epsilon);
}

}  // namespace detail

/// One Adam update with bias correction, applied in place.
inline void adam_step_inplace(AdamState& state, NetworkParams& params, const Gradients& grads,
                              double lr) {
    if (!same_shape(params, grads) || !same_shape(params, state.m)) throw ShapeMismatch();
    state.t += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        for (std::size_t j = 0; j < params.weights[l].size(); ++j) {
            auto& w = params.weights[l][j];
            auto& m = state.m.weights[l][j];
            auto& v = state.v.weights[l][j];
            const auto& g = grads.weights[l][j];
            for (std::size_t e = 0; e < w.size(); ++e)
                detail::adam_update(m[e], v[e], w[e], g[e], state, lr, bc1, bc2);
        }
        auto& b = params.biases[l];
        auto& mb = state.m.biases[l];
        auto& vb = state.v.biases[l];
        const auto& gb = grads.biases[l];
        for (std::size_t j = 0; j < b.size(); ++j)
            detail::adam_update(mb[j], vb[j], b[j], gb[j], state, lr, bc1, bc2);
    }
}

/// Pure-value variant returning the updated (state, params).
inline std::pair<AdamState, NetworkParams> adam_step(const AdamState& state,
                                                     const NetworkParams& params,
                                                     const Gradients& grads, double lr) {
    AdamState next_state = state;
    NetworkParams next_params = params;
    adam_step_inplace(next_state, next_params, grads, lr);
    return {std::move(next_state), std::move(next_params)};
}

}  // namespace gfe
