#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "gfe/adam.hpp"
#include "gfe/loss.hpp"
#include "gfe/network.hpp"
#include "gfe/preprocess.hpp"
#include "gfe/rng.hpp"

namespace gfe {

class LabelOutOfRange : public Error {
public:
    int label;
    LabelOutOfRange(int label_, int num_classes)
        : Error("label " + std::to_string(label_) + " outside 0.." +
                std::to_string(num_classes - 1)),
          label(label_) {}
};

struct TrainConfig {
    long epochs = 750;
    long batch_size = 32;
    std::uint64_t seed = 0;
    LossConfig loss;
    LrSchedule schedule;
    bool shuffle_each_epoch = true;
    XavierFans xavier_fans = XavierFans::Masked;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
};

inline void validate_train_config(const TrainConfig& c) {
    if (c.epochs < 1) throw ConfigError("epochs must be >= 1");
    if (c.batch_size < 1) throw ConfigError("batch size must be >= 1");
    if (c.loss.reg_beta < 0.0) throw ConfigError("regularization beta must be >= 0");
    validate_schedule(c.schedule);
}

struct EpochRecord {
    long epoch = 0;  // 1-based
    double mean_loss = 0.0;
    double lr = 0.0;  // rate used by the epoch's last update
    long steps = 0;
};

struct TrainHistory {
    std::vector<EpochRecord> epochs;
    long total_steps = 0;
};

/// Mini-batch training: epochs * ceil(n / batch_size) Adam steps, one per
/// batch, with the staircase schedule indexed by global step. Weights are
/// Xavier-initialized from a seed derived from config.seed; the epoch
/// shuffle draws from an independent derived stream. Deterministic.
inline std::pair<NetworkParams, TrainHistory> train(const ConnectivitySpec& spec,
                                                    const PreparedSet& training_set,
                                                    const TrainConfig& config) {
    validate_train_config(config);
    const long n = static_cast<long>(training_set.size());
    if (n == 0) throw Error("train: empty training set");
    const int k_count = spec.num_outputs();
    for (int label : training_set.labels)
        if (label < 0 || label >= k_count) throw LabelOutOfRange(label, k_count);

    NetworkParams params = xavier_init(spec, derive_seed(config.seed, "init"), config.xavier_fans);
    AdamState adam =
        make_adam_state(spec, config.adam_beta1, config.adam_beta2, config.adam_epsilon);
    std::mt19937_64 shuffle_rng(derive_seed(config.seed, "shuffle"));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    std::vector<std::vector<double>> one_hots(k_count);
    for (int k = 0; k < k_count; ++k) one_hots[k] = one_hot(k, k_count);

    Gradients grads = zero_params(spec);
    ForwardTrace trace;
    TrainHistory history;
    long global_step = 0;

    for (long epoch = 1; epoch <= config.epochs; ++epoch) {
        if (config.shuffle_each_epoch) std::shuffle(order.begin(), order.end(), shuffle_rng);

        double loss_sum = 0.0;
        long epoch_steps = 0;
        double last_lr = lr_at(config.schedule, global_step);

        for (long start = 0; start < n; start += config.batch_size) {
            long batch_n = std::min(config.batch_size, n - start);
            visit_params(grads, [](double& g) { g = 0.0; });

            double batch_data_loss = 0.0;
            for (long b = 0; b < batch_n; ++b) {
                std::size_t i = order[start + b];
                const auto& target = one_hots[training_set.labels[i]];
                forward_into(spec, params, training_set.features[i], trace);
                batch_data_loss += data_loss(trace.probabilities(), target, config.loss.kind);
                backward_into(spec, params, trace, target, config.loss.kind, grads);
            }
            visit_params(grads, [batch_n](double& g) { g /= static_cast<double>(batch_n); });
            add_regularization_gradient(params, config.loss.reg_beta, grads);

            double batch_loss = batch_data_loss / batch_n +
                                config.loss.reg_beta * sum_squared_weights(params);
            loss_sum += batch_loss * batch_n;

            last_lr = lr_at(config.schedule, global_step);
            adam_step_inplace(adam, params, grads, last_lr);
            ++global_step;
            ++epoch_steps;
        }

        history.epochs.push_back({epoch, loss_sum / n, last_lr, epoch_steps});
    }
    history.total_steps = global_step;
    return {std::move(params), std::move(history)};
}

}  // namespace gfe
