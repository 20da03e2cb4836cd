#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gfe/loss.hpp"
#include "gfe/network.hpp"
#include "gfe/rng.hpp"

namespace gfe {

struct GradCheckReport {
    double max_rel_err = 0.0;
    long params_checked = 0;
    long worst_index = -1;  // canonical visit order
    double worst_analytic = 0.0;
    double worst_fd = 0.0;
};

/// Relative error with a unit floor on the denominator (the losses here
/// are O(1), so values below the floor are compared absolutely).
inline double gradcheck_rel_err(double analytic, double fd) {
    double denom = std::max({1.0, std::abs(analytic), std::abs(fd)});
    return std::abs(analytic - fd) / denom;
}

/// Compares the analytic gradient against central finite differences of
/// the full loss for one (input, target) pair. The finite-difference side
/// only uses the forward pass and the loss, never the backward pass.
/// `corrupt_gradient` perturbs one analytic entry; it exists so negative
/// controls can prove the check would fail.
inline GradCheckReport gradient_check(const ConnectivitySpec& spec, const NetworkParams& params,
                                      std::span<const double> input, int target_class,
                                      const LossConfig& config, double h = 1e-5,
                                      bool corrupt_gradient = false) {
    auto target = one_hot(target_class, spec.num_outputs());

    Gradients analytic = backward(spec, params, forward(spec, params, input), target, config);
    if (corrupt_gradient) analytic.weights[0][0][0] += 1e-3;

    std::vector<double> analytic_flat;
    visit_params(static_cast<const Gradients&>(analytic),
                 [&](double g) { analytic_flat.push_back(g); });

    NetworkParams perturbed = params;
    std::vector<double*> refs;
    visit_params(perturbed, [&](double& v) { refs.push_back(&v); });

    auto loss_at = [&]() {
        auto trace = forward(spec, perturbed, input);
        return compute_loss(trace.probabilities(), target, perturbed, config);
    };

    GradCheckReport report;
    report.params_checked = static_cast<long>(refs.size());
    for (std::size_t i = 0; i < refs.size(); ++i) {
        double saved = *refs[i];
        *refs[i] = saved + h;
        double loss_plus = loss_at();
        *refs[i] = saved - h;
        double loss_minus = loss_at();
        *refs[i] = saved;

        double fd = (loss_plus - loss_minus) / (2.0 * h);
        double err = gradcheck_rel_err(analytic_flat[i], fd);
        if (err > report.max_rel_err) {
            report.max_rel_err = err;
            report.worst_index = static_cast<long>(i);
            report.worst_analytic = analytic_flat[i];
            report.worst_fd = fd;
        }
    }
    return report;
}

struct GradCheckCase {
    std::string preset;
    int num_outputs = 2;
    LossKind loss = LossKind::CrossEntropy;
    GradCheckReport report;
};

/// The standard sweep: structured and fully connected presets at K = 2
/// and K = 9, both loss kinds, Xavier-initialized random params and a
/// random standardized-scale input.
inline std::vector<GradCheckCase> gradcheck_sweep(std::uint64_t seed, double h = 1e-5,
                                                  double reg_beta = 0.05,
                                                  bool corrupt_gradient = false) {
    std::vector<GradCheckCase> cases;
    for (const std::string& preset : {std::string("structured"), std::string("fc")}) {
        for (int k : {2, 9}) {
            for (LossKind kind : {LossKind::CrossEntropy, LossKind::MSE}) {
                auto spec = build_spec(preset, k);
                std::uint64_t case_seed =
                    derive_seed(seed, preset + "/" + std::to_string(k) + "/" +
                                          std::string(loss_name(kind)));
                auto params = xavier_init(spec, case_seed);

                std::mt19937_64 rng(splitmix64(case_seed));
                std::normal_distribution<double> unit(0.0, 1.0);
                std::vector<double> input(kFrameDim);
                for (double& v : input) v = unit(rng);
                int target = static_cast<int>(rng() % static_cast<std::uint64_t>(k));

                LossConfig config{kind, reg_beta};
                cases.push_back({preset, k, kind,
                                 gradient_check(spec, params, input, target, config, h,
                                                corrupt_gradient)});
            }
        }
    }
    return cases;
}

}  // namespace gfe
