#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "gfe/dataset.hpp"
#include "gfe/landmarks.hpp"
#include "gfe/rng.hpp"

namespace gfe {

class InvalidRegion : public Error {
public:
    int region;
    explicit InvalidRegion(int r)
        : Error("face region index out of range 0..9: " + std::to_string(r)), region(r) {}
};

struct SyntheticOptions {
    double offset = 9.0;             // added to signal-region coordinates of positive frames
    double noise_sigma = 6.0;        // per-coordinate Gaussian noise
    double placeholder_fraction = 0.01;  // coordinates zeroed to exercise imputation
};

/// Draws a labeled dataset whose classes differ only on the coordinates of
/// the chosen signal regions: every coordinate is base + Gaussian noise,
/// and positive frames additionally get a fixed offset inside those
/// regions. A small fraction of coordinates is set to the 0.0 placeholder.
/// Pure function of its arguments.
inline MarkerDataset generate_synthetic_dataset(std::uint64_t seed, int n_positive, int n_negative,
                                                const std::vector<int>& signal_regions,
                                                const SyntheticOptions& opt = {}) {
    for (int r : signal_regions)
        if (r < 0 || r >= kNumRegions) throw InvalidRegion(r);
    if (n_positive < 0 || n_negative < 0)
        throw ConfigError("synthetic sample counts must be non-negative");

    std::array<bool, kNumPoints> in_signal{};
    for (int r : signal_regions)
        for (int p = kRegions[r].first; p <= kRegions[r].last; ++p) in_signal[p] = true;

    // Base coordinates loosely shaped like tracked data: x, y in pixels,
    // z in millimeters. Exact values only matter for being far from 0.0.
    auto base_value = [](int coord) {
        switch (coord % 3) {
            case 0: return 320.0;  // x
            case 1: return 240.0;  // y
            default: return 520.0; // z
        }
    };

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, opt.noise_sigma);
    std::bernoulli_distribution drop(opt.placeholder_fraction);

    MarkerDataset ds;
    ds.user = "synthetic";
    int total = n_positive + n_negative;
    ds.frames.reserve(total);
    ds.labels.reserve(total);
    for (int i = 0; i < total; ++i) {
        int label = i < n_positive ? 1 : 0;
        LandmarkFrame frame;
        frame.timestamp = 40.0 * i;
        for (int j = 0; j < kFrameDim; ++j) {
            double v = base_value(j) + noise(rng);
            if (label == 1 && in_signal[j / 3]) v += opt.offset;
            frame.coords[j] = v;
        }
        for (int j = 0; j < kFrameDim; ++j)
            if (drop(rng)) frame.coords[j] = 0.0;
        ds.frames.push_back(frame);
        ds.labels.push_back(label);
    }
    return ds;
}

}  // namespace gfe
