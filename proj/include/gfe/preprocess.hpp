#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gfe/dataset.hpp"
#include "gfe/landmarks.hpp"
#include "gfe/rng.hpp"

namespace gfe {

class PreprocessError : public Error {
public:
    explicit PreprocessError(const std::string& what) : Error(what) {}
};

class TooFewSamples : public PreprocessError {
public:
    explicit TooFewSamples(std::size_t n)
        : PreprocessError("standardizer needs at least 2 samples, got " + std::to_string(n)) {}
};

class MissingClass : public PreprocessError {
public:
    int class_index;
    explicit MissingClass(int c)
        : PreprocessError("class " + std::to_string(c) + " has no samples"), class_index(c) {}
};

class InvalidFraction : public PreprocessError {
public:
    explicit InvalidFraction(double f)
        : PreprocessError("test fraction must be in (0, 1), got " + std::to_string(f)) {}
};

/// Frames plus integer class labels; the general container the pipeline
/// stages operate on (binary marker sets and pooled multiclass sets alike).
struct LabeledFrames {
    std::vector<LandmarkFrame> frames;
    std::vector<int> labels;
    int num_classes = 2;

    std::size_t size() const { return frames.size(); }
};

inline LabeledFrames to_labeled(const MarkerDataset& ds, int num_classes = 2) {
    return {ds.frames, ds.labels, num_classes};
}

struct ImputationReport {
    std::array<long, kFrameDim> replaced_per_column{};
    std::vector<int> all_placeholder_columns;  // columns left untouched, flagged
    long replaced_total = 0;
};

/// Replaces the 0.0 placeholder in each of the 300 coordinate columns by
/// the mean of that column's non-placeholder entries. A column that is
/// entirely 0.0 stays as-is and is flagged. Non-placeholder values are
/// never altered.
inline std::pair<std::vector<LandmarkFrame>, ImputationReport> impute_missing(
    std::vector<LandmarkFrame> frames) {
    if (frames.empty()) throw PreprocessError("impute_missing: no frames");
    ImputationReport report;
    for (int j = 0; j < kFrameDim; ++j) {
        double sum = 0.0;
        long kept = 0, missing = 0;
        for (const auto& f : frames) {
            if (f.coords[j] == 0.0) {
                ++missing;
            } else {
                sum += f.coords[j];
                ++kept;
            }
        }
        if (missing == 0) continue;
        if (kept == 0) {
            report.all_placeholder_columns.push_back(j);
            continue;
        }
        double mean = sum / kept;
        for (auto& f : frames)
            if (f.coords[j] == 0.0) f.coords[j] = mean;
        report.replaced_per_column[j] = missing;
        report.replaced_total += missing;
    }
    return {std::move(frames), report};
}

struct StandardizationStats {
    std::array<double, kFrameDim> means{};
    std::array<double, kFrameDim> stds{};  // population std (divide by n)
};

inline constexpr double kStdEpsilon = 1e-12;

/// Divisor actually used when standardizing column j: columns whose std
/// falls below epsilon divide by 1.0 instead.
inline double guarded_std(const StandardizationStats& stats, int j) {
    return stats.stds[j] <= kStdEpsilon ? 1.0 : stats.stds[j];
}

inline StandardizationStats fit_standardizer(const std::vector<LandmarkFrame>& frames) {
    if (frames.size() < 2) throw TooFewSamples(frames.size());
    StandardizationStats stats;
    const double n = static_cast<double>(frames.size());
    for (int j = 0; j < kFrameDim; ++j) {
        double sum = 0.0;
        for (const auto& f : frames) sum += f.coords[j];
        stats.means[j] = sum / n;
    }
    for (int j = 0; j < kFrameDim; ++j) {
        double sq = 0.0;
        for (const auto& f : frames) {
            double d = f.coords[j] - stats.means[j];
            sq += d * d;
        }
        stats.stds[j] = std::sqrt(sq / n);
    }
    return stats;
}

using FeatureRow = std::array<double, kFrameDim>;
using FeatureMatrix = std::vector<FeatureRow>;

inline FeatureMatrix apply_standardizer(const StandardizationStats& stats,
                                        const std::vector<LandmarkFrame>& frames) {
    FeatureMatrix out;
    out.reserve(frames.size());
    for (const auto& f : frames) {
        FeatureRow row;
        for (int j = 0; j < kFrameDim; ++j)
            row[j] = (f.coords[j] - stats.means[j]) / guarded_std(stats, j);
        out.push_back(row);
    }
    return out;
}

namespace detail {

inline std::vector<std::vector<std::size_t>> indices_by_class(const LabeledFrames& ds) {
    std::vector<std::vector<std::size_t>> by_class(ds.num_classes);
    for (std::size_t i = 0; i < ds.labels.size(); ++i) {
        int label = ds.labels[i];
        if (label < 0 || label >= ds.num_classes)
            throw PreprocessError("label " + std::to_string(label) + " outside 0.." +
                                  std::to_string(ds.num_classes - 1));
        by_class[label].push_back(i);
    }
    return by_class;
}

inline LabeledFrames select(const LabeledFrames& ds, const std::vector<std::size_t>& idx) {
    LabeledFrames out;
    out.num_classes = ds.num_classes;
    out.frames.reserve(idx.size());
    out.labels.reserve(idx.size());
    for (std::size_t i : idx) {
        out.frames.push_back(ds.frames[i]);
        out.labels.push_back(ds.labels[i]);
    }
    return out;
}

}  // namespace detail

/// Downsamples every class (without replacement) to the minority-class
/// count, then shuffles the result. Deterministic given the seed.
inline LabeledFrames balance_classes(const LabeledFrames& ds, std::uint64_t seed) {
    auto by_class = detail::indices_by_class(ds);
    for (int c = 0; c < ds.num_classes; ++c)
        if (by_class[c].empty()) throw MissingClass(c);

    std::size_t minority = by_class[0].size();
    for (const auto& idx : by_class) minority = std::min(minority, idx.size());

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> keep;
    for (auto& idx : by_class) {
        if (idx.size() > minority) std::shuffle(idx.begin(), idx.end(), rng);
        keep.insert(keep.end(), idx.begin(), idx.begin() + minority);
    }
    std::shuffle(keep.begin(), keep.end(), rng);
    return detail::select(ds, keep);
}

inline LabeledFrames balance_classes(const MarkerDataset& ds, std::uint64_t seed) {
    return balance_classes(to_labeled(ds), seed);
}

/// Stratified split: each class contributes round(count * test_fraction)
/// samples to the test set. Train and test are disjoint and their union is
/// the input; both orders are seeded shuffles.
inline std::pair<LabeledFrames, LabeledFrames> split_train_test(const LabeledFrames& ds,
                                                                double test_fraction,
                                                                std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw InvalidFraction(test_fraction);
    auto by_class = detail::indices_by_class(ds);

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> test_idx, train_idx;
    for (auto& idx : by_class) {
        std::shuffle(idx.begin(), idx.end(), rng);
        auto n_test = static_cast<std::size_t>(std::lround(idx.size() * test_fraction));
        n_test = std::min(n_test, idx.size());
        test_idx.insert(test_idx.end(), idx.begin(), idx.begin() + n_test);
        train_idx.insert(train_idx.end(), idx.begin() + n_test, idx.end());
    }
    std::shuffle(train_idx.begin(), train_idx.end(), rng);
    std::shuffle(test_idx.begin(), test_idx.end(), rng);
    return {detail::select(ds, train_idx), detail::select(ds, test_idx)};
}

// ---------------------------------------------------------------------------
// Full pipeline
// ---------------------------------------------------------------------------

struct PrepareOptions {
    std::uint64_t seed = 0;
    double test_fraction = 0.30;
    bool balance = true;
    bool balance_after_split = false;  // when true, only the train split is balanced
    bool fit_stats_on_all = false;     // fit z-score stats on train+test instead of train only
};

/// Model-ready matrix plus the labels it is aligned with.
struct PreparedSet {
    FeatureMatrix features;
    std::vector<int> labels;
    int num_classes = 2;

    std::size_t size() const { return features.size(); }
};

struct Provenance {
    long imputed_total = 0;
    std::vector<int> all_placeholder_columns;
    std::vector<long> class_counts_input;
    std::vector<long> class_counts_train;
    std::vector<long> class_counts_test;
    std::uint64_t seed = 0;
    double test_fraction = 0.30;
    bool balanced = true;
    bool balance_after_split = false;
    std::string fit_stats_on = "train";
};

struct PreparedSplit {
    PreparedSet train;
    PreparedSet test;
    StandardizationStats stats;
    Provenance provenance;
};

namespace detail {

inline std::vector<long> class_counts(const std::vector<int>& labels, int num_classes) {
    std::vector<long> counts(num_classes, 0);
    for (int label : labels) ++counts[label];
    return counts;
}

}  // namespace detail

/// Fixed pipeline order: impute -> balance -> split -> fit stats on the
/// train split -> apply to train and test. Options move the balancing
/// after the split or fit the stats on everything.
inline PreparedSplit prepare(const LabeledFrames& input, const PrepareOptions& opt) {
    Provenance prov;
    prov.seed = opt.seed;
    prov.test_fraction = opt.test_fraction;
    prov.balanced = opt.balance;
    prov.balance_after_split = opt.balance_after_split;
    prov.fit_stats_on = opt.fit_stats_on_all ? "all" : "train";
    prov.class_counts_input = detail::class_counts(input.labels, input.num_classes);

    LabeledFrames working = input;
    auto [imputed, report] = impute_missing(std::move(working.frames));
    working.frames = std::move(imputed);
    prov.imputed_total = report.replaced_total;
    prov.all_placeholder_columns = report.all_placeholder_columns;

    if (opt.balance && !opt.balance_after_split)
        working = balance_classes(working, derive_seed(opt.seed, "balance"));

    auto [train, test] = split_train_test(working, opt.test_fraction, derive_seed(opt.seed, "split"));
    if (opt.balance && opt.balance_after_split)
        train = balance_classes(train, derive_seed(opt.seed, "balance"));

    StandardizationStats stats;
    if (opt.fit_stats_on_all) {
        std::vector<LandmarkFrame> all = train.frames;
        all.insert(all.end(), test.frames.begin(), test.frames.end());
        stats = fit_standardizer(all);
    } else {
        stats = fit_standardizer(train.frames);
    }

    PreparedSplit out;
    out.stats = stats;
    out.train = {apply_standardizer(stats, train.frames), train.labels, train.num_classes};
    out.test = {apply_standardizer(stats, test.frames), test.labels, test.num_classes};
    prov.class_counts_train = detail::class_counts(train.labels, train.num_classes);
    prov.class_counts_test = detail::class_counts(test.labels, test.num_classes);
    out.provenance = prov;
    return out;
}

}  // namespace gfe
