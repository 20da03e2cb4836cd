#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "gfe/dataset.hpp"
#include "gfe/metrics.hpp"
#include "gfe/model_io.hpp"
#include "gfe/preprocess.hpp"
#include "gfe/reference.hpp"
#include "gfe/synthetic.hpp"
#include "gfe/train.hpp"

namespace gfe {

class InvalidK : public Error {
public:
    explicit InvalidK(int k)
        : Error("multiclass class count must be one of 3, 5, 7, 9; got " + std::to_string(k)) {}
};

/// Everything an experiment needs besides its own identity. The base seed
/// is expanded per experiment id, so independent experiments own
/// unrelated streams while a rerun of the same id reproduces exactly.
struct ExperimentSetup {
    std::filesystem::path data_root;  // used when use_synthetic is false
    bool use_synthetic = false;
    int synthetic_positive = 200;
    int synthetic_negative = 200;
    std::vector<int> synthetic_regions = {5};  // mouth
    SyntheticOptions synthetic_options;

    std::uint64_t seed = 1;
    TrainConfig train;        // per-experiment seed is filled in by the runner
    PrepareOptions prepare;   // likewise
};

struct ExperimentReport {
    std::string id;
    std::vector<std::string> markers;
    std::string user;
    std::string preset;
    TrainHistory history;
    Metrics train_metrics;
    Metrics test_metrics;
    double duration_seconds = 0.0;
    Provenance provenance;
    std::vector<std::string> notes;
    nlohmann::json config_snapshot;
};

// ---------------------------------------------------------------------------
// JSON forms
// ---------------------------------------------------------------------------

inline nlohmann::json metrics_to_json(const Metrics& m) {
    nlohmann::json j;
    j["n"] = m.n;
    j["accuracy"] = m.accuracy;
    j["confusion"] = m.confusion;
    j["precision"] = m.precision;
    j["recall"] = m.recall;
    j["f_score"] = m.f_score;
    j["macro_precision"] = m.macro_precision;
    j["macro_recall"] = m.macro_recall;
    j["macro_f"] = m.macro_f;
    return j;
}

inline nlohmann::json provenance_to_json(const Provenance& p) {
    return {{"imputed_total", p.imputed_total},
            {"all_placeholder_columns", p.all_placeholder_columns},
            {"class_counts_input", p.class_counts_input},
            {"class_counts_train", p.class_counts_train},
            {"class_counts_test", p.class_counts_test},
            {"seed", p.seed},
            {"test_fraction", p.test_fraction},
            {"balanced", p.balanced},
            {"balance_after_split", p.balance_after_split},
            {"fit_stats_on", p.fit_stats_on}};
}

inline nlohmann::json history_to_json(const TrainHistory& h) {
    nlohmann::json epochs = nlohmann::json::array();
    for (const auto& e : h.epochs)
        epochs.push_back({{"epoch", e.epoch}, {"mean_loss", e.mean_loss}, {"lr", e.lr},
                          {"steps", e.steps}});
    return {{"total_steps", h.total_steps}, {"epochs", std::move(epochs)}};
}

inline nlohmann::json report_to_json(const ExperimentReport& r) {
    nlohmann::json j;
    j["id"] = r.id;
    j["markers"] = r.markers;
    j["user"] = r.user;
    j["preset"] = r.preset;
    j["train_metrics"] = metrics_to_json(r.train_metrics);
    j["test_metrics"] = metrics_to_json(r.test_metrics);
    j["history"] = history_to_json(r.history);
    j["duration_seconds"] = r.duration_seconds;
    j["provenance"] = provenance_to_json(r.provenance);
    j["notes"] = r.notes;
    j["config"] = r.config_snapshot;
    return j;
}

/// Per-epoch history as CSV (columns: epoch, mean_loss, lr).
inline std::string history_to_csv(const TrainHistory& h) {
    std::string out = "epoch,mean_loss,lr\n";
    for (const auto& e : h.epochs) {
        out += std::to_string(e.epoch);
        out += ',';
        out += detail::format_double(e.mean_loss);
        out += ',';
        out += detail::format_double(e.lr);
        out += '\n';
    }
    return out;
}

namespace detail {

inline nlohmann::json setup_snapshot(const ExperimentSetup& setup) {
    nlohmann::json j;
    j["data_root"] = setup.data_root.string();
    j["synthetic"] = setup.use_synthetic;
    j["synthetic_positive"] = setup.synthetic_positive;
    j["synthetic_negative"] = setup.synthetic_negative;
    j["synthetic_regions"] = setup.synthetic_regions;
    j["synthetic_offset"] = setup.synthetic_options.offset;
    j["synthetic_noise_sigma"] = setup.synthetic_options.noise_sigma;
    j["synthetic_placeholder_fraction"] = setup.synthetic_options.placeholder_fraction;
    j["seed"] = setup.seed;
    j["epochs"] = setup.train.epochs;
    j["batch"] = setup.train.batch_size;
    j["loss"] = std::string(loss_name(setup.train.loss.kind));
    j["reg_beta"] = setup.train.loss.reg_beta;
    j["lr"] = setup.train.schedule.initial_rate;
    j["lr_decay_ratio"] = setup.train.schedule.decay_ratio;
    j["lr_decay_step"] = setup.train.schedule.decay_step;
    j["shuffle_each_epoch"] = setup.train.shuffle_each_epoch;
    j["xavier_fans"] = setup.train.xavier_fans == XavierFans::Masked ? "masked" : "dense";
    j["adam_beta1"] = setup.train.adam_beta1;
    j["adam_beta2"] = setup.train.adam_beta2;
    j["adam_epsilon"] = setup.train.adam_epsilon;
    j["test_fraction"] = setup.prepare.test_fraction;
    j["balance"] = setup.prepare.balance;
    j["balance_after_split"] = setup.prepare.balance_after_split;
    j["fit_stats_on"] = setup.prepare.fit_stats_on_all ? "all" : "train";
    return j;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Binary experiment
// ---------------------------------------------------------------------------

/// Full binary pipeline for one (marker, user, preset):
/// load -> impute -> balance -> split -> standardize -> train -> evaluate.
/// The data/prepare seeds are derived from (seed, marker, user) only, so
/// the structured and fc presets consume the identical prepared split.
inline ExperimentReport run_binary_experiment(MarkerClass marker, const std::string& user,
                                              const std::string& preset,
                                              const ExperimentSetup& setup) {
    auto start_time = std::chrono::steady_clock::now();

    std::string data_id = "binary/" + std::string(marker_name(marker)) + "/" + user;
    std::uint64_t data_seed = derive_seed(setup.seed, data_id);

    MarkerDataset raw;
    if (setup.use_synthetic) {
        raw = generate_synthetic_dataset(derive_seed(data_seed, "synthetic"),
                                         setup.synthetic_positive, setup.synthetic_negative,
                                         setup.synthetic_regions, setup.synthetic_options);
        raw.marker = marker;
    } else {
        raw = load_user_marker(setup.data_root, user, marker);
    }

    PrepareOptions prep = setup.prepare;
    prep.seed = derive_seed(data_seed, "prepare");
    PreparedSplit prepared = prepare(to_labeled(raw), prep);

    ConnectivitySpec spec = build_spec(preset, 2);
    TrainConfig tc = setup.train;
    tc.seed = derive_seed(data_seed, "train");
    auto [params, history] = train(spec, prepared.train, tc);

    ExperimentReport report;
    report.id = data_id + "/" + preset;
    report.markers = {std::string(marker_name(marker))};
    report.user = user;
    report.preset = preset;
    report.history = std::move(history);
    report.train_metrics = evaluate(spec, params, prepared.train);
    report.test_metrics = evaluate(spec, params, prepared.test);
    report.provenance = prepared.provenance;
    report.config_snapshot = detail::setup_snapshot(setup);
    report.config_snapshot["command"] = "train";
    report.config_snapshot["marker"] = std::string(marker_name(marker));
    report.config_snapshot["user"] = user;
    report.config_snapshot["preset"] = preset;
    report.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();

    // keep the trained model around for the caller
    report.config_snapshot["model_seed"] = tc.seed;
    ModelFile model{std::move(spec), std::move(params), tc.seed};
    report.config_snapshot["_"] = nullptr;  // placeholder removed below
    report.config_snapshot.erase("_");
    report.model = std::move(model);
    return report;
}

// ---------------------------------------------------------------------------
// Multiclass experiment
// ---------------------------------------------------------------------------

/// All k-subsets of the nine markers, in lexicographic order of marker
/// indices.
inline std::vector<std::vector<MarkerClass>> marker_combinations(int k) {
    if (k < 1 || k > kNumMarkers) throw InvalidK(k);
    std::vector<std::vector<MarkerClass>> combos;
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        std::vector<MarkerClass> combo;
        for (int i : idx) combo.push_back(kAllMarkers[i]);
        combos.push_back(std::move(combo));
        int pos = k - 1;
        while (pos >= 0 && idx[pos] == kNumMarkers - k + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
    return combos;
}

struct CombinationPolicy {
    bool all = false;
    int sample_count = 10;  // used when all == false
};

struct MulticlassCombinationResult {
    std::vector<std::string> markers;
    double test_accuracy = 0.0;
    double train_accuracy = 0.0;
    Metrics test_metrics;
};

struct MulticlassReport {
    int k = 3;
    std::string user;
    std::string preset = "structured";
    std::vector<MulticlassCombinationResult> combinations;
    double mean_test_accuracy = 0.0;
    double duration_seconds = 0.0;
    std::vector<std::string> notes;
    nlohmann::json config_snapshot;
};

inline nlohmann::json multiclass_report_to_json(const MulticlassReport& r) {
    nlohmann::json combos = nlohmann::json::array();
    for (const auto& c : r.combinations)
        combos.push_back({{"markers", c.markers},
                          {"test_accuracy", c.test_accuracy},
                          {"train_accuracy", c.train_accuracy},
                          {"test_metrics", metrics_to_json(c.test_metrics)}});
    return {{"k", r.k},
            {"user", r.user},
            {"preset", r.preset},
            {"combinations", std::move(combos)},
            {"mean_test_accuracy", r.mean_test_accuracy},
            {"duration_seconds", r.duration_seconds},
            {"notes", r.notes},
            {"config", r.config_snapshot}};
}

/// Pools each selected marker's positive samples as one class, splits
/// 70/30 stratified, trains a K=k net per combination and reports the
/// mean test accuracy across combinations.
inline MulticlassReport run_multiclass_experiment(int k, const std::string& user,
                                                  const CombinationPolicy& policy,
                                                  const std::string& preset,
                                                  const ExperimentSetup& setup) {
    if (k != 3 && k != 5 && k != 7 && k != 9) throw InvalidK(k);
    auto start_time = std::chrono::steady_clock::now();

    std::string exp_id = "multiclass/" + std::to_string(k) + "/" + user;
    std::uint64_t exp_seed = derive_seed(setup.seed, exp_id);

    // positive pools per marker, loaded (or synthesized) once
    std::array<std::vector<LandmarkFrame>, kNumMarkers> pools;
    for (MarkerClass m : kAllMarkers) {
        int mi = static_cast<int>(m);
        if (setup.use_synthetic) {
            // each marker's positives carry a signal in its own region, so
            // classes stay mutually distinguishable
            auto ds = generate_synthetic_dataset(
                derive_seed(exp_seed, "synthetic/" + std::string(marker_name(m))),
                setup.synthetic_positive, 0, {mi % kNumRegions}, setup.synthetic_options);
            pools[mi] = std::move(ds.frames);
        } else {
            auto ds = load_user_marker(setup.data_root, user, m);
            for (std::size_t i = 0; i < ds.labels.size(); ++i)
                if (ds.labels[i] == 1) pools[mi].push_back(ds.frames[i]);
        }
    }

    auto combos = marker_combinations(k);
    if (!policy.all && static_cast<int>(combos.size()) > policy.sample_count) {
        std::mt19937_64 rng(derive_seed(exp_seed, "combos"));
        std::shuffle(combos.begin(), combos.end(), rng);
        combos.resize(policy.sample_count);
        std::sort(combos.begin(), combos.end());
    }

    MulticlassReport report;
    report.k = k;
    report.user = user;
    report.preset = preset;

    for (const auto& combo : combos) {
        std::string combo_name;
        LabeledFrames pooled;
        pooled.num_classes = k;
        for (int c = 0; c < k; ++c) {
            MarkerClass m = combo[c];
            if (!combo_name.empty()) combo_name += '+';
            combo_name += std::string(marker_name(m));
            for (const auto& frame : pools[static_cast<int>(m)]) {
                pooled.frames.push_back(frame);
                pooled.labels.push_back(c);
            }
        }

        PrepareOptions prep = setup.prepare;
        prep.balance = false;  // pools are used as-is
        prep.seed = derive_seed(exp_seed, "prepare/" + combo_name);
        PreparedSplit prepared = prepare(pooled, prep);

        for (int c = 0; c < k; ++c) {
            long count = prepared.provenance.class_counts_test[c];
            if (count < 150 || count > 400)
                report.notes.push_back("test pool for " + combo_name + " class " +
                                       std::to_string(c) + " has " + std::to_string(count) +
                                       " samples (expected roughly 200-225 on the published data)");
        }

        ConnectivitySpec spec = build_spec(preset, k);
        TrainConfig tc = setup.train;
        tc.seed = derive_seed(exp_seed, "train/" + combo_name);
        auto [params, history] = train(spec, prepared.train, tc);

        MulticlassCombinationResult result;
        for (MarkerClass m : combo) result.markers.push_back(std::string(marker_name(m)));
        result.test_metrics = evaluate(spec, params, prepared.test);
        result.test_accuracy = result.test_metrics.accuracy;
        result.train_accuracy = evaluate(spec, params, prepared.train).accuracy;
        report.combinations.push_back(std::move(result));
    }

    double sum = 0.0;
    for (const auto& c : report.combinations) sum += c.test_accuracy;
    report.mean_test_accuracy = report.combinations.empty() ? 0.0 : sum / report.combinations.size();

    report.config_snapshot = detail::setup_snapshot(setup);
    report.config_snapshot["command"] = "bench";
    report.config_snapshot["multiclass"] = k;
    report.config_snapshot["user"] = user;
    report.config_snapshot["preset"] = preset;
    report.config_snapshot["combos"] =
        policy.all ? std::string("all") : "sample:" + std::to_string(policy.sample_count);
    report.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    return report;
}

}  // namespace gfe
