#pragma once

#include <cstddef>
#include <vector>

#include "gfe/error.hpp"
#include "gfe/network.hpp"
#include "gfe/preprocess.hpp"

namespace gfe {

struct ClassCounts {
    long tp = 0, fp = 0, fn = 0, tn = 0;
};

/// Confusion counts and the derived rates, per class and macro-averaged.
struct Metrics {
    long n = 0;
    std::vector<std::vector<long>> confusion;  // [true class][predicted class]
    std::vector<ClassCounts> per_class;
    std::vector<double> precision, recall, f_score;
    double accuracy = 0.0;
    double macro_precision = 0.0, macro_recall = 0.0, macro_f = 0.0;

    /// Headline rates for binary runs: the positive class (index 1).
    double positive_precision() const { return precision.at(1); }
    double positive_recall() const { return recall.at(1); }
    double positive_f() const { return f_score.at(1); }
};

inline Metrics compute_metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                               int num_classes) {
    if (y_true.size() != y_pred.size()) throw Error("label/prediction length mismatch");
    Metrics m;
    m.n = static_cast<long>(y_true.size());
    m.confusion.assign(num_classes, std::vector<long>(num_classes, 0));
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] < 0 || y_true[i] >= num_classes || y_pred[i] < 0 || y_pred[i] >= num_classes)
            throw Error("class index outside 0.." + std::to_string(num_classes - 1));
        ++m.confusion[y_true[i]][y_pred[i]];
    }

    m.per_class.resize(num_classes);
    m.precision.resize(num_classes);
    m.recall.resize(num_classes);
    m.f_score.resize(num_classes);
    long correct = 0;
    for (int c = 0; c < num_classes; ++c) {
        ClassCounts& cc = m.per_class[c];
        cc.tp = m.confusion[c][c];
        for (int o = 0; o < num_classes; ++o) {
            if (o == c) continue;
            cc.fn += m.confusion[c][o];
            cc.fp += m.confusion[o][c];
        }
        cc.tn = m.n - cc.tp - cc.fp - cc.fn;
        correct += cc.tp;

        double p = cc.tp + cc.fp > 0 ? double(cc.tp) / double(cc.tp + cc.fp) : 0.0;
        double r = cc.tp + cc.fn > 0 ? double(cc.tp) / double(cc.tp + cc.fn) : 0.0;
        m.precision[c] = p;
        m.recall[c] = r;
        m.f_score[c] = p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;

        m.macro_precision += p / num_classes;
        m.macro_recall += r / num_classes;
        m.macro_f += m.f_score[c] / num_classes;
    }
    m.accuracy = m.n > 0 ? double(correct) / double(m.n) : 0.0;
    return m;
}

/// Predicted class = argmax of the output probabilities, ties broken
/// toward the lowest class index.
inline int argmax_class(const std::vector<double>& probabilities) {
    int best = 0;
    for (int k = 1; k < static_cast<int>(probabilities.size()); ++k)
        if (probabilities[k] > probabilities[best]) best = k;
    return best;
}

inline std::vector<int> predict_classes(const ConnectivitySpec& spec, const NetworkParams& params,
                                        const PreparedSet& set) {
    std::vector<int> pred;
    pred.reserve(set.size());
    ForwardTrace trace;
    for (const auto& row : set.features) {
        forward_into(spec, params, row, trace);
        pred.push_back(argmax_class(trace.probabilities()));
    }
    return pred;
}

inline Metrics evaluate(const ConnectivitySpec& spec, const NetworkParams& params,
                        const PreparedSet& set) {
    if (set.size() == 0) throw Error("evaluate: empty set");
    return compute_metrics(set.labels, predict_classes(spec, params, set), set.num_classes);
}

}  // namespace gfe
