#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "gfe/connectivity.hpp"
#include "gfe/network.hpp"

namespace gfe {

class ModelIoError : public Error {
public:
    explicit ModelIoError(const std::string& what) : Error(what) {}
};

struct ModelFile {
    ConnectivitySpec spec;
    NetworkParams params;
    std::uint64_t seed = 0;
};

inline constexpr int kModelFormatVersion = 1;

inline nlohmann::json model_to_json(const ModelFile& model) {
    nlohmann::json j;
    j["format"] = "gfe-model";
    j["version"] = kModelFormatVersion;
    j["preset"] = model.spec.preset;
    j["layer_sizes"] = model.spec.layer_sizes;
    j["seed"] = model.seed;
    j["param_count"] = param_count(model.spec);
    j["in_edges"] = model.spec.in_edges;
    j["weights"] = model.params.weights;
    j["biases"] = model.params.biases;
    return j;
}

/// Parses and validates a model document: structural invariants, exact
/// shape agreement between edges and weights, the stored param_count, and
/// finiteness of every value.
inline ModelFile model_from_json(const nlohmann::json& j) {
    try {
        if (j.at("format").get<std::string>() != "gfe-model")
            throw ModelIoError("not a model file");
        if (j.at("version").get<int>() != kModelFormatVersion)
            throw ModelIoError("unsupported model version");

        ModelFile model;
        model.spec.preset = j.at("preset").get<std::string>();
        model.spec.layer_sizes = j.at("layer_sizes").get<std::array<int, 4>>();
        model.spec.in_edges = j.at("in_edges").get<decltype(model.spec.in_edges)>();
        detail::build_out_edges(model.spec);
        validate_spec(model.spec);

        model.seed = j.at("seed").get<std::uint64_t>();
        model.params.weights = j.at("weights").get<decltype(model.params.weights)>();
        model.params.biases = j.at("biases").get<decltype(model.params.biases)>();
        if (!shape_matches_spec(model.params, model.spec))
            throw ModelIoError("weight/bias shapes do not match the edge lists");
        if (j.at("param_count").get<long>() != param_count(model.spec))
            throw ModelIoError("stored param_count disagrees with the edge lists");

        bool finite = true;
        visit_params(static_cast<const NetworkParams&>(model.params),
                     [&](double v) { finite = finite && std::isfinite(v); });
        if (!finite) throw ModelIoError("model contains non-finite parameters");
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw ModelIoError(std::string("malformed model document: ") + e.what());
    }
}

inline void save_model(const ModelFile& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ModelIoError("cannot write model file: " + path.string());
    out << model_to_json(model).dump(2) << '\n';
}

inline ModelFile load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelIoError("cannot open model file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ModelIoError(std::string("invalid JSON in ") + path.string() + ": " + e.what());
    }
    return model_from_json(j);
}

}  // namespace gfe
