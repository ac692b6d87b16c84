/*
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#pragma once

#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "okc/ocelm.hpp"

namespace okc {

/// Model snapshot document, format "okc.model" version 1:
///
///   {
///     "format": "okc.model", "version": 1,
///     "framework": "boundary" | "reconstruction",
///     "kernel": {"kind": "rbf", "sigma": <double>},
///     "lambda": <double>, "eta": <double>, "target_value": <double>,
///     "window": [[x11, ..., x1n], ...],   // oldest first
///     "theta": <double>
///   }
///
/// phi and p are not stored; they are rebuilt from the window on load.
/// The stored theta is restored verbatim so that decisions are reproducible.
struct ModelSnapshot {
    static constexpr int kVersion = 1;
    static constexpr const char *kFormat = "okc.model";

    Framework framework = Framework::boundary;
    KernelSpec kernel{};
    double lambda = 1.0;
    double eta = 0.05;
    double target_value = 1.0;
    Matrix window;
    double theta = 0.0;
};

template <class Policy>
ModelSnapshot snapshot(const OneClassModel<Policy> &model) {
    ModelSnapshot s;
    s.framework = Policy::kind;
    s.kernel = model.state().kernel();
    s.lambda = model.state().lambda();
    s.eta = model.eta();
    s.target_value = model.target_value();
    s.window = model.state().window();
    s.theta = model.theta();
    return s;
}

template <class Policy>
OneClassModel<Policy> restore(const ModelSnapshot &s, GramOptions options = {}) {
    if (s.framework != Policy::kind) {
        throw InvalidInputError("snapshot holds a " + std::string(to_string(s.framework)) + " model");
    }
    auto model = OneClassModel<Policy>::fit(RegGramState::init(s.window, s.lambda, s.kernel, options), s.eta,
                                            s.target_value);
    model.set_theta(s.theta);
    return model;
}

inline nlohmann::json to_json(const ModelSnapshot &s) {
    nlohmann::json window = nlohmann::json::array();
    for (Index i = 0; i < s.window.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Index j = 0; j < s.window.cols(); ++j) { row.push_back(s.window(i, j)); }
        window.push_back(std::move(row));
    }
    return {
        {"format", ModelSnapshot::kFormat},
        {"version", ModelSnapshot::kVersion},
        {"framework", std::string(to_string(s.framework))},
        {"kernel", {{"kind", std::string(to_string(s.kernel.kind))}, {"sigma", s.kernel.sigma}}},
        {"lambda", s.lambda},
        {"eta", s.eta},
        {"target_value", s.target_value},
        {"window", std::move(window)},
        {"theta", s.theta},
    };
}

inline ModelSnapshot snapshot_from_json(const nlohmann::json &j) {
    auto field = [&](const char *name) -> const nlohmann::json & {
        if (!j.contains(name)) { throw InvalidInputError(std::string("model snapshot: missing field '") + name + "'"); }
        return j.at(name);
    };
    try {
        if (field("format").get<std::string>() != ModelSnapshot::kFormat) {
            throw InvalidInputError("model snapshot: unexpected format tag");
        }
        const int version = field("version").get<int>();
        if (version < 1 || version > ModelSnapshot::kVersion) {
            throw InvalidInputError("model snapshot: unsupported version " + std::to_string(version));
        }
        ModelSnapshot s;
        s.framework = framework_from_string(field("framework").get<std::string>());
        const auto &kernel = field("kernel");
        s.kernel.kind = kernel_kind_from_string(kernel.at("kind").get<std::string>());
        s.kernel.sigma = kernel.at("sigma").get<double>();
        s.lambda = field("lambda").get<double>();
        s.eta = field("eta").get<double>();
        s.target_value = j.value("target_value", 1.0);
        s.theta = field("theta").get<double>();
        const auto &rows = field("window");
        if (!rows.is_array() || rows.empty()) { throw InvalidInputError("model snapshot: window must be a non-empty array"); }
        const auto n = static_cast<Index>(rows.front().size());
        s.window.resize(static_cast<Index>(rows.size()), n);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (static_cast<Index>(rows[i].size()) != n) {
                throw DimensionError("model snapshot: window row " + std::to_string(i) + " has wrong length");
            }
            for (Index k = 0; k < n; ++k) {
                s.window(static_cast<Index>(i), k) = rows[i][static_cast<std::size_t>(k)].get<double>();
            }
        }
        return s;
    } catch (const nlohmann::json::exception &e) {
        throw InvalidInputError(std::string("model snapshot: ") + e.what());
    }
}

inline void save_snapshot(const ModelSnapshot &s, const std::string &path) {
    std::ofstream out(path);
    if (!out) { throw IoError("cannot open '" + path + "' for writing"); }
    out << to_json(s).dump(2) << '\n';
}

inline ModelSnapshot load_snapshot(const std::string &path) {
    std::ifstream in(path);
    if (!in) { throw IoError("cannot open '" + path + "'"); }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error &e) {
        throw InvalidInputError("model snapshot '" + path + "': " + e.what());
    }
    return snapshot_from_json(j);
}

}  // namespace okc
