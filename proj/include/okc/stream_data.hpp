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

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "okc/kernel.hpp"

namespace okc {

/// One stream element. label is +1 for target (normal), -1 for outlier.
struct LabeledSample {
    Vector features;
    int label = 1;
    std::size_t timestamp = 0;
};

using Stream = std::vector<LabeledSample>;

struct ClassCounts {
    std::size_t targets = 0;
    std::size_t outliers = 0;
};

inline ClassCounts count_classes(const Stream &stream) {
    ClassCounts c;
    for (const auto &s : stream) { (s.label > 0 ? c.targets : c.outliers) += 1; }
    return c;
}

/// All feature vectors as rows.
inline Matrix features_of(const Stream &stream) {
    if (stream.empty()) { return {}; }
    Matrix out(static_cast<Index>(stream.size()), stream.front().features.size());
    for (std::size_t i = 0; i < stream.size(); ++i) { out.row(static_cast<Index>(i)) = stream[i].features.transpose(); }
    return out;
}

/// Feature vectors of the target samples, in stream order.
inline Matrix targets_of(const Stream &stream) {
    const auto counts = count_classes(stream);
    if (counts.targets == 0) { return {}; }
    Matrix out(static_cast<Index>(counts.targets), stream.front().features.size());
    Index r = 0;
    for (const auto &s : stream) {
        if (s.label > 0) { out.row(r++) = s.features.transpose(); }
    }
    return out;
}

/// Rescales every feature to [0, 1] over the stream; constant features map to 0.
inline void normalize_min_max(Stream &stream) {
    if (stream.empty()) { return; }
    const Matrix x = features_of(stream);
    const Vector lo = x.colwise().minCoeff();
    const Vector span = x.colwise().maxCoeff().transpose() - lo;
    for (auto &s : stream) {
        for (Index j = 0; j < s.features.size(); ++j) {
            s.features(j) = span(j) > 0.0 ? (s.features(j) - lo(j)) / span(j) : 0.0;
        }
    }
}

// ---------------------------------------------------------------------------
// Synthetic generators

/// n points uniform in the annulus r_inner <= |x| <= r_outer, all targets.
inline Stream gen_ring(std::size_t n, double r_inner, double r_outer, std::uint64_t seed) {
    if (!(r_inner > 0.0 && r_inner < r_outer) || !std::isfinite(r_outer)) {
        throw SpecError("ring radii must satisfy 0 < r_inner < r_outer");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> area(r_inner * r_inner, r_outer * r_outer);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    Stream out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = std::sqrt(area(rng));
        const double a = angle(rng);
        out[i].features = Vector(2);
        out[i].features << r * std::cos(a), r * std::sin(a);
        out[i].label = 1;
        out[i].timestamp = i;
    }
    return out;
}

enum class DriftFamily { ring, unimodal_drift, multimodal_drift, rotating };
enum class DriftPath { linear, sinusoidal };

inline std::string_view to_string(DriftFamily f) {
    switch (f) {
        case DriftFamily::ring: return "ring";
        case DriftFamily::unimodal_drift: return "unimodal_drift";
        case DriftFamily::multimodal_drift: return "multimodal_drift";
        case DriftFamily::rotating: return "rotating";
    }
    return "unknown";
}

/// Parametric description of a labelled, possibly drifting stream. Class
/// distributions move once every drift_period samples ("steps").
///
///  - unimodal_drift: one isotropic Gaussian per class whose mean follows
///    start + velocity * step, plus sine_amplitude * sin(2 pi step / sine_period)
///    on the second axis when path is sinusoidal.
///  - multimodal_drift: each class is a mixture of `modes` Gaussians placed
///    mode_spacing away from the moving class centre; component weights
///    oscillate with dominance_period so the dominant mode alternates.
///  - rotating: class means sit on a circle of `radius` and rotate by
///    target_angular_step / outlier_angular_step radians per step;
///    outliers come from outlier_groups evenly spaced rotating blobs.
///  - ring: stationary annulus of targets; outliers uniform over the
///    surrounding square outside the annulus.
struct DriftStreamSpec {
    DriftFamily family = DriftFamily::unimodal_drift;
    std::size_t n_dims = 2;
    std::size_t total = 10000;
    std::size_t drift_period = 100;
    double class_balance = 0.5;
    std::uint64_t seed = 0;

    std::vector<double> target_mean{};      // empty: origin
    std::vector<double> outlier_mean{};     // empty: 5 along the first axis
    std::vector<double> target_velocity{};  // empty: zero
    std::vector<double> outlier_velocity{};
    double target_std = 1.0;
    double outlier_std = 1.0;
    DriftPath path = DriftPath::linear;
    double sine_amplitude = 0.0;
    double sine_period = 50.0;

    std::size_t modes = 2;
    double mode_spacing = 3.0;
    double dominance_period = 20.0;

    double radius = 5.0;
    double target_angular_step = 0.02;
    double outlier_angular_step = 0.02;
    std::size_t outlier_groups = 3;

    double r_inner = 1.0;
    double r_outer = 2.0;

    void validate() const {
        auto fail = [](const std::string &field, const std::string &why) {
            throw SpecError("field '" + field + "': " + why);
        };
        if (n_dims < 1) { fail("n_dims", "must be at least 1"); }
        if (total < 1) { fail("total", "must be positive"); }
        if (drift_period < 1) { fail("drift_period", "must be positive"); }
        if (!(class_balance > 0.0 && class_balance < 1.0)) { fail("class_balance", "must lie in (0, 1)"); }
        auto check_vec = [&](const std::vector<double> &v, const char *field) {
            if (!v.empty() && v.size() != n_dims) { fail(field, "must have n_dims entries"); }
            for (double x : v) {
                if (!std::isfinite(x)) { fail(field, "must be finite"); }
            }
        };
        check_vec(target_mean, "target_mean");
        check_vec(outlier_mean, "outlier_mean");
        check_vec(target_velocity, "target_velocity");
        check_vec(outlier_velocity, "outlier_velocity");
        auto check_pos = [&](double v, const char *field) {
            if (!(v > 0.0) || !std::isfinite(v)) { fail(field, "must be positive and finite"); }
        };
        auto check_finite = [&](double v, const char *field) {
            if (!std::isfinite(v)) { fail(field, "must be finite"); }
        };
        check_pos(target_std, "target_std");
        check_pos(outlier_std, "outlier_std");
        check_finite(sine_amplitude, "sine_amplitude");
        check_pos(sine_period, "sine_period");
        check_finite(mode_spacing, "mode_spacing");
        check_pos(dominance_period, "dominance_period");
        check_finite(radius, "radius");
        check_finite(target_angular_step, "target_angular_step");
        check_finite(outlier_angular_step, "outlier_angular_step");
        if (family == DriftFamily::multimodal_drift && modes < 2) { fail("modes", "multimodal streams need >= 2 modes"); }
        if (family == DriftFamily::multimodal_drift && n_dims < 2) { fail("n_dims", "multimodal streams need >= 2 dims"); }
        if (family == DriftFamily::rotating && n_dims < 2) { fail("n_dims", "rotating streams need >= 2 dims"); }
        if (family == DriftFamily::rotating && outlier_groups < 1) { fail("outlier_groups", "must be at least 1"); }
        if (family == DriftFamily::ring) {
            if (n_dims != 2) { fail("n_dims", "ring streams are 2-D"); }
            if (!(r_inner > 0.0 && r_inner < r_outer) || !std::isfinite(r_outer)) {
                fail("r_inner", "ring radii must satisfy 0 < r_inner < r_outer");
            }
        }
    }
};

namespace detail {

inline Vector vec_or(const std::vector<double> &v, std::size_t n, double first, double rest) {
    if (!v.empty()) { return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size())); }
    Vector out = Vector::Constant(static_cast<Index>(n), rest);
    out(0) = first;
    return out;
}

inline Vector gaussian(std::mt19937_64 &rng, const Vector &mean, double stddev) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector out(mean.size());
    for (Index j = 0; j < mean.size(); ++j) { out(j) = mean(j) + stddev * normal(rng); }
    return out;
}

}  // namespace detail

/// Generates the labelled stream described by spec; deterministic in spec.seed.
inline Stream gen_stream(const DriftStreamSpec &spec) {
    spec.validate();
    const auto n = spec.n_dims;
    const Vector target_start = detail::vec_or(spec.target_mean, n, 0.0, 0.0);
    const Vector outlier_start = detail::vec_or(spec.outlier_mean, n, 5.0, 0.0);
    const Vector target_vel = detail::vec_or(spec.target_velocity, n, 0.0, 0.0);
    const Vector outlier_vel = detail::vec_or(spec.outlier_velocity, n, 0.0, 0.0);
    const Index wave_axis = n > 1 ? 1 : 0;
    constexpr double two_pi = 2.0 * std::numbers::pi;

    std::mt19937_64 rng(spec.seed);
    std::bernoulli_distribution is_target(spec.class_balance);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    auto centre = [&](const Vector &start, const Vector &vel, double step) {
        Vector c = start + vel * step;
        if (spec.path == DriftPath::sinusoidal) { c(wave_axis) += spec.sine_amplitude * std::sin(two_pi * step / spec.sine_period); }
        return c;
    };

    Stream out(spec.total);
    for (std::size_t t = 0; t < spec.total; ++t) {
        const double step = static_cast<double>(t / spec.drift_period);
        const bool target = is_target(rng);
        Vector x;
        switch (spec.family) {
            case DriftFamily::unimodal_drift: {
                x = target ? detail::gaussian(rng, centre(target_start, target_vel, step), spec.target_std)
                           : detail::gaussian(rng, centre(outlier_start, outlier_vel, step), spec.outlier_std);
                break;
            }
            case DriftFamily::multimodal_drift: {
                const Vector c = target ? centre(target_start, target_vel, step) : centre(outlier_start, outlier_vel, step);
                const double phase = two_pi * step / spec.dominance_period + (target ? 0.0 : std::numbers::pi);
                std::vector<double> weights(spec.modes);
                for (std::size_t m = 0; m < spec.modes; ++m) {
                    weights[m] = 1.0 + std::cos(phase + two_pi * static_cast<double>(m) / static_cast<double>(spec.modes));
                }
                // Keep every component reachable when a cosine hits exactly -1.
                for (double &w : weights) { w += 1e-3; }
                std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
                const std::size_t m = pick(rng);
                const double a = two_pi * static_cast<double>(m) / static_cast<double>(spec.modes);
                Vector mode_centre = c;
                mode_centre(0) += spec.mode_spacing * std::cos(a);
                mode_centre(1) += spec.mode_spacing * std::sin(a);
                x = detail::gaussian(rng, mode_centre, target ? spec.target_std : spec.outlier_std);
                break;
            }
            case DriftFamily::rotating: {
                double a = 0.0;
                if (target) {
                    a = spec.target_angular_step * step;
                } else {
                    std::uniform_int_distribution<std::size_t> group(0, spec.outlier_groups - 1);
                    const auto g = static_cast<double>(group(rng));
                    a = spec.outlier_angular_step * step +
                        two_pi * (g + 1.0) / static_cast<double>(spec.outlier_groups + 1);
                }
                Vector mean = Vector::Zero(static_cast<Index>(n));
                mean(0) = spec.radius * std::cos(a);
                mean(1) = spec.radius * std::sin(a);
                x = detail::gaussian(rng, mean, target ? spec.target_std : spec.outlier_std);
                break;
            }
            case DriftFamily::ring: {
                x = Vector(2);
                if (target) {
                    const double r = std::sqrt(spec.r_inner * spec.r_inner +
                                               unit(rng) * (spec.r_outer * spec.r_outer - spec.r_inner * spec.r_inner));
                    const double a = two_pi * unit(rng);
                    x << r * std::cos(a), r * std::sin(a);
                } else {
                    const double half = 1.5 * spec.r_outer;
                    do {
                        x << (2.0 * unit(rng) - 1.0) * half, (2.0 * unit(rng) - 1.0) * half;
                    } while (x.norm() >= spec.r_inner && x.norm() <= spec.r_outer);
                }
                break;
            }
        }
        out[t] = {std::move(x), target ? 1 : -1, t};
    }
    return out;
}

namespace detail {

template <typename T>
T spec_field(const nlohmann::json &j, const char *name, T fallback) {
    if (!j.contains(name)) { return fallback; }
    try {
        return j.at(name).get<T>();
    } catch (const nlohmann::json::exception &) {
        throw SpecError(std::string("field '") + name + "': wrong type");
    }
}

}  // namespace detail

/// Generator spec from its JSON form; field names match DriftStreamSpec members.
inline DriftStreamSpec spec_from_json(const nlohmann::json &j) {
    if (!j.is_object()) { throw SpecError("generator spec must be a JSON object"); }
    static const std::set<std::string> known = {
        "family", "n_dims", "total", "drift_period", "class_balance", "seed", "target_mean", "outlier_mean",
        "target_velocity", "outlier_velocity", "target_std", "outlier_std", "path", "sine_amplitude", "sine_period",
        "modes", "mode_spacing", "dominance_period", "radius", "target_angular_step", "outlier_angular_step",
        "outlier_groups", "r_inner", "r_outer"};
    for (const auto &item : j.items()) {
        if (!known.count(item.key())) { throw SpecError("field '" + item.key() + "': unknown field"); }
    }
    DriftStreamSpec s;
    const auto family = detail::spec_field<std::string>(j, "family", "unimodal_drift");
    if (family == "ring") {
        s.family = DriftFamily::ring;
    } else if (family == "unimodal_drift") {
        s.family = DriftFamily::unimodal_drift;
    } else if (family == "multimodal_drift") {
        s.family = DriftFamily::multimodal_drift;
    } else if (family == "rotating") {
        s.family = DriftFamily::rotating;
    } else {
        throw SpecError("field 'family': unknown family '" + family + "'");
    }
    auto count = [&](const char *name, std::size_t fallback) {
        const auto v = detail::spec_field<long long>(j, name, static_cast<long long>(fallback));
        if (v < 0) { throw SpecError(std::string("field '") + name + "': must be non-negative"); }
        return static_cast<std::size_t>(v);
    };
    s.n_dims = count("n_dims", s.n_dims);
    s.total = count("total", s.total);
    s.drift_period = count("drift_period", s.drift_period);
    s.class_balance = detail::spec_field(j, "class_balance", s.class_balance);
    s.seed = detail::spec_field<std::uint64_t>(j, "seed", s.seed);
    s.target_mean = detail::spec_field(j, "target_mean", s.target_mean);
    s.outlier_mean = detail::spec_field(j, "outlier_mean", s.outlier_mean);
    s.target_velocity = detail::spec_field(j, "target_velocity", s.target_velocity);
    s.outlier_velocity = detail::spec_field(j, "outlier_velocity", s.outlier_velocity);
    s.target_std = detail::spec_field(j, "target_std", s.target_std);
    s.outlier_std = detail::spec_field(j, "outlier_std", s.outlier_std);
    const auto path = detail::spec_field<std::string>(j, "path", "linear");
    if (path == "linear") {
        s.path = DriftPath::linear;
    } else if (path == "sinusoidal") {
        s.path = DriftPath::sinusoidal;
    } else {
        throw SpecError("field 'path': expected 'linear' or 'sinusoidal'");
    }
    s.sine_amplitude = detail::spec_field(j, "sine_amplitude", s.sine_amplitude);
    s.sine_period = detail::spec_field(j, "sine_period", s.sine_period);
    s.modes = count("modes", s.modes);
    s.mode_spacing = detail::spec_field(j, "mode_spacing", s.mode_spacing);
    s.dominance_period = detail::spec_field(j, "dominance_period", s.dominance_period);
    s.radius = detail::spec_field(j, "radius", s.radius);
    s.target_angular_step = detail::spec_field(j, "target_angular_step", s.target_angular_step);
    s.outlier_angular_step = detail::spec_field(j, "outlier_angular_step", s.outlier_angular_step);
    s.outlier_groups = count("outlier_groups", s.outlier_groups);
    s.r_inner = detail::spec_field(j, "r_inner", s.r_inner);
    s.r_outer = detail::spec_field(j, "r_outer", s.r_outer);
    s.validate();
    return s;
}

inline DriftStreamSpec load_spec(const std::string &path) {
    std::ifstream in(path);
    if (!in) { throw IoError("cannot open '" + path + "'"); }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error &e) {
        throw SpecError(std::string("malformed JSON: ") + e.what());
    }
    return spec_from_json(j);
}

// ---------------------------------------------------------------------------
// CSV ingestion

struct DatasetSchema {
    std::string path;
    char delimiter = ',';
    /// Column index (0-based, negative counts from the end) or header name; empty means the last column.
    std::string label_column{};
    /// Raw label value mapped to +1.
    std::string target_label = "1";
    bool header = true;
    /// Columns (names or indices) ignored entirely, e.g. record ids.
    std::vector<std::string> drop_columns{};
    /// Rows containing this cell value are skipped; empty disables.
    std::string missing_token{};
    bool normalize = false;
};

/// Parsed CSV before one-class relabelling.
struct RawDataset {
    Matrix features;
    std::vector<std::string> labels;
    std::vector<std::string> feature_names;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) { s.remove_prefix(1); }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"')) {
        s.remove_suffix(1);
    }
    return s;
}

inline std::vector<std::string> split(const std::string &line, char delim) {
    std::vector<std::string> out;
    std::string_view rest(line);
    while (true) {
        const auto pos = rest.find(delim);
        out.emplace_back(trim(rest.substr(0, pos)));
        if (pos == std::string_view::npos) { break; }
        rest.remove_prefix(pos + 1);
    }
    return out;
}

// Resolves a column given by name (header) or integer index.
inline std::size_t resolve_column(const std::string &spec, const std::vector<std::string> &names, std::size_t width) {
    long long idx = 0;
    const auto *first = spec.data();
    const auto *last = spec.data() + spec.size();
    if (auto [ptr, ec] = std::from_chars(first, last, idx); ec == std::errc() && ptr == last) {
        if (idx < 0) { idx += static_cast<long long>(width); }
        if (idx < 0 || idx >= static_cast<long long>(width)) {
            throw SchemaError("column index " + spec + " outside 0.." + std::to_string(width - 1));
        }
        return static_cast<std::size_t>(idx);
    }
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == spec) { return i; }
    }
    throw SchemaError("column '" + spec + "' not found");
}

inline bool parse_double(std::string_view cell, double &out) {
    if (cell.empty()) { return false; }
    if (cell.front() == '+') { cell.remove_prefix(1); }
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
    return ec == std::errc() && ptr == cell.data() + cell.size() && std::isfinite(out);
}

}  // namespace detail

inline RawDataset read_csv(const DatasetSchema &schema) {
    std::ifstream in(schema.path);
    if (!in) { throw IoError("cannot open dataset '" + schema.path + "'"); }

    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> names;
    std::size_t width = 0;
    if (schema.header) {
        while (std::getline(in, line)) {
            ++line_no;
            if (!detail::trim(line).empty()) { break; }
        }
        names = detail::split(line, schema.delimiter);
        width = names.size();
    }

    std::vector<std::vector<double>> rows;
    std::vector<std::string> labels;
    std::size_t label_col = 0;
    std::set<std::size_t> dropped;
    bool resolved = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) { continue; }
        auto cells = detail::split(line, schema.delimiter);
        if (width == 0) { width = cells.size(); }
        if (!resolved) {
            if (width < 2) { throw SchemaError("dataset needs at least one feature and a label column"); }
            label_col = schema.label_column.empty() ? width - 1
                                                    : detail::resolve_column(schema.label_column, names, width);
            for (const auto &d : schema.drop_columns) { dropped.insert(detail::resolve_column(d, names, width)); }
            if (dropped.count(label_col)) { throw SchemaError("label column cannot be dropped"); }
            resolved = true;
        }
        if (cells.size() != width) {
            throw FormatError("expected " + std::to_string(width) + " cells, found " + std::to_string(cells.size()),
                              line_no);
        }
        if (!schema.missing_token.empty() &&
            std::find(cells.begin(), cells.end(), schema.missing_token) != cells.end()) {
            continue;
        }
        std::vector<double> row;
        for (std::size_t c = 0; c < width; ++c) {
            if (c == label_col || dropped.count(c)) { continue; }
            double v = 0.0;
            if (!detail::parse_double(cells[c], v)) {
                throw FormatError("non-numeric feature '" + cells[c] + "' in column " + std::to_string(c), line_no);
            }
            row.push_back(v);
        }
        rows.push_back(std::move(row));
        labels.push_back(cells[label_col]);
    }
    if (rows.empty()) { throw FormatError("no data rows", line_no); }

    RawDataset out;
    out.features.resize(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            out.features(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
        }
    }
    out.labels = std::move(labels);
    for (std::size_t c = 0; c < width; ++c) {
        if (c == label_col || dropped.count(c)) { continue; }
        out.feature_names.push_back(c < names.size() ? names[c] : "f" + std::to_string(out.feature_names.size() + 1));
    }
    return out;
}

struct OneClassData {
    Stream stream;
    ClassCounts counts;
};

/// Labels in target_labels become +1, all others -1. Order and features are kept.
inline OneClassData to_one_class(const RawDataset &raw, const std::set<std::string> &target_labels) {
    if (target_labels.empty()) { throw InvalidInputError("target label set is empty"); }
    OneClassData out;
    out.stream.resize(raw.labels.size());
    for (std::size_t i = 0; i < raw.labels.size(); ++i) {
        const int label = target_labels.count(raw.labels[i]) ? 1 : -1;
        out.stream[i] = {raw.features.row(static_cast<Index>(i)).transpose(), label, i};
    }
    out.counts = count_classes(out.stream);
    if (out.counts.targets == 0) { throw EmptyTargetError("no sample carries a target label"); }
    return out;
}

/// Reads the file and maps schema.target_label to +1, everything else to -1.
inline Stream load_csv(const DatasetSchema &schema) {
    const RawDataset raw = read_csv(schema);
    Stream out(raw.labels.size());
    for (std::size_t i = 0; i < raw.labels.size(); ++i) {
        out[i] = {raw.features.row(static_cast<Index>(i)).transpose(), raw.labels[i] == schema.target_label ? 1 : -1, i};
    }
    if (schema.normalize) { normalize_min_max(out); }
    return out;
}

/// Writes the stream as CSV with header f1..fn,label and labels 1 / -1.
inline void write_csv(const Stream &stream, std::ostream &out) {
    const Index n = stream.empty() ? 0 : stream.front().features.size();
    for (Index j = 0; j < n; ++j) { out << 'f' << (j + 1) << ','; }
    out << "label\n";
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto &s : stream) {
        for (Index j = 0; j < n; ++j) { out << s.features(j) << ','; }
        out << s.label << '\n';
    }
}

inline void write_csv(const Stream &stream, const std::string &path) {
    std::ofstream out(path);
    if (!out) { throw IoError("cannot open '" + path + "' for writing"); }
    write_csv(stream, out);
    if (!out) { throw IoError("failed writing '" + path + "'"); }
}

}  // namespace okc
