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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "okc/model_selection.hpp"
#include "okc/ocelm.hpp"
#include "okc/parallel.hpp"
#include "okc/stream_data.hpp"

namespace okc {

enum class RunMode { static_mode, sliding };

inline std::string_view to_string(RunMode m) { return m == RunMode::static_mode ? "static" : "sliding"; }

inline RunMode run_mode_from_string(std::string_view s) {
    if (s == "static") { return RunMode::static_mode; }
    if (s == "sliding") { return RunMode::sliding; }
    throw InvalidInputError("unknown mode '" + std::string(s) + "'");
}

struct RunConfig {
    Framework framework = Framework::boundary;
    RunMode mode = RunMode::sliding;
    std::size_t window = 150;
    std::size_t chunk = 50;
    double eta = 0.05;
    /// Unset means chosen by consistency-based selection.
    std::optional<double> lambda{};
    std::optional<double> sigma{};
    std::size_t runs = 20;
    std::uint64_t seed = 0;
    /// Share of target samples used for training in the stationary protocol.
    double train_fraction = 0.7;
    std::size_t steps = 100;
    /// folds / sigma_thr / grids for automatic selection; eta comes from above.
    SelectionConfig selection{};

    void validate() const {
        if (window < 1) { throw InvalidInputError("window must be positive"); }
        if (mode == RunMode::sliding && !(chunk >= 1 && chunk < window)) {
            throw InvalidInputError("sliding mode needs 1 <= chunk < window");
        }
        if (!(eta > 0.0 && eta <= 1.0)) { throw InvalidInputError("eta must lie in (0, 1]"); }
        if (runs < 1) { throw InvalidInputError("runs must be at least 1"); }
        if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
            throw InvalidInputError("train fraction must lie in (0, 1)");
        }
        if (steps < 1) { throw InvalidInputError("steps must be positive"); }
        if (lambda && !(*lambda > 0.0)) { throw InvalidInputError("lambda must be positive"); }
        if (sigma && !(*sigma > 0.0)) { throw InvalidInputError("sigma must be positive"); }
    }
};

/// Positive class = target.
struct Confusion {
    std::size_t tp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;
    std::size_t fp = 0;

    void add(int truth, int predicted) {
        if (truth > 0) {
            (predicted > 0 ? tp : fn) += 1;
        } else {
            (predicted > 0 ? fp : tn) += 1;
        }
    }

    Confusion &operator+=(const Confusion &o) {
        tp += o.tp;
        fn += o.fn;
        tn += o.tn;
        fp += o.fp;
        return *this;
    }

    [[nodiscard]] std::size_t total() const { return tp + fn + tn + fp; }

    [[nodiscard]] double accuracy() const {
        if (total() == 0) { throw UndefinedMetricError("accuracy of an empty evaluation"); }
        return static_cast<double>(tp + tn) / static_cast<double>(total());
    }
};

/// 50 * (sensitivity + specificity), in percent.
inline double auc(const Confusion &c) {
    if (c.tp + c.fn == 0) { throw UndefinedMetricError("AUC undefined: no target samples evaluated"); }
    if (c.tn + c.fp == 0) { throw UndefinedMetricError("AUC undefined: no outlier samples evaluated"); }
    const double sensitivity = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    const double specificity = static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
    return 50.0 * (sensitivity + specificity);
}

/// Sizes of `steps` contiguous batches over n samples; the remainder goes to the leading batches.
inline std::vector<std::size_t> step_batch_sizes(std::size_t n, std::size_t steps) {
    if (steps < 1) { throw InvalidInputError("steps must be positive"); }
    if (n < steps) {
        throw InsufficientDataError("need at least " + std::to_string(steps) + " evaluated samples, got " +
                                    std::to_string(n));
    }
    std::vector<std::size_t> sizes(steps, n / steps);
    for (std::size_t i = 0; i < n % steps; ++i) { sizes[i] += 1; }
    return sizes;
}

/// Accuracy inside each of `steps` contiguous batches of the per-sample results.
inline std::vector<double> stepwise_accuracy(const std::vector<bool> &correct, std::size_t steps = 100) {
    const auto sizes = step_batch_sizes(correct.size(), steps);
    std::vector<double> out(steps);
    std::size_t pos = 0;
    for (std::size_t b = 0; b < steps; ++b) {
        std::size_t hits = 0;
        for (std::size_t i = 0; i < sizes[b]; ++i) { hits += correct[pos + i] ? 1 : 0; }
        out[b] = static_cast<double>(hits) / static_cast<double>(sizes[b]);
        pos += sizes[b];
    }
    return out;
}

struct Timing {
    double train_s = 0.0;
    double forget_s = 0.0;
    double test_s = 0.0;

    Timing &operator+=(const Timing &o) {
        train_s += o.train_s;
        forget_s += o.forget_s;
        test_s += o.test_s;
        return *this;
    }
};

struct Hyperparameters {
    double lambda = 0.0;
    double sigma = 0.0;
    std::optional<SelectionResult> selection{};
};

enum class Protocol { stream, stationary };

inline std::string_view to_string(Protocol p) { return p == Protocol::stream ? "stream" : "stationary"; }

struct EvalReport {
    std::string dataset;
    Protocol protocol = Protocol::stream;
    RunConfig config{};
    double overall_accuracy = 0.0;
    /// Unset when one of the classes never reached the evaluator.
    std::optional<double> auc{};
    std::vector<double> step_accuracy{};
    std::vector<std::size_t> step_sizes{};
    Confusion confusion{};
    Timing timing{};
    /// One entry per run (a single entry for stream runs).
    std::vector<Hyperparameters> hyperparameters{};
};

/// Hyperparameters for training data X: fixed values from cfg, or the
/// consistency-selected pair (fixed values restrict the grid).
inline Hyperparameters resolve_hyperparameters(const Eigen::Ref<const Matrix> &X, const RunConfig &cfg,
                                               std::uint64_t seed) {
    if (cfg.lambda && cfg.sigma) { return {*cfg.lambda, *cfg.sigma, std::nullopt}; }
    SelectionConfig sel = cfg.selection;
    sel.eta = cfg.eta;
    if (cfg.lambda) { sel.lambdas = {*cfg.lambda}; }
    if (cfg.sigma) { sel.sigmas = {*cfg.sigma}; }
    const auto result = select(X, cfg.framework, sel, seed);
    return {result.lambda, result.sigma, result};
}

namespace detail {

using clock = std::chrono::steady_clock;

inline double seconds_since(clock::time_point t0) {
    return std::chrono::duration<double>(clock::now() - t0).count();
}

inline std::uint64_t run_seed(std::uint64_t seed, std::size_t run) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(run)};
    std::uint64_t out[1];
    seq.generate(reinterpret_cast<std::uint32_t *>(out), reinterpret_cast<std::uint32_t *>(out) + 2);
    return out[0];
}

struct StationaryRun {
    Confusion confusion;
    Timing timing;
    Hyperparameters hyper;
    std::vector<bool> correct;
};

}  // namespace detail

/// Repeated hold-out protocol on a stationary dataset: per run, a seeded
/// shuffle of the targets, train_fraction of them train the model, and the
/// remaining targets plus every outlier are scored. AUC and accuracy are
/// averaged over the runs.
inline EvalReport run_stationary(const Stream &data, const RunConfig &cfg, std::string dataset = "data") {
    cfg.validate();
    std::vector<std::size_t> target_idx;
    std::vector<std::size_t> outlier_idx;
    for (std::size_t i = 0; i < data.size(); ++i) { (data[i].label > 0 ? target_idx : outlier_idx).push_back(i); }
    if (target_idx.size() < 2 || outlier_idx.empty()) {
        throw InsufficientDataError("stationary protocol needs at least two targets and one outlier");
    }
    const auto n_train = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(cfg.train_fraction * static_cast<double>(target_idx.size()))), 1,
        target_idx.size() - 1);
    const Index dims = data.front().features.size();

    std::vector<detail::StationaryRun> runs(cfg.runs);
    parallel_for(cfg.runs, [&](std::size_t r) {
        const auto seed = detail::run_seed(cfg.seed, r);
        std::vector<std::size_t> order = target_idx;
        std::mt19937_64 rng(seed);
        std::shuffle(order.begin(), order.end(), rng);

        Matrix x_train(static_cast<Index>(n_train), dims);
        for (std::size_t i = 0; i < n_train; ++i) { x_train.row(static_cast<Index>(i)) = data[order[i]].features.transpose(); }
        std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
        test.insert(test.end(), outlier_idx.begin(), outlier_idx.end());
        Matrix x_test(static_cast<Index>(test.size()), dims);
        for (std::size_t i = 0; i < test.size(); ++i) { x_test.row(static_cast<Index>(i)) = data[test[i]].features.transpose(); }

        auto &run = runs[r];
        run.hyper = resolve_hyperparameters(x_train, cfg, seed);
        visit_framework(cfg.framework, [&](auto policy) {
            using Model = OneClassModel<decltype(policy)>;
            const auto t0 = detail::clock::now();
            const auto model = Model::fit(
                RegGramState::init(x_train, run.hyper.lambda, KernelSpec{KernelKind::rbf, run.hyper.sigma}), cfg.eta);
            run.timing.train_s += detail::seconds_since(t0);
            const auto t1 = detail::clock::now();
            const auto predictions = model.decide(x_test);
            run.timing.test_s += detail::seconds_since(t1);
            run.correct.resize(test.size());
            for (std::size_t i = 0; i < test.size(); ++i) {
                const int truth = data[test[i]].label;
                run.confusion.add(truth, predictions[i].label);
                run.correct[i] = truth == predictions[i].label;
            }
        });
    });

    EvalReport report;
    report.dataset = std::move(dataset);
    report.protocol = Protocol::stationary;
    report.config = cfg;
    double auc_sum = 0.0;
    double acc_sum = 0.0;
    std::vector<bool> all_correct;
    for (const auto &run : runs) {
        auc_sum += auc(run.confusion);
        acc_sum += run.confusion.accuracy();
        report.confusion += run.confusion;
        report.timing += run.timing;
        report.hyperparameters.push_back(run.hyper);
        all_correct.insert(all_correct.end(), run.correct.begin(), run.correct.end());
    }
    report.auc = auc_sum / static_cast<double>(cfg.runs);
    report.overall_accuracy = acc_sum / static_cast<double>(cfg.runs);
    if (all_correct.size() >= cfg.steps) {
        report.step_accuracy = stepwise_accuracy(all_correct, cfg.steps);
        report.step_sizes = step_batch_sizes(all_correct.size(), cfg.steps);
    }
    return report;
}

/// Prequential stream evaluation. The first `window` targets initialise the
/// model; every later sample is scored by the current model before it can
/// be learned. In sliding mode each completed chunk of new targets is
/// absorbed with one slide; outliers are only ever scored. Static mode
/// never updates the initial model.
inline EvalReport run_stream(const Stream &stream, const RunConfig &cfg, std::string dataset = "stream") {
    cfg.validate();
    if (stream.empty()) { throw InsufficientDataError("empty stream"); }
    const Index dims = stream.front().features.size();
    const std::size_t w = cfg.window;

    Matrix initial(static_cast<Index>(w), dims);
    std::size_t collected = 0;
    std::size_t start = 0;
    for (; start < stream.size() && collected < w; ++start) {
        if (stream[start].label > 0) { initial.row(static_cast<Index>(collected++)) = stream[start].features.transpose(); }
    }
    if (collected < w) {
        throw InsufficientDataError("stream holds " + std::to_string(collected) + " targets, window needs " +
                                    std::to_string(w));
    }

    EvalReport report;
    report.dataset = std::move(dataset);
    report.protocol = Protocol::stream;
    report.config = cfg;
    const auto hyper = resolve_hyperparameters(initial, cfg, cfg.seed);
    report.hyperparameters.push_back(hyper);
    std::vector<bool> correct;
    correct.reserve(stream.size() - start);

    visit_framework(cfg.framework, [&](auto policy) {
        using Model = OneClassModel<decltype(policy)>;
        const auto t0 = detail::clock::now();
        auto model = Model::fit(RegGramState::init(initial, hyper.lambda, KernelSpec{KernelKind::rbf, hyper.sigma}),
                                cfg.eta);
        report.timing.train_s += detail::seconds_since(t0);

        auto score_range = [&](std::size_t from, std::size_t to) {
            Matrix z(static_cast<Index>(to - from), dims);
            for (std::size_t i = from; i < to; ++i) { z.row(static_cast<Index>(i - from)) = stream[i].features.transpose(); }
            const auto t = detail::clock::now();
            const Vector d = model.score(z);
            report.timing.test_s += detail::seconds_since(t);
            for (std::size_t i = from; i < to; ++i) {
                const int predicted = model.label_for(d(static_cast<Index>(i - from)));
                report.confusion.add(stream[i].label, predicted);
                correct.push_back(predicted == stream[i].label);
            }
        };

        if (cfg.mode == RunMode::static_mode) {
            constexpr std::size_t block = 4096;
            for (std::size_t i = start; i < stream.size(); i += block) { score_range(i, std::min(stream.size(), i + block)); }
            return;
        }

        const std::size_t s = cfg.chunk;
        Matrix pending(static_cast<Index>(s), dims);
        std::size_t n_pending = 0;
        std::size_t i = start;
        while (i < stream.size()) {
            // Segment ends at the sample that completes the next chunk.
            std::size_t j = i;
            std::size_t need = s - n_pending;
            while (j < stream.size() && need > 0) {
                if (stream[j].label > 0) { --need; }
                ++j;
            }
            score_range(i, j);
            for (std::size_t k = i; k < j; ++k) {
                if (stream[k].label > 0) { pending.row(static_cast<Index>(n_pending++)) = stream[k].features.transpose(); }
            }
            if (n_pending == s) {
                const auto timing = model.slide(pending);
                report.timing.forget_s += timing.forget_s;
                report.timing.train_s += timing.train_s;
                n_pending = 0;
            }
            i = j;
        }
    });

    report.overall_accuracy = report.confusion.accuracy();
    if (report.confusion.tp + report.confusion.fn > 0 && report.confusion.tn + report.confusion.fp > 0) {
        report.auc = auc(report.confusion);
    }
    report.step_accuracy = stepwise_accuracy(correct, cfg.steps);
    report.step_sizes = step_batch_sizes(correct.size(), cfg.steps);
    return report;
}

inline nlohmann::json to_json(const EvalReport &r) {
    nlohmann::json hyper = nlohmann::json::array();
    for (const auto &h : r.hyperparameters) {
        nlohmann::json e = {{"lambda", h.lambda}, {"sigma", h.sigma}};
        if (h.selection) { e["selection"] = to_json(*h.selection); }
        hyper.push_back(std::move(e));
    }
    const auto &c = r.config;
    return {
        {"dataset", r.dataset},
        {"protocol", std::string(to_string(r.protocol))},
        {"config",
         {{"framework", std::string(to_string(c.framework))},
          {"mode", std::string(to_string(c.mode))},
          {"window", c.window},
          {"chunk", c.chunk},
          {"eta", c.eta},
          {"lambda", c.lambda ? nlohmann::json(*c.lambda) : nlohmann::json("auto")},
          {"sigma", c.sigma ? nlohmann::json(*c.sigma) : nlohmann::json("auto")},
          {"runs", c.runs},
          {"seed", c.seed},
          {"folds", c.selection.folds},
          {"sigma_thr", c.selection.sigma_thr}}},
        {"overall_accuracy", r.overall_accuracy},
        {"auc", r.auc ? nlohmann::json(*r.auc) : nlohmann::json(nullptr)},
        {"confusion", {{"tp", r.confusion.tp}, {"fn", r.confusion.fn}, {"tn", r.confusion.tn}, {"fp", r.confusion.fp}}},
        {"timing", {{"train_s", r.timing.train_s}, {"forget_s", r.timing.forget_s}, {"test_s", r.timing.test_s}}},
        {"hyperparameters", std::move(hyper)},
        {"step_accuracy", r.step_accuracy},
        {"step_sizes", r.step_sizes},
    };
}

/// One row per step: step,accuracy,samples.
inline void write_step_csv(const EvalReport &r, std::ostream &out) {
    out << "step,accuracy,samples\n";
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < r.step_accuracy.size(); ++i) {
        out << (i + 1) << ',' << r.step_accuracy[i] << ',' << r.step_sizes[i] << '\n';
    }
}

/// <dataset>_<framework>_<mode>_<seed>
inline std::string report_basename(const EvalReport &r) {
    return r.dataset + "_" + std::string(to_string(r.config.framework)) + "_" + std::string(to_string(r.config.mode)) +
           "_" + std::to_string(r.config.seed);
}

}  // namespace okc
