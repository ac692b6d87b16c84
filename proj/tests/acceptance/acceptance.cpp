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
// Acceptance suite: one PASS / FAIL / SKIP line per criterion, exit code 1
// if anything failed. Tolerances are fixed here, not tuned per run.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "okc/okc.hpp"
#include "support.hpp"

namespace {

using namespace okc;
using okc::testing::Gen;
using okc::testing::max_abs_diff;

enum class Status { pass, fail, skip };

struct Outcome {
    Status status;
    std::string detail;
};

Outcome verdict(bool ok, std::string detail) { return {ok ? Status::pass : Status::fail, std::move(detail)}; }

std::string fmt(const char *format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Incremental inverse against the direct dense inverse after every
//    operation of 200 random extend/retract sequences.
Outcome incremental_inverse_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    Gen g(1001);
    const std::vector<double> lambdas{1e-3, 1.0, 1e3};
    double worst = 0.0;
    std::size_t checks = 0;
    for (int seq = 0; seq < 200; ++seq) {
        const std::size_t n = g.index(1, 20);
        const double lambda = lambdas[static_cast<std::size_t>(seq) % 3];
        const KernelSpec kernel{KernelKind::rbf, std::sqrt(static_cast<double>(n))};
        GramOptions options;
        options.verify_inverse = false;
        auto state = RegGramState::init(g.normal_matrix(g.index(1, 60), n), lambda, kernel, options);
        const std::size_t ops = g.index(4, 20);
        for (std::size_t k = 0; k < ops; ++k) {
            const auto h = static_cast<std::size_t>(state.size());
            const bool grow = h == 1 || (h + 1 <= 300 && g.uniform() < 0.6);
            if (grow) {
                state.extend(g.normal_matrix(g.index(1, std::min<std::size_t>(60, 300 - h)), n));
            } else {
                state.retract(static_cast<Index>(g.index(1, std::min<std::size_t>(60, h - 1))));
            }
            worst = std::max(worst, max_abs_diff(state.p(), direct_inverse_oracle(state.window(), lambda, kernel).p));
            ++checks;
        }
    }
    const double elapsed = seconds_since(t0);
    return verdict(worst < 1e-8 && elapsed < 120.0,
                   fmt("max |p - oracle| = %.3g over %zu checks (< 1e-8), %.1f s (< 120 s)", worst, checks, elapsed));
}

// 2. After 20 slides (W=150, s=50) both models agree with a batch fit on the
//    same window.
Outcome online_equals_batch() {
    const auto t0 = std::chrono::steady_clock::now();
    Gen g(1002);
    double worst = 0.0;
    std::size_t mismatched = 0;
    std::size_t models = 0;
    for (double lambda : {1e-3, 1.0, 1e3}) {
        for (auto framework : {Framework::boundary, Framework::reconstruction}) {
            const KernelSpec kernel{KernelKind::rbf, 1.0};
            const Matrix stream = g.normal_matrix(150 + 20 * 50, 2);
            const Matrix probes = g.normal_matrix(1000, 2, 1.5);
            visit_framework(framework, [&](auto policy) {
                using Model = OneClassModel<decltype(policy)>;
                auto online = Model::fit(RegGramState::init(stream.topRows(150), lambda, kernel), 0.05);
                for (Index k = 0; k < 20; ++k) { online.slide(stream.middleRows(150 + 50 * k, 50)); }
                const auto batch = Model::fit(RegGramState::init(stream.bottomRows(150), lambda, kernel), 0.05);
                const auto a = online.decide(probes);
                const auto b = batch.decide(probes);
                for (std::size_t i = 0; i < a.size(); ++i) {
                    worst = std::max(worst, std::abs(a[i].score - b[i].score));
                    mismatched += a[i].label != b[i].label ? 1 : 0;
                }
            });
            ++models;
        }
    }
    const double elapsed = seconds_since(t0);
    return verdict(worst < 1e-6 && mismatched == 0 && elapsed < 30.0,
                   fmt("%zu models x 1000 probes: max score diff %.3g (< 1e-6), %zu label mismatches, %.1f s", models,
                       worst, mismatched, elapsed));
}

// 3. Threshold rank and training rejection on random distance vectors.
Outcome threshold_semantics() {
    Gen g(1003);
    std::size_t bad_rank = 0;
    std::size_t bad_fraction = 0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = g.index(1, 1000);
        const std::size_t eta_permille = g.index(1, 1000);
        const double eta = static_cast<double>(eta_permille) / 1000.0;
        std::vector<double> d(n);
        for (auto &x : d) { x = g.uniform(0.0, 100.0); }
        std::vector<double> sorted = d;
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        const double theta = threshold_from_sorted(sorted, eta);

        // Exact integer floor(eta * N); rank 0 falls back to the largest distance.
        const std::size_t rank = std::max<std::size_t>(1, eta_permille * n / 1000);
        std::vector<double> copy = d;
        std::nth_element(copy.begin(), copy.begin() + static_cast<std::ptrdiff_t>(rank - 1), copy.end(),
                         std::greater<>());
        bad_rank += theta == copy[rank - 1] ? 0 : 1;

        const auto rejected = static_cast<std::size_t>(std::count_if(d.begin(), d.end(), [&](double x) { return x > theta; }));
        const std::size_t lo = eta_permille * n / 1000 > 0 ? eta_permille * n / 1000 - 1 : 0;
        const std::size_t hi = (eta_permille * n + 999) / 1000;
        bad_fraction += (rejected >= lo && rejected <= hi) ? 0 : 1;
    }
    return verdict(bad_rank == 0 && bad_fraction == 0,
                   fmt("1000 vectors: %zu wrong thresholds, %zu rejection fractions out of bounds", bad_rank,
                       bad_fraction));
}

// 4. Boundary model on an annulus: training rejection near eta and clean
//    rejection of points well inside the hole or well outside the ring.
Outcome ring_descriptor() {
    const auto t0 = std::chrono::steady_clock::now();
    const double r_inner = 1.0;
    const double r_outer = 2.0;
    const Matrix X = features_of(gen_ring(500, r_inner, r_outer, 1004));
    SelectionConfig cfg;
    const auto sel = select(X, Framework::boundary, cfg, 1004);
    const auto model = BoundaryModel::fit(RegGramState::init(X, sel.lambda, KernelSpec{KernelKind::rbf, sel.sigma}), 0.05);
    const double rejection = static_cast<double>((model.window_distances().array() > model.theta()).count()) / 500.0;

    Gen g(1005);
    Matrix probes(2000, 2);
    for (Index i = 0; i < probes.rows(); ++i) {
        Vector p(2);
        if (i % 2 == 0) {
            const double r = 0.5 * r_inner * std::sqrt(g.uniform());
            const double a = g.uniform(0.0, 2.0 * std::numbers::pi);
            p << r * std::cos(a), r * std::sin(a);
        } else {
            do {
                p << g.uniform(-3.0 * r_outer, 3.0 * r_outer), g.uniform(-3.0 * r_outer, 3.0 * r_outer);
            } while (p.norm() <= 1.5 * r_outer);
        }
        probes.row(i) = p.transpose();
    }
    const auto labels = model.decide(probes);
    const double outlier_rate =
        static_cast<double>(std::count_if(labels.begin(), labels.end(), [](const Prediction &p) { return p.label < 0; })) /
        static_cast<double>(labels.size());
    const double elapsed = seconds_since(t0);
    return verdict(std::abs(rejection - 0.05) <= 0.02 && outlier_rate >= 0.95 && elapsed < 60.0,
                   fmt("lambda=%g sigma=%.4g (consistent=%d): training rejection %.2f%% (5 +/- 2), far probes "
                       "rejected %.2f%% (>= 95), %.1f s",
                       sel.lambda, sel.sigma, sel.consistent ? 1 : 0, 100.0 * rejection, 100.0 * outlier_rate, elapsed));
}

DriftStreamSpec drift_spec(double speed) {
    DriftStreamSpec spec;
    spec.family = DriftFamily::unimodal_drift;
    spec.n_dims = 2;
    spec.total = 20000;
    spec.drift_period = 100;
    spec.class_balance = 0.5;
    spec.seed = 1006;
    spec.target_mean = {0.0, 0.0};
    spec.outlier_mean = {5.0, 0.0};
    spec.target_velocity = {0.0, speed};
    spec.outlier_velocity = {0.0, speed};
    return spec;
}

std::pair<double, double> sliding_and_static(const Stream &stream) {
    RunConfig cfg;
    cfg.framework = Framework::boundary;
    cfg.seed = 1006;
    cfg.mode = RunMode::sliding;
    const double sliding = run_stream(stream, cfg, "drift").overall_accuracy;
    cfg.mode = RunMode::static_mode;
    const double fixed = run_stream(stream, cfg, "drift").overall_accuracy;
    return {100.0 * sliding, 100.0 * fixed};
}

// 5. Sliding window beats the frozen initial model on a drifting stream.
Outcome drift_adaptation() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto [sliding, fixed] = sliding_and_static(gen_stream(drift_spec(0.05)));
    const double elapsed = seconds_since(t0);
    return verdict(sliding - fixed >= 15.0 && elapsed < 180.0,
                   fmt("sliding %.2f%% vs static %.2f%%: gap %.2f points (>= 15), %.1f s", sliding, fixed,
                       sliding - fixed, elapsed));
}

// 6. Without drift both modes perform alike.
Outcome stationary_equivalence() {
    const auto [sliding, fixed] = sliding_and_static(gen_stream(drift_spec(0.0)));
    return verdict(std::abs(sliding - fixed) <= 2.0,
                   fmt("sliding %.2f%% vs static %.2f%%: |gap| %.2f points (<= 2)", sliding, fixed,
                       std::abs(sliding - fixed)));
}

// 7. Consistency threshold against 50-digit decimal arithmetic.
Outcome consistency_formula() {
    using Big = boost::multiprecision::cpp_dec_float_50;
    Gen g(1007);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t m = g.index(1, 1000000);
        const double eta = g.uniform(0.0, 1.0);
        const double s = g.uniform(0.0, 10.0);
        const Big bm(static_cast<unsigned long long>(m));
        const Big be(eta);
        const Big bs(s);
        const Big exact = (bm * be + bs * boost::multiprecision::sqrt(be * (Big(1) - be) * bm)) / bm;
        const double err = static_cast<double>(boost::multiprecision::abs(Big(consistency_threshold(m, eta, s)) - exact));
        worst = std::max(worst, err);
    }
    return verdict(worst < 1e-12, fmt("1000 triples: max |error| %.3g (< 1e-12)", worst));
}

// 8. Incremental slide against rebuilding the model, W=1000, s=50, 2-D.
Outcome slide_speedup() {
    BenchConfig cfg;
    cfg.window = 1000;
    cfg.chunk = 50;
    cfg.dims = 2;
    cfg.slides = 20;
    cfg.seed = 1008;
    const auto r = benchmark_slides(cfg);
    return verdict(r.ratio >= 3.0, fmt("median slide %.4f s vs rebuild %.4f s: %.2fx (>= 3x)", r.incremental_median_s,
                                       r.direct_median_s, r.ratio));
}

// 9. Breast Cancer Wisconsin, only when the CSV is supplied.
Outcome breast_cancer() {
    const char *path = std::getenv("OKC_BREAST_CANCER_CSV");
    if (path == nullptr || *path == '\0') { return {Status::skip, "set OKC_BREAST_CANCER_CSV to the UCI data file"}; }
    DatasetSchema schema;
    schema.path = path;
    schema.header = false;
    schema.drop_columns = {"0"};
    schema.missing_token = "?";
    const char *target = std::getenv("OKC_BREAST_CANCER_TARGET");
    schema.target_label = target != nullptr ? target : "4";
    const Stream data = load_csv(schema);
    RunConfig cfg;
    cfg.framework = Framework::boundary;
    cfg.runs = 20;
    cfg.seed = 1009;
    const auto r = run_stationary(data, cfg, "breast_cancer");
    const double value = r.auc.value_or(0.0);
    return verdict(std::abs(value - 95.22) <= 3.0, fmt("mean AUC %.2f over 20 runs (95.22 +/- 3)", value));
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 incremental inverse matches direct inverse", incremental_inverse_oracle},
        {"2 online model equals batch refit", online_equals_batch},
        {"3 threshold semantics", threshold_semantics},
        {"4 ring descriptor", ring_descriptor},
        {"5 drift adaptation", drift_adaptation},
        {"6 stationary equivalence", stationary_equivalence},
        {"7 consistency formula precision", consistency_formula},
        {"8 incremental slide speedup", slide_speedup},
        {"9 breast cancer reproduction", breast_cancer},
    };
    int failures = 0;
    for (const auto &[name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception &e) {
            o = {Status::fail, std::string("threw: ") + e.what()};
        }
        const char *tag = o.status == Status::pass ? "PASS" : o.status == Status::fail ? "FAIL" : "SKIP";
        std::printf("%s  %s: %s\n", tag, name.c_str(), o.detail.c_str());
        std::fflush(stdout);
        failures += o.status == Status::fail ? 1 : 0;
    }
    return failures == 0 ? 0 : 1;
}
