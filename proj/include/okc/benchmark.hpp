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
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "okc/ocelm.hpp"

namespace okc {

struct BenchConfig {
    std::size_t window = 1000;
    std::size_t chunk = 50;
    std::size_t dims = 2;
    std::size_t slides = 20;
    std::uint64_t seed = 0;
    Framework framework = Framework::boundary;
    double lambda = 1.0;
    double sigma = 1.0;

    void validate() const {
        if (!(chunk >= 1 && chunk < window)) { throw InvalidInputError("bench needs 1 <= chunk < window"); }
        if (dims < 1) { throw InvalidInputError("dims must be positive"); }
        if (slides < 1) { throw InvalidInputError("slides must be at least 1"); }
        if (!(lambda > 0.0) || !(sigma > 0.0)) { throw InvalidInputError("lambda and sigma must be positive"); }
    }
};

struct BenchResult {
    std::vector<double> incremental_s;
    std::vector<double> direct_s;
    double incremental_median_s = 0.0;
    double direct_median_s = 0.0;
    /// direct / incremental
    double ratio = 0.0;
};

inline double median(std::vector<double> v) {
    if (v.empty()) { throw InvalidInputError("median of an empty sample"); }
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

/// Standard-normal rows, deterministic under seed.
inline Matrix gaussian_rows(std::size_t rows, std::size_t dims, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix X(static_cast<Index>(rows), static_cast<Index>(dims));
    for (Index i = 0; i < X.rows(); ++i) {
        for (Index j = 0; j < X.cols(); ++j) { X(i, j) = normal(rng); }
    }
    return X;
}

/// Per-slide wall time of the incremental path (retract + extend + refit)
/// against rebuilding and refitting the model from scratch on the same window.
inline BenchResult benchmark_slides(const BenchConfig &cfg) {
    cfg.validate();
    using clock = std::chrono::steady_clock;
    const auto w = static_cast<Index>(cfg.window);
    const auto s = static_cast<Index>(cfg.chunk);
    const Matrix data = gaussian_rows(cfg.window + cfg.slides * cfg.chunk, cfg.dims, cfg.seed);
    const KernelSpec kernel{KernelKind::rbf, cfg.sigma};
    GramOptions options;
    options.verify_inverse = false;

    BenchResult out;
    visit_framework(cfg.framework, [&](auto policy) {
        using Model = OneClassModel<decltype(policy)>;
        auto model = Model::fit(RegGramState::init(data.topRows(w), cfg.lambda, kernel, options), 0.05);
        for (std::size_t k = 0; k < cfg.slides; ++k) {
            const Index offset = w + static_cast<Index>(k) * s;
            const Matrix chunk = data.middleRows(offset, s);
            const auto t0 = clock::now();
            model.slide(chunk);
            out.incremental_s.push_back(std::chrono::duration<double>(clock::now() - t0).count());

            const Matrix window = data.middleRows(offset + s - w, w);
            const auto t1 = clock::now();
            const auto fresh = Model::fit(RegGramState::init(window, cfg.lambda, kernel, options), 0.05);
            out.direct_s.push_back(std::chrono::duration<double>(clock::now() - t1).count());
            // Keeps the rebuild from being optimised away.
            if (!std::isfinite(fresh.theta())) { throw IllConditionedError("non-finite threshold in benchmark"); }
        }
    });
    out.incremental_median_s = median(out.incremental_s);
    out.direct_median_s = median(out.direct_s);
    out.ratio = out.direct_median_s / out.incremental_median_s;
    return out;
}

inline nlohmann::json to_json(const BenchResult &r, const BenchConfig &cfg) {
    return {
        {"window", cfg.window},
        {"chunk", cfg.chunk},
        {"dims", cfg.dims},
        {"slides", cfg.slides},
        {"seed", cfg.seed},
        {"framework", std::string(to_string(cfg.framework))},
        {"incremental_median_s", r.incremental_median_s},
        {"direct_median_s", r.direct_median_s},
        {"ratio", r.ratio},
    };
}

}  // namespace okc
