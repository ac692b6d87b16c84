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
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "okc/ocelm.hpp"
#include "okc/parallel.hpp"

namespace okc {

/// Upper limit on the expected rejected fraction of M validation targets:
/// eta + sigma_thr * sqrt(eta (1 - eta) / M).
inline double consistency_threshold(std::size_t M, double eta, double sigma_thr) {
    if (M < 1) { throw InvalidInputError("consistency threshold needs M >= 1"); }
    if (!(eta >= 0.0 && eta <= 1.0)) { throw InvalidInputError("eta must lie in [0, 1]"); }
    if (!(sigma_thr >= 0.0)) { throw InvalidInputError("sigma_thr must be non-negative"); }
    return eta + sigma_thr * std::sqrt(eta * (1.0 - eta) / static_cast<double>(M));
}

/// The 17 decades 1e-8 ... 1e8, ascending.
inline std::vector<double> lambda_grid() {
    return {1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1e0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8};
}

/// `count` kernel widths evenly spaced between the smallest non-zero and the
/// largest pairwise distance of X (endpoints included). Collapses to a single
/// value when both distances coincide.
inline std::vector<double> sigma_grid(const Eigen::Ref<const Matrix> &X, std::size_t count = 20) {
    if (count < 1) { throw InvalidInputError("sigma grid needs at least one value"); }
    const auto range = pairwise_distance_range(X);
    if (count == 1 || range.min == range.max) { return {range.min}; }
    std::vector<double> grid(count);
    const double step = (range.max - range.min) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) { grid[i] = range.min + step * static_cast<double>(i); }
    grid.back() = range.max;
    return grid;
}

struct SelectionConfig {
    std::size_t folds = 5;
    double sigma_thr = 2.0;
    double eta = 0.05;
    double target_value = 1.0;
    std::vector<double> lambdas = lambda_grid();
    /// Empty means sigma_grid(X, sigma_count).
    std::vector<double> sigmas{};
    std::size_t sigma_count = 20;

    void validate() const {
        if (folds < 2) { throw InvalidInputError("folds must be at least 2"); }
        if (!(sigma_thr >= 0.0)) { throw InvalidInputError("sigma_thr must be non-negative"); }
        if (!(eta > 0.0 && eta <= 1.0)) { throw InvalidInputError("eta must lie in (0, 1]"); }
        if (lambdas.empty()) { throw InvalidInputError("lambda grid is empty"); }
        for (double l : lambdas) {
            if (!(l > 0.0) || !std::isfinite(l)) { throw InvalidInputError("lambda grid values must be positive"); }
        }
        for (double s : sigmas) {
            if (!(s > 0.0) || !std::isfinite(s)) { throw InvalidInputError("sigma grid values must be positive"); }
        }
    }
};

struct SelectionResult {
    double lambda = 0.0;
    double sigma = 0.0;
    double cv_error = 0.0;
    double e_thr = 0.0;
    bool consistent = false;

    friend bool operator==(const SelectionResult &, const SelectionResult &) = default;
};

inline nlohmann::json to_json(const SelectionResult &r) {
    return {{"lambda", r.lambda}, {"sigma", r.sigma}, {"cv_error", r.cv_error}, {"e_thr", r.e_thr},
            {"consistent", r.consistent}};
}

struct Candidate {
    double sigma = 0.0;
    double lambda = 0.0;
};

/// Most complex first: smallest sigma, and within a sigma the largest lambda
/// (weakest regularisation).
inline std::vector<Candidate> complexity_order(std::vector<double> sigmas, std::vector<double> lambdas) {
    std::sort(sigmas.begin(), sigmas.end());
    std::sort(lambdas.begin(), lambdas.end(), std::greater<>());
    std::vector<Candidate> out;
    out.reserve(sigmas.size() * lambdas.size());
    for (double s : sigmas) {
        for (double l : lambdas) { out.push_back({s, l}); }
    }
    return out;
}

/// Row indices of each fold: one seeded shuffle, then contiguous blocks with
/// the remainder spread over the leading folds.
inline std::vector<std::vector<Index>> make_folds(Index n, std::size_t folds, std::uint64_t seed) {
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::vector<Index>> out(folds);
    const std::size_t base = static_cast<std::size_t>(n) / folds;
    const std::size_t extra = static_cast<std::size_t>(n) % folds;
    std::size_t pos = 0;
    for (std::size_t k = 0; k < folds; ++k) {
        const std::size_t len = base + (k < extra ? 1 : 0);
        out[k].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                      order.begin() + static_cast<std::ptrdiff_t>(pos + len));
        pos += len;
    }
    return out;
}

namespace detail {

inline Matrix take_rows(const Eigen::Ref<const Matrix> &X, const std::vector<Index> &rows) {
    Matrix out(static_cast<Index>(rows.size()), X.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) { out.row(static_cast<Index>(i)) = X.row(rows[i]); }
    return out;
}

}  // namespace detail

/// Mean fraction of held-out targets labelled outlier across the folds.
/// A candidate whose Gram matrix cannot be inverted scores 1.
inline double cross_validation_error(const Eigen::Ref<const Matrix> &X, Framework framework, const Candidate &candidate,
                                     double eta, double target_value, const std::vector<std::vector<Index>> &folds) {
    double total = 0.0;
    for (std::size_t k = 0; k < folds.size(); ++k) {
        std::vector<Index> train;
        for (std::size_t other = 0; other < folds.size(); ++other) {
            if (other != k) { train.insert(train.end(), folds[other].begin(), folds[other].end()); }
        }
        const Matrix x_train = detail::take_rows(X, train);
        const Matrix x_val = detail::take_rows(X, folds[k]);
        double rejected = 0.0;
        try {
            const KernelSpec kernel{KernelKind::rbf, candidate.sigma};
            GramOptions options;
            options.verify_inverse = false;
            rejected = visit_framework(framework, [&](auto policy) {
                using Model = OneClassModel<decltype(policy)>;
                const auto model = Model::fit(RegGramState::init(x_train, candidate.lambda, kernel, options), eta,
                                              target_value);
                const Vector d = model.score(x_val);
                double count = 0.0;
                for (Index i = 0; i < d.size(); ++i) {
                    if (model.label_for(d(i)) < 0) { count += 1.0; }
                }
                return count;
            });
        } catch (const IllConditionedError &) {
            rejected = static_cast<double>(folds[k].size());
        }
        total += rejected / static_cast<double>(folds[k].size());
    }
    return total / static_cast<double>(folds.size());
}

/// Consistency-based selection of (lambda, sigma) on target-only data X.
/// Candidates are visited from most to least complex and the first whose
/// cross-validated rejection stays within the consistency threshold wins;
/// if none qualifies the lowest-error candidate is returned, flagged
/// inconsistent. Candidates are evaluated in parallel batches, merged in
/// complexity order, so the result does not depend on the thread count.
inline SelectionResult select(const Eigen::Ref<const Matrix> &X, Framework framework, const SelectionConfig &cfg,
                              std::uint64_t seed, std::size_t threads = thread_budget()) {
    cfg.validate();
    const Index n = X.rows();
    if (n < static_cast<Index>(2 * cfg.folds)) {
        throw InsufficientDataError("selection needs at least " + std::to_string(2 * cfg.folds) + " samples, got " +
                                    std::to_string(n));
    }
    const std::vector<double> sigmas = cfg.sigmas.empty() ? sigma_grid(X, cfg.sigma_count) : cfg.sigmas;
    const auto candidates = complexity_order(sigmas, cfg.lambdas);
    const auto folds = make_folds(n, cfg.folds, seed);
    const std::size_t m = static_cast<std::size_t>(n) / cfg.folds;
    const double e_thr = consistency_threshold(m, cfg.eta, cfg.sigma_thr);

    std::vector<double> errors(candidates.size(), std::numeric_limits<double>::infinity());
    const std::size_t batch = std::max<std::size_t>(1, threads);
    for (std::size_t start = 0; start < candidates.size(); start += batch) {
        const std::size_t stop = std::min(candidates.size(), start + batch);
        parallel_for(
            stop - start,
            [&](std::size_t i) {
                errors[start + i] =
                    cross_validation_error(X, framework, candidates[start + i], cfg.eta, cfg.target_value, folds);
            },
            threads);
        for (std::size_t i = start; i < stop; ++i) {
            if (errors[i] <= e_thr) {
                return {candidates[i].lambda, candidates[i].sigma, errors[i], e_thr, true};
            }
        }
    }
    const auto best = static_cast<std::size_t>(std::min_element(errors.begin(), errors.end()) - errors.begin());
    return {candidates[best].lambda, candidates[best].sigma, errors[best], e_thr, false};
}

}  // namespace okc
