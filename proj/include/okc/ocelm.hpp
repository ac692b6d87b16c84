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
#include <numeric>
#include <string_view>
#include <utility>
#include <vector>

#include "okc/incremental_gram.hpp"

namespace okc {

enum class Framework { boundary, reconstruction };

inline std::string_view to_string(Framework f) {
    return f == Framework::boundary ? "boundary" : "reconstruction";
}

inline Framework framework_from_string(std::string_view name) {
    if (name == "boundary") { return Framework::boundary; }
    if (name == "reconstruction") { return Framework::reconstruction; }
    throw InvalidInputError("unknown framework '" + std::string(name) + "'");
}

/// Single output node; every target sample is mapped to the constant R and
/// abnormality is |f(x) - R|.
struct BoundaryFramework {
    static constexpr Framework kind = Framework::boundary;

    static Matrix targets(const Matrix &window, double target_value) {
        return Matrix::Constant(window.rows(), 1, target_value);
    }

    template <typename Pred, typename Sample>
    static double distance(const Eigen::MatrixBase<Pred> &prediction, const Eigen::MatrixBase<Sample> & /*z*/,
                           double target_value) {
        return std::abs(prediction(0) - target_value);
    }
};

/// Auto-encoder; every sample is mapped to itself and abnormality is the
/// sum of squared reconstruction errors.
struct ReconstructionFramework {
    static constexpr Framework kind = Framework::reconstruction;

    static Matrix targets(const Matrix &window, double /*target_value*/) { return window; }

    template <typename Pred, typename Sample>
    static double distance(const Eigen::MatrixBase<Pred> &prediction, const Eigen::MatrixBase<Sample> &z,
                           double /*target_value*/) {
        double d = 0.0;
        for (Index j = 0; j < z.size(); ++j) {
            const double e = z(j) - prediction(j);
            d += e * e;
        }
        return d;
    }
};

struct Prediction {
    double score = 0.0;
    int label = 1;  // +1 target, -1 outlier
};

struct SlideTiming {
    double forget_s = 0.0;
    double train_s = 0.0;
};

/// Number of training samples the threshold index points at: floor(eta * h),
/// with a relative guard so that e.g. 0.29 * 100 counts as 29.
inline Index rejection_rank(double eta, Index h) {
    const double raw = eta * static_cast<double>(h);
    return static_cast<Index>(std::floor(raw * (1.0 + 1e-12)));
}

/// theta = d(floor(eta h)) on the descending sort (1-based); when the rank is
/// zero the largest distance is used so no training sample is rejected.
inline double threshold_from_sorted(const std::vector<double> &descending, double eta) {
    if (descending.empty()) { return 0.0; }
    const Index h = static_cast<Index>(descending.size());
    const Index rank = std::max<Index>(1, std::min(h, rejection_rank(eta, h)));
    return descending[static_cast<std::size_t>(rank - 1)];
}

/// Online regularised-kernel one-class classifier over a sliding window.
/// The policy type selects the boundary or reconstruction formulation.
template <class Policy>
class OneClassModel {
  public:
    using policy_type = Policy;

    OneClassModel() = default;

    static OneClassModel fit(RegGramState state, double eta, double target_value = 1.0) {
        if (!(eta > 0.0 && eta <= 1.0)) {
            throw InvalidInputError("eta must lie in (0, 1], got " + std::to_string(eta));
        }
        if (!std::isfinite(target_value)) { throw InvalidInputError("target value must be finite"); }
        OneClassModel model;
        model.state_ = std::move(state);
        model.eta_ = eta;
        model.target_value_ = target_value;
        model.refit();
        return model;
    }

    /// Distances d(z) for every row of Z.
    [[nodiscard]] Vector score(const Eigen::Ref<const Matrix> &Z) const {
        if (Z.cols() != state_.dims()) {
            throw DimensionError("score: probe has " + std::to_string(Z.cols()) + " features, model has " +
                                 std::to_string(state_.dims()));
        }
        const Matrix kernel_vectors = gram(state_.kernel(), state_.window(), Z);
        Vector d(Z.rows());
        Vector kvec(state_.size());
        Vector pred(weights_.cols());
        for (Index i = 0; i < Z.rows(); ++i) {
            kvec = kernel_vectors.col(i);
            predict_into(kvec, pred);
            d(i) = Policy::distance(pred, Z.row(i), target_value_);
        }
        return d;
    }

    /// Model output f(Z): one row per probe (1 column for boundary, n for reconstruction).
    [[nodiscard]] Matrix predict(const Eigen::Ref<const Matrix> &Z) const {
        if (Z.cols() != state_.dims()) { throw DimensionError("predict: feature dimension mismatch"); }
        const Matrix kernel_vectors = gram(state_.kernel(), state_.window(), Z);
        Matrix out(Z.rows(), weights_.cols());
        Vector kvec(state_.size());
        Vector pred(weights_.cols());
        for (Index i = 0; i < Z.rows(); ++i) {
            kvec = kernel_vectors.col(i);
            predict_into(kvec, pred);
            out.row(i) = pred.transpose();
        }
        return out;
    }

    [[nodiscard]] int label_for(double score) const { return theta_ - score >= 0.0 ? 1 : -1; }

    [[nodiscard]] std::vector<Prediction> decide(const Eigen::Ref<const Matrix> &Z) const {
        const Vector d = score(Z);
        std::vector<Prediction> out(static_cast<std::size_t>(d.size()));
        for (Index i = 0; i < d.size(); ++i) { out[static_cast<std::size_t>(i)] = {d(i), label_for(d(i))}; }
        return out;
    }

    /// Forgets as many oldest samples as the chunk holds, learns the chunk,
    /// then refits weights and threshold. Window size is unchanged.
    SlideTiming slide(const Eigen::Ref<const Matrix> &chunk) {
        SlideTiming timing;
        const Index s = chunk.rows();
        if (s == 0) { return timing; }
        if (s >= state_.size()) {
            throw WindowUnderflowError("chunk of " + std::to_string(s) + " does not fit a window of " +
                                       std::to_string(state_.size()));
        }
        if (chunk.cols() != state_.dims()) { throw DimensionError("slide: chunk feature dimension mismatch"); }
        using clock = std::chrono::steady_clock;
        const auto t0 = clock::now();
        state_.retract(s);
        const auto t1 = clock::now();
        state_.extend(chunk);
        refit();
        const auto t2 = clock::now();
        timing.forget_s = std::chrono::duration<double>(t1 - t0).count();
        timing.train_s = std::chrono::duration<double>(t2 - t1).count();
        return timing;
    }

    [[nodiscard]] const RegGramState &state() const { return state_; }
    /// beta (h x 1) for boundary, B (h x n) for reconstruction.
    [[nodiscard]] const Matrix &weights() const { return weights_; }
    [[nodiscard]] double theta() const { return theta_; }
    [[nodiscard]] double eta() const { return eta_; }
    [[nodiscard]] double target_value() const { return target_value_; }
    /// Training distances, descending (ties in window order).
    [[nodiscard]] const std::vector<double> &train_distances() const { return sorted_distances_; }
    /// Training distances in window order.
    [[nodiscard]] const Vector &window_distances() const { return window_distances_; }

    /// Restores a stored threshold (snapshot loading).
    void set_theta(double theta) { theta_ = theta; }

  private:
    template <typename KVec>
    void predict_into(const Eigen::MatrixBase<KVec> &kvec, Vector &pred) const {
        for (Index j = 0; j < weights_.cols(); ++j) { pred(j) = kvec.dot(weights_.col(j)); }
    }

    void refit() {
        const Matrix &window = state_.window();
        const Index h = state_.size();
        weights_.noalias() = state_.p() * Policy::targets(window, target_value_);

        // Off-diagonal entries of phi are raw kernel values; restoring the
        // diagonal gives exactly the kernel vectors score() would compute.
        Vector kvec(h);
        Vector pred(weights_.cols());
        window_distances_.resize(h);
        const Matrix wt = window.transpose();
        for (Index i = 0; i < h; ++i) {
            kvec = state_.phi().col(i);
            kvec(i) = detail::kernel_from_squared_distance(state_.kernel(), 0.0);
            predict_into(kvec, pred);
            window_distances_(i) = Policy::distance(pred, wt.col(i), target_value_);
        }

        std::vector<Index> order(static_cast<std::size_t>(h));
        std::iota(order.begin(), order.end(), Index{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](Index a, Index b) { return window_distances_(a) > window_distances_(b); });
        sorted_distances_.resize(static_cast<std::size_t>(h));
        for (std::size_t i = 0; i < order.size(); ++i) { sorted_distances_[i] = window_distances_(order[i]); }
        theta_ = threshold_from_sorted(sorted_distances_, eta_);
    }

    RegGramState state_{};
    double eta_ = 0.05;
    double target_value_ = 1.0;
    Matrix weights_;
    Vector window_distances_;
    std::vector<double> sorted_distances_;
    double theta_ = 0.0;
};

using BoundaryModel = OneClassModel<BoundaryFramework>;
using ReconstructionModel = OneClassModel<ReconstructionFramework>;

/// Runs f with the model type matching the framework tag.
template <typename F>
decltype(auto) visit_framework(Framework framework, F &&f) {
    if (framework == Framework::boundary) { return std::forward<F>(f)(BoundaryFramework{}); }
    return std::forward<F>(f)(ReconstructionFramework{});
}

}  // namespace okc
