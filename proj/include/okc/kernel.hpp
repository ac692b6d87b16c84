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

#include <cmath>
#include <limits>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "okc/errors.hpp"

namespace okc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class KernelKind { rbf };

inline std::string_view to_string(KernelKind kind) {
    switch (kind) {
        case KernelKind::rbf: return "rbf";
    }
    return "unknown";
}

inline KernelKind kernel_kind_from_string(std::string_view name) {
    if (name == "rbf") { return KernelKind::rbf; }
    throw InvalidInputError("unknown kernel kind '" + std::string(name) + "'");
}

/// Mercer kernel definition. Only the Gaussian RBF
/// k(x, y) = exp(-|x - y|^2 / (2 sigma^2)) is provided; sigma is in the
/// same units as feature-space distance.
struct KernelSpec {
    KernelKind kind = KernelKind::rbf;
    double sigma = 1.0;

    void validate() const {
        if (!(sigma > 0.0) || !std::isfinite(sigma)) {
            throw InvalidInputError("kernel sigma must be positive and finite, got " + std::to_string(sigma));
        }
    }

    friend bool operator==(const KernelSpec &, const KernelSpec &) = default;
};

namespace detail {

// Squared distance by explicit differences so that d(x, y) == d(y, x) bit for bit.
inline double squared_distance(const double *x, const double *y, Index n) {
    double r = 0.0;
    for (Index k = 0; k < n; ++k) {
        const double dx = x[k] - y[k];
        r += dx * dx;
    }
    return r;
}

inline double kernel_from_squared_distance(const KernelSpec &spec, double r2) {
    return std::exp(-r2 / (2.0 * spec.sigma * spec.sigma));
}

template <typename Derived>
void require_finite(const Eigen::DenseBase<Derived> &m, const char *what) {
    if (!m.allFinite()) { throw InvalidInputError(std::string(what) + " contains non-finite values"); }
}

}  // namespace detail

/// k(x, y) for two feature vectors of equal length.
template <typename DerivedX, typename DerivedY>
double eval_kernel(const KernelSpec &spec, const Eigen::MatrixBase<DerivedX> &x, const Eigen::MatrixBase<DerivedY> &y) {
    spec.validate();
    if (x.size() != y.size()) {
        throw DimensionError("kernel arguments differ in length: " + std::to_string(x.size()) + " vs " +
                             std::to_string(y.size()));
    }
    detail::require_finite(x, "kernel argument");
    detail::require_finite(y, "kernel argument");
    const Vector xe = x;
    const Vector ye = y;
    return detail::kernel_from_squared_distance(spec, detail::squared_distance(xe.data(), ye.data(), xe.size()));
}

/// Cross-Gram matrix: entry (i, j) = k(X_i, Y_j), samples stored as rows.
inline Matrix gram(const KernelSpec &spec, const Eigen::Ref<const Matrix> &X, const Eigen::Ref<const Matrix> &Y) {
    spec.validate();
    if (X.cols() != Y.cols()) {
        throw DimensionError("gram: feature dimensions differ (" + std::to_string(X.cols()) + " vs " +
                             std::to_string(Y.cols()) + ")");
    }
    detail::require_finite(X, "gram input");
    detail::require_finite(Y, "gram input");

    // Column-major transposes keep each sample contiguous.
    const Matrix xt = X.transpose();
    const Matrix yt = Y.transpose();
    const Index n = X.cols();
    Matrix k(X.rows(), Y.rows());
    for (Index j = 0; j < Y.rows(); ++j) {
        const double *yj = yt.col(j).data();
        for (Index i = 0; i < X.rows(); ++i) {
            k(i, j) = detail::kernel_from_squared_distance(spec, detail::squared_distance(xt.col(i).data(), yj, n));
        }
    }
    return k;
}

struct DistanceRange {
    double min = 0.0;
    double max = 0.0;
};

/// Smallest strictly positive and largest pairwise Euclidean distance between rows.
inline DistanceRange pairwise_distance_range(const Eigen::Ref<const Matrix> &X) {
    detail::require_finite(X, "distance input");
    const Matrix xt = X.transpose();
    const Index m = X.rows();
    double dmin2 = std::numeric_limits<double>::infinity();
    double dmax2 = 0.0;
    for (Index j = 1; j < m; ++j) {
        for (Index i = 0; i < j; ++i) {
            const double r2 = detail::squared_distance(xt.col(i).data(), xt.col(j).data(), X.cols());
            if (r2 > 0.0 && r2 < dmin2) { dmin2 = r2; }
            if (r2 > dmax2) { dmax2 = r2; }
        }
    }
    if (!(dmax2 > 0.0)) { throw DegenerateDataError("pairwise distances are all zero (need at least two distinct rows)"); }
    return {std::sqrt(dmin2), std::sqrt(dmax2)};
}

}  // namespace okc
