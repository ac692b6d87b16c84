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
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "okc/okc.hpp"

namespace okc::testing {

/// Seeded generator shared by the property tests.
class Gen {
  public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

    double normal(double mean = 0.0, double sd = 1.0) { return std::normal_distribution<double>(mean, sd)(rng_); }

    /// Inclusive range.
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }

    template <typename T>
    const T &pick(const std::vector<T> &v) {
        return v[index(0, v.size() - 1)];
    }

    Matrix normal_matrix(std::size_t rows, std::size_t cols, double sd = 1.0) {
        Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
        for (Index i = 0; i < m.rows(); ++i) {
            for (Index j = 0; j < m.cols(); ++j) { m(i, j) = normal(0.0, sd); }
        }
        return m;
    }

    Matrix uniform_matrix(std::size_t rows, std::size_t cols, double lo, double hi) {
        Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
        for (Index i = 0; i < m.rows(); ++i) {
            for (Index j = 0; j < m.cols(); ++j) { m(i, j) = uniform(lo, hi); }
        }
        return m;
    }

    std::mt19937_64 &engine() { return rng_; }

  private:
    std::mt19937_64 rng_;
};

inline double max_abs_diff(const Matrix &a, const Matrix &b) { return (a - b).cwiseAbs().maxCoeff(); }

/// Inverse by Gauss-Jordan elimination with partial pivoting; shares no code
/// with the library's factorisations.
inline Matrix gauss_jordan_inverse(Matrix a) {
    const Index n = a.rows();
    Matrix inv = Matrix::Identity(n, n);
    for (Index c = 0; c < n; ++c) {
        Index pivot = c;
        for (Index r = c + 1; r < n; ++r) {
            if (std::abs(a(r, c)) > std::abs(a(pivot, c))) { pivot = r; }
        }
        a.row(c).swap(a.row(pivot));
        inv.row(c).swap(inv.row(pivot));
        const double d = a(c, c);
        a.row(c) /= d;
        inv.row(c) /= d;
        for (Index r = 0; r < n; ++r) {
            if (r == c) { continue; }
            const double factor = a(r, c);
            if (factor == 0.0) { continue; }
            a.row(r) -= factor * a.row(c);
            inv.row(r) -= factor * inv.row(c);
        }
    }
    return inv;
}

/// k(x, y) written out from the formula, one coordinate at a time.
inline double naive_rbf(const Vector &x, const Vector &y, double sigma) {
    double s = 0.0;
    for (Index k = 0; k < x.size(); ++k) { s += (x(k) - y(k)) * (x(k) - y(k)); }
    return std::exp(-s / (2.0 * sigma * sigma));
}

/// Regularised Gram matrix from naive_rbf.
inline Matrix naive_phi(const Matrix &X, double lambda, double sigma) {
    Matrix phi(X.rows(), X.rows());
    for (Index i = 0; i < X.rows(); ++i) {
        for (Index j = 0; j < X.rows(); ++j) {
            phi(i, j) = naive_rbf(X.row(i).transpose(), X.row(j).transpose(), sigma) + (i == j ? 1.0 / lambda : 0.0);
        }
    }
    return phi;
}

inline Stream blob_stream(Gen &g, std::size_t n, std::size_t dims, double sd = 1.0) {
    Stream out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i].features = g.normal_matrix(dims, 1, sd).col(0);
        out[i].label = 1;
        out[i].timestamp = i;
    }
    return out;
}

}  // namespace okc::testing
