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

#include <cstddef>
#include <string>
#include <utility>

#include <Eigen/Cholesky>

#include "okc/kernel.hpp"

namespace okc {

struct GramOptions {
    /// Operations whose inverted matrix has a 1-norm condition estimate above this throw.
    double max_condition = 1e14;
    /// Recompute p from scratch every this many extends; 0 disables.
    std::size_t refresh_interval = 0;
    /// Check |phi * p - I|_max < inverse_tolerance after every operation.
#ifdef NDEBUG
    bool verify_inverse = false;
#else
    bool verify_inverse = true;
#endif
    double inverse_tolerance = 1e-6;
};

/// Counts dense inversions (factorisations) and the largest order seen.
struct InversionCounter {
    std::size_t count = 0;
    Index largest = 0;

    void record(Index order) {
        ++count;
        if (order > largest) { largest = order; }
    }
};

namespace detail {

inline void symmetrize(Matrix &m) {
    m = (0.5 * (m + m.transpose())).eval();
}

// Factorises an SPD matrix, rejecting it when the condition estimate exceeds max_condition.
inline Eigen::LLT<Matrix> factor_spd(const Matrix &m, double max_condition, const char *what) {
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success) {
        throw IllConditionedError(std::string(what) + " is not numerically positive definite");
    }
    const double rcond = llt.rcond();
    if (!(rcond * max_condition >= 1.0)) {
        throw IllConditionedError(std::string(what) + " condition estimate " + std::to_string(1.0 / rcond) +
                                  " exceeds limit");
    }
    return llt;
}

inline Matrix invert_spd(const Matrix &m, double max_condition, const char *what) {
    const auto llt = factor_spd(m, max_condition, what);
    Matrix inv = llt.solve(Matrix::Identity(m.rows(), m.cols()));
    symmetrize(inv);
    return inv;
}

}  // namespace detail

/// Regularised Gram matrix phi = K(W, W) + I / lambda over a FIFO window W,
/// together with its inverse p, maintained across extend (append newest)
/// and retract (drop oldest) without re-inverting the full matrix.
///
/// extend uses the symmetric block inverse through the Schur complement
///   S   = phi_v - phi_uv^T p phi_uv
///   p'  = [ p + A S^-1 A^T   -A S^-1 ]   with A = p phi_uv,
///                                           (refined once against phi_u)
///         [ -S^-1 A^T          S^-1  ]
/// and retract uses the downdate p' = Ri22 - Fi12^T Fi11^-1 Fi12 on the
/// partition of the current p whose leading block belongs to the forgotten
/// samples. Each performs exactly one small (s x s or f x f) factorisation.
class RegGramState {
  public:
    RegGramState() = default;

    static RegGramState init(const Eigen::Ref<const Matrix> &X0, double lambda, const KernelSpec &kernel,
                             GramOptions options = {}) {
        if (X0.rows() < 1) { throw InsufficientDataError("init needs at least one sample"); }
        if (!(lambda > 0.0) || !std::isfinite(lambda)) {
            throw InvalidInputError("lambda must be positive and finite, got " + std::to_string(lambda));
        }
        kernel.validate();
        RegGramState state;
        state.kernel_ = kernel;
        state.lambda_ = lambda;
        state.options_ = options;
        state.window_ = X0;
        state.phi_ = gram(kernel, X0, X0);
        state.phi_.diagonal().array() += 1.0 / lambda;
        state.p_ = detail::invert_spd(state.phi_, options.max_condition, "regularised Gram matrix");
        state.inversions_.record(state.phi_.rows());
        state.verify();
        return state;
    }

    /// Appends the rows of Xv (newest last).
    void extend(const Eigen::Ref<const Matrix> &Xv) {
        const Index s = Xv.rows();
        if (s == 0) { return; }
        if (Xv.cols() != dims()) {
            throw DimensionError("extend: chunk has " + std::to_string(Xv.cols()) + " features, window has " +
                                 std::to_string(dims()));
        }
        const Index h = size();

        Matrix phi_v = gram(kernel_, Xv, Xv);
        phi_v.diagonal().array() += 1.0 / lambda_;
        const Matrix phi_uv = gram(kernel_, window_, Xv);

        Matrix a(h, s);
        a.noalias() = p_ * phi_uv;
        // One refinement step against phi_u. Without it the error carried in
        // p is amplified by S^-1 and compounds over many extends when phi is
        // poorly conditioned.
        Matrix residual = phi_uv;
        residual.noalias() -= phi_ * a;
        a.noalias() += p_ * residual;

        Matrix schur = phi_v;
        schur.noalias() -= phi_uv.transpose() * a;
        detail::symmetrize(schur);
        const Matrix p22 = detail::invert_spd(schur, options_.max_condition, "Schur complement");
        // |phi_v|_1 |S^-1|_1 bounds cond_1 of the extended phi from below; a
        // tiny S relative to phi_v means the new samples are near-duplicates.
        const double extended_condition = phi_v.cwiseAbs().colwise().sum().maxCoeff() *
                                          p22.cwiseAbs().colwise().sum().maxCoeff();
        if (!(extended_condition <= options_.max_condition)) {
            throw IllConditionedError("extended Gram matrix condition estimate " +
                                      std::to_string(extended_condition) + " exceeds limit");
        }
        inversions_.record(s);

        Matrix b(h, s);
        b.noalias() = a * p22;

        Matrix p_new(h + s, h + s);
        p_new.topLeftCorner(h, h) = p_;
        p_new.topLeftCorner(h, h).noalias() += b * a.transpose();
        p_new.topRightCorner(h, s) = -b;
        p_new.bottomLeftCorner(s, h) = -b.transpose();
        p_new.bottomRightCorner(s, s) = p22;
        detail::symmetrize(p_new);
        p_ = std::move(p_new);

        Matrix phi_new(h + s, h + s);
        phi_new.topLeftCorner(h, h) = phi_;
        phi_new.topRightCorner(h, s) = phi_uv;
        phi_new.bottomLeftCorner(s, h) = phi_uv.transpose();
        phi_new.bottomRightCorner(s, s) = phi_v;
        phi_ = std::move(phi_new);

        Matrix window_new(h + s, dims());
        window_new.topRows(h) = window_;
        window_new.bottomRows(s) = Xv;
        window_ = std::move(window_new);

        if (options_.refresh_interval > 0 && ++extends_since_refresh_ >= options_.refresh_interval) {
            refresh();
        }
        verify();
    }

    /// Forgets the f oldest samples.
    void retract(Index f) {
        const Index h = size();
        if (f < 1) { throw InvalidInputError("retract count must be at least 1"); }
        if (f >= h) {
            throw WindowUnderflowError("cannot retract " + std::to_string(f) + " samples from a window of " +
                                       std::to_string(h));
        }
        const Index r = h - f;

        const auto fi11 = detail::factor_spd(p_.topLeftCorner(f, f), options_.max_condition, "forgotten inverse block");
        inversions_.record(f);
        const Matrix c = fi11.solve(p_.topRightCorner(f, r));

        Matrix p_new = p_.bottomRightCorner(r, r);
        p_new.noalias() -= p_.topRightCorner(f, r).transpose() * c;
        detail::symmetrize(p_new);
        p_ = std::move(p_new);

        phi_ = phi_.bottomRightCorner(r, r).eval();
        window_ = window_.bottomRows(r).eval();
        verify();
    }

    /// Recomputes p by direct inversion of phi.
    void refresh() {
        p_ = detail::invert_spd(phi_, options_.max_condition, "regularised Gram matrix");
        inversions_.record(phi_.rows());
        extends_since_refresh_ = 0;
    }

    /// max |phi * p - I|
    [[nodiscard]] double inverse_residual() const {
        Matrix r = phi_ * p_;
        r.diagonal().array() -= 1.0;
        return r.cwiseAbs().maxCoeff();
    }

    [[nodiscard]] const Matrix &window() const { return window_; }
    [[nodiscard]] const Matrix &phi() const { return phi_; }
    [[nodiscard]] const Matrix &p() const { return p_; }
    [[nodiscard]] double lambda() const { return lambda_; }
    [[nodiscard]] const KernelSpec &kernel() const { return kernel_; }
    [[nodiscard]] const GramOptions &options() const { return options_; }
    [[nodiscard]] Index size() const { return window_.rows(); }
    [[nodiscard]] Index dims() const { return window_.cols(); }
    [[nodiscard]] const InversionCounter &inversions() const { return inversions_; }

  private:
    void verify() const {
        if (!options_.verify_inverse) { return; }
        const double residual = inverse_residual();
        if (!(residual < options_.inverse_tolerance)) {
            throw IllConditionedError("maintained inverse drifted: |phi p - I|_max = " + std::to_string(residual));
        }
    }

    KernelSpec kernel_{};
    double lambda_ = 1.0;
    GramOptions options_{};
    Matrix window_;
    Matrix phi_;
    Matrix p_;
    InversionCounter inversions_{};
    std::size_t extends_since_refresh_ = 0;
};

struct DirectInverse {
    Matrix phi;
    Matrix p;
};

/// Regularised Gram matrix of X and its inverse by a dense direct solve.
/// Reference path for tests and benchmarks.
inline DirectInverse direct_inverse_oracle(const Eigen::Ref<const Matrix> &X, double lambda, const KernelSpec &kernel,
                                           double max_condition = 1e14) {
    if (X.rows() < 1) { throw InsufficientDataError("oracle needs at least one sample"); }
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw InvalidInputError("lambda must be positive and finite, got " + std::to_string(lambda));
    }
    DirectInverse out;
    out.phi = gram(kernel, X, X);
    out.phi.diagonal().array() += 1.0 / lambda;
    out.p = detail::invert_spd(out.phi, max_condition, "regularised Gram matrix");
    return out;
}

}  // namespace okc
