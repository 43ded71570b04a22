/*
 * Copyright 2026 The dgp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "dgp/kernel.hpp"

#include <cmath>
#include <sstream>

namespace dgp {

namespace {

// Unchecked single-pair correlation; callers have validated params/inputs.
double corr_unchecked(const Eigen::Ref<const Vector>& x1,
                      const Eigen::Ref<const Vector>& x2,
                      const KernelParams& params) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < params.theta.size(); ++k) {
        const double d = std::abs(x1[k] - x2[k]);
        const double pk = params.power[k];
        s += params.theta[k] * (pk == 2.0 ? d * d : std::pow(d, pk));
    }
    return std::exp(-s);
}

} // namespace

KernelParams KernelParams::power_exponential(const Vector& theta,
                                             double power) {
    KernelParams p;
    p.theta = theta;
    p.power = Vector::Constant(theta.size(), power);
    p.validate();
    return p;
}

KernelParams KernelParams::gaussian(const Vector& theta) {
    return power_exponential(theta, 2.0);
}

void KernelParams::validate() const {
    if (theta.size() != power.size())
        throw DimensionError("KernelParams: theta and power sizes differ");
    if (theta.size() == 0)
        throw DimensionError("KernelParams: empty parameter vectors");
    for (Eigen::Index k = 0; k < theta.size(); ++k) {
        if (!std::isfinite(theta[k]) || theta[k] < 0.0)
            throw DataError("KernelParams: theta must be finite and >= 0");
        if (!std::isfinite(power[k]) || power[k] <= 0.0 || power[k] > 2.0)
            throw DataError("KernelParams: power must lie in (0, 2]");
    }
}

double correlation(const Vector& x1, const Vector& x2,
                   const KernelParams& params) {
    params.validate();
    if (x1.size() != x2.size() || x1.size() != params.dim())
        throw DimensionError("correlation: dimension mismatch");
    if (!x1.allFinite() || !x2.allFinite())
        throw DataError("correlation: non-finite input");
    return corr_unchecked(x1, x2, params);
}

Vector correlation_vector(const Matrix& X, const Vector& x0,
                          const KernelParams& params) {
    params.validate();
    if (X.cols() != x0.size() || X.cols() != params.dim())
        throw DimensionError("correlation_vector: dimension mismatch");
    if (!x0.allFinite())
        throw DataError("correlation_vector: non-finite query");
    Vector r(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        r[i] = corr_unchecked(X.row(i).transpose(), x0, params);
    return r;
}

namespace {

Matrix correlation_matrix_dense(const Matrix& X, const KernelParams& params) {
    const Eigen::Index n = X.rows();
    Matrix r = Matrix::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = corr_unchecked(X.row(i).transpose(),
                                            X.row(j).transpose(), params);
            r(i, j) = v;
            r(j, i) = v;
        }
    }
    return r;
}

} // namespace

CorrelationMatrix CorrelationMatrix::build(const Matrix& X,
                                           const KernelParams& params,
                                           const JitterPolicy& policy) {
    params.validate();
    if (X.cols() != params.dim())
        throw DimensionError("CorrelationMatrix: design/params dimension mismatch");
    if (X.rows() < 1)
        throw DataError("CorrelationMatrix: empty design");
    if (!X.allFinite())
        throw DataError("CorrelationMatrix: non-finite design entries");

    CorrelationMatrix out;
    out.r_ = correlation_matrix_dense(X, params);

    const double mean_diag = out.r_.diagonal().mean(); // 1 by construction
    double jitter = policy.initial_scale * mean_diag;
    const double max_jitter = policy.max_scale * mean_diag;
    for (;;) {
        Matrix m = out.r_;
        m.diagonal().array() += jitter;
        out.llt_.compute(m);
        if (out.llt_.info() == Eigen::Success) {
            out.jitter_ = jitter;
            return out;
        }
        jitter *= policy.growth;
        if (jitter > max_jitter) {
            std::ostringstream msg;
            msg << "CorrelationMatrix: factorization failed for a " << X.rows()
                << "x" << X.cols() << " design even at jitter " << max_jitter
                << "; the design is singular (duplicate or near-duplicate runs)";
            throw NumericError(msg.str());
        }
    }
}

CorrelationMatrix CorrelationMatrix::build_with_fixed_jitter(
    const Matrix& X, const KernelParams& params, double jitter) {
    params.validate();
    if (X.cols() != params.dim())
        throw DimensionError("CorrelationMatrix: design/params dimension mismatch");
    CorrelationMatrix out;
    out.r_ = correlation_matrix_dense(X, params);
    Matrix m = out.r_;
    m.diagonal().array() += jitter;
    out.llt_.compute(m);
    if (out.llt_.info() != Eigen::Success)
        throw NumericError("CorrelationMatrix: factorization failed at the recorded jitter");
    out.jitter_ = jitter;
    return out;
}

double CorrelationMatrix::log_det() const {
    const auto& l = llt_.matrixLLT();
    double s = 0.0;
    for (Eigen::Index i = 0; i < l.rows(); ++i) s += std::log(l(i, i));
    return 2.0 * s;
}

Matrix CorrelationMatrix::inverse() const {
    return llt_.solve(Matrix::Identity(r_.rows(), r_.cols()));
}

InputScaling InputScaling::fit(const Matrix& X) {
    InputScaling s;
    s.lo = X.colwise().minCoeff().transpose();
    Vector hi = X.colwise().maxCoeff().transpose();
    s.width = hi - s.lo;
    for (Eigen::Index k = 0; k < s.width.size(); ++k)
        if (s.width[k] <= 0.0) s.width[k] = 1.0;
    return s;
}

InputScaling InputScaling::identity(Eigen::Index q) {
    InputScaling s;
    s.lo = Vector::Zero(q);
    s.width = Vector::Ones(q);
    return s;
}

Vector InputScaling::apply(const Vector& x) const {
    if (x.size() != lo.size())
        throw DimensionError("InputScaling: dimension mismatch");
    return (x - lo).cwiseQuotient(width);
}

Matrix InputScaling::apply(const Matrix& X) const {
    if (X.cols() != lo.size())
        throw DimensionError("InputScaling: dimension mismatch");
    return (X.rowwise() - lo.transpose()).array().rowwise() /
           width.transpose().array();
}

} // namespace dgp
