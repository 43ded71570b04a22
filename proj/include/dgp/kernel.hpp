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

#ifndef DGP_KERNEL_HPP
#define DGP_KERNEL_HPP

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "dgp/errors.hpp"

namespace dgp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Power-exponential correlation parameters: per-dimension nonnegative
/// rates theta_k and exponents power_k in (0, 2]. power_k == 2 for all k
/// is the anisotropic Gaussian (radial basis) kernel.
struct KernelParams {
    Vector theta;
    Vector power;

    Eigen::Index dim() const { return theta.size(); }

    static KernelParams power_exponential(const Vector& theta,
                                          double power = 1.95);
    static KernelParams gaussian(const Vector& theta);

    /// Throws DataError/DimensionError if the invariants do not hold.
    void validate() const;
};

/// corr(x1, x2) = prod_k exp{-theta_k |x1_k - x2_k|^power_k}, in (0, 1].
/// Validates dimensions and finiteness.
double correlation(const Vector& x1, const Vector& x2,
                   const KernelParams& params);

/// Vector of correlations of x0 against every row of X.
Vector correlation_vector(const Matrix& X, const Vector& x0,
                          const KernelParams& params);

/// Diagonal inflation schedule used when the Cholesky factorization of a
/// correlation matrix breaks down. Starting jitter is initial_scale times
/// the mean diagonal entry; it is grown by `growth` until factorization
/// succeeds or the scale exceeds max_scale.
struct JitterPolicy {
    double initial_scale = 1e-8;
    double growth = 10.0;
    double max_scale = 1e-2;
};

/// Dense symmetric correlation matrix over a set of design points, stored
/// together with the jitter that was required and the Cholesky factor of
/// (R + jitter * I). Immutable after construction.
class CorrelationMatrix {
public:
    /// Builds R from the rows of X and factorizes it, escalating jitter
    /// per `policy`. Throws NumericError when factorization still fails at
    /// the maximum jitter.
    static CorrelationMatrix build(const Matrix& X, const KernelParams& params,
                                   const JitterPolicy& policy = {});

    /// Factorizes with a caller-fixed jitter (no escalation); used when
    /// reconstructing a serialized model so that predictions match the
    /// original fit bit for bit.
    static CorrelationMatrix build_with_fixed_jitter(const Matrix& X,
                                                     const KernelParams& params,
                                                     double jitter);

    const Matrix& matrix() const { return r_; }
    double jitter() const { return jitter_; }
    Eigen::Index size() const { return r_.rows(); }

    /// Lower-triangular factor L with L L^T = R + jitter I.
    Matrix cholesky_factor() const { return llt_.matrixL(); }

    /// Solves (R + jitter I) x = b for a vector or matrix right-hand side.
    template <typename Derived>
    auto solve(const Eigen::MatrixBase<Derived>& b) const {
        return llt_.solve(b.derived()).eval();
    }

    /// log det(R + jitter I).
    double log_det() const;

    /// Dense inverse of (R + jitter I); used by the sequential-update
    /// machinery in the local module.
    Matrix inverse() const;

    /// Empty until assigned from build(); needed so models can be
    /// default-constructed and filled in.
    CorrelationMatrix() = default;

private:
    Matrix r_;
    double jitter_ = 0.0;
    Eigen::LLT<Matrix> llt_;
};

/// Affine map taking each input dimension to [0, 1] using training
/// min/max. Dimensions with zero width are passed through unscaled.
struct InputScaling {
    Vector lo;
    Vector width;

    static InputScaling fit(const Matrix& X);
    static InputScaling identity(Eigen::Index q);

    Vector apply(const Vector& x) const;
    Matrix apply(const Matrix& X) const;
};

} // namespace dgp

#endif // DGP_KERNEL_HPP
