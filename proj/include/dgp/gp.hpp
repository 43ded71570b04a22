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

#ifndef DGP_GP_HPP
#define DGP_GP_HPP

#include <cstdint>
#include <optional>

#include "dgp/kernel.hpp"

namespace dgp {

/// Options for fitting a scalar-output GP emulator.
struct GPFitConfig {
    double power = 1.95;   // exponent for every input dimension
    int nstarts = 5;       // multi-start count for the profile-likelihood search
    std::uint64_t seed = 0;
    double log_theta_lo = -6.907755278982137; // log(1e-3)
    double log_theta_hi = 6.907755278982137;  // log(1e3)
    std::optional<Vector> fixed_theta;        // skip optimization when set
    JitterPolicy jitter;
    bool rescale_inputs = true;
};

/// Fitted scalar GP: y_i = mu + z(x_i), z ~ GP(0, sigma_z^2 R).
/// mu_hat and sigma2_hat are the closed-form likelihood maximizers at the
/// fitted correlation parameters. Immutable; safe to share across threads.
struct ScalarGPModel {
    Matrix design;         // raw N x q inputs
    Matrix scaled_design;  // inputs mapped through `scaling`
    Vector responses;      // N
    KernelParams params;
    double mu_hat = 0.0;
    double sigma2_hat = 0.0;
    CorrelationMatrix corr;
    Vector corr_solve_residual; // (R + jI)^{-1} (Y - 1 mu_hat)
    Vector corr_solve_ones;     // (R + jI)^{-1} 1
    double ones_corr_ones = 0.0;
    InputScaling scaling;
    double log_likelihood = 0.0; // profile log-likelihood at the optimum
    bool degenerate = false;     // responses had (numerically) zero variance

    Eigen::Index n() const { return responses.size(); }
    Eigen::Index q() const { return design.cols(); }
};

struct ScalarPrediction {
    double mean = 0.0;
    /// Conditional variance sigma_z^2 (1 - r' R^{-1} r).
    double variance_conditional = 0.0;
    /// Adds the mean-estimation term sigma_z^2 (1 - 1'R^{-1}r)^2 / (1'R^{-1}1);
    /// always >= variance_conditional.
    double variance_mle = 0.0;
};

/// Fits by profile likelihood: mu and sigma_z^2 are concentrated out in
/// closed form and theta is found by multi-start local search over
/// log-theta. Requires N >= 2, distinct rows, finite responses. Constant
/// responses yield a degenerate (flat) model rather than an error.
ScalarGPModel fit_scalar_gp(const Matrix& X, const Vector& Y,
                            const GPFitConfig& config = {});

ScalarPrediction predict_scalar(const ScalarGPModel& model, const Vector& x0);

/// Profile log-likelihood of log-theta for the given training data
/// (constant terms dropped). Exposed for tests.
double profile_log_likelihood(const Matrix& X_scaled, const Vector& Y,
                              const Vector& theta, double power,
                              const JitterPolicy& jitter = {});

} // namespace dgp

#endif // DGP_GP_HPP
