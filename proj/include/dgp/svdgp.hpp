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

#ifndef DGP_SVDGP_HPP
#define DGP_SVDGP_HPP

#include <cstdint>
#include <vector>

#include "dgp/kernel.hpp"

namespace dgp {

/// Truncated SVD of an L x N response matrix Y = U D V^T. The basis keeps
/// the smallest p whose cumulative singular-value fraction strictly
/// exceeds gamma (always at least 1, never counting numerically zero
/// singular values). Column signs are fixed so each u_i has a positive
/// largest-magnitude entry, making the decomposition deterministic.
struct SvdBasis {
    Matrix u_star;                // L x p, columns u_1..u_p
    Vector d_star;                // p leading singular values
    Matrix v_star;                // p x N, rows v_1^T..v_p^T
    Matrix b;                     // L x p, b_i = d_i u_i
    Vector all_singular_values;   // full spectrum, k = min(L, N) values
    double gamma = 0.95;

    int p() const { return static_cast<int>(d_star.size()); }
    Eigen::Index k() const { return all_singular_values.size(); }

    /// Rank-p reconstruction B V^* (L x N).
    Matrix reconstruction() const { return b * v_star; }

    /// Coefficients of arbitrary response columns in this basis:
    /// c_i(y) = u_i^T y / d_i. Returns p x (columns of Y).
    Matrix project(const Matrix& y_columns) const;
};

SvdBasis decompose_responses(const Matrix& y, double gamma);

/// Inverse-Gamma prior (alpha/2, beta/2) on each coefficient-process
/// variance plus a Gamma prior on each 1/theta_ij.
struct CoefficientPrior {
    double alpha = 0.0;
    double beta = 0.0;
    double theta_inv_shape = 1.5;
    double theta_inv_rate = 0.1;
};

/// Inverse-Gamma prior (alpha/2, beta/2) on the residual noise variance.
struct NoisePrior {
    double alpha = 0.0;
    double beta = 0.0;
};

struct SvdGPConfig {
    double gamma = 0.95;
    int nstarts = 5;
    std::uint64_t seed = 0;
    int threads = 1;
    double power = 2.0; // anisotropic Gaussian correlation for coefficients
    CoefficientPrior coeff_prior;
    NoisePrior noise_prior;
    JitterPolicy jitter;
    double log_theta_lo = -6.907755278982137;
    double log_theta_hi = 6.907755278982137;
};

/// GP on one SVD coefficient: c_i ~ GP(0, sigma_i^2 K_i) with MAP-fitted
/// correlation parameters theta_i.
struct CoefficientGP {
    int index = 0;
    Vector theta;               // q
    CorrelationMatrix corr;     // K_i on the scaled design
    Vector v;                   // N coefficient observations
    Vector corr_solve_v;        // K_i^{-1} v
    double psi = 0.0;           // v^T K_i^{-1} v
    CoefficientPrior prior;
    double log_posterior = 0.0; // objective value at theta
};

struct NoiseModel {
    double sigma2_hat = 0.0;
    NoisePrior prior;
};

struct SvdGPModel {
    SvdBasis basis;
    std::vector<CoefficientGP> coeff_gps;
    NoiseModel noise;
    Matrix design;        // raw N x q
    Matrix scaled_design; // N x q
    InputScaling scaling;
    double power = 2.0;
    std::uint64_t seed = 0;

    Eigen::Index n() const { return design.rows(); }
    Eigen::Index q() const { return design.cols(); }
    Eigen::Index series_length() const { return basis.u_star.rows(); }
};

struct DynamicPrediction {
    Vector mean;               // L
    Vector pointwise_variance; // L, diag(B Lambda B^T) + sigma2_hat
    Vector coeff_mean;         // p
    Vector coeff_variance;     // p, diagonal of Lambda
};

/// MAP objective for one coefficient GP, in log form:
///   -1/2 log|K_i| - (alpha_i + N)/2 log((beta_i + psi_i)/2)
///   + sum_j log Gamma(1/theta_ij; shape, rate).
double coefficient_log_posterior(const Matrix& x_scaled, const Vector& v,
                                 const Vector& theta,
                                 const CoefficientPrior& prior, double power,
                                 const JitterPolicy& jitter = {});

CoefficientGP fit_coefficient_gp(const Matrix& x_scaled, const Vector& v,
                                 int index, const SvdGPConfig& config,
                                 std::uint64_t seed);

/// Residual noise variance: sigma2 = (r^T r + beta) / (N L + alpha + 2)
/// with r the reconstruction residual of the truncated basis.
NoiseModel estimate_noise(const Matrix& y, const SvdBasis& basis,
                          const NoisePrior& prior);

/// Fits the full dynamic emulator: SVD truncation at gamma, p independent
/// coefficient GPs (parallel over coefficients up to config.threads), and
/// the noise estimate.
SvdGPModel fit_svdgp(const Matrix& x, const Matrix& y,
                     const SvdGPConfig& config = {});

DynamicPrediction predict_svdgp(const SvdGPModel& model, const Vector& x0);

} // namespace dgp

#endif // DGP_SVDGP_HPP
