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

#include "dgp/svdgp.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <sstream>

#include "dgp/optim.hpp"
#include "dgp/parallel.hpp"
#include "dgp/rng.hpp"

namespace dgp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kQuadFloor = 1e-300;

double log_gamma_pdf(double z, double shape, double rate) {
    return shape * std::log(rate) - std::lgamma(shape) +
           (shape - 1.0) * std::log(z) - rate * z;
}

} // namespace

Matrix SvdBasis::project(const Matrix& y_columns) const {
    if (y_columns.rows() != u_star.rows())
        throw DimensionError("SvdBasis::project: series length mismatch");
    return d_star.cwiseInverse().asDiagonal() * (u_star.transpose() * y_columns);
}

SvdBasis decompose_responses(const Matrix& y, double gamma) {
    if (y.rows() < 1 || y.cols() < 1)
        throw DataError("decompose_responses: empty response matrix");
    if (!y.allFinite())
        throw DataError("decompose_responses: non-finite responses");
    if (!(gamma > 0.0) || gamma > 1.0)
        throw DataError("decompose_responses: gamma must lie in (0, 1]");

    Eigen::BDCSVD<Matrix> svd(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector d = svd.singularValues();
    const double total = d.sum();
    if (total <= 0.0)
        throw DataError("decompose_responses: all-zero response matrix has no basis");

    const Eigen::Index k = d.size();
    int p = static_cast<int>(k);
    double cumulative = 0.0;
    for (Eigen::Index m = 0; m < k; ++m) {
        cumulative += d[m];
        if (cumulative / total > gamma) {
            p = static_cast<int>(m) + 1;
            break;
        }
    }
    // Never keep numerically zero directions.
    while (p > 1 && d[p - 1] <= d[0] * 1e-14) --p;

    SvdBasis basis;
    basis.gamma = gamma;
    basis.all_singular_values = d;
    basis.d_star = d.head(p);
    basis.u_star = svd.matrixU().leftCols(p);
    Matrix v = svd.matrixV().leftCols(p); // N x p
    // Deterministic sign: largest-magnitude entry of each u_i positive.
    for (int i = 0; i < p; ++i) {
        Eigen::Index arg = 0;
        basis.u_star.col(i).cwiseAbs().maxCoeff(&arg);
        if (basis.u_star(arg, i) < 0.0) {
            basis.u_star.col(i) = -basis.u_star.col(i);
            v.col(i) = -v.col(i);
        }
    }
    basis.v_star = v.transpose();
    basis.b = basis.u_star * basis.d_star.asDiagonal();
    return basis;
}

double coefficient_log_posterior(const Matrix& x_scaled, const Vector& v,
                                 const Vector& theta,
                                 const CoefficientPrior& prior, double power,
                                 const JitterPolicy& jitter) {
    const auto params = KernelParams::power_exponential(theta, power);
    const auto corr = CorrelationMatrix::build(x_scaled, params, jitter);
    const double psi = v.dot(corr.solve(v));
    const auto n = static_cast<double>(v.size());

    double value = -0.5 * corr.log_det() -
                   0.5 * (prior.alpha + n) *
                       std::log(std::max((prior.beta + psi) / 2.0, kQuadFloor));
    for (Eigen::Index j = 0; j < theta.size(); ++j)
        value += log_gamma_pdf(1.0 / theta[j], prior.theta_inv_shape,
                               prior.theta_inv_rate);
    return value;
}

CoefficientGP fit_coefficient_gp(const Matrix& x_scaled, const Vector& v,
                                 int index, const SvdGPConfig& config,
                                 std::uint64_t seed) {
    if (x_scaled.rows() != v.size())
        throw DimensionError("fit_coefficient_gp: design rows and coefficient length differ");
    const Eigen::Index q = x_scaled.cols();

    const Objective objective = [&](const Vector& log_theta) {
        const Vector theta = log_theta.array().exp();
        try {
            return coefficient_log_posterior(x_scaled, v, theta,
                                             config.coeff_prior, config.power,
                                             config.jitter);
        } catch (const NumericError&) {
            return kNegInf;
        }
    };

    OptimBox box{Vector::Constant(q, config.log_theta_lo),
                 Vector::Constant(q, config.log_theta_hi)};
    MultistartConfig ms;
    ms.nstarts = config.nstarts;
    ms.seed = seed;
    const auto starts = maximize_multistart(objective, box, ms);

    int best = -1;
    for (int s = 0; s < static_cast<int>(starts.size()); ++s) {
        if (!std::isfinite(starts[s].value)) continue;
        if (best < 0) {
            best = s;
            continue;
        }
        const double tie = 1e-9 * (1.0 + std::abs(starts[best].value));
        if (starts[s].value > starts[best].value + tie) {
            best = s;
        } else if (std::abs(starts[s].value - starts[best].value) <= tie &&
                   starts[s].x.array().exp().matrix().norm() <
                       starts[best].x.array().exp().matrix().norm()) {
            best = s;
        }
    }
    if (best < 0) {
        std::ostringstream msg;
        msg << "fit_coefficient_gp: optimization failed on all starts for coefficient "
            << index;
        throw NumericError(msg.str());
    }

    CoefficientGP gp;
    gp.index = index;
    gp.theta = starts[best].x.array().exp();
    gp.prior = config.coeff_prior;
    gp.v = v;
    gp.corr = CorrelationMatrix::build(
        x_scaled, KernelParams::power_exponential(gp.theta, config.power),
        config.jitter);
    gp.corr_solve_v = gp.corr.solve(v);
    gp.psi = std::max(0.0, v.dot(gp.corr_solve_v));
    gp.log_posterior = starts[best].value;
    return gp;
}

NoiseModel estimate_noise(const Matrix& y, const SvdBasis& basis,
                          const NoisePrior& prior) {
    if (y.rows() != basis.u_star.rows() || y.cols() != basis.v_star.cols())
        throw DimensionError("estimate_noise: response/basis dimension mismatch");
    const Matrix resid = y - basis.reconstruction();
    const double rr = resid.squaredNorm();
    const double nl = static_cast<double>(y.rows()) * static_cast<double>(y.cols());
    NoiseModel noise;
    noise.prior = prior;
    noise.sigma2_hat = (rr + prior.beta) / (nl + prior.alpha + 2.0);
    return noise;
}

SvdGPModel fit_svdgp(const Matrix& x, const Matrix& y,
                     const SvdGPConfig& config) {
    if (y.cols() != x.rows())
        throw DimensionError(
            "fit_svdgp: response columns must equal design rows (response is "
            "stored one column per run)");
    if (x.rows() < 2)
        throw DataError("fit_svdgp: need at least 2 training runs");
    if (!x.allFinite())
        throw DataError("fit_svdgp: non-finite design");

    SvdGPModel model;
    model.design = x;
    model.scaling = InputScaling::fit(x);
    model.scaled_design = model.scaling.apply(x);
    model.power = config.power;
    model.seed = config.seed;
    model.basis = decompose_responses(y, config.gamma);

    const int p = model.basis.p();
    model.coeff_gps.resize(static_cast<std::size_t>(p));
    parallel_for(p, config.threads, [&](int i) {
        model.coeff_gps[static_cast<std::size_t>(i)] = fit_coefficient_gp(
            model.scaled_design, model.basis.v_star.row(i).transpose(), i,
            config, mix_seed(config.seed, static_cast<std::uint64_t>(i)));
    });

    model.noise = estimate_noise(y, model.basis, config.noise_prior);
    return model;
}

DynamicPrediction predict_svdgp(const SvdGPModel& model, const Vector& x0) {
    if (x0.size() != model.q())
        throw DimensionError("predict_svdgp: query dimension mismatch");
    if (!x0.allFinite())
        throw DataError("predict_svdgp: non-finite query");

    const Vector x0s = model.scaling.apply(x0);
    const int p = model.basis.p();
    const auto n = static_cast<double>(model.n());

    DynamicPrediction out;
    out.coeff_mean.resize(p);
    out.coeff_variance.resize(p);
    for (int i = 0; i < p; ++i) {
        const auto& gp = model.coeff_gps[static_cast<std::size_t>(i)];
        const auto params = KernelParams::power_exponential(gp.theta, model.power);
        const Vector k = correlation_vector(model.scaled_design, x0s, params);
        out.coeff_mean[i] = k.dot(gp.corr_solve_v);
        const double quad = std::max(0.0, 1.0 - k.dot(gp.corr.solve(k)));
        out.coeff_variance[i] =
            (gp.prior.beta + gp.psi) * quad / (gp.prior.alpha + n);
    }

    out.mean = model.basis.b * out.coeff_mean;
    const Matrix& b = model.basis.b;
    out.pointwise_variance =
        (b.array().square().matrix() * out.coeff_variance).array() +
        model.noise.sigma2_hat;
    return out;
}

} // namespace dgp
