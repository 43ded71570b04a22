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

#include "dgp/gp.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "dgp/optim.hpp"

namespace dgp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kVarianceFloor = 1e-300;

struct ProfileEval {
    CorrelationMatrix corr;
    double mu = 0.0;
    double sigma2 = 0.0;
    double loglik = kNegInf;
};

// Closed-form mu and sigma_z^2 given theta, plus the concentrated
// log-likelihood -(n/2) log sigma2 - (1/2) log|R|.
ProfileEval evaluate_profile(const Matrix& x_scaled, const Vector& y,
                             const KernelParams& params,
                             const JitterPolicy& jitter) {
    ProfileEval ev;
    ev.corr = CorrelationMatrix::build(x_scaled, params, jitter);
    const auto n = y.size();
    const Vector ones = Vector::Ones(n);
    const Vector rinv_ones = ev.corr.solve(ones);
    const double denom = ones.dot(rinv_ones);
    ev.mu = ones.dot(ev.corr.solve(y)) / denom;
    const Vector resid = y - Vector::Constant(n, ev.mu);
    ev.sigma2 = resid.dot(ev.corr.solve(resid)) / static_cast<double>(n);
    if (ev.sigma2 < 0.0) ev.sigma2 = 0.0;
    ev.loglik = -0.5 * static_cast<double>(n) *
                    std::log(std::max(ev.sigma2, kVarianceFloor)) -
                0.5 * ev.corr.log_det();
    return ev;
}

void check_inputs(const Matrix& x, const Vector& y) {
    if (x.rows() != y.size())
        throw DimensionError("fit_scalar_gp: design rows and response length differ");
    if (x.rows() < 2)
        throw DataError("fit_scalar_gp: need at least 2 training runs");
    if (!x.allFinite() || !y.allFinite())
        throw DataError("fit_scalar_gp: non-finite training data");
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = i + 1; j < x.rows(); ++j)
            if ((x.row(i) - x.row(j)).cwiseAbs().maxCoeff() == 0.0) {
                std::ostringstream msg;
                msg << "fit_scalar_gp: duplicate design rows " << i << " and "
                    << j;
                throw DataError(msg.str());
            }
}

} // namespace

double profile_log_likelihood(const Matrix& x_scaled, const Vector& y,
                              const Vector& theta, double power,
                              const JitterPolicy& jitter) {
    const auto params = KernelParams::power_exponential(theta, power);
    return evaluate_profile(x_scaled, y, params, jitter).loglik;
}

ScalarGPModel fit_scalar_gp(const Matrix& x, const Vector& y,
                            const GPFitConfig& config) {
    check_inputs(x, y);
    const Eigen::Index q = x.cols();

    ScalarGPModel model;
    model.design = x;
    model.responses = y;
    model.scaling = config.rescale_inputs ? InputScaling::fit(x)
                                          : InputScaling::identity(q);
    model.scaled_design = model.scaling.apply(x);

    const double y_span = y.maxCoeff() - y.minCoeff();
    model.degenerate =
        y_span <= 1e-12 * std::max(1.0, y.cwiseAbs().maxCoeff());

    Vector theta;
    if (config.fixed_theta) {
        if (config.fixed_theta->size() != q)
            throw DimensionError("fit_scalar_gp: fixed_theta has wrong dimension");
        theta = *config.fixed_theta;
    } else if (model.degenerate) {
        theta = Vector::Ones(q);
    } else {
        const Objective objective = [&](const Vector& log_theta) {
            const Vector th = log_theta.array().exp();
            try {
                return profile_log_likelihood(model.scaled_design, y, th,
                                              config.power, config.jitter);
            } catch (const NumericError&) {
                return kNegInf;
            }
        };
        OptimBox box{Vector::Constant(q, config.log_theta_lo),
                     Vector::Constant(q, config.log_theta_hi)};
        MultistartConfig ms;
        ms.nstarts = config.nstarts;
        ms.seed = config.seed;
        const auto starts = maximize_multistart(objective, box, ms);

        // Best likelihood wins; near-ties go to the smaller theta norm
        // (the smoother surrogate).
        int best = -1;
        for (int s = 0; s < static_cast<int>(starts.size()); ++s) {
            if (!std::isfinite(starts[s].value)) continue;
            if (best < 0) {
                best = s;
                continue;
            }
            const double tie =
                1e-9 * (1.0 + std::abs(starts[best].value));
            if (starts[s].value > starts[best].value + tie) {
                best = s;
            } else if (std::abs(starts[s].value - starts[best].value) <= tie &&
                       starts[s].x.array().exp().matrix().norm() <
                           starts[best].x.array().exp().matrix().norm()) {
                best = s;
            }
        }
        if (best < 0)
            throw NumericError("fit_scalar_gp: optimization failed on all starts");
        theta = starts[best].x.array().exp();
    }

    model.params = KernelParams::power_exponential(theta, config.power);
    auto ev = evaluate_profile(model.scaled_design, y, model.params,
                               config.jitter);
    model.mu_hat = ev.mu;
    model.sigma2_hat = ev.sigma2;
    model.log_likelihood = ev.loglik;
    model.corr = std::move(ev.corr);

    const auto n = y.size();
    const Vector ones = Vector::Ones(n);
    model.corr_solve_residual =
        model.corr.solve(y - Vector::Constant(n, model.mu_hat));
    model.corr_solve_ones = model.corr.solve(ones);
    model.ones_corr_ones = ones.dot(model.corr_solve_ones);
    return model;
}

ScalarPrediction predict_scalar(const ScalarGPModel& model, const Vector& x0) {
    if (x0.size() != model.q())
        throw DimensionError("predict_scalar: query dimension mismatch");
    if (!x0.allFinite())
        throw DataError("predict_scalar: non-finite query");

    const Vector x0s = model.scaling.apply(x0);
    const Vector r =
        correlation_vector(model.scaled_design, x0s, model.params);

    ScalarPrediction out;
    out.mean = model.mu_hat + r.dot(model.corr_solve_residual);

    const Vector rinv_r = model.corr.solve(r);
    out.variance_conditional =
        model.sigma2_hat * std::max(0.0, 1.0 - r.dot(rinv_r));

    const double one_rinv_r = model.corr_solve_ones.dot(r);
    const double extra = model.sigma2_hat * (1.0 - one_rinv_r) *
                         (1.0 - one_rinv_r) / model.ones_corr_ones;
    out.variance_mle = out.variance_conditional + std::max(0.0, extra);
    return out;
}

} // namespace dgp
