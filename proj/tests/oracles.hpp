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

// Brute-force reference computations used by the tests. Everything here is
// deliberately written from the defining formulas with dense inverses and
// stays independent of the library's Cholesky/rank-one-update code paths.

#ifndef DGP_TESTS_ORACLES_HPP
#define DGP_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <utility>
#include <vector>

#include "dgp/local.hpp"

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Power-exponential correlation, written independently of the library.
inline double corr(const VectorXd& a, const VectorXd& b, const VectorXd& theta,
                   const VectorXd& power) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < theta.size(); ++k)
        s += theta[k] * std::pow(std::abs(a[k] - b[k]), power[k]);
    return std::exp(-s);
}

inline MatrixXd corr_matrix(const MatrixXd& pts, const VectorXd& theta,
                            const VectorXd& power, double jitter) {
    const auto n = pts.rows();
    MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = i == j ? 1.0 + jitter
                             : corr(pts.row(i).transpose(),
                                    pts.row(j).transpose(), theta, power);
    return m;
}

// Conditions the (n+1)-dimensional joint normal of (y0, Y) directly:
// mean_and_variance of y0 | Y with covariance sigma2 * [[1, r'],[r, R+jI]].
struct ConditionalMoments {
    double mean;
    double variance;
};

inline ConditionalMoments mvn_conditional(const MatrixXd& x_scaled,
                                          const VectorXd& y,
                                          const VectorXd& x0_scaled,
                                          const VectorXd& theta,
                                          const VectorXd& power, double mu,
                                          double sigma2, double jitter) {
    const auto n = x_scaled.rows();
    MatrixXd joint(n + 1, n + 1);
    joint(0, 0) = sigma2;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double c = sigma2 * corr(x_scaled.row(i).transpose(), x0_scaled,
                                       theta, power);
        joint(0, i + 1) = c;
        joint(i + 1, 0) = c;
    }
    joint.bottomRightCorner(n, n) =
        sigma2 * corr_matrix(x_scaled, theta, power, jitter);

    const MatrixXd sigma11_inv =
        joint.bottomRightCorner(n, n).fullPivLu().inverse();
    const VectorXd sigma01 = joint.row(0).tail(n).transpose();
    ConditionalMoments out{};
    out.mean = mu + sigma01.dot(sigma11_inv * (y - VectorXd::Constant(n, mu)));
    out.variance = joint(0, 0) - sigma01.dot(sigma11_inv * sigma01);
    return out;
}

// Log of the MAP objective for one coefficient GP, from the defining
// product form: |K|^{-1/2} ((beta+psi)/2)^{-(alpha+N)/2} * prior(1/theta).
inline double coefficient_objective(const MatrixXd& x_scaled, const VectorXd& v,
                                    const VectorXd& theta, double power,
                                    double alpha, double beta, double shape,
                                    double rate, double jitter) {
    const VectorXd powers = VectorXd::Constant(theta.size(), power);
    const MatrixXd k = corr_matrix(x_scaled, theta, powers, jitter);
    const MatrixXd kinv = k.fullPivLu().inverse();
    const double psi = v.dot(kinv * v);
    const auto n = static_cast<double>(v.size());

    double value = -0.5 * std::log(k.fullPivLu().determinant()) -
                   0.5 * (alpha + n) * std::log((beta + psi) / 2.0);
    for (Eigen::Index j = 0; j < theta.size(); ++j) {
        const double z = 1.0 / theta[j];
        value += shape * std::log(rate) - std::lgamma(shape) +
                 (shape - 1.0) * std::log(z) - rate * z;
    }
    return value;
}

// Singular values through the eigendecomposition of the Gram matrix; an
// independent route to the spectrum (up to numerical noise).
inline VectorXd singular_values_via_gram(const MatrixXd& y) {
    const bool wide = y.cols() < y.rows();
    const MatrixXd gram =
        wide ? MatrixXd(y.transpose() * y) : MatrixXd(y * y.transpose());
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(gram);
    VectorXd values = eig.eigenvalues().reverse(); // descending
    for (Eigen::Index i = 0; i < values.size(); ++i)
        values[i] = std::sqrt(std::max(0.0, values[i]));
    return values;
}

inline int truncation_p(const VectorXd& singular_values, double gamma) {
    const double total = singular_values.sum();
    double cumulative = 0.0;
    for (Eigen::Index m = 0; m < singular_values.size(); ++m) {
        cumulative += singular_values[m];
        if (cumulative / total > gamma) return static_cast<int>(m) + 1;
    }
    return static_cast<int>(singular_values.size());
}

// Dense recomputation of the greedy criterion (summed coefficient
// predictive variance at x0 with the candidate included), replaying one
// recorded step of the greedy search from its stage parameters.
inline double greedy_candidate_criterion(const dgp::GreedyTrace::Stage& stage,
                                         const std::vector<int>& working,
                                         int candidate, const MatrixXd& x,
                                         const MatrixXd& y,
                                         const VectorXd& x0) {
    const int p = static_cast<int>(stage.d_star.size());
    const auto q = x.cols();

    std::vector<int> pts = working;
    pts.push_back(candidate);
    const auto m = static_cast<Eigen::Index>(pts.size());

    // Scale with the stage fit's input scaling.
    MatrixXd scaled(m, q);
    for (Eigen::Index j = 0; j < m; ++j)
        scaled.row(j) =
            (x.row(pts[static_cast<std::size_t>(j)]) - stage.scaling.lo.transpose())
                .cwiseQuotient(stage.scaling.width.transpose());
    const VectorXd x0s =
        (x0 - stage.scaling.lo).cwiseQuotient(stage.scaling.width);

    double total = 0.0;
    for (int i = 0; i < p; ++i) {
        const VectorXd theta = stage.theta.row(i).transpose();
        const VectorXd powers = VectorXd::Constant(q, stage.power);
        const MatrixXd k = corr_matrix(scaled, theta, powers, stage.jitter[i]);
        const MatrixXd kinv = k.fullPivLu().inverse();

        VectorXd coeff(m);
        for (Eigen::Index j = 0; j < m; ++j) {
            const int t = pts[static_cast<std::size_t>(j)];
            if (j < static_cast<Eigen::Index>(stage.working.size()))
                coeff[j] = stage.v_star(i, j);
            else
                coeff[j] = stage.u_star.col(i).dot(y.col(t)) / stage.d_star[i];
        }

        VectorXd kx0(m);
        for (Eigen::Index j = 0; j < m; ++j)
            kx0[j] = corr(scaled.row(j).transpose(), x0s, theta, powers);

        const double psi = coeff.dot(kinv * coeff);
        const double quad = kx0.dot(kinv * kx0);
        total += (stage.prior.beta + psi) * std::max(0.0, 1.0 - quad) /
                 (stage.prior.alpha + static_cast<double>(m));
    }
    return total;
}

// Direct evaluation of the coefficient predictive moments at x0 (mean
// k'K^{-1}v, variance (beta+psi)(1-k'K^{-1}k)/(alpha+N)) from raw data.
struct CoefficientMoments {
    double mean;
    double variance;
};

inline CoefficientMoments coefficient_prediction(
    const MatrixXd& x_scaled, const VectorXd& v, const VectorXd& x0_scaled,
    const VectorXd& theta, double power, double alpha, double beta,
    double jitter) {
    const VectorXd powers = VectorXd::Constant(theta.size(), power);
    const MatrixXd k = corr_matrix(x_scaled, theta, powers, jitter);
    const MatrixXd kinv = k.fullPivLu().inverse();
    VectorXd kx0(x_scaled.rows());
    for (Eigen::Index j = 0; j < x_scaled.rows(); ++j)
        kx0[j] = corr(x_scaled.row(j).transpose(), x0_scaled, theta, powers);

    CoefficientMoments out{};
    out.mean = kx0.dot(kinv * v);
    const double psi = v.dot(kinv * v);
    out.variance = (beta + psi) * (1.0 - kx0.dot(kinv * kx0)) /
                   (alpha + static_cast<double>(v.size()));
    return out;
}

} // namespace oracle

#endif // DGP_TESTS_ORACLES_HPP
