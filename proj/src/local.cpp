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

#include "dgp/local.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "dgp/parallel.hpp"

namespace dgp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<int> sorted_copy(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
}

// State of the greedy search between hyperparameter refits. All linear
// algebra follows `work` order: the canonical order of the stage fit,
// then appended picks.
struct GreedyStage {
    SvdGPModel model;
    std::vector<int> work;
    std::vector<Matrix> kinv;  // per coefficient, (K_i + jitter I)^{-1}
    std::vector<Vector> coeff; // per coefficient, c_i over `work`
    std::vector<Vector> kx0;   // per coefficient, k_i(x0) over `work`
    Vector x0_scaled;
    Matrix projections; // p x N coefficients of every training column
};

GreedyStage make_stage(const Matrix& x, const Matrix& y, const Vector& x0,
                       const std::vector<int>& members,
                       const SvdGPConfig& config) {
    GreedyStage st;
    st.work = sorted_copy(members);
    const Matrix x_local = x(st.work, Eigen::all);
    const Matrix y_local = y(Eigen::all, st.work);
    st.model = fit_svdgp(x_local, y_local, config);

    const int p = st.model.basis.p();
    st.x0_scaled = st.model.scaling.apply(x0);
    st.projections = st.model.basis.project(y);
    st.kinv.reserve(p);
    st.coeff.reserve(p);
    st.kx0.reserve(p);
    for (int i = 0; i < p; ++i) {
        const auto& gp = st.model.coeff_gps[static_cast<std::size_t>(i)];
        st.kinv.push_back(gp.corr.inverse());
        st.coeff.push_back(gp.v);
        const auto params =
            KernelParams::power_exponential(gp.theta, st.model.power);
        st.kx0.push_back(correlation_vector(st.model.scaled_design,
                                            st.x0_scaled, params));
    }
    return st;
}

void record_stage(GreedyTrace* trace, const GreedyStage& st,
                  const SvdGPConfig& config) {
    if (!trace) return;
    GreedyTrace::Stage rec;
    rec.working = st.work;
    const int p = st.model.basis.p();
    rec.theta.resize(p, st.model.q());
    rec.jitter.resize(p);
    for (int i = 0; i < p; ++i) {
        const auto& gp = st.model.coeff_gps[static_cast<std::size_t>(i)];
        rec.theta.row(i) = gp.theta.transpose();
        rec.jitter[i] = gp.corr.jitter();
    }
    rec.u_star = st.model.basis.u_star;
    rec.d_star = st.model.basis.d_star;
    rec.v_star = st.model.basis.v_star;
    rec.scaling = st.model.scaling;
    rec.prior = config.coeff_prior;
    rec.power = config.power;
    trace->stages.push_back(std::move(rec));
}

// Summed coefficient predictive variance at x0 after adding candidate c,
// evaluated against the current stage state via rank-one block updates.
double criterion_with_candidate(const GreedyStage& st, const Vector& xc_scaled,
                                const std::vector<double>& cand_projection_col,
                                const std::vector<Vector>& kinv_coeff,
                                const std::vector<Vector>& kinv_kx0,
                                const std::vector<double>& kx0_quad,
                                const CoefficientPrior& prior, double power,
                                const Matrix& scaled_work) {
    const int p = st.model.basis.p();
    const double n_new = static_cast<double>(st.work.size()) + 1.0;
    double total = 0.0;
    for (int i = 0; i < p; ++i) {
        const auto& gp = st.model.coeff_gps[static_cast<std::size_t>(i)];
        const auto params = KernelParams::power_exponential(gp.theta, power);
        const Vector b = correlation_vector(scaled_work, xc_scaled, params);
        const Vector u = st.kinv[static_cast<std::size_t>(i)] * b;
        const double s = (1.0 + gp.corr.jitter()) - b.dot(u);
        if (s <= 1e-12) return kInf;

        const double kappa = correlation(xc_scaled, st.x0_scaled, params);
        const double vc = cand_projection_col[static_cast<std::size_t>(i)];

        const auto iu = static_cast<std::size_t>(i);
        const double psi_cur = st.coeff[iu].dot(kinv_coeff[iu]);
        const double delta_v = vc - b.dot(kinv_coeff[iu]);
        const double psi_new = psi_cur + delta_v * delta_v / s;

        const double delta_k = kappa - b.dot(kinv_kx0[iu]);
        const double quad_new = kx0_quad[iu] + delta_k * delta_k / s;

        total += (prior.beta + psi_new) * std::max(0.0, 1.0 - quad_new) /
                 (prior.alpha + n_new);
    }
    return total;
}

void grow_stage_with(GreedyStage& st, int chosen, const Matrix& x,
                     double power) {
    const Vector xc_scaled =
        st.model.scaling.apply(Vector(x.row(chosen).transpose()));
    const Matrix scaled_work =
        st.model.scaling.apply(Matrix(x(st.work, Eigen::all)));
    const int p = st.model.basis.p();
    for (int i = 0; i < p; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        const auto& gp = st.model.coeff_gps[iu];
        const auto params = KernelParams::power_exponential(gp.theta, power);
        const Vector b = correlation_vector(scaled_work, xc_scaled, params);
        const Vector u = st.kinv[iu] * b;
        const double s = (1.0 + gp.corr.jitter()) - b.dot(u);

        const auto n = st.kinv[iu].rows();
        Matrix grown(n + 1, n + 1);
        grown.topLeftCorner(n, n) = st.kinv[iu] + (u * u.transpose()) / s;
        grown.topRightCorner(n, 1) = -u / s;
        grown.bottomLeftCorner(1, n) = (-u / s).transpose();
        grown(n, n) = 1.0 / s;
        st.kinv[iu] = std::move(grown);

        Vector coeff(n + 1);
        coeff.head(n) = st.coeff[iu];
        coeff[n] = st.projections(i, chosen);
        st.coeff[iu] = std::move(coeff);

        Vector kx0(n + 1);
        kx0.head(n) = st.kx0[iu];
        kx0[n] = correlation(xc_scaled, st.x0_scaled, params);
        st.kx0[iu] = std::move(kx0);
    }
    st.work.push_back(chosen);
}

} // namespace

std::vector<int> knn_neighborhood(const Matrix& x, const Vector& x0, int nn) {
    const auto n = static_cast<int>(x.rows());
    if (nn < 1 || nn > n) {
        std::ostringstream msg;
        msg << "knn_neighborhood: requested " << nn << " neighbours from " << n
            << " training points";
        throw DataError(msg.str());
    }
    if (x0.size() != x.cols())
        throw DimensionError("knn_neighborhood: query dimension mismatch");
    if (!x0.allFinite())
        throw DataError("knn_neighborhood: non-finite query");

    const InputScaling scaling = InputScaling::fit(x);
    const Matrix xs = scaling.apply(x);
    const Vector x0s = scaling.apply(x0);

    std::vector<std::pair<double, int>> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        order[static_cast<std::size_t>(i)] = {
            (xs.row(i).transpose() - x0s).squaredNorm(), i};
    std::sort(order.begin(), order.end());

    std::vector<int> idx(static_cast<std::size_t>(nn));
    for (int i = 0; i < nn; ++i)
        idx[static_cast<std::size_t>(i)] = order[static_cast<std::size_t>(i)].second;
    return idx;
}

std::vector<int> greedy_neighborhood(const Matrix& x, const Matrix& y,
                                     const Vector& x0,
                                     const NeighborhoodConfig& neighborhood,
                                     const SvdGPConfig& config,
                                     GreedyTrace* trace) {
    const auto n = static_cast<int>(x.rows());
    if (neighborhood.n0 < 1 || neighborhood.n0 > neighborhood.nn ||
        neighborhood.nn > n)
        throw DataError("greedy_neighborhood: need 1 <= n0 <= nn <= N");

    std::vector<int> result = knn_neighborhood(x, x0, neighborhood.n0);
    if (neighborhood.nn == neighborhood.n0) return result;

    // Full-design scaled distances, used for the candidate pool and for
    // breaking criterion ties.
    const InputScaling full_scaling = InputScaling::fit(x);
    const Matrix xs_full = full_scaling.apply(x);
    const Vector x0s_full = full_scaling.apply(x0);
    std::vector<double> dist(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        dist[static_cast<std::size_t>(i)] =
            (xs_full.row(i).transpose() - x0s_full).squaredNorm();

    std::vector<bool> member(static_cast<std::size_t>(n), false);
    for (int i : result) member[static_cast<std::size_t>(i)] = true;

    std::vector<int> remaining;
    remaining.reserve(static_cast<std::size_t>(n - neighborhood.n0));
    for (int i = 0; i < n; ++i)
        if (!member[static_cast<std::size_t>(i)]) remaining.push_back(i);
    if (neighborhood.candidate_pool &&
        static_cast<int>(remaining.size()) > *neighborhood.candidate_pool) {
        std::sort(remaining.begin(), remaining.end(), [&](int a, int b) {
            return std::make_pair(dist[static_cast<std::size_t>(a)], a) <
                   std::make_pair(dist[static_cast<std::size_t>(b)], b);
        });
        remaining.resize(static_cast<std::size_t>(*neighborhood.candidate_pool));
        std::sort(remaining.begin(), remaining.end());
    }

    GreedyStage stage = make_stage(x, y, x0, result, config);
    record_stage(trace, stage, config);
    int steps_since_refit = 0;

    const int additions = neighborhood.nn - neighborhood.n0;
    for (int step = 0; step < additions; ++step) {
        const int p = stage.model.basis.p();
        const Matrix scaled_work =
            stage.model.scaling.apply(Matrix(x(stage.work, Eigen::all)));

        // Step-level caches: K^{-1} c, K^{-1} k(x0), k(x0)' K^{-1} k(x0).
        std::vector<Vector> kinv_coeff(static_cast<std::size_t>(p));
        std::vector<Vector> kinv_kx0(static_cast<std::size_t>(p));
        std::vector<double> kx0_quad(static_cast<std::size_t>(p));
        for (int i = 0; i < p; ++i) {
            const auto iu = static_cast<std::size_t>(i);
            kinv_coeff[iu] = stage.kinv[iu] * stage.coeff[iu];
            kinv_kx0[iu] = stage.kinv[iu] * stage.kx0[iu];
            kx0_quad[iu] = stage.kx0[iu].dot(kinv_kx0[iu]);
        }

        int best = -1;
        double best_total = kInf;
        std::vector<double> totals;
        if (trace) totals.reserve(remaining.size());
        for (const int c : remaining) {
            const Vector xc_scaled =
                stage.model.scaling.apply(Vector(x.row(c).transpose()));
            std::vector<double> proj_col(static_cast<std::size_t>(p));
            for (int i = 0; i < p; ++i)
                proj_col[static_cast<std::size_t>(i)] = stage.projections(i, c);
            const double total = criterion_with_candidate(
                stage, xc_scaled, proj_col, kinv_coeff, kinv_kx0,
                kx0_quad, config.coeff_prior, config.power, scaled_work);
            if (trace) totals.push_back(total);

            if (best < 0) {
                best = c;
                best_total = total;
                continue;
            }
            const auto cd = dist[static_cast<std::size_t>(c)];
            const auto bd = dist[static_cast<std::size_t>(best)];
            if (total < best_total ||
                (total == best_total && (cd < bd || (cd == bd && c < best)))) {
                best = c;
                best_total = total;
            }
        }
        if (best < 0 || !std::isfinite(best_total))
            throw NumericError(
                "greedy_neighborhood: no viable candidate (all candidates "
                "degenerate with the current neighbourhood)");

        if (trace) {
            GreedyTrace::Step rec;
            rec.stage = static_cast<int>(trace->stages.size()) - 1;
            rec.working = stage.work;
            rec.candidates = remaining;
            rec.totals = std::move(totals);
            rec.chosen = best;
            trace->steps.push_back(std::move(rec));
        }

        grow_stage_with(stage, best, x, config.power);
        result.push_back(best);
        member[static_cast<std::size_t>(best)] = true;
        remaining.erase(std::find(remaining.begin(), remaining.end(), best));
        ++steps_since_refit;

        if (neighborhood.refit_every > 0 &&
            steps_since_refit >= neighborhood.refit_every &&
            step + 1 < additions) {
            stage = make_stage(x, y, x0, result, config);
            record_stage(trace, stage, config);
            steps_since_refit = 0;
        }
    }
    return result;
}

std::vector<LocalFit> predict_local(const Matrix& x, const Matrix& y,
                                    const Matrix& queries,
                                    const NeighborhoodConfig& neighborhood,
                                    LocalMode mode, const SvdGPConfig& config) {
    if (y.cols() != x.rows())
        throw DimensionError("predict_local: response columns must equal design rows");
    if (queries.cols() != x.cols())
        throw DimensionError("predict_local: query dimension mismatch");

    SvdGPConfig inner = config;
    inner.threads = 1; // queries are the unit of parallelism

    const auto m = static_cast<int>(queries.rows());
    std::vector<LocalFit> results(static_cast<std::size_t>(m));
    parallel_for(m, config.threads, [&](int j) {
        LocalFit& fit = results[static_cast<std::size_t>(j)];
        fit.query = queries.row(j).transpose();
        try {
            if (!fit.query.allFinite())
                throw DataError("predict_local: non-finite query");
            fit.neighborhood =
                mode == LocalMode::knn
                    ? knn_neighborhood(x, fit.query, neighborhood.nn)
                    : greedy_neighborhood(x, y, fit.query, neighborhood, inner);

            // Canonical column order: the fit must not depend on the
            // order in which the points were selected.
            const std::vector<int> canon = sorted_copy(fit.neighborhood);
            fit.model = fit_svdgp(x(canon, Eigen::all), y(Eigen::all, canon),
                                  inner);
            fit.prediction = predict_svdgp(*fit.model, fit.query);
        } catch (const Error& e) {
            fit.model.reset();
            fit.prediction.reset();
            fit.error = e.what();
        }
    });
    return results;
}

} // namespace dgp
