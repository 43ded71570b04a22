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

#ifndef DGP_LOCAL_HPP
#define DGP_LOCAL_HPP

#include <optional>
#include <string>
#include <vector>

#include "dgp/svdgp.hpp"

namespace dgp {

/// Neighborhood sizes for the localized models: n0 points found by
/// k-nearest-neighbour seeding, grown greedily to nn points.
struct NeighborhoodConfig {
    int nn = 20;
    int n0 = 10;
    /// Optional cap: only this many nearest remaining points are scored as
    /// greedy candidates (all remaining points when unset).
    std::optional<int> candidate_pool;
    /// Refit hyperparameters after this many greedy additions; 0 keeps the
    /// seed fit's parameters until the final model fit.
    int refit_every = 0;
};

enum class LocalMode { knn, greedy };

/// Indices of the nn training points nearest to x0 in scaled-input
/// Euclidean distance, closest first; ties broken by lower index.
std::vector<int> knn_neighborhood(const Matrix& x, const Vector& x0, int nn);

/// Diagnostic record of the greedy search; filled when a trace pointer is
/// passed so the step decisions can be replayed and verified externally.
struct GreedyTrace {
    struct Stage {
        std::vector<int> working; // canonical (ascending) order of the fit
        Matrix theta;             // p x q correlation parameters
        Vector jitter;            // p
        Matrix u_star;            // basis of the stage fit
        Vector d_star;
        Matrix v_star;            // p x |working| coefficients, same order
        InputScaling scaling;     // input scaling of the stage fit
        CoefficientPrior prior;
        double power = 2.0;
    };
    struct Step {
        int stage = 0;               // index into `stages`
        std::vector<int> working;    // state order before the addition
        std::vector<int> candidates; // training indices scored
        std::vector<double> totals;  // criterion value per candidate
        int chosen = -1;             // training index added
    };
    std::vector<Stage> stages;
    std::vector<Step> steps;
};

/// Greedy neighborhood construction: a k-NN seed of n0 points, then
/// nn - n0 sequential additions, each choosing the candidate that
/// minimizes the summed coefficient predictive variance at x0 (evaluated
/// with the current stage's basis and hyperparameters through rank-one
/// inverse updates). Ties go to the candidate closer to x0, then to the
/// lower index. Returned indices are the seed in distance order followed
/// by the additions in pick order.
std::vector<int> greedy_neighborhood(const Matrix& x, const Matrix& y,
                                     const Vector& x0,
                                     const NeighborhoodConfig& neighborhood,
                                     const SvdGPConfig& config,
                                     GreedyTrace* trace = nullptr);

/// One localized fit+prediction. `error` is empty on success; failed
/// queries keep their slot so a batch never aborts as a whole.
struct LocalFit {
    Vector query;
    std::vector<int> neighborhood;
    std::optional<SvdGPModel> model;
    std::optional<DynamicPrediction> prediction;
    std::string error;

    bool ok() const { return error.empty(); }
};

/// Fits one independent local svdGP per query row (parallel over queries
/// up to config.threads; output order matches input order regardless of
/// the thread count). The local model is always refit from scratch on the
/// final neighborhood, with columns taken in canonical index order so the
/// result does not depend on the path that selected them.
std::vector<LocalFit> predict_local(const Matrix& x, const Matrix& y,
                                    const Matrix& queries,
                                    const NeighborhoodConfig& neighborhood,
                                    LocalMode mode, const SvdGPConfig& config);

} // namespace dgp

#endif // DGP_LOCAL_HPP
