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

#include "dgp/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dgp/rng.hpp"

namespace dgp {

namespace {

Vector clamp_to_box(Vector x, const OptimBox& box) {
    for (Eigen::Index i = 0; i < x.size(); ++i)
        x[i] = std::min(std::max(x[i], box.lo[i]), box.hi[i]);
    return x;
}

// Nelder-Mead simplex search, maximizing. Candidate points are clamped to
// the box before evaluation.
StartResult nelder_mead_max(const Objective& f, const Vector& x0,
                            const OptimBox& box, int max_iterations,
                            double ftol) {
    const Eigen::Index q = x0.size();
    const int m = static_cast<int>(q) + 1;

    std::vector<Vector> pts(m);
    std::vector<double> val(m);
    pts[0] = clamp_to_box(x0, box);
    val[0] = f(pts[0]);
    for (int i = 1; i < m; ++i) {
        Vector x = pts[0];
        const Eigen::Index k = i - 1;
        double step = 0.1 * (box.hi[k] - box.lo[k]);
        if (x[k] + step > box.hi[k]) step = -step;
        x[k] += step;
        pts[i] = clamp_to_box(x, box);
        val[i] = f(pts[i]);
    }

    std::vector<int> order(m);
    auto sort_desc = [&]() {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return val[a] > val[b]; });
    };

    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    for (int iter = 0; iter < max_iterations; ++iter) {
        sort_desc();
        const int best = order[0], worst = order[m - 1],
                  second_worst = order[m - 2];

        const double spread = val[best] - val[worst];
        if (std::isfinite(val[best]) &&
            spread < ftol * (1.0 + std::abs(val[best])))
            break;

        Vector centroid = Vector::Zero(q);
        for (int i = 0; i < m; ++i)
            if (i != worst) centroid += pts[i];
        centroid /= static_cast<double>(m - 1);

        const Vector xr = clamp_to_box(centroid + alpha * (centroid - pts[worst]), box);
        const double fr = f(xr);

        if (fr > val[best]) {
            const Vector xe =
                clamp_to_box(centroid + gamma * (centroid - pts[worst]), box);
            const double fe = f(xe);
            if (fe > fr) {
                pts[worst] = xe;
                val[worst] = fe;
            } else {
                pts[worst] = xr;
                val[worst] = fr;
            }
            continue;
        }
        if (fr > val[second_worst]) {
            pts[worst] = xr;
            val[worst] = fr;
            continue;
        }

        Vector xc;
        if (fr > val[worst])
            xc = clamp_to_box(centroid + rho * (centroid - pts[worst]), box);
        else
            xc = clamp_to_box(centroid - rho * (centroid - pts[worst]), box);
        const double fc = f(xc);
        if (fc > std::max(fr, val[worst])) {
            pts[worst] = xc;
            val[worst] = fc;
            continue;
        }

        // Shrink toward the best vertex.
        for (int i = 0; i < m; ++i) {
            if (i == best) continue;
            pts[i] = clamp_to_box(pts[best] + sigma * (pts[i] - pts[best]), box);
            val[i] = f(pts[i]);
        }
    }

    sort_desc();
    return {pts[order[0]], val[order[0]]};
}

// Greedy coordinate pattern search (maximizing) with a halving step
// schedule from `step0` down to `step_min`.
void pattern_search(const Objective& f, Vector& x, double& fx,
                    const OptimBox& box, double step0, double step_min) {
    const Eigen::Index q = x.size();
    for (double step = step0; step >= step_min; step *= 0.5) {
        bool improved = true;
        while (improved) {
            improved = false;
            for (Eigen::Index k = 0; k < q; ++k) {
                for (const double sgn : {1.0, -1.0}) {
                    Vector y = x;
                    y[k] += sgn * step;
                    y = clamp_to_box(std::move(y), box);
                    const double fy = f(y);
                    if (fy > fx) {
                        x = std::move(y);
                        fx = fy;
                        improved = true;
                    }
                }
            }
        }
    }
}

} // namespace

StartResult maximize_local(const Objective& f, const Vector& x0,
                           const OptimBox& box, int max_iterations,
                           double ftol) {
    StartResult r = nelder_mead_max(f, x0, box, max_iterations, ftol);
    if (!std::isfinite(r.value)) return r;

    pattern_search(f, r.x, r.value, box, 0.2, 1e-5);

    // A coordinate move of 0.1 must not improve the objective; re-polish
    // from any such point until the property holds.
    for (int round = 0; round < 8; ++round) {
        bool moved = false;
        for (Eigen::Index k = 0; k < r.x.size() && !moved; ++k) {
            for (const double sgn : {1.0, -1.0}) {
                Vector y = r.x;
                y[k] += sgn * 0.1;
                y = clamp_to_box(std::move(y), box);
                const double fy = f(y);
                if (fy > r.value) {
                    r.x = std::move(y);
                    r.value = fy;
                    moved = true;
                    break;
                }
            }
        }
        if (!moved) break;
        pattern_search(f, r.x, r.value, box, 0.1, 1e-5);
    }
    return r;
}

std::vector<StartResult> maximize_multistart(const Objective& f,
                                             const OptimBox& box,
                                             const MultistartConfig& config) {
    const Eigen::Index q = box.lo.size();
    const int iters = config.max_iterations > 0
                          ? config.max_iterations
                          : 400 + 150 * static_cast<int>(q);

    std::vector<Vector> starts;
    starts.reserve(static_cast<std::size_t>(std::max(config.nstarts, 1)));
    starts.push_back(0.5 * (box.lo + box.hi));
    Rng rng(mix_seed(config.seed, 0x5f4a7c15ULL));
    for (int s = 1; s < config.nstarts; ++s) {
        Vector x(q);
        for (Eigen::Index k = 0; k < q; ++k)
            x[k] = rng.uniform(box.lo[k], box.hi[k]);
        starts.push_back(std::move(x));
    }

    std::vector<StartResult> results;
    results.reserve(starts.size());
    for (const auto& x0 : starts)
        results.push_back(maximize_local(f, x0, box, iters, config.ftol));
    return results;
}

} // namespace dgp
