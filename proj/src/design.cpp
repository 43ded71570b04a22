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

#include "dgp/design.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "dgp/rng.hpp"

namespace dgp {

Domain::Domain(Vector lo, Vector hi) : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() != upper.size())
        throw DimensionError("Domain: bound vectors differ in length");
    for (Eigen::Index k = 0; k < lower.size(); ++k)
        if (!(lower[k] < upper[k]))
            throw DataError("Domain: lower bound must be below upper bound");
}

TimeGrid TimeGrid::equidistant(double lo, double hi, int points) {
    if (points < 1) throw DataError("TimeGrid: need at least one point");
    if (points > 1 && !(lo < hi))
        throw DataError("TimeGrid: grid must be strictly increasing");
    return TimeGrid{lo, hi, points};
}

Vector TimeGrid::values() const {
    Vector t(points);
    if (points == 1) {
        t[0] = lo;
        return t;
    }
    const double step = (hi - lo) / static_cast<double>(points - 1);
    for (int i = 0; i < points; ++i) t[i] = lo + step * i;
    return t;
}

namespace {

Matrix single_lhs_draw(int n, int q, Rng& rng) {
    Matrix design(n, q);
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int k = 0; k < q; ++k) {
        std::iota(perm.begin(), perm.end(), 0);
        rng.shuffle(perm.begin(), perm.end());
        for (int i = 0; i < n; ++i)
            design(i, k) =
                (static_cast<double>(perm[static_cast<std::size_t>(i)]) +
                 rng.uniform()) /
                static_cast<double>(n);
    }
    return design;
}

} // namespace

double min_pairwise_distance(const Matrix& x) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = i + 1; j < x.rows(); ++j)
            best = std::min(best, (x.row(i) - x.row(j)).norm());
    return best;
}

Matrix latin_hypercube(int n, int q, int maximin_iters, std::uint64_t seed) {
    if (n < 1 || q < 1)
        throw DataError("latin_hypercube: n and q must be positive");
    if (maximin_iters < 1) maximin_iters = 1;

    Rng rng(mix_seed(seed, 0x1457c0deULL));
    Matrix best = single_lhs_draw(n, q, rng);
    double best_dist = min_pairwise_distance(best);
    for (int it = 1; it < maximin_iters; ++it) {
        Matrix cand = single_lhs_draw(n, q, rng);
        const double d = min_pairwise_distance(cand);
        if (d > best_dist) {
            best = std::move(cand);
            best_dist = d;
        }
    }
    return best;
}

Matrix scale_to_domain(const Matrix& unit_design, const Domain& domain) {
    if (unit_design.cols() != domain.dim())
        throw DimensionError("scale_to_domain: dimension mismatch");
    Matrix out = unit_design;
    for (Eigen::Index k = 0; k < domain.dim(); ++k)
        out.col(k) =
            domain.lower[k] +
            (domain.upper[k] - domain.lower[k]) * unit_design.col(k).array();
    return out;
}

double simulator_example1(double x) {
    if (x <= -0.1)
        throw DataError("simulator_example1: input must exceed -0.1");
    return std::log(x + 0.1) + std::sin(5.0 * 3.14159265358979323846 * x);
}

Domain forrester_domain() {
    Vector lo(3), hi(3);
    lo << 4.0, 4.0, 1.0;
    hi << 10.0, 20.0, 7.0;
    return Domain(lo, hi);
}

Vector simulator_forrester(const Vector& x, const TimeGrid& grid) {
    if (x.size() != 3)
        throw DimensionError("simulator_forrester: expected 3 inputs");
    const Vector t = grid.values();
    Vector y(t.size());
    for (Eigen::Index i = 0; i < t.size(); ++i) {
        const double a = x[0] * t[i] - 2.0;
        y[i] = a * a * std::sin(x[1] * t[i] - x[2]);
    }
    return y;
}

Vector simulator_forrester_unit(const Vector& x_unit, const TimeGrid& grid,
                                double shift) {
    if (x_unit.size() != 3)
        throw DimensionError("simulator_forrester_unit: expected 3 inputs");
    Vector x(3);
    x << 6.0 * x_unit[0] + 4.0, 16.0 * x_unit[1] + 4.0, 6.0 * x_unit[2] + 1.0;
    const TimeGrid shifted{grid.lo + shift, grid.hi + shift, grid.points};
    return simulator_forrester(x, shifted);
}

} // namespace dgp
