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

#ifndef DGP_DESIGN_HPP
#define DGP_DESIGN_HPP

#include <cstdint>

#include "dgp/kernel.hpp"

namespace dgp {

/// Rectangular input domain: per-dimension (lower, upper) bounds.
struct Domain {
    Vector lower;
    Vector upper;

    Domain() = default;
    Domain(Vector lo, Vector hi);

    Eigen::Index dim() const { return lower.size(); }
};

/// L equidistant points on [lo, hi] (endpoints included).
struct TimeGrid {
    double lo = 0.0;
    double hi = 1.0;
    int points = 1;

    static TimeGrid equidistant(double lo, double hi, int points);
    Vector values() const;
};

/// Latin hypercube design on [0,1]^q with one point per stratum and
/// column. Draws `maximin_iters` candidate designs from the seeded stream
/// and returns the one with the largest minimum pairwise distance;
/// maximin_iters == 1 is a plain random LHS.
Matrix latin_hypercube(int n, int q, int maximin_iters, std::uint64_t seed);

/// Affine map of a unit-cube design onto a domain.
Matrix scale_to_domain(const Matrix& unit_design, const Domain& domain);

/// Smallest pairwise Euclidean distance between rows (infinity for n < 2).
double min_pairwise_distance(const Matrix& X);

/// One-dimensional test response f(x) = ln(x + 0.1) + sin(5 pi x).
double simulator_example1(double x);

/// Time-series test response f(x, t) = (x1 t - 2)^2 sin(x2 t - x3),
/// evaluated over the grid. Natural domain [4,10] x [4,20] x [1,7] with
/// t in [1,2].
Vector simulator_forrester(const Vector& x, const TimeGrid& grid);
Domain forrester_domain();

/// Unit-cube parameterization: inputs in [0,1]^3 are mapped through
/// (6 x1 + 4, 16 x2 + 4, 6 x3 + 1) and the grid is shifted by `shift`
/// before evaluation.
Vector simulator_forrester_unit(const Vector& x_unit, const TimeGrid& grid,
                                double shift = 1.0);

} // namespace dgp

#endif // DGP_DESIGN_HPP
