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

#ifndef DGP_OPTIM_HPP
#define DGP_OPTIM_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "dgp/kernel.hpp"

namespace dgp {

using Objective = std::function<double(const Vector&)>;

struct OptimBox {
    Vector lo;
    Vector hi;
};

struct MultistartConfig {
    int nstarts = 5;
    std::uint64_t seed = 0;
    int max_iterations = 0; // 0 = choose from dimension
    double ftol = 1e-12;
};

struct StartResult {
    Vector x;
    double value;
};

/// Derivative-free box-constrained maximization: Nelder-Mead from each
/// start point, followed by a coordinate pattern-search polish so the
/// result is a local maximum to fine resolution. The first start is the
/// box center; the rest are drawn uniformly from the box with the given
/// seed. Objectives may return -inf for infeasible points.
std::vector<StartResult> maximize_multistart(const Objective& f,
                                             const OptimBox& box,
                                             const MultistartConfig& config);

/// Single local maximization (exposed for tests).
StartResult maximize_local(const Objective& f, const Vector& x0,
                           const OptimBox& box, int max_iterations,
                           double ftol);

} // namespace dgp

#endif // DGP_OPTIM_HPP
