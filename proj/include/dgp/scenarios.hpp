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

#ifndef DGP_SCENARIOS_HPP
#define DGP_SCENARIOS_HPP

#include <cstdint>
#include <map>
#include <string>

#include "dgp/kernel.hpp"

namespace dgp {

/// Named end-to-end benchmark runs. Scenarios are fixed recipes (not
/// free-form scripts) so that results bind to exact invocations; given
/// the same seed they produce byte-identical numeric outputs at any
/// thread count (timing fields aside).
struct ScenarioConfig {
    std::uint64_t seed = 1;
    int threads = 1;
    int nstarts = 5;
    double gamma = 0.95;
    double interval_multiplier = 2.0;
    std::string out_dir = ".";
};

struct ScenarioResult {
    std::string name;
    std::map<std::string, double> metrics;
    std::vector<std::string> files_written; // paths, relative to out_dir
};

/// 7-point design on the 1-d log/sine test response; fits the scalar GP
/// with exponents 1.95 and 2 and writes both prediction curves over a
/// 100-point grid.
ScenarioResult run_example1(const ScenarioConfig& config);

/// 20-run dynamic emulation of the 3-input time-series test function on a
/// 200-point grid, 50 holdout inputs.
ScenarioResult run_example3(const ScenarioConfig& config);

/// 500-run variant fitted with the localized models (lasvdGP with n0=20,
/// nn=30, and knnsvdGP with nn=30) on 30 holdout inputs.
ScenarioResult run_example4(const ScenarioConfig& config);

/// Dispatch by scenario name ("example1" | "example3" | "example4").
ScenarioResult run_scenario(const std::string& name,
                            const ScenarioConfig& config);

/// Per-series root-mean-square error normalized by the range of `truth`.
double nrmse(const Vector& truth, const Vector& predicted);

/// Fraction of entries with |truth - mean| <= multiplier * sqrt(variance).
double interval_coverage(const Vector& truth, const Vector& mean,
                         const Vector& variance, double multiplier);

} // namespace dgp

#endif // DGP_SCENARIOS_HPP
