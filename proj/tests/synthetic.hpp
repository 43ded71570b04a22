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

// Shared helpers for the test binaries: scratch directories and synthetic
// dataset generators.

#ifndef DGP_TESTS_SYNTHETIC_HPP
#define DGP_TESTS_SYNTHETIC_HPP

#include <cmath>
#include <filesystem>
#include <string>

#include <unistd.h>

#include "dgp/io.hpp"
#include "dgp/rng.hpp"

namespace testutil {

struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("dgp_" + tag + "_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& name) const {
        return (path / name).string();
    }

private:
    static int& counter() {
        static int value = 0;
        return value;
    }
};

// Synthetic vaccination-coverage data: seven named predictors and 38
// annual coverage ratios per run. Responses are smooth logistic-style
// adoption curves whose onset, rate and asymptote depend on the inputs,
// plus mild noise, clamped to [0, 1].
inline dgp::Dataset vaccine_style_dataset(int n, dgp::Rng& rng) {
    dgp::Dataset data;
    data.column_names = {"dosage_number",     "dosage_time",  "efficacy",
                         "incidence_per_lac", "communicable", "years_active",
                         "hdi"};
    const int l = 38;
    data.design.resize(n, 7);
    data.responses.resize(l, n);
    for (int i = 0; i < n; ++i) {
        data.design(i, 0) = 1 + rng.uniform_int(5);
        data.design(i, 1) = rng.uniform(0.0, 12.0);
        data.design(i, 2) = rng.uniform(40.0, 99.0);
        data.design(i, 3) = rng.uniform(1.0, 200.0);
        data.design(i, 4) = rng.uniform_int(2);
        data.design(i, 5) = rng.uniform(0.0, 38.0);
        data.design(i, 6) = rng.uniform(0.35, 0.95);

        const double onset = 6.0 + 12.0 * (1.0 - data.design(i, 6)) +
                             0.2 * data.design(i, 1);
        const double rate =
            0.12 + 0.3 * data.design(i, 6) + 0.001 * data.design(i, 3);
        const double cap = 0.45 + 0.5 * data.design(i, 6) +
                           0.002 * data.design(i, 2) -
                           0.02 * data.design(i, 0);
        for (int t = 0; t < l; ++t) {
            const double z = rate * (t - onset);
            double v = cap / (1.0 + std::exp(-z)) + 0.01 * rng.normal();
            data.responses(t, i) = std::min(1.0, std::max(0.0, v));
        }
    }
    for (int t = 0; t < l; ++t)
        data.time_labels.push_back(std::to_string(1980 + t));
    return data;
}

} // namespace testutil

#endif // DGP_TESTS_SYNTHETIC_HPP
