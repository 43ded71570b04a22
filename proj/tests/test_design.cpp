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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dgp/design.hpp"

using dgp::Domain;
using dgp::Matrix;
using dgp::TimeGrid;
using dgp::Vector;

TEST_CASE("latin hypercube puts one point in every stratum of every column") {
    for (const int n : {1, 5, 20}) {
        const Matrix x = dgp::latin_hypercube(n, 3, 4, 99);
        REQUIRE(x.rows() == n);
        REQUIRE(x.cols() == 3);
        for (int k = 0; k < 3; ++k) {
            std::vector<double> col(x.col(k).begin(), x.col(k).end());
            std::sort(col.begin(), col.end());
            for (int j = 0; j < n; ++j) {
                CHECK(col[static_cast<std::size_t>(j)] >= static_cast<double>(j) / n);
                CHECK(col[static_cast<std::size_t>(j)] < static_cast<double>(j + 1) / n);
            }
        }
    }
}

TEST_CASE("single-point design lies strictly inside the unit cube") {
    const Matrix x = dgp::latin_hypercube(1, 4, 1, 3);
    for (int k = 0; k < 4; ++k) {
        CHECK(x(0, k) > 0.0);
        CHECK(x(0, k) < 1.0);
    }
}

TEST_CASE("identical seeds reproduce the design exactly") {
    const Matrix a = dgp::latin_hypercube(20, 3, 10, 12345);
    const Matrix b = dgp::latin_hypercube(20, 3, 10, 12345);
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
    const Matrix c = dgp::latin_hypercube(20, 3, 10, 12346);
    CHECK((a - c).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("maximin selection never does worse than a prefix of its own draws") {
    // Draws come from one seeded stream, so best-of-m2 extends the draw
    // sequence of best-of-m1 and its minimum distance cannot be smaller.
    const double d1 = dgp::min_pairwise_distance(dgp::latin_hypercube(15, 2, 1, 7));
    const double d10 = dgp::min_pairwise_distance(dgp::latin_hypercube(15, 2, 10, 7));
    const double d50 = dgp::min_pairwise_distance(dgp::latin_hypercube(15, 2, 50, 7));
    CHECK(d10 >= d1);
    CHECK(d50 >= d10);
}

TEST_CASE("domain scaling and validation") {
    Vector lo(2), hi(2);
    lo << 4.0, 1.0;
    hi << 10.0, 7.0;
    const Domain dom(lo, hi);
    Matrix unit(2, 2);
    unit << 0.0, 1.0, 0.5, 0.25;
    const Matrix scaled = dgp::scale_to_domain(unit, dom);
    CHECK(scaled(0, 0) == doctest::Approx(4.0));
    CHECK(scaled(0, 1) == doctest::Approx(7.0));
    CHECK(scaled(1, 0) == doctest::Approx(7.0));
    CHECK(scaled(1, 1) == doctest::Approx(2.5));

    CHECK_THROWS_AS(Domain(hi, lo), dgp::DataError);
}

TEST_CASE("time grid is strictly increasing and hits both endpoints") {
    const TimeGrid grid = TimeGrid::equidistant(1.0, 2.0, 200);
    const Vector t = grid.values();
    CHECK(t.size() == 200);
    CHECK(t[0] == doctest::Approx(1.0));
    CHECK(t[199] == doctest::Approx(2.0));
    for (int i = 1; i < 200; ++i) CHECK(t[i] > t[i - 1]);

    CHECK_THROWS_AS(TimeGrid::equidistant(1.0, 2.0, 0), dgp::DataError);
    CHECK(TimeGrid::equidistant(3.0, 3.0, 1).values()[0] == doctest::Approx(3.0));
}

TEST_CASE("one-dimensional test response values") {
    // ln(1.0) + sin(4.5 pi) = 0 + 1
    CHECK(dgp::simulator_example1(0.9) == doctest::Approx(1.0).epsilon(1e-12));
    // ln(0.2) + sin(0.5 pi)
    CHECK(dgp::simulator_example1(0.1) ==
          doctest::Approx(-0.6094379124341003).epsilon(1e-12));
    // ln(0.4) + sin(1.5 pi)
    CHECK(dgp::simulator_example1(0.3) ==
          doctest::Approx(-1.916290731874155).epsilon(1e-12));
    CHECK_THROWS_AS(dgp::simulator_example1(-0.1), dgp::DataError);
}

TEST_CASE("time-series test response values") {
    const TimeGrid grid = TimeGrid::equidistant(1.0, 2.0, 3); // t = 1, 1.5, 2
    Vector x(3);
    x << 4.0, 4.0, 1.0;
    const Vector y = dgp::simulator_forrester(x, grid);
    // (4 - 2)^2 sin(4 - 1) = 4 sin 3
    CHECK(y[0] == doctest::Approx(4.0 * std::sin(3.0)).epsilon(1e-12));
    CHECK(y[0] == doctest::Approx(0.5644800322394689).epsilon(1e-12));

    // First factor vanishes when x1 t = 2.
    Vector x_zero(3);
    x_zero << 2.0, 5.0, 3.0;
    const TimeGrid unit_t = TimeGrid::equidistant(1.0, 1.0, 1);
    CHECK(dgp::simulator_forrester(x_zero, unit_t)[0] == doctest::Approx(0.0));

    // Sine factor vanishes when x2 t = x3.
    Vector x_sine(3);
    x_sine << 7.0, 3.0, 3.0;
    CHECK(dgp::simulator_forrester(x_sine, unit_t)[0] == doctest::Approx(0.0));
}

TEST_CASE("unit-cube parameterization matches the affine map plus shift") {
    const TimeGrid unit = TimeGrid::equidistant(0.0, 1.0, 5);
    Vector xu(3);
    xu << 0.25, 0.5, 0.75;
    const Vector via_unit = dgp::simulator_forrester_unit(xu, unit, 1.0);

    Vector mapped(3);
    mapped << 6.0 * 0.25 + 4.0, 16.0 * 0.5 + 4.0, 6.0 * 0.75 + 1.0;
    const TimeGrid shifted = TimeGrid::equidistant(1.0, 2.0, 5);
    const Vector direct = dgp::simulator_forrester(mapped, shifted);
    CHECK((via_unit - direct).cwiseAbs().maxCoeff() < 1e-14);

    // Frozen spot value: x=(0,0,0) -> pars (4,4,1), t=1 -> 4 sin 3.
    const Vector y0 = dgp::simulator_forrester_unit(
        Vector::Zero(3), TimeGrid::equidistant(0.0, 1.0, 2), 1.0);
    CHECK(y0[0] == doctest::Approx(4.0 * std::sin(3.0)).epsilon(1e-12));
}
