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

#include <cmath>
#include <fstream>
#include <string>

#include "dgp/design.hpp"
#include "dgp/gp.hpp"
#include "dgp/io.hpp"
#include "dgp/rng.hpp"
#include "dgp/serialize.hpp"
#include "dgp/svdgp.hpp"
#include "synthetic.hpp"

using dgp::Dataset;
using dgp::Matrix;
using dgp::Vector;
using testutil::TempDir;

namespace {

Matrix random_matrix(dgp::Rng& rng, int rows, int cols) {
    Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = rng.normal() * 1e3;
    return m;
}

} // namespace

TEST_CASE("dataset round-trips bit-identically in both orientations") {
    TempDir dir("io");
    dgp::Rng rng(1);
    Dataset data;
    data.design = random_matrix(rng, 2, 3);
    data.responses = random_matrix(rng, 3, 2); // 3 steps, 2 runs
    data.column_names = {"a", "b", "c"};
    data.time_labels = {"1", "2", "3"};

    SUBCASE("column-per-run layout") {
        dgp::save_dataset(data, dir.file("design.csv"), dir.file("resp.csv"));
        const Dataset loaded =
            dgp::load_dataset(dir.file("design.csv"), dir.file("resp.csv"));
        CHECK((loaded.design - data.design).cwiseAbs().maxCoeff() == 0.0);
        CHECK((loaded.responses - data.responses).cwiseAbs().maxCoeff() == 0.0);
        CHECK(loaded.column_names == data.column_names);
    }

    SUBCASE("row-per-run layout with the transpose flag") {
        dgp::LoadOptions opts;
        opts.transpose_response = true;
        dgp::save_dataset(data, dir.file("design.csv"), dir.file("resp_t.csv"),
                          opts);
        const Dataset loaded = dgp::load_dataset(
            dir.file("design.csv"), dir.file("resp_t.csv"), opts);
        CHECK((loaded.design - data.design).cwiseAbs().maxCoeff() == 0.0);
        CHECK((loaded.responses - data.responses).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("dimension mismatches name both files and the offending counts") {
    TempDir dir("io");
    dgp::Rng rng(2);
    dgp::write_csv(dir.file("design.csv"), random_matrix(rng, 4, 2));
    dgp::write_csv(dir.file("resp.csv"), random_matrix(rng, 3, 5));
    CHECK_THROWS_WITH_AS(
        dgp::load_dataset(dir.file("design.csv"), dir.file("resp.csv")),
        doctest::Contains("4 runs"), dgp::DataError);
    CHECK_THROWS_WITH_AS(
        dgp::load_dataset(dir.file("design.csv"), dir.file("resp.csv")),
        doctest::Contains("5 response columns"), dgp::DataError);
}

TEST_CASE("non-numeric cells report their position") {
    TempDir dir("io");
    {
        std::ofstream out(dir.file("bad.csv"));
        out << "1.0,2.0\n3.0,oops\n";
    }
    CHECK_THROWS_WITH_AS(dgp::read_csv(dir.file("bad.csv")),
                         doctest::Contains("row 2, column 2"), dgp::DataError);
    CHECK_THROWS_AS(dgp::read_csv(dir.file("missing.csv")), dgp::DataError);
}

TEST_CASE("a header row is detected and preserved") {
    TempDir dir("io");
    {
        std::ofstream out(dir.file("with_header.csv"));
        out << "alpha,beta\n1.5,2.5\n3.5,4.5\n";
    }
    const auto table = dgp::read_csv(dir.file("with_header.csv"));
    REQUIRE(table.header.size() == 2);
    CHECK(table.header[0] == "alpha");
    CHECK(table.values.rows() == 2);
    CHECK(table.values(1, 1) == 4.5);
}

TEST_CASE("vaccine-style files parse with the documented schema") {
    TempDir dir("io");
    dgp::Rng rng(3);
    const Dataset data = testutil::vaccine_style_dataset(146, rng);
    dgp::save_dataset(data, dir.file("design.csv"), dir.file("resp.csv"));

    const Dataset loaded =
        dgp::load_dataset(dir.file("design.csv"), dir.file("resp.csv"));
    CHECK(loaded.n() == 146);
    CHECK(loaded.q() == 7);
    CHECK(loaded.series_length() == 38);
    CHECK(loaded.column_names[0] == "dosage_number");
    CHECK(loaded.column_names[6] == "hdi");
    CHECK((loaded.design - data.design).cwiseAbs().maxCoeff() == 0.0);
    CHECK((loaded.responses - data.responses).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("report CSV shape and ordering") {
    TempDir dir("io");
    dgp::PredictionReport report;
    report.meta.kind = "svdgp";

    SUBCASE("single query with a single step emits one data row") {
        report.time_labels = {"1"};
        dgp::QueryRecord rec;
        rec.query_id = 0;
        rec.input = Vector::Constant(2, 0.5);
        rec.mean = Vector::Constant(1, 3.0);
        rec.variance = Vector::Constant(1, 0.25);
        report.queries.push_back(rec);
        dgp::write_report_csv(report, dir.file("r.csv"));

        std::ifstream in(dir.file("r.csv"));
        std::string line;
        int rows = 0;
        std::getline(in, line);
        CHECK(line == "query_id,t,mean,variance,lo,hi");
        while (std::getline(in, line))
            if (!line.empty()) ++rows;
        CHECK(rows == 1);
    }

    SUBCASE("38-step query emits 38 rows in ascending time order") {
        for (int t = 0; t < 38; ++t)
            report.time_labels.push_back(std::to_string(1980 + t));
        dgp::QueryRecord rec;
        rec.query_id = 0;
        rec.input = Vector::Constant(1, 0.0);
        rec.mean = Vector::LinSpaced(38, 0.0, 37.0);
        rec.variance = Vector::Constant(38, 1.0);
        report.queries.push_back(rec);
        dgp::write_report_csv(report, dir.file("r38.csv"));

        std::ifstream in(dir.file("r38.csv"));
        std::string line;
        std::getline(in, line); // header
        int expected_year = 1980;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto first_comma = line.find(',');
            const auto second_comma = line.find(',', first_comma + 1);
            const std::string label =
                line.substr(first_comma + 1, second_comma - first_comma - 1);
            CHECK(label == std::to_string(expected_year));
            ++expected_year;
        }
        CHECK(expected_year == 2018);
    }
}

TEST_CASE("report values round-trip bit-exactly through CSV") {
    TempDir dir("io");
    dgp::Rng rng(4);
    dgp::PredictionReport report;
    report.meta.kind = "svdgp";
    report.interval_multiplier = 2.0;
    report.time_labels = {"1", "2", "3", "4"};
    for (int qid = 0; qid < 3; ++qid) {
        dgp::QueryRecord rec;
        rec.query_id = qid;
        rec.input = Vector::Constant(1, rng.normal());
        rec.mean.resize(4);
        rec.variance.resize(4);
        for (int t = 0; t < 4; ++t) {
            rec.mean[t] = rng.normal() * std::pow(10.0, rng.uniform_int(7) - 3);
            rec.variance[t] = std::abs(rng.normal());
        }
        report.queries.push_back(rec);
    }
    dgp::write_report_csv(report, dir.file("report.csv"));

    const auto table = dgp::read_csv(dir.file("report.csv"));
    REQUIRE(table.values.rows() == 12);
    // Query order in equals query order out, values recovered exactly.
    for (int qid = 0; qid < 3; ++qid) {
        for (int t = 0; t < 4; ++t) {
            const auto row = static_cast<Eigen::Index>(qid * 4 + t);
            CHECK(table.values(row, 0) == qid);
            CHECK(table.values(row, 2) == report.queries[qid].mean[t]);
            CHECK(table.values(row, 3) == report.queries[qid].variance[t]);
        }
    }

    // JSON writer accepts the same report.
    dgp::write_report_json(report, dir.file("report.json"));
    std::ifstream in(dir.file("report.json"));
    CHECK(in.good());
}

TEST_CASE("interval bounds are symmetric about the mean") {
    TempDir dir("io");
    dgp::PredictionReport report;
    report.meta.kind = "scalar_gp";
    report.interval_multiplier = 2.0;
    report.time_labels = {"1"};
    dgp::QueryRecord rec;
    rec.query_id = 0;
    rec.input = Vector::Constant(1, 0.0);
    rec.mean = Vector::Constant(1, 1.25);
    rec.variance = Vector::Constant(1, 4.0);
    report.queries.push_back(rec);
    dgp::write_report_csv(report, dir.file("sym.csv"));

    const auto table = dgp::read_csv(dir.file("sym.csv"));
    const double mean = table.values(0, 2);
    const double lo = table.values(0, 4);
    const double hi = table.values(0, 5);
    CHECK(mean - lo == doctest::Approx(hi - mean).epsilon(1e-15));
    CHECK(hi - lo == doctest::Approx(2.0 * 2.0 * 2.0).epsilon(1e-15));
}

TEST_CASE("scalar model files reload to a bit-identical predictor") {
    TempDir dir("io");
    const Matrix x = dgp::latin_hypercube(7, 1, 50, 9);
    Vector y(7);
    for (int i = 0; i < 7; ++i) y[i] = dgp::simulator_example1(x(i, 0));

    dgp::GPFitConfig cfg;
    cfg.seed = 9;
    const auto model = dgp::fit_scalar_gp(x, y, cfg);
    dgp::save_model(model, dir.file("gp.json"));
    CHECK(dgp::model_kind(dir.file("gp.json")) == "scalar_gp");
    const auto loaded = dgp::load_scalar_model(dir.file("gp.json"));

    dgp::Rng rng(10);
    for (int rep = 0; rep < 25; ++rep) {
        const Vector x0 = Vector::Constant(1, rng.uniform(-0.2, 1.2));
        const auto a = dgp::predict_scalar(model, x0);
        const auto b = dgp::predict_scalar(loaded, x0);
        CHECK(a.mean == b.mean);
        CHECK(a.variance_conditional == b.variance_conditional);
        CHECK(a.variance_mle == b.variance_mle);
    }
}

TEST_CASE("svdgp model files reload to a bit-identical predictor") {
    TempDir dir("io");
    const Matrix x = dgp::latin_hypercube(10, 2, 30, 11);
    Matrix y(20, 10);
    const auto grid = dgp::TimeGrid::equidistant(0.0, 1.0, 20);
    for (int j = 0; j < 10; ++j) {
        Vector xt(3);
        xt << x(j, 0), x(j, 1), 0.3;
        y.col(j) = dgp::simulator_forrester_unit(xt, grid);
    }

    dgp::SvdGPConfig cfg;
    cfg.seed = 11;
    const auto model = dgp::fit_svdgp(x, y, cfg);
    dgp::save_model(model, dir.file("svdgp.json"));
    CHECK(dgp::model_kind(dir.file("svdgp.json")) == "svdgp");
    const auto loaded = dgp::load_svdgp_model(dir.file("svdgp.json"));
    REQUIRE(loaded.basis.p() == model.basis.p());

    dgp::Rng rng(12);
    for (int rep = 0; rep < 10; ++rep) {
        Vector x0(2);
        x0 << rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0);
        const auto a = dgp::predict_svdgp(model, x0);
        const auto b = dgp::predict_svdgp(loaded, x0);
        CHECK((a.mean - b.mean).cwiseAbs().maxCoeff() == 0.0);
        CHECK((a.pointwise_variance - b.pointwise_variance)
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
    }

    CHECK_THROWS_AS(dgp::load_scalar_model(dir.file("svdgp.json")),
                    dgp::DataError);
    CHECK_THROWS_AS(dgp::load_svdgp_model(dir.file("nope.json")),
                    dgp::DataError);
}
