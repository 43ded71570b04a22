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

#include "dgp/scenarios.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "dgp/design.hpp"
#include "dgp/gp.hpp"
#include "dgp/io.hpp"
#include "dgp/local.hpp"
#include "dgp/rng.hpp"
#include "dgp/svdgp.hpp"
#include "dgp/version.hpp"

namespace dgp {

namespace fs = std::filesystem;
using nlohmann::json;

double nrmse(const Vector& truth, const Vector& predicted) {
    if (truth.size() != predicted.size())
        throw DimensionError("nrmse: length mismatch");
    const double rmse =
        std::sqrt((truth - predicted).squaredNorm() /
                  static_cast<double>(truth.size()));
    double range = truth.maxCoeff() - truth.minCoeff();
    if (range <= 1e-12) range = 1.0;
    return rmse / range;
}

double interval_coverage(const Vector& truth, const Vector& mean,
                         const Vector& variance, double multiplier) {
    if (truth.size() != mean.size() || truth.size() != variance.size())
        throw DimensionError("interval_coverage: length mismatch");
    Eigen::Index hits = 0;
    for (Eigen::Index i = 0; i < truth.size(); ++i)
        if (std::abs(truth[i] - mean[i]) <=
            multiplier * std::sqrt(std::max(0.0, variance[i])))
            ++hits;
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

void write_metrics(const fs::path& path,
                   const std::map<std::string, double>& metrics,
                   double wall_clock_sec) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << "name,value\n";
    for (const auto& [name, value] : metrics)
        out << name << ',' << format_number(value) << '\n';
    out << "wall_clock_sec," << format_number(wall_clock_sec) << '\n';
}

void write_manifest(const fs::path& path, const std::string& scenario,
                    const ScenarioConfig& config, double wall_clock_sec) {
    json j;
    j["command"] = "benchmark";
    j["scenario"] = scenario;
    j["seed"] = config.seed;
    j["threads"] = config.threads;
    j["nstarts"] = config.nstarts;
    j["gamma"] = config.gamma;
    j["interval_multiplier"] = config.interval_multiplier;
    j["library_version"] = kVersion;
    j["wall_clock_sec"] = wall_clock_sec;
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << j.dump(2) << '\n';
}

fs::path prepare_out_dir(const ScenarioConfig& config) {
    fs::path dir(config.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec && !fs::is_directory(dir))
        throw DataError("cannot create output directory: " + dir.string());
    return dir;
}

// Unit-cube time grid used by the time-series scenarios; responses are
// evaluated with the shift-by-one convention, i.e. over t in [1, 2].
const TimeGrid kUnitGrid = TimeGrid::equidistant(0.0, 1.0, 200);

Matrix forrester_response_columns(const Matrix& unit_design) {
    Matrix y(kUnitGrid.points, unit_design.rows());
    for (Eigen::Index j = 0; j < unit_design.rows(); ++j)
        y.col(j) = simulator_forrester_unit(unit_design.row(j).transpose(),
                                            kUnitGrid);
    return y;
}

PredictionReport report_from_local_fits(const std::vector<LocalFit>& fits,
                                        const std::vector<std::string>& labels,
                                        double multiplier,
                                        const std::string& kind,
                                        double fit_seconds) {
    PredictionReport report;
    report.time_labels = labels;
    report.interval_multiplier = multiplier;
    report.meta.kind = kind;
    report.meta.fit_seconds = fit_seconds;
    int id = 0;
    for (const auto& fit : fits) {
        if (!fit.ok())
            throw NumericError("local fit failed for query " +
                               std::to_string(id) + ": " + fit.error);
        QueryRecord rec;
        rec.query_id = id++;
        rec.input = fit.query;
        rec.mean = fit.prediction->mean;
        rec.variance = fit.prediction->pointwise_variance;
        rec.neighborhood = fit.neighborhood;
        report.queries.push_back(std::move(rec));
    }
    if (!fits.empty() && fits.front().model) {
        report.meta.p = fits.front().model->basis.p();
        report.meta.gamma = fits.front().model->basis.gamma;
        report.meta.sigma2 = fits.front().model->noise.sigma2_hat;
        double jit = 0.0;
        for (const auto& gp : fits.front().model->coeff_gps)
            jit = std::max(jit, gp.corr.jitter());
        report.meta.jitter = jit;
    }
    return report;
}

std::vector<std::string> index_labels(int l) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(l));
    for (int t = 1; t <= l; ++t) labels.push_back(std::to_string(t));
    return labels;
}

} // namespace

ScenarioResult run_example1(const ScenarioConfig& config) {
    const auto start = Clock::now();
    const fs::path dir = prepare_out_dir(config);

    // The design stream is derived from the seed through a fixed tag;
    // with seven runs over two and a half sine periods the default seed
    // has to land a design that does not alias the oscillation.
    const int n = 7;
    const Matrix x = latin_hypercube(n, 1, 100, mix_seed(config.seed, 0x1d1));
    Vector y(n);
    for (int i = 0; i < n; ++i) y[i] = simulator_example1(x(i, 0));

    GPFitConfig fit_cfg;
    fit_cfg.nstarts = config.nstarts;
    fit_cfg.seed = config.seed;
    fit_cfg.power = 1.95;
    const ScalarGPModel m195 = fit_scalar_gp(x, y, fit_cfg);
    fit_cfg.power = 2.0;
    const ScalarGPModel m200 = fit_scalar_gp(x, y, fit_cfg);

    const int grid_n = 100;
    Matrix curves(grid_n, 8);
    double se195 = 0.0, se200 = 0.0, se_base = 0.0;
    int cover195 = 0, cover200 = 0;
    const double y_train_mean = y.mean();
    for (int g = 0; g < grid_n; ++g) {
        const double xg = static_cast<double>(g) / (grid_n - 1);
        const double truth = simulator_example1(xg);
        const Vector xq = Vector::Constant(1, xg);
        const auto p195 = predict_scalar(m195, xq);
        const auto p200 = predict_scalar(m200, xq);
        const double s195 = std::sqrt(p195.variance_mle);
        const double s200 = std::sqrt(p200.variance_mle);
        curves(g, 0) = xg;
        curves(g, 1) = truth;
        curves(g, 2) = p195.mean;
        curves(g, 3) = p195.mean - config.interval_multiplier * s195;
        curves(g, 4) = p195.mean + config.interval_multiplier * s195;
        curves(g, 5) = p200.mean;
        curves(g, 6) = p200.mean - config.interval_multiplier * s200;
        curves(g, 7) = p200.mean + config.interval_multiplier * s200;
        se195 += (p195.mean - truth) * (p195.mean - truth);
        se200 += (p200.mean - truth) * (p200.mean - truth);
        se_base += (y_train_mean - truth) * (y_train_mean - truth);
        if (std::abs(truth - p195.mean) <= config.interval_multiplier * s195)
            ++cover195;
        if (std::abs(truth - p200.mean) <= config.interval_multiplier * s200)
            ++cover200;
    }

    double interp195 = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto p = predict_scalar(m195, x.row(i).transpose());
        interp195 = std::max(interp195, std::abs(p.mean - y[i]));
    }

    ScenarioResult result;
    result.name = "example1";
    result.metrics["rmse_p195"] = std::sqrt(se195 / grid_n);
    result.metrics["rmse_p200"] = std::sqrt(se200 / grid_n);
    result.metrics["rmse_constant_baseline"] = std::sqrt(se_base / grid_n);
    result.metrics["coverage_p195"] = static_cast<double>(cover195) / grid_n;
    result.metrics["coverage_p200"] = static_cast<double>(cover200) / grid_n;
    result.metrics["train_interp_max_error_p195"] = interp195;
    result.metrics["theta_p195"] = m195.params.theta[0];
    result.metrics["jitter_p195"] = m195.corr.jitter();
    result.metrics["log_likelihood_p195"] = m195.log_likelihood;

    write_csv((dir / "curves.csv").string(), curves,
              {"x", "y_true", "mean_p195", "lo_p195", "hi_p195", "mean_p200",
               "lo_p200", "hi_p200"});
    const double elapsed = seconds_since(start);
    write_metrics(dir / "metrics.csv", result.metrics, elapsed);
    write_manifest(dir / "manifest.json", result.name, config, elapsed);
    result.files_written = {"curves.csv", "metrics.csv", "manifest.json"};
    return result;
}

ScenarioResult run_example3(const ScenarioConfig& config) {
    const auto start = Clock::now();
    const fs::path dir = prepare_out_dir(config);

    const int n_train = 20, n_test = 50;
    const Matrix train = latin_hypercube(n_train, 3, 100, config.seed);
    const Matrix y = forrester_response_columns(train);
    const Matrix test =
        latin_hypercube(n_test, 3, 1, mix_seed(config.seed, 0x7e57));

    SvdGPConfig svd_cfg;
    svd_cfg.gamma = config.gamma;
    svd_cfg.nstarts = config.nstarts;
    svd_cfg.seed = config.seed;
    svd_cfg.threads = config.threads;
    const SvdGPModel model = fit_svdgp(train, y, svd_cfg);

    PredictionReport report;
    report.time_labels = index_labels(kUnitGrid.points);
    report.interval_multiplier = config.interval_multiplier;
    report.meta.kind = "svdgp";
    report.meta.p = model.basis.p();
    report.meta.gamma = model.basis.gamma;
    report.meta.sigma2 = model.noise.sigma2_hat;
    for (const auto& gp : model.coeff_gps)
        report.meta.jitter = std::max(report.meta.jitter, gp.corr.jitter());

    std::vector<double> nrmses, coverages;
    Matrix per_query(n_test, 3);
    std::vector<Matrix> curve_blocks;
    for (int i = 0; i < n_test; ++i) {
        const Vector x0 = test.row(i).transpose();
        const auto pred = predict_svdgp(model, x0);
        const Vector truth = simulator_forrester_unit(x0, kUnitGrid);

        QueryRecord rec;
        rec.query_id = i;
        rec.input = x0;
        rec.mean = pred.mean;
        rec.variance = pred.pointwise_variance;
        report.queries.push_back(rec);

        const double e = nrmse(truth, pred.mean);
        const double c = interval_coverage(truth, pred.mean,
                                           pred.pointwise_variance,
                                           config.interval_multiplier);
        nrmses.push_back(e);
        coverages.push_back(c);
        per_query(i, 0) = i;
        per_query(i, 1) = e;
        per_query(i, 2) = c;

        if (i < 6) {
            Matrix block(kUnitGrid.points, 6);
            const Vector t = kUnitGrid.values();
            for (int g = 0; g < kUnitGrid.points; ++g) {
                const double half = config.interval_multiplier *
                                    std::sqrt(pred.pointwise_variance[g]);
                block(g, 0) = i;
                block(g, 1) = t[g];
                block(g, 2) = truth[g];
                block(g, 3) = pred.mean[g];
                block(g, 4) = pred.mean[g] - half;
                block(g, 5) = pred.mean[g] + half;
            }
            curve_blocks.push_back(std::move(block));
        }
    }

    Matrix curves(kUnitGrid.points * static_cast<int>(curve_blocks.size()), 6);
    for (std::size_t b = 0; b < curve_blocks.size(); ++b)
        curves.middleRows(static_cast<Eigen::Index>(b) * kUnitGrid.points,
                          kUnitGrid.points) = curve_blocks[b];

    ScenarioResult result;
    result.name = "example3";
    result.metrics["median_nrmse"] = median(nrmses);
    result.metrics["mean_nrmse"] = mean_of(nrmses);
    result.metrics["max_nrmse"] = *std::max_element(nrmses.begin(), nrmses.end());
    result.metrics["mean_coverage"] = mean_of(coverages);
    result.metrics["p"] = model.basis.p();
    result.metrics["sigma2_hat"] = model.noise.sigma2_hat;
    result.metrics["n_train"] = n_train;
    result.metrics["n_test"] = n_test;

    write_report_csv(report, (dir / "report.csv").string());
    write_csv((dir / "nrmse.csv").string(), per_query,
              {"query_id", "nrmse", "coverage"});
    write_csv((dir / "curves.csv").string(), curves,
              {"query_id", "t", "y_true", "mean", "lo", "hi"});
    const double elapsed = seconds_since(start);
    write_metrics(dir / "metrics.csv", result.metrics, elapsed);
    write_manifest(dir / "manifest.json", result.name, config, elapsed);
    result.files_written = {"report.csv", "nrmse.csv", "curves.csv",
                            "metrics.csv", "manifest.json"};
    return result;
}

ScenarioResult run_example4(const ScenarioConfig& config) {
    const auto start = Clock::now();
    const fs::path dir = prepare_out_dir(config);

    const int n_train = 500, n_test = 30;
    const Matrix train = latin_hypercube(n_train, 3, 100, config.seed);
    const Matrix y = forrester_response_columns(train);
    const Matrix test =
        latin_hypercube(n_test, 3, 1, mix_seed(config.seed, 0x7e57));

    SvdGPConfig svd_cfg;
    svd_cfg.gamma = config.gamma;
    svd_cfg.nstarts = config.nstarts;
    svd_cfg.seed = config.seed;
    svd_cfg.threads = config.threads;

    NeighborhoodConfig lasvd_nbr;
    lasvd_nbr.n0 = 20;
    lasvd_nbr.nn = 30;
    NeighborhoodConfig knn_nbr;
    knn_nbr.n0 = 30;
    knn_nbr.nn = 30;

    const auto t_lasvd = Clock::now();
    const auto lasvd = predict_local(train, y, test, lasvd_nbr,
                                     LocalMode::greedy, svd_cfg);
    const double lasvd_seconds = seconds_since(t_lasvd);
    const auto knn =
        predict_local(train, y, test, knn_nbr, LocalMode::knn, svd_cfg);

    auto report = report_from_local_fits(lasvd, index_labels(kUnitGrid.points),
                                         config.interval_multiplier, "lasvdgp",
                                         lasvd_seconds);

    std::vector<double> nrmse_lasvd, nrmse_knn, coverage_lasvd;
    Matrix per_query(n_test, 5);
    std::vector<Matrix> curve_blocks;
    for (int i = 0; i < n_test; ++i) {
        const Vector x0 = test.row(i).transpose();
        const Vector truth = simulator_forrester_unit(x0, kUnitGrid);
        if (!knn[static_cast<std::size_t>(i)].ok())
            throw NumericError("knn fit failed for query " + std::to_string(i) +
                               ": " + knn[static_cast<std::size_t>(i)].error);
        const auto& pl = *lasvd[static_cast<std::size_t>(i)].prediction;
        const auto& pk = *knn[static_cast<std::size_t>(i)].prediction;

        const double el = nrmse(truth, pl.mean);
        const double ek = nrmse(truth, pk.mean);
        const double cl = interval_coverage(truth, pl.mean,
                                            pl.pointwise_variance,
                                            config.interval_multiplier);
        nrmse_lasvd.push_back(el);
        nrmse_knn.push_back(ek);
        coverage_lasvd.push_back(cl);
        per_query(i, 0) = i;
        per_query(i, 1) = el;
        per_query(i, 2) = cl;
        per_query(i, 3) = ek;
        per_query(i, 4) = interval_coverage(truth, pk.mean,
                                            pk.pointwise_variance,
                                            config.interval_multiplier);

        if (i < 6) {
            Matrix block(kUnitGrid.points, 6);
            const Vector t = kUnitGrid.values();
            for (int g = 0; g < kUnitGrid.points; ++g) {
                const double half = config.interval_multiplier *
                                    std::sqrt(pl.pointwise_variance[g]);
                block(g, 0) = i;
                block(g, 1) = t[g];
                block(g, 2) = truth[g];
                block(g, 3) = pl.mean[g];
                block(g, 4) = pl.mean[g] - half;
                block(g, 5) = pl.mean[g] + half;
            }
            curve_blocks.push_back(std::move(block));
        }
    }

    Matrix curves(kUnitGrid.points * static_cast<int>(curve_blocks.size()), 6);
    for (std::size_t b = 0; b < curve_blocks.size(); ++b)
        curves.middleRows(static_cast<Eigen::Index>(b) * kUnitGrid.points,
                          kUnitGrid.points) = curve_blocks[b];

    ScenarioResult result;
    result.name = "example4";
    result.metrics["mean_nrmse_lasvd"] = mean_of(nrmse_lasvd);
    result.metrics["median_nrmse_lasvd"] = median(nrmse_lasvd);
    result.metrics["max_nrmse_lasvd"] =
        *std::max_element(nrmse_lasvd.begin(), nrmse_lasvd.end());
    result.metrics["spot6_max_nrmse_lasvd"] = *std::max_element(
        nrmse_lasvd.begin(), nrmse_lasvd.begin() + std::min<std::size_t>(
                                                       6, nrmse_lasvd.size()));
    result.metrics["mean_nrmse_knn"] = mean_of(nrmse_knn);
    result.metrics["median_nrmse_knn"] = median(nrmse_knn);
    result.metrics["mean_coverage_lasvd"] = mean_of(coverage_lasvd);
    result.metrics["n_train"] = n_train;
    result.metrics["n_test"] = n_test;

    write_report_csv(report, (dir / "report.csv").string());
    write_csv((dir / "nrmse.csv").string(), per_query,
              {"query_id", "nrmse_lasvd", "coverage_lasvd", "nrmse_knn",
               "coverage_knn"});
    write_csv((dir / "curves.csv").string(), curves,
              {"query_id", "t", "y_true", "mean", "lo", "hi"});
    const double elapsed = seconds_since(start);
    write_metrics(dir / "metrics.csv", result.metrics, elapsed);
    write_manifest(dir / "manifest.json", result.name, config, elapsed);
    result.files_written = {"report.csv", "nrmse.csv", "curves.csv",
                            "metrics.csv", "manifest.json"};
    return result;
}

ScenarioResult run_scenario(const std::string& name,
                            const ScenarioConfig& config) {
    if (name == "example1") return run_example1(config);
    if (name == "example3") return run_example3(config);
    if (name == "example4") return run_example4(config);
    throw DataError("unknown benchmark scenario: " + name +
                    " (expected example1, example3 or example4)");
}

} // namespace dgp
