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

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dgp/design.hpp"
#include "dgp/gp.hpp"
#include "dgp/io.hpp"
#include "dgp/local.hpp"
#include "dgp/scenarios.hpp"
#include "dgp/serialize.hpp"
#include "dgp/svdgp.hpp"
#include "dgp/version.hpp"

namespace {

using dgp::Matrix;
using dgp::Vector;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

// Exit codes: 0 success, 2 usage, 3 input data, 4 numerical failure.
constexpr int kExitUsage = 2;
constexpr int kExitInputData = 3;
constexpr int kExitNumeric = 4;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void write_json_file(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw dgp::DataError("cannot write file: " + path);
    out << j.dump(2) << '\n';
    if (!out) throw dgp::DataError("write failed: " + path);
}

void write_manifest(const std::string& anchor_path, const json& config,
                    double wall_clock_sec) {
    json j = config;
    j["library_version"] = dgp::kVersion;
    j["wall_clock_sec"] = wall_clock_sec;
    write_json_file(j, anchor_path + ".manifest.json");
}

Vector response_vector(const dgp::CsvTable& table, const std::string& path) {
    if (table.values.cols() == 1) return table.values.col(0);
    if (table.values.rows() == 1) return table.values.row(0).transpose();
    throw dgp::DataError(path + ": scalar responses must be a single column or row");
}

struct FitGpArgs {
    std::string design_path, response_path, out_path;
    double power = 1.95;
    int nstarts = 5;
    std::uint64_t seed = 1;
    bool no_rescale = false;
};

int run_fit_gp(const FitGpArgs& args) {
    const auto start = Clock::now();
    const dgp::CsvTable design = dgp::read_csv(args.design_path);
    const Vector y = response_vector(dgp::read_csv(args.response_path),
                                     args.response_path);

    dgp::GPFitConfig cfg;
    cfg.power = args.power;
    cfg.nstarts = args.nstarts;
    cfg.seed = args.seed;
    cfg.rescale_inputs = !args.no_rescale;
    const auto model = dgp::fit_scalar_gp(design.values, y, cfg);
    dgp::save_model(model, args.out_path);

    const double elapsed = seconds_since(start);
    json summary;
    summary["kind"] = "scalar_gp";
    summary["n"] = model.n();
    summary["q"] = model.q();
    summary["theta"] = std::vector<double>(model.params.theta.begin(),
                                           model.params.theta.end());
    summary["power"] = args.power;
    summary["mu_hat"] = model.mu_hat;
    summary["sigma2_hat"] = model.sigma2_hat;
    summary["log_likelihood"] = model.log_likelihood;
    summary["jitter"] = model.corr.jitter();
    summary["degenerate"] = model.degenerate;
    summary["fit_seconds"] = elapsed;
    write_json_file(summary, args.out_path + ".summary.json");

    json manifest = {{"command", "fit-gp"},
                     {"design", args.design_path},
                     {"response", args.response_path},
                     {"out", args.out_path},
                     {"power", args.power},
                     {"nstarts", args.nstarts},
                     {"seed", args.seed},
                     {"rescale_inputs", !args.no_rescale}};
    write_manifest(args.out_path, manifest, elapsed);

    std::cout << "fitted scalar GP on " << model.n() << " runs; mu_hat="
              << dgp::format_number(model.mu_hat)
              << " sigma2_hat=" << dgp::format_number(model.sigma2_hat)
              << " log_likelihood=" << dgp::format_number(model.log_likelihood)
              << (model.degenerate ? " (degenerate responses)" : "") << "\n"
              << "model written to " << args.out_path << "\n";
    return 0;
}

struct FitSvdGpArgs {
    std::string design_path, response_path, out_path;
    bool transpose = false;
    double gamma = 0.95;
    int nstarts = 5;
    int threads = 1;
    std::uint64_t seed = 1;
};

int run_fit_svdgp(const FitSvdGpArgs& args) {
    const auto start = Clock::now();
    dgp::LoadOptions opts;
    opts.transpose_response = args.transpose;
    const dgp::Dataset data =
        dgp::load_dataset(args.design_path, args.response_path, opts);

    dgp::SvdGPConfig cfg;
    cfg.gamma = args.gamma;
    cfg.nstarts = args.nstarts;
    cfg.threads = args.threads;
    cfg.seed = args.seed;
    const auto model = dgp::fit_svdgp(data.design, data.responses, cfg);
    dgp::save_model(model, args.out_path);

    const double elapsed = seconds_since(start);
    json summary;
    summary["kind"] = "svdgp";
    summary["n"] = model.n();
    summary["q"] = model.q();
    summary["series_length"] = model.series_length();
    summary["gamma"] = args.gamma;
    summary["p"] = model.basis.p();
    summary["sigma2_hat"] = model.noise.sigma2_hat;
    double jitter = 0.0, log_post = 0.0;
    json thetas = json::array(), posteriors = json::array();
    for (const auto& gp : model.coeff_gps) {
        jitter = std::max(jitter, gp.corr.jitter());
        log_post += gp.log_posterior;
        thetas.push_back(std::vector<double>(gp.theta.begin(), gp.theta.end()));
        posteriors.push_back(gp.log_posterior);
    }
    summary["theta"] = thetas;
    summary["log_posterior"] = posteriors;
    summary["log_posterior_total"] = log_post;
    summary["jitter"] = jitter;
    summary["fit_seconds"] = elapsed;
    write_json_file(summary, args.out_path + ".summary.json");

    json manifest = {{"command", "fit-svdgp"},
                     {"design", args.design_path},
                     {"response", args.response_path},
                     {"out", args.out_path},
                     {"transpose", args.transpose},
                     {"gamma", args.gamma},
                     {"nstarts", args.nstarts},
                     {"threads", args.threads},
                     {"seed", args.seed}};
    write_manifest(args.out_path, manifest, elapsed);

    std::cout << "fitted svdGP on " << model.n() << " runs (p="
              << model.basis.p()
              << ", sigma2_hat=" << dgp::format_number(model.noise.sigma2_hat)
              << ")\nmodel written to " << args.out_path << "\n";
    return 0;
}

struct PredictArgs {
    std::string model_path, design_path, response_path, inputs_path, out_path;
    std::string mode = "full"; // full | knn | lasvd
    std::string format = "csv";
    bool transpose = false;
    double gamma = 0.95;
    int nn = 20;
    int n0 = 10;
    int nstarts = 5;
    int threads = 1;
    std::uint64_t seed = 1;
    double interval = 2.0;
};

int run_predict(const PredictArgs& args) {
    const auto start = Clock::now();
    const dgp::CsvTable inputs = dgp::read_csv(args.inputs_path);
    const Matrix& queries = inputs.values;

    dgp::PredictionReport report;
    report.interval_multiplier = args.interval;

    if (!args.model_path.empty()) {
        const std::string kind = dgp::model_kind(args.model_path);
        if (kind == "scalar_gp") {
            const auto model = dgp::load_scalar_model(args.model_path);
            report.meta.kind = kind;
            report.meta.sigma2 = model.sigma2_hat;
            report.meta.jitter = model.corr.jitter();
            report.time_labels = {"1"};
            for (Eigen::Index i = 0; i < queries.rows(); ++i) {
                const auto pred =
                    dgp::predict_scalar(model, queries.row(i).transpose());
                dgp::QueryRecord rec;
                rec.query_id = static_cast<int>(i);
                rec.input = queries.row(i).transpose();
                rec.mean = Vector::Constant(1, pred.mean);
                rec.variance = Vector::Constant(1, pred.variance_mle);
                report.queries.push_back(std::move(rec));
            }
        } else if (kind == "svdgp") {
            const auto model = dgp::load_svdgp_model(args.model_path);
            report.meta.kind = kind;
            report.meta.p = model.basis.p();
            report.meta.gamma = model.basis.gamma;
            report.meta.sigma2 = model.noise.sigma2_hat;
            for (const auto& gp : model.coeff_gps)
                report.meta.jitter = std::max(report.meta.jitter, gp.corr.jitter());
            for (int t = 1; t <= model.series_length(); ++t)
                report.time_labels.push_back(std::to_string(t));
            for (Eigen::Index i = 0; i < queries.rows(); ++i) {
                const auto pred =
                    dgp::predict_svdgp(model, queries.row(i).transpose());
                dgp::QueryRecord rec;
                rec.query_id = static_cast<int>(i);
                rec.input = queries.row(i).transpose();
                rec.mean = pred.mean;
                rec.variance = pred.pointwise_variance;
                report.queries.push_back(std::move(rec));
            }
        } else {
            throw dgp::DataError(args.model_path +
                                 ": unrecognized model kind '" + kind + "'");
        }
    } else {
        if (args.design_path.empty() || args.response_path.empty())
            throw CLI::ValidationError(
                "predict",
                "either --model or both --design and --response are required");
        dgp::LoadOptions opts;
        opts.transpose_response = args.transpose;
        const dgp::Dataset data =
            dgp::load_dataset(args.design_path, args.response_path, opts);

        dgp::SvdGPConfig cfg;
        cfg.gamma = args.gamma;
        cfg.nstarts = args.nstarts;
        cfg.threads = args.threads;
        cfg.seed = args.seed;
        report.time_labels = data.time_labels;

        if (args.mode == "full") {
            const auto model = dgp::fit_svdgp(data.design, data.responses, cfg);
            report.meta.kind = "svdgp";
            report.meta.p = model.basis.p();
            report.meta.gamma = model.basis.gamma;
            report.meta.sigma2 = model.noise.sigma2_hat;
            for (const auto& gp : model.coeff_gps)
                report.meta.jitter = std::max(report.meta.jitter, gp.corr.jitter());
            for (Eigen::Index i = 0; i < queries.rows(); ++i) {
                const auto pred =
                    dgp::predict_svdgp(model, queries.row(i).transpose());
                dgp::QueryRecord rec;
                rec.query_id = static_cast<int>(i);
                rec.input = queries.row(i).transpose();
                rec.mean = pred.mean;
                rec.variance = pred.pointwise_variance;
                report.queries.push_back(std::move(rec));
            }
        } else if (args.mode == "knn" || args.mode == "lasvd") {
            dgp::NeighborhoodConfig nbr;
            nbr.nn = args.nn;
            nbr.n0 = args.mode == "knn" ? args.nn : args.n0;
            const auto mode = args.mode == "knn" ? dgp::LocalMode::knn
                                                 : dgp::LocalMode::greedy;
            const auto fits = dgp::predict_local(data.design, data.responses,
                                                 queries, nbr, mode, cfg);
            report.meta.kind = args.mode == "knn" ? "knnsvdgp" : "lasvdgp";
            bool first_ok = true;
            for (std::size_t i = 0; i < fits.size(); ++i) {
                const auto& fit = fits[i];
                if (!fit.ok())
                    throw dgp::NumericError("query " + std::to_string(i) +
                                            " failed: " + fit.error);
                if (first_ok && fit.model) {
                    report.meta.p = fit.model->basis.p();
                    report.meta.gamma = fit.model->basis.gamma;
                    report.meta.sigma2 = fit.model->noise.sigma2_hat;
                    for (const auto& gp : fit.model->coeff_gps)
                        report.meta.jitter =
                            std::max(report.meta.jitter, gp.corr.jitter());
                    first_ok = false;
                }
                dgp::QueryRecord rec;
                rec.query_id = static_cast<int>(i);
                rec.input = fit.query;
                rec.mean = fit.prediction->mean;
                rec.variance = fit.prediction->pointwise_variance;
                rec.neighborhood = fit.neighborhood;
                report.queries.push_back(std::move(rec));
            }
        } else {
            throw CLI::ValidationError("predict", "unknown mode " + args.mode);
        }
    }

    const double elapsed = seconds_since(start);
    report.meta.fit_seconds = elapsed;
    if (args.format == "json")
        dgp::write_report_json(report, args.out_path);
    else
        dgp::write_report_csv(report, args.out_path);

    json manifest = {{"command", "predict"},
                     {"model", args.model_path},
                     {"design", args.design_path},
                     {"response", args.response_path},
                     {"inputs", args.inputs_path},
                     {"out", args.out_path},
                     {"mode", args.mode},
                     {"format", args.format},
                     {"gamma", args.gamma},
                     {"nn", args.nn},
                     {"n0", args.n0},
                     {"nstarts", args.nstarts},
                     {"threads", args.threads},
                     {"seed", args.seed},
                     {"interval_multiplier", args.interval}};
    write_manifest(args.out_path, manifest, elapsed);

    std::cout << "predicted " << report.queries.size() << " queries -> "
              << args.out_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian-process emulation of computer simulators with "
                 "time-series outputs (scalar GP, svdGP, knnsvdGP, lasvdGP)"};
    app.set_version_flag("--version", dgp::kVersion);
    app.require_subcommand(1);

    FitGpArgs fit_gp;
    auto* cmd_fit_gp =
        app.add_subcommand("fit-gp", "Fit a scalar-output GP emulator");
    cmd_fit_gp->add_option("--design", fit_gp.design_path, "Design CSV (N x q)")
        ->required();
    cmd_fit_gp
        ->add_option("--response", fit_gp.response_path,
                     "Scalar response CSV (one column)")
        ->required();
    cmd_fit_gp->add_option("--out", fit_gp.out_path, "Model file to write")
        ->required();
    cmd_fit_gp->add_option("--power", fit_gp.power,
                           "Correlation exponent in (0,2]");
    cmd_fit_gp->add_option("--nstarts", fit_gp.nstarts, "Optimizer starts");
    cmd_fit_gp->add_option("--seed", fit_gp.seed, "Random seed");
    cmd_fit_gp->add_flag("--no-rescale", fit_gp.no_rescale,
                         "Skip min/max input rescaling");

    FitSvdGpArgs fit_svdgp;
    auto* cmd_fit_svdgp = app.add_subcommand(
        "fit-svdgp", "Fit the SVD-based dynamic GP emulator");
    cmd_fit_svdgp
        ->add_option("--design", fit_svdgp.design_path, "Design CSV (N x q)")
        ->required();
    cmd_fit_svdgp
        ->add_option("--response", fit_svdgp.response_path,
                     "Response CSV (L x N, one column per run)")
        ->required();
    cmd_fit_svdgp->add_option("--out", fit_svdgp.out_path, "Model file to write")
        ->required();
    cmd_fit_svdgp->add_flag("--transpose", fit_svdgp.transpose,
                            "Response file is N x L (one row per run)");
    cmd_fit_svdgp->add_option("--gamma", fit_svdgp.gamma,
                              "Cumulative singular-value fraction in (0,1]");
    cmd_fit_svdgp->add_option("--nstarts", fit_svdgp.nstarts, "Optimizer starts");
    cmd_fit_svdgp->add_option("--threads", fit_svdgp.threads, "Worker threads")
        ->envname("DGP_THREADS");
    cmd_fit_svdgp->add_option("--seed", fit_svdgp.seed, "Random seed");

    PredictArgs predict;
    auto* cmd_predict = app.add_subcommand(
        "predict", "Predict at new inputs from a model file or inline fit");
    cmd_predict->add_option("--model", predict.model_path,
                            "Serialized model file (from fit-gp/fit-svdgp)");
    cmd_predict->add_option("--design", predict.design_path,
                            "Design CSV for inline fitting");
    cmd_predict->add_option("--response", predict.response_path,
                            "Response CSV for inline fitting");
    cmd_predict
        ->add_option("--inputs", predict.inputs_path, "Query inputs CSV (M x q)")
        ->required();
    cmd_predict->add_option("--out", predict.out_path, "Report file to write")
        ->required();
    cmd_predict
        ->add_option("--mode", predict.mode,
                     "Inline model: full | knn | lasvd")
        ->check(CLI::IsMember({"full", "knn", "lasvd"}));
    cmd_predict->add_option("--format", predict.format, "Report format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd_predict->add_flag("--transpose", predict.transpose,
                          "Response file is N x L (one row per run)");
    cmd_predict->add_option("--gamma", predict.gamma,
                            "Cumulative singular-value fraction");
    cmd_predict->add_option("--nn", predict.nn, "Local neighbourhood size");
    cmd_predict->add_option("--n0", predict.n0,
                            "k-NN seed size for the greedy neighbourhood");
    cmd_predict->add_option("--nstarts", predict.nstarts, "Optimizer starts");
    cmd_predict->add_option("--threads", predict.threads, "Worker threads")
        ->envname("DGP_THREADS");
    cmd_predict->add_option("--seed", predict.seed, "Random seed");
    cmd_predict->add_option("--interval", predict.interval,
                            "Interval half-width in standard deviations");

    std::string scenario;
    dgp::ScenarioConfig bench;
    bool out_dir_set = false;
    auto* cmd_bench = app.add_subcommand(
        "benchmark", "Run a named end-to-end scenario and write metrics");
    cmd_bench
        ->add_option("scenario", scenario,
                     "Scenario name: example1 | example3 | example4")
        ->required()
        ->check(CLI::IsMember({"example1", "example3", "example4"}));
    cmd_bench->add_option("--seed", bench.seed, "Random seed");
    cmd_bench->add_option("--threads", bench.threads, "Worker threads")
        ->envname("DGP_THREADS");
    cmd_bench->add_option("--nstarts", bench.nstarts, "Optimizer starts");
    cmd_bench->add_option("--gamma", bench.gamma,
                          "Cumulative singular-value fraction");
    cmd_bench->add_option("--interval", bench.interval_multiplier,
                          "Interval half-width in standard deviations");
    cmd_bench->add_option("--out", bench.out_dir, "Output directory")
        ->each([&](const std::string&) { out_dir_set = true; });

    try {
        app.parse(argc, argv);
        if (cmd_fit_gp->parsed()) return run_fit_gp(fit_gp);
        if (cmd_fit_svdgp->parsed()) return run_fit_svdgp(fit_svdgp);
        if (cmd_predict->parsed()) return run_predict(predict);
        if (cmd_bench->parsed()) {
            if (!out_dir_set) bench.out_dir = "bench_" + scenario;
            const auto result = dgp::run_scenario(scenario, bench);
            for (const auto& [name, value] : result.metrics)
                std::cout << name << "=" << dgp::format_number(value) << "\n";
            std::cout << "outputs written to " << bench.out_dir << "\n";
            return 0;
        }
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    } catch (const dgp::NumericError& e) {
        std::cerr << "error[numeric]: " << e.what() << std::endl;
        return kExitNumeric;
    } catch (const dgp::Error& e) {
        std::cerr << "error[input-data]: " << e.what() << std::endl;
        return kExitInputData;
    } catch (const std::exception& e) {
        std::cerr << "error[internal]: " << e.what() << std::endl;
        return kExitNumeric;
    }
}
