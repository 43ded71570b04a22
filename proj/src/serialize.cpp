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

#include "dgp/serialize.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "dgp/version.hpp"

namespace dgp {

using nlohmann::json;

namespace {

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& rows) {
    if (!rows.is_array() || rows.empty())
        throw DataError("model file: expected a non-empty matrix");
    const auto n_rows = static_cast<Eigen::Index>(rows.size());
    const auto n_cols = static_cast<Eigen::Index>(rows[0].size());
    Matrix m(n_rows, n_cols);
    for (Eigen::Index r = 0; r < n_rows; ++r) {
        if (static_cast<Eigen::Index>(rows[r].size()) != n_cols)
            throw DataError("model file: ragged matrix");
        for (Eigen::Index c = 0; c < n_cols; ++c)
            m(r, c) = rows[r][c].get<double>();
    }
    return m;
}

json vector_to_json(const Vector& v) {
    return json(std::vector<double>(v.begin(), v.end()));
}

Vector vector_from_json(const json& arr) {
    const auto values = arr.get<std::vector<double>>();
    return Eigen::Map<const Vector>(values.data(),
                                    static_cast<Eigen::Index>(values.size()));
}

json scaling_to_json(const InputScaling& s) {
    return {{"lo", vector_to_json(s.lo)}, {"width", vector_to_json(s.width)}};
}

InputScaling scaling_from_json(const json& j) {
    InputScaling s;
    s.lo = vector_from_json(j.at("lo"));
    s.width = vector_from_json(j.at("width"));
    return s;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError("malformed model file " + path + ": " + e.what());
    }
    return j;
}

void write_json_file(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write model file: " + path);
    out << j.dump(1) << '\n';
    if (!out) throw DataError("write failed: " + path);
}

} // namespace

void save_model(const ScalarGPModel& model, const std::string& path) {
    json j;
    j["kind"] = "scalar_gp";
    j["library_version"] = kVersion;
    j["design"] = matrix_to_json(model.design);
    j["responses"] = vector_to_json(model.responses);
    j["theta"] = vector_to_json(model.params.theta);
    j["power"] = vector_to_json(model.params.power);
    j["mu_hat"] = model.mu_hat;
    j["sigma2_hat"] = model.sigma2_hat;
    j["jitter"] = model.corr.jitter();
    j["scaling"] = scaling_to_json(model.scaling);
    j["log_likelihood"] = model.log_likelihood;
    j["degenerate"] = model.degenerate;
    write_json_file(j, path);
}

ScalarGPModel load_scalar_model(const std::string& path) {
    const json j = read_json_file(path);
    if (j.value("kind", "") != "scalar_gp")
        throw DataError(path + " is not a scalar_gp model file");

    ScalarGPModel model;
    model.design = matrix_from_json(j.at("design"));
    model.responses = vector_from_json(j.at("responses"));
    model.params.theta = vector_from_json(j.at("theta"));
    model.params.power = vector_from_json(j.at("power"));
    model.params.validate();
    model.mu_hat = j.at("mu_hat").get<double>();
    model.sigma2_hat = j.at("sigma2_hat").get<double>();
    model.scaling = scaling_from_json(j.at("scaling"));
    model.log_likelihood = j.at("log_likelihood").get<double>();
    model.degenerate = j.at("degenerate").get<bool>();

    model.scaled_design = model.scaling.apply(model.design);
    model.corr = CorrelationMatrix::build_with_fixed_jitter(
        model.scaled_design, model.params, j.at("jitter").get<double>());

    const auto n = model.responses.size();
    const Vector ones = Vector::Ones(n);
    model.corr_solve_residual = model.corr.solve(
        model.responses - Vector::Constant(n, model.mu_hat));
    model.corr_solve_ones = model.corr.solve(ones);
    model.ones_corr_ones = ones.dot(model.corr_solve_ones);
    return model;
}

void save_model(const SvdGPModel& model, const std::string& path) {
    json j;
    j["kind"] = "svdgp";
    j["library_version"] = kVersion;
    j["design"] = matrix_to_json(model.design);
    j["scaling"] = scaling_to_json(model.scaling);
    j["power"] = model.power;
    j["seed"] = model.seed;
    j["basis"] = {{"gamma", model.basis.gamma},
                  {"u_star", matrix_to_json(model.basis.u_star)},
                  {"d_star", vector_to_json(model.basis.d_star)},
                  {"v_star", matrix_to_json(model.basis.v_star)},
                  {"all_singular_values",
                   vector_to_json(model.basis.all_singular_values)}};
    j["noise"] = {{"sigma2_hat", model.noise.sigma2_hat},
                  {"alpha", model.noise.prior.alpha},
                  {"beta", model.noise.prior.beta}};
    json coeffs = json::array();
    for (const auto& gp : model.coeff_gps) {
        coeffs.push_back({{"index", gp.index},
                          {"theta", vector_to_json(gp.theta)},
                          {"v", vector_to_json(gp.v)},
                          {"jitter", gp.corr.jitter()},
                          {"log_posterior", gp.log_posterior},
                          {"prior",
                           {{"alpha", gp.prior.alpha},
                            {"beta", gp.prior.beta},
                            {"theta_inv_shape", gp.prior.theta_inv_shape},
                            {"theta_inv_rate", gp.prior.theta_inv_rate}}}});
    }
    j["coefficients"] = std::move(coeffs);
    write_json_file(j, path);
}

SvdGPModel load_svdgp_model(const std::string& path) {
    const json j = read_json_file(path);
    if (j.value("kind", "") != "svdgp")
        throw DataError(path + " is not an svdgp model file");

    SvdGPModel model;
    model.design = matrix_from_json(j.at("design"));
    model.scaling = scaling_from_json(j.at("scaling"));
    model.power = j.at("power").get<double>();
    model.seed = j.at("seed").get<std::uint64_t>();
    model.scaled_design = model.scaling.apply(model.design);

    const json& basis = j.at("basis");
    model.basis.gamma = basis.at("gamma").get<double>();
    model.basis.u_star = matrix_from_json(basis.at("u_star"));
    model.basis.d_star = vector_from_json(basis.at("d_star"));
    model.basis.v_star = matrix_from_json(basis.at("v_star"));
    model.basis.all_singular_values =
        vector_from_json(basis.at("all_singular_values"));
    model.basis.b = model.basis.u_star * model.basis.d_star.asDiagonal();

    model.noise.sigma2_hat = j.at("noise").at("sigma2_hat").get<double>();
    model.noise.prior.alpha = j.at("noise").at("alpha").get<double>();
    model.noise.prior.beta = j.at("noise").at("beta").get<double>();

    for (const json& c : j.at("coefficients")) {
        CoefficientGP gp;
        gp.index = c.at("index").get<int>();
        gp.theta = vector_from_json(c.at("theta"));
        gp.v = vector_from_json(c.at("v"));
        gp.log_posterior = c.at("log_posterior").get<double>();
        gp.prior.alpha = c.at("prior").at("alpha").get<double>();
        gp.prior.beta = c.at("prior").at("beta").get<double>();
        gp.prior.theta_inv_shape =
            c.at("prior").at("theta_inv_shape").get<double>();
        gp.prior.theta_inv_rate =
            c.at("prior").at("theta_inv_rate").get<double>();
        gp.corr = CorrelationMatrix::build_with_fixed_jitter(
            model.scaled_design,
            KernelParams::power_exponential(gp.theta, model.power),
            c.at("jitter").get<double>());
        gp.corr_solve_v = gp.corr.solve(gp.v);
        gp.psi = std::max(0.0, gp.v.dot(gp.corr_solve_v));
        model.coeff_gps.push_back(std::move(gp));
    }
    if (static_cast<int>(model.coeff_gps.size()) != model.basis.p())
        throw DataError(path + ": coefficient count does not match basis size");
    return model;
}

std::string model_kind(const std::string& path) {
    return read_json_file(path).value("kind", "");
}

} // namespace dgp
