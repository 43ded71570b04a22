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

#include "dgp/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace dgp {

using nlohmann::json;

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        // trim surrounding whitespace
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        cells.push_back(b == std::string::npos ? std::string()
                                               : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

bool parse_double(const std::string& text, double& out) {
    if (text.empty()) return false;
    char* end = nullptr;
    out = std::strtod(text.c_str(), &end);
    return end == text.c_str() + text.size();
}

} // namespace

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);

    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(split_line(line));
    }
    if (rows.empty()) throw DataError("empty file: " + path);

    CsvTable table;
    std::size_t first_data = 0;
    double tmp = 0.0;
    for (const auto& cell : rows[0]) {
        if (!parse_double(cell, tmp)) {
            table.header = rows[0];
            first_data = 1;
            break;
        }
    }
    if (first_data == rows.size())
        throw DataError("no data rows in file: " + path);

    const std::size_t n_rows = rows.size() - first_data;
    const std::size_t n_cols = rows[first_data].size();
    table.values.resize(static_cast<Eigen::Index>(n_rows),
                        static_cast<Eigen::Index>(n_cols));
    for (std::size_t r = 0; r < n_rows; ++r) {
        const auto& cells = rows[r + first_data];
        if (cells.size() != n_cols) {
            std::ostringstream msg;
            msg << path << ": row " << (r + first_data + 1) << " has "
                << cells.size() << " cells, expected " << n_cols;
            throw DataError(msg.str());
        }
        for (std::size_t c = 0; c < n_cols; ++c) {
            double v = 0.0;
            if (!parse_double(cells[c], v)) {
                std::ostringstream msg;
                msg << path << ": non-numeric cell at row "
                    << (r + first_data + 1) << ", column " << (c + 1) << " ('"
                    << cells[c] << "')";
                throw DataError(msg.str());
            }
            if (!std::isfinite(v)) {
                std::ostringstream msg;
                msg << path << ": non-finite value at row "
                    << (r + first_data + 1) << ", column " << (c + 1);
                throw DataError(msg.str());
            }
            table.values(static_cast<Eigen::Index>(r),
                         static_cast<Eigen::Index>(c)) = v;
        }
    }
    return table;
}

void write_csv(const std::string& path, const Matrix& values,
               const std::vector<std::string>& header) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    if (!header.empty()) {
        if (static_cast<Eigen::Index>(header.size()) != values.cols())
            throw DimensionError("write_csv: header length mismatch");
        for (std::size_t i = 0; i < header.size(); ++i)
            out << (i ? "," : "") << header[i];
        out << '\n';
    }
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        for (Eigen::Index c = 0; c < values.cols(); ++c)
            out << (c ? "," : "") << format_number(values(r, c));
        out << '\n';
    }
    if (!out) throw DataError("write failed: " + path);
}

Dataset load_dataset(const std::string& design_path,
                     const std::string& response_path,
                     const LoadOptions& options) {
    const CsvTable design = read_csv(design_path);
    CsvTable response = read_csv(response_path);
    if (options.transpose_response)
        response.values = response.values.transpose().eval();

    if (response.values.cols() != design.values.rows()) {
        std::ostringstream msg;
        msg << "dimension mismatch: " << design_path << " has "
            << design.values.rows() << " runs but " << response_path
            << " provides " << response.values.cols() << " response columns"
            << (options.transpose_response ? " (after transpose)" : "");
        throw DataError(msg.str());
    }

    Dataset data;
    data.design = design.values;
    data.responses = response.values;
    if (!design.header.empty()) {
        data.column_names = design.header;
    } else {
        for (Eigen::Index k = 0; k < data.design.cols(); ++k)
            data.column_names.push_back("X" + std::to_string(k + 1));
    }
    for (Eigen::Index t = 0; t < data.responses.rows(); ++t)
        data.time_labels.push_back(std::to_string(t + 1));
    return data;
}

void save_dataset(const Dataset& data, const std::string& design_path,
                  const std::string& response_path,
                  const LoadOptions& options) {
    write_csv(design_path, data.design, data.column_names);
    if (options.transpose_response)
        write_csv(response_path, data.responses.transpose());
    else
        write_csv(response_path, data.responses);
}

namespace {

void check_report(const PredictionReport& report) {
    const auto l = static_cast<Eigen::Index>(report.time_labels.size());
    for (const auto& q : report.queries) {
        if (q.mean.size() != l || q.variance.size() != l)
            throw DimensionError(
                "prediction report: query series length does not match the time labels");
    }
}

} // namespace

void write_report_csv(const PredictionReport& report, const std::string& path) {
    check_report(report);
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out << "query_id,t,mean,variance,lo,hi\n";
    for (const auto& q : report.queries) {
        for (Eigen::Index t = 0; t < q.mean.size(); ++t) {
            const double half =
                report.interval_multiplier * std::sqrt(q.variance[t]);
            out << q.query_id << ',' << report.time_labels[static_cast<std::size_t>(t)]
                << ',' << format_number(q.mean[t]) << ','
                << format_number(q.variance[t]) << ','
                << format_number(q.mean[t] - half) << ','
                << format_number(q.mean[t] + half) << '\n';
        }
    }
    if (!out) throw DataError("write failed: " + path);
}

void write_report_json(const PredictionReport& report, const std::string& path) {
    check_report(report);
    json root;
    root["interval_multiplier"] = report.interval_multiplier;
    root["time_labels"] = report.time_labels;
    root["model"] = {{"kind", report.meta.kind},
                     {"p", report.meta.p},
                     {"gamma", report.meta.gamma},
                     {"sigma2", report.meta.sigma2},
                     {"jitter", report.meta.jitter},
                     {"fit_seconds", report.meta.fit_seconds}};
    root["queries"] = json::array();
    for (const auto& q : report.queries) {
        json rec;
        rec["query_id"] = q.query_id;
        rec["input"] = std::vector<double>(q.input.begin(), q.input.end());
        rec["mean"] = std::vector<double>(q.mean.begin(), q.mean.end());
        rec["variance"] =
            std::vector<double>(q.variance.begin(), q.variance.end());
        std::vector<double> lo, hi;
        lo.reserve(static_cast<std::size_t>(q.mean.size()));
        hi.reserve(static_cast<std::size_t>(q.mean.size()));
        for (Eigen::Index t = 0; t < q.mean.size(); ++t) {
            const double half =
                report.interval_multiplier * std::sqrt(q.variance[t]);
            lo.push_back(q.mean[t] - half);
            hi.push_back(q.mean[t] + half);
        }
        rec["lo"] = lo;
        rec["hi"] = hi;
        if (!q.neighborhood.empty()) rec["neighborhood"] = q.neighborhood;
        root["queries"].push_back(std::move(rec));
    }
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out << root.dump(2) << '\n';
    if (!out) throw DataError("write failed: " + path);
}

} // namespace dgp
