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

#ifndef DGP_IO_HPP
#define DGP_IO_HPP

#include <string>
#include <vector>

#include "dgp/kernel.hpp"

namespace dgp {

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_number(double value);

/// A numeric CSV table plus the optional header row. The dialect is
/// comma-separated, '.' decimal, UTF-8; a header is detected when any
/// cell of the first row fails to parse as a number.
struct CsvTable {
    Matrix values;
    std::vector<std::string> header; // empty when the file had none
};

CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const Matrix& values,
               const std::vector<std::string>& header = {});

/// Training data for the dynamic models: N runs of q inputs and the
/// L x N response matrix (one column per run).
struct Dataset {
    Matrix design;    // N x q
    Matrix responses; // L x N
    std::vector<std::string> column_names; // q input labels
    std::vector<std::string> time_labels;  // L output labels

    Eigen::Index n() const { return design.rows(); }
    Eigen::Index q() const { return design.cols(); }
    Eigen::Index series_length() const { return responses.rows(); }
};

struct LoadOptions {
    /// The response file stores one row per run (N x L) and must be
    /// transposed into the column-per-run layout.
    bool transpose_response = false;
};

/// Reads and cross-validates a design/response file pair. Dimension
/// mismatches report both file names and the offending counts.
Dataset load_dataset(const std::string& design_path,
                     const std::string& response_path,
                     const LoadOptions& options = {});

void save_dataset(const Dataset& data, const std::string& design_path,
                  const std::string& response_path,
                  const LoadOptions& options = {});

/// Everything reported for one prediction query.
struct QueryRecord {
    int query_id = 0;
    Vector input;
    Vector mean;
    Vector variance;
    std::vector<int> neighborhood; // local modes only
};

struct ModelMeta {
    std::string kind;   // "scalar_gp" | "svdgp" | "knnsvdgp" | "lasvdgp"
    int p = 0;          // retained basis size (dynamic models)
    double gamma = 0.0;
    double sigma2 = 0.0;
    double jitter = 0.0;
    double fit_seconds = 0.0;
};

/// Order-stable prediction report; interval bounds are
/// mean +/- interval_multiplier * sqrt(variance).
struct PredictionReport {
    std::vector<QueryRecord> queries;
    std::vector<std::string> time_labels; // length L
    double interval_multiplier = 2.0;
    ModelMeta meta;
};

/// CSV layout: one row per (query, time index), columns
/// query_id,t,mean,variance,lo,hi, ordered by query then ascending t.
void write_report_csv(const PredictionReport& report, const std::string& path);

/// JSON layout: one object per query plus model metadata.
void write_report_json(const PredictionReport& report, const std::string& path);

} // namespace dgp

#endif // DGP_IO_HPP
