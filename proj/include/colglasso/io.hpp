#pragma once

#include "colglasso/metrics.hpp"
#include "colglasso/optimizer.hpp"
#include "colglasso/selection.hpp"
#include "colglasso/simulate.hpp"
#include "colglasso/types.hpp"

#include <cstdint>
#include <string>

namespace colglasso {

/// Malformed input file; message carries 1-based row/column positions.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Comma-separated numeric data, '.' decimal point. A non-numeric first row
// is treated as a header. Rows are counted from 1 including any header.
DataMatrix read_csv(const std::string& path);

// Header x1..xp, one row per observation, values at full precision.
void write_csv_data(const std::string& path, const DataMatrix& data);

struct TruthFile {
    std::string family;
    int p = 0;
    int n = 0;
    std::uint64_t seed = 0;
    Eigen::MatrixXd theta;
    ColoredGraph graph;
};

void write_truth_json(const std::string& path, const TruthFile& truth);
TruthFile read_truth_json(const std::string& path);

struct EstimateFile {
    int p = 0;
    int n = 0;
    ColoredGraphEstimate estimate;
    Hyperparams hyper;
    bool converged = false;
    int dc_iterations = 0;
    std::vector<double> objective_trace;
    double final_alm_residual = 0.0;
};

void write_estimate_json(const std::string& path, const EstimateFile& est);
EstimateFile read_estimate_json(const std::string& path);

void write_trace_csv(const std::string& path, const std::vector<TuneRow>& rows,
                     const Hyperparams& best);

void write_metrics_json(const std::string& path, const MetricsReport& rep);

// Undirected DOT graph; classes colored from a fixed palette, singleton
// classes in gamboge.
std::string export_dot(const ColoredGraph& graph);

// "0.0206(0.0051)"-style cell used by the replicate summaries.
std::string mean_sd_cell(double mean, double sd);

}  // namespace colglasso
