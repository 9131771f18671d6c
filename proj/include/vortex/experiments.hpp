#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vortex/config.hpp"
#include "vortex/correction.hpp"

namespace vortex {

struct ResultRow {
    ExperimentKind kind = ExperimentKind::angle_sweep;
    int point = 0; // sweep point (pose index for angle sweeps, P or Q index for sweeps)
    int trial = 0;
    int pose = 0;
    double theta_true_deg = 0.0;
    double phi_true_deg = 0.0;
    double theta_est_deg = 0.0;
    double phi_est_deg = 0.0;
    double theta_err_deg = 0.0;
    double phi_err_deg = 0.0; // circular
    double sir_before_db = 0.0;
    double sir_after_db = 0.0;      // mask from the estimate
    double sir_after_true_db = 0.0; // mask from the true angles
    double capacity_before = 0.0;
    double capacity_after = 0.0;
    double capacity_after_true = 0.0;
    int p = 0;
    int q = 0;
    int u = 0;
    std::uint64_t seed = 0;
    std::string status = "ok"; // error code name when the trial failed; numeric fields are then 0

    bool ok() const { return status == "ok"; }
};

// Column names of the ResultRow CSV, in write order.
std::vector<std::string> result_columns();
std::vector<std::string> result_cells(const ResultRow& row);

struct Table {
    std::string file; // e.g. "pose_stats.csv"
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

// Two-column plot data.
struct Curve {
    std::string file;
    std::string x_label;
    std::string y_label;
    std::vector<std::pair<double, double>> points;
};

struct ExperimentResult {
    ExperimentKind kind = ExperimentKind::angle_sweep;
    std::vector<ResultRow> rows;
    std::vector<Table> tables;
    std::vector<Curve> curves;
    std::vector<std::pair<std::string, ImiMatrix>> imi; // file name, matrix
    nlohmann::json summary = nlohmann::json::object();
};

// Per-trial seed. Injective in (point, trial) for a fixed master seed, so
// streams never collide within one run.
std::uint64_t trial_seed(std::uint64_t master, int point, int trial);

// Fixed-precision number formatting shared by every result file.
std::string format_number(double value);

// (value, fraction of samples strictly greater) steps, starting at (min, 1).
std::vector<std::pair<double, double>> ccdf_points(std::vector<double> values);

ExperimentResult run_angle_sweep(const ExperimentSpec& spec);
ExperimentResult run_ccdf(const ExperimentSpec& spec);
ExperimentResult run_subcarrier_sweep(const ExperimentSpec& spec);
ExperimentResult run_antenna_sweep(const ExperimentSpec& spec);
ExperimentResult run_imi_demo(const ExperimentSpec& spec);
ExperimentResult validate_model(const ExperimentSpec& spec);

ExperimentResult run_experiment(const ExperimentSpec& spec);

} // namespace vortex
