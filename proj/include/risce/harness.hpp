#pragma once

// Seeded Monte Carlo runner and result emission.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "risce/config.hpp"
#include "risce/system.hpp"

namespace risce {

/// One estimator run on one (SNR, trial) realisation.
///
/// Per-channel NMSE fields are absent for the LS baseline, which only yields
/// the stacked parameter vector; analytic_ops is absent for it as well.
/// H_UR and H_RA errors are measured after resolve_scaling.
struct TrialRecord {
    std::size_t snr_index = 0;
    double snr_db = 0.0;
    int trial_index = 0;
    Method estimator = Method::e_als;
    std::string channel_hash;
    std::optional<double> nmse_aggregate;
    std::optional<double> nmse_h_ua;
    std::optional<double> nmse_h_ur;
    std::optional<double> nmse_h_ra;
    std::optional<double> nmse_cascade;
    int iterations = 0;
    bool converged = false;
    std::optional<std::uint64_t> analytic_ops;
    std::uint64_t empirical_ops = 0;
    int residual_violations = 0;
    bool failure_flag = false;
    double wall_time_seconds = 0.0;

    friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

/// Per-(estimator, SNR) summary.
struct Aggregate {
    Method estimator = Method::e_als;
    double snr_db = 0.0;
    std::size_t trials = 0;
    std::size_t failures = 0;
    double mean_nmse_aggregate = 0.0;
    double median_nmse_aggregate = 0.0;
    std::optional<double> mean_nmse_h_ua;
    std::optional<double> mean_nmse_h_ur;
    std::optional<double> mean_nmse_h_ra;
    std::optional<double> mean_nmse_cascade;
    double mean_iterations = 0.0;
    double converged_fraction = 0.0;
    double mean_wall_time_seconds = 0.0;
    std::optional<double> mean_analytic_ops;
    int residual_violations = 0;
};

/// Number of steps where a residual rises by more than
/// rel_slack * previous + abs_floor.
int count_residual_increases(const std::vector<double>& residuals, double rel_slack = 1e-9, double abs_floor = 1e-14);

/// Runs every (SNR, trial) pair on `cfg.workers` threads. All enabled
/// estimators of a trial see the same channels and the same slot-indexed
/// noise. Records are sorted by (SNR index, trial, estimator order in cfg).
std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg);

/// Failed records are counted but excluded from the means.
std::vector<Aggregate> summarize(const std::vector<TrialRecord>& records, const ExperimentConfig& cfg);

/// Header plus one row per record. Column order:
///   snr_db,trial_index,estimator,channel_hash,nmse_aggregate,nmse_h_ua,
///   nmse_h_ur,nmse_h_ra,nmse_cascade,iterations,converged,analytic_ops,
///   empirical_ops,residual_violations,failure_flag,wall_time_seconds
/// Reals use 17 significant digits; absent values are empty fields.
std::string records_to_csv(const std::vector<TrialRecord>& records);

/// {"config": ..., "records": [...], "aggregates": [...]}
std::string records_to_json(const std::vector<TrialRecord>& records, const ExperimentConfig& cfg);

/// Inverse of the "records" array of records_to_json.
std::vector<TrialRecord> records_from_json(const std::string& json);

/// Writes records in `format` to `path` and returns the aggregates. Throws
/// std::runtime_error if the file cannot be written.
std::vector<Aggregate> emit_results(const std::vector<TrialRecord>& records, const std::string& path,
                                    OutputFormat format, const ExperimentConfig& cfg);

/// Fixed-width table of the aggregates, one line per (estimator, SNR).
std::string format_summary(const std::vector<Aggregate>& aggregates);

}  // namespace risce
