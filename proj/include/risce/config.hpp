#pragma once

// Experiment configuration and its YAML file format.
//
// Every key is optional; omitted keys keep the defaults shown below, which
// describe the reference scenario (4-antenna AP, 8 users, 5x5 RIS).
//
//   system:
//     M: 4
//     K: 8
//     N: 25
//     L: 8
//     L_off: 8
//     noise_power: 1.0
//   channel:
//     num_paths: 2
//     spacing_ratio: 0.5
//     pathloss_ref_db: -20
//     ref_distance: 1.0
//     ris_rows: 5
//     ris_cols: 5
//     fixed_geometry: false
//     links:
//       AR: {distance: 20, exponent: 2.1}
//       UR: {distance: 20, exponent: 4.2}
//       UA: {distance: 30, exponent: 2.2}
//   estimator:
//     max_iters: 20
//     conv_threshold: 1.0e-8
//     pinv_tol: 1.0e-12
//     init_seed: 0
//   experiment:
//     snr_grid_db: [0, 10, 20, 30]
//     trials: 200
//     master_seed: 1
//     estimators: [two_stage, e_als, ls]
//     workers: 1
//     output: ""
//     format: csv

#include <cstdint>
#include <string>
#include <vector>

#include "risce/channel_model.hpp"
#include "risce/estimators.hpp"
#include "risce/system.hpp"

namespace risce {

enum class OutputFormat { csv, json };

OutputFormat format_from_name(const std::string& name);

struct ExperimentConfig {
    SystemConfig system;
    ChannelModelConfig channel;
    EstimatorConfig estimator;
    std::vector<double> snr_grid_db{0.0, 10.0, 20.0, 30.0};
    int trials = 200;
    std::uint64_t master_seed = 1;
    std::vector<Method> estimators{Method::two_stage, Method::e_als, Method::ls};
    std::string output_path;
    OutputFormat format = OutputFormat::csv;
    int workers = 1;

    /// Throws ConfigError naming the first invalid field.
    void validate() const;
};

/// Parses YAML text; errors carry the line number or the field name.
ExperimentConfig parse_config(const std::string& text);

/// Reads and parses `path`.
ExperimentConfig load_config(const std::string& path);

/// "a:b:step" (inclusive of b) or "v1,v2,...".
std::vector<double> parse_snr_range(const std::string& text);
std::vector<double> parse_snr_list(const std::string& text);
std::vector<Method> parse_estimator_list(const std::string& text);

}  // namespace risce
