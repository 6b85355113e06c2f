// estimate: command-line front end of the RIS channel estimation simulator.
//
//   estimate run --config cfg.yaml [--snr a:b:step | --snr-list v1,v2] [--trials n]
//                [--seed s] [--estimators two_stage,e_als,ls] [--workers n]
//                [--out path] [--format csv|json]
//   estimate demo [--trials n] [--workers n]
//   estimate complexity [--config cfg.yaml]

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "risce/config.hpp"
#include "risce/errors.hpp"
#include "risce/harness.hpp"
#include "risce/metrics.hpp"

namespace {

using namespace risce;

void print_complexity(const ExperimentConfig& cfg) {
    for (Method m : {Method::two_stage, Method::e_als}) {
        const Dimensions d = dimensions(cfg.system, m);
        const ComplexityTally t = complexity_formula(m, d);
        std::cout << method_name(m) << " (M=" << d.M << " K=" << d.K << " N=" << d.N << " B=" << d.B << " L=" << d.L;
        if (m == Method::two_stage) std::cout << " L_off=" << d.L_off;
        std::cout << ")\n";
        for (const auto& [name, v] : t.one_time) std::cout << "  " << name << " (once)       " << v << "\n";
        for (const auto& [name, v] : t.per_iteration) std::cout << "  " << name << " (per iter)   " << v << "\n";
        std::cout << "  total per iteration     " << t.per_iteration_total() << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tensor-based channel estimation for RIS-assisted MIMO uplink"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run a Monte Carlo experiment");
    std::string config_path;
    std::string snr_range;
    std::string snr_list;
    std::string estimators;
    std::string out_path;
    std::string format;
    int trials = 0;
    int workers = 0;
    std::uint64_t seed = 0;
    run->add_option("--config", config_path, "YAML experiment config")->check(CLI::ExistingFile);
    auto* snr_opt = run->add_option("--snr", snr_range, "SNR grid a:b:step in dB");
    run->add_option("--snr-list", snr_list, "comma-separated SNR values in dB")->excludes(snr_opt);
    run->add_option("--trials", trials, "Monte Carlo trials per SNR")->check(CLI::PositiveNumber);
    auto* seed_opt = run->add_option("--seed", seed, "master seed");
    run->add_option("--estimators", estimators, "subset of two_stage,e_als,ls");
    run->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    run->add_option("--out", out_path, "output file (default: records to stdout)");
    run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* demo = app.add_subcommand("demo", "Reference scenario at 200 trials; prints the NMSE table");
    int demo_trials = 200;
    int demo_workers = 1;
    demo->add_option("--trials", demo_trials, "Monte Carlo trials per SNR")->check(CLI::PositiveNumber);
    demo->add_option("--workers", demo_workers, "worker threads")->check(CLI::PositiveNumber);

    auto* complexity = app.add_subcommand("complexity", "Print analytic per-update operation counts");
    std::string complexity_config;
    complexity->add_option("--config", complexity_config, "YAML experiment config")->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            ExperimentConfig cfg = config_path.empty() ? parse_config("") : load_config(config_path);
            if (!snr_range.empty()) cfg.snr_grid_db = parse_snr_range(snr_range);
            if (!snr_list.empty()) cfg.snr_grid_db = parse_snr_list(snr_list);
            if (trials > 0) cfg.trials = trials;
            if (seed_opt->count() > 0) cfg.master_seed = seed;
            if (!estimators.empty()) cfg.estimators = parse_estimator_list(estimators);
            if (workers > 0) cfg.workers = workers;
            if (!out_path.empty()) cfg.output_path = out_path;
            if (!format.empty()) cfg.format = format_from_name(format);
            cfg.validate();

            const auto records = run_experiment(cfg);
            if (cfg.output_path.empty()) {
                std::cout << (cfg.format == OutputFormat::csv ? records_to_csv(records) : records_to_json(records, cfg));
            } else {
                std::cout << format_summary(emit_results(records, cfg.output_path, cfg.format, cfg));
            }
        } else if (demo->parsed()) {
            ExperimentConfig cfg = parse_config("");
            cfg.trials = demo_trials;
            cfg.workers = demo_workers;
            std::cout << format_summary(summarize(run_experiment(cfg), cfg));
        } else if (complexity->parsed()) {
            print_complexity(complexity_config.empty() ? parse_config("") : load_config(complexity_config));
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
