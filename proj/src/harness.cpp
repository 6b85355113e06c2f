#include "risce/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "risce/channel_model.hpp"
#include "risce/estimators.hpp"
#include "risce/metrics.hpp"
#include "risce/rng.hpp"
#include "risce/signal_model.hpp"

namespace risce {

namespace {

using json = nlohmann::json;

class Fnv1a {
public:
    void add(const CMatrix& m) {
        const auto* bytes = reinterpret_cast<const unsigned char*>(m.data());
        const auto n = static_cast<std::size_t>(m.size()) * sizeof(cplx);
        for (std::size_t i = 0; i < n; ++i) {
            h_ ^= bytes[i];
            h_ *= 0x100000001b3ULL;
        }
    }
    std::string hex() const {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h_));
        return buf;
    }

private:
    std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

Method schedule_kind(Method m) { return m == Method::two_stage ? Method::two_stage : Method::e_als; }

std::size_t method_rank(const ExperimentConfig& cfg, Method m) {
    return static_cast<std::size_t>(std::find(cfg.estimators.begin(), cfg.estimators.end(), m) -
                                    cfg.estimators.begin());
}

std::vector<TrialRecord> run_trial(const ExperimentConfig& cfg, const std::map<Method, TrainingSchedule>& schedules,
                                   std::size_t snr_index, int trial) {
    const auto master = cfg.master_seed;
    const auto s = static_cast<std::uint64_t>(snr_index);
    const auto t = static_cast<std::uint64_t>(trial);
    SystemConfig sys = cfg.system;
    sys.snr_db = cfg.snr_grid_db[snr_index];

    Rng geometry(cfg.channel.fixed_geometry
                     ? derive_seed({master, static_cast<std::uint64_t>(Stream::geometry)})
                     : derive_seed({master, s, t, static_cast<std::uint64_t>(Stream::geometry)}));
    Rng fading(derive_seed({master, s, t, static_cast<std::uint64_t>(Stream::fading)}));
    Rng noise_rng(derive_seed({master, s, t, static_cast<std::uint64_t>(Stream::noise)}));
    const std::uint64_t init_seed =
        derive_seed({master, cfg.estimator.init_seed, s, t, static_cast<std::uint64_t>(Stream::init)});

    const ChannelSet channels = draw_channels(cfg.channel, sys, geometry, fading);
    Eigen::Index slots = 0;
    for (const auto& [kind, sched] : schedules) slots = std::max(slots, sched.training_length());
    const CMatrix noise = draw_noise(sys.M, slots, sys.noise_power, noise_rng);

    Fnv1a hash;
    hash.add(channels.h_ua);
    hash.add(channels.h_ra);
    hash.add(channels.h_ur);
    hash.add(noise);
    const std::string channel_hash = hash.hex();

    EstimatorConfig est_cfg = cfg.estimator;
    est_cfg.track_residuals = true;

    std::vector<TrialRecord> out;
    for (Method m : cfg.estimators) {
        const TrainingSchedule& sched = schedules.at(schedule_kind(m));
        const ReceiveTensor recv = synthesize(channels, sched, noise);
        Rng init(init_seed);

        TrialRecord r;
        r.snr_index = snr_index;
        r.snr_db = sys.snr_db;
        r.trial_index = trial;
        r.estimator = m;
        r.channel_hash = channel_hash;

        const auto t0 = std::chrono::steady_clock::now();
        if (m == Method::ls) {
            const ParameterEstimate est = ls_baseline(recv, sched, est_cfg);
            r.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            r.empirical_ops = est.ops.macs;
            r.failure_flag = est.failed;
            if (!est.failed) r.nmse_aggregate = aggregate_vector_nmse(est, channels);
            r.converged = !est.failed;
        } else {
            const ChannelEstimate est = m == Method::two_stage ? two_stage_estimate(recv, sched, est_cfg, init)
                                                               : e_als_estimate(recv, sched, est_cfg, init);
            r.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            r.empirical_ops = est.ops.macs;
            r.iterations = est.iterations;
            r.converged = est.converged;
            r.failure_flag = est.failed;
            r.residual_violations = count_residual_increases(est.residuals);
            r.analytic_ops = complexity_formula(m, dimensions(sys, m)).total(static_cast<std::uint64_t>(est.iterations));
            if (!est.failed) {
                const ChannelEstimate resolved = resolve_scaling(est, channels);
                r.nmse_aggregate = aggregate_vector_nmse(est, channels);
                r.nmse_h_ua = nmse(*est.h_ua, channels.h_ua);
                r.nmse_h_ur = nmse(resolved.h_ur, channels.h_ur);
                r.nmse_h_ra = nmse(resolved.h_ra, channels.h_ra);
                r.nmse_cascade = cascade_nmse(est, channels);
            }
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt_real(*v) : std::string(); }

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_real(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

json config_json(const ExperimentConfig& cfg) {
    json estimators = json::array();
    for (Method m : cfg.estimators) estimators.push_back(std::string(method_name(m)));
    const auto& s = cfg.system;
    const auto& c = cfg.channel;
    const auto& e = cfg.estimator;
    auto link = [](const LinkGeometry& g) { return json{{"distance", g.distance_m}, {"exponent", g.exponent}}; };
    return json{
        {"system", {{"M", s.M}, {"K", s.K}, {"N", s.N}, {"L", s.L}, {"L_off", s.L_off}, {"noise_power", s.noise_power}}},
        {"channel",
         {{"num_paths", c.num_paths},
          {"spacing_ratio", c.spacing_ratio},
          {"pathloss_ref_db", c.pathloss_ref_db},
          {"ref_distance", c.ref_distance_m},
          {"ris_rows", c.ris_rows},
          {"ris_cols", c.ris_cols},
          {"fixed_geometry", c.fixed_geometry},
          {"links", {{"AR", link(c.ap_ris)}, {"UR", link(c.ue_ris)}, {"UA", link(c.ue_ap)}}}}},
        {"estimator",
         {{"max_iters", e.max_iters},
          {"conv_threshold", e.conv_threshold},
          {"pinv_tol", e.pinv_tol},
          {"init_seed", e.init_seed}}},
        {"experiment",
         {{"snr_grid_db", cfg.snr_grid_db},
          {"trials", cfg.trials},
          {"master_seed", cfg.master_seed},
          {"estimators", estimators}}},
        {"scaling_reference", "per-column first row of H_RA"}};
}

}  // namespace

int count_residual_increases(const std::vector<double>& residuals, double rel_slack, double abs_floor) {
    int violations = 0;
    for (std::size_t i = 1; i < residuals.size(); ++i) {
        if (residuals[i] > residuals[i - 1] * (1.0 + rel_slack) + abs_floor) ++violations;
    }
    return violations;
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::size_t n_snr = cfg.snr_grid_db.size();
    const auto n_trials = static_cast<std::size_t>(cfg.trials);

    std::vector<std::map<Method, TrainingSchedule>> schedules(n_snr);
    for (std::size_t i = 0; i < n_snr; ++i) {
        SystemConfig sys = cfg.system;
        sys.snr_db = cfg.snr_grid_db[i];
        for (Method m : cfg.estimators) {
            const Method kind = schedule_kind(m);
            if (!schedules[i].contains(kind)) schedules[i].emplace(kind, make_schedule(sys, kind));
        }
    }

    const std::size_t tasks = n_snr * n_trials;
    std::vector<std::vector<TrialRecord>> results(tasks);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t task = next.fetch_add(1);
            if (task >= tasks) return;
            try {
                const std::size_t snr = task / n_trials;
                results[task] = run_trial(cfg, schedules[snr], snr, static_cast<int>(task % n_trials));
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(tasks);
                return;
            }
        }
    };

    const auto n_workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.workers), tasks);
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);

    std::vector<TrialRecord> records;
    records.reserve(tasks * cfg.estimators.size());
    for (auto& r : results) std::move(r.begin(), r.end(), std::back_inserter(records));
    std::stable_sort(records.begin(), records.end(), [&](const TrialRecord& a, const TrialRecord& b) {
        if (a.snr_index != b.snr_index) return a.snr_index < b.snr_index;
        if (a.trial_index != b.trial_index) return a.trial_index < b.trial_index;
        return method_rank(cfg, a.estimator) < method_rank(cfg, b.estimator);
    });
    return records;
}

std::vector<Aggregate> summarize(const std::vector<TrialRecord>& records, const ExperimentConfig& cfg) {
    struct Acc {
        std::size_t trials = 0, failures = 0, converged = 0;
        int violations = 0;
        RunningStats agg, ua, ur, ra, cascade, iters, wall, ops;
    };
    std::map<std::pair<std::size_t, std::size_t>, Acc> acc;  // (method rank, snr index)
    std::map<std::size_t, double> snr_of;
    for (const auto& r : records) {
        auto& a = acc[{method_rank(cfg, r.estimator), r.snr_index}];
        snr_of[r.snr_index] = r.snr_db;
        ++a.trials;
        a.violations += r.residual_violations;
        if (r.failure_flag) {
            ++a.failures;
            continue;
        }
        if (r.converged) ++a.converged;
        if (r.nmse_aggregate) a.agg.add(*r.nmse_aggregate);
        if (r.nmse_h_ua) a.ua.add(*r.nmse_h_ua);
        if (r.nmse_h_ur) a.ur.add(*r.nmse_h_ur);
        if (r.nmse_h_ra) a.ra.add(*r.nmse_h_ra);
        if (r.nmse_cascade) a.cascade.add(*r.nmse_cascade);
        if (r.analytic_ops) a.ops.add(static_cast<double>(*r.analytic_ops));
        a.iters.add(r.iterations);
        a.wall.add(r.wall_time_seconds);
    }
    auto opt_mean = [](const RunningStats& s) { return s.count() ? std::optional<double>(s.mean()) : std::nullopt; };
    std::vector<Aggregate> out;
    for (const auto& [key, a] : acc) {
        Aggregate g;
        g.estimator = cfg.estimators.at(key.first);
        g.snr_db = snr_of[key.second];
        g.trials = a.trials;
        g.failures = a.failures;
        g.mean_nmse_aggregate = a.agg.mean();
        g.median_nmse_aggregate = a.agg.median();
        g.mean_nmse_h_ua = opt_mean(a.ua);
        g.mean_nmse_h_ur = opt_mean(a.ur);
        g.mean_nmse_h_ra = opt_mean(a.ra);
        g.mean_nmse_cascade = opt_mean(a.cascade);
        g.mean_iterations = a.iters.mean();
        const std::size_t ok = a.trials - a.failures;
        g.converged_fraction = ok ? static_cast<double>(a.converged) / static_cast<double>(ok) : 0.0;
        g.mean_wall_time_seconds = a.wall.mean();
        g.mean_analytic_ops = opt_mean(a.ops);
        g.residual_violations = a.violations;
        out.push_back(g);
    }
    return out;
}

std::string records_to_csv(const std::vector<TrialRecord>& records) {
    std::ostringstream os;
    os << "snr_db,trial_index,estimator,channel_hash,nmse_aggregate,nmse_h_ua,nmse_h_ur,nmse_h_ra,nmse_cascade,"
          "iterations,converged,analytic_ops,empirical_ops,residual_violations,failure_flag,wall_time_seconds\n";
    for (const auto& r : records) {
        os << fmt_real(r.snr_db) << ',' << r.trial_index << ',' << method_name(r.estimator) << ',' << r.channel_hash
           << ',' << fmt_opt(r.nmse_aggregate) << ',' << fmt_opt(r.nmse_h_ua) << ',' << fmt_opt(r.nmse_h_ur) << ','
           << fmt_opt(r.nmse_h_ra) << ',' << fmt_opt(r.nmse_cascade) << ',' << r.iterations << ','
           << (r.converged ? 1 : 0) << ',' << (r.analytic_ops ? std::to_string(*r.analytic_ops) : std::string())
           << ',' << r.empirical_ops << ',' << r.residual_violations << ',' << (r.failure_flag ? 1 : 0) << ','
           << fmt_real(r.wall_time_seconds) << '\n';
    }
    return os.str();
}

std::string records_to_json(const std::vector<TrialRecord>& records, const ExperimentConfig& cfg) {
    json recs = json::array();
    for (const auto& r : records) {
        recs.push_back({{"snr_index", r.snr_index},
                        {"snr_db", r.snr_db},
                        {"trial_index", r.trial_index},
                        {"estimator", std::string(method_name(r.estimator))},
                        {"channel_hash", r.channel_hash},
                        {"nmse_aggregate", opt_json(r.nmse_aggregate)},
                        {"nmse_h_ua", opt_json(r.nmse_h_ua)},
                        {"nmse_h_ur", opt_json(r.nmse_h_ur)},
                        {"nmse_h_ra", opt_json(r.nmse_h_ra)},
                        {"nmse_cascade", opt_json(r.nmse_cascade)},
                        {"iterations", r.iterations},
                        {"converged", r.converged},
                        {"analytic_ops", r.analytic_ops ? json(*r.analytic_ops) : json(nullptr)},
                        {"empirical_ops", r.empirical_ops},
                        {"residual_violations", r.residual_violations},
                        {"failure_flag", r.failure_flag},
                        {"wall_time_seconds", r.wall_time_seconds}});
    }
    json aggs = json::array();
    for (const auto& a : summarize(records, cfg)) {
        aggs.push_back({{"estimator", std::string(method_name(a.estimator))},
                        {"snr_db", a.snr_db},
                        {"trials", a.trials},
                        {"failures", a.failures},
                        {"mean_nmse_aggregate", a.mean_nmse_aggregate},
                        {"median_nmse_aggregate", a.median_nmse_aggregate},
                        {"mean_nmse_h_ua", opt_json(a.mean_nmse_h_ua)},
                        {"mean_nmse_h_ur", opt_json(a.mean_nmse_h_ur)},
                        {"mean_nmse_h_ra", opt_json(a.mean_nmse_h_ra)},
                        {"mean_nmse_cascade", opt_json(a.mean_nmse_cascade)},
                        {"mean_iterations", a.mean_iterations},
                        {"converged_fraction", a.converged_fraction},
                        {"mean_wall_time_seconds", a.mean_wall_time_seconds},
                        {"mean_analytic_ops", opt_json(a.mean_analytic_ops)},
                        {"residual_violations", a.residual_violations}});
    }
    json doc{{"config", config_json(cfg)}, {"records", recs}, {"aggregates", aggs}};
    return doc.dump(2) + "\n";
}

std::vector<TrialRecord> records_from_json(const std::string& text) {
    const json doc = json::parse(text);
    std::vector<TrialRecord> out;
    for (const auto& j : doc.at("records")) {
        TrialRecord r;
        r.snr_index = j.at("snr_index").get<std::size_t>();
        r.snr_db = j.at("snr_db").get<double>();
        r.trial_index = j.at("trial_index").get<int>();
        r.estimator = method_from_name(j.at("estimator").get<std::string>());
        r.channel_hash = j.at("channel_hash").get<std::string>();
        r.nmse_aggregate = opt_real(j.at("nmse_aggregate"));
        r.nmse_h_ua = opt_real(j.at("nmse_h_ua"));
        r.nmse_h_ur = opt_real(j.at("nmse_h_ur"));
        r.nmse_h_ra = opt_real(j.at("nmse_h_ra"));
        r.nmse_cascade = opt_real(j.at("nmse_cascade"));
        r.iterations = j.at("iterations").get<int>();
        r.converged = j.at("converged").get<bool>();
        if (!j.at("analytic_ops").is_null()) r.analytic_ops = j.at("analytic_ops").get<std::uint64_t>();
        r.empirical_ops = j.at("empirical_ops").get<std::uint64_t>();
        r.residual_violations = j.at("residual_violations").get<int>();
        r.failure_flag = j.at("failure_flag").get<bool>();
        r.wall_time_seconds = j.at("wall_time_seconds").get<double>();
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<Aggregate> emit_results(const std::vector<TrialRecord>& records, const std::string& path,
                                    OutputFormat format, const ExperimentConfig& cfg) {
    if (records.empty()) throw std::invalid_argument("emit_results: no records");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_results: cannot open '" + path + "' for writing");
    out << (format == OutputFormat::csv ? records_to_csv(records) : records_to_json(records, cfg));
    out.flush();
    if (!out) throw std::runtime_error("emit_results: write to '" + path + "' failed");
    return summarize(records, cfg);
}

std::string format_summary(const std::vector<Aggregate>& aggregates) {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line, "%-10s %8s %7s %12s %12s %12s %12s %12s %12s %7s %10s\n", "estimator", "snr_db",
                  "trials", "nmse_mean", "nmse_median", "h_ua", "h_ur", "h_ra", "cascade", "iters", "ops");
    os << line;
    auto cell = [](const std::optional<double>& v) {
        char b[32];
        if (v)
            std::snprintf(b, sizeof b, "%12.4e", *v);
        else
            std::snprintf(b, sizeof b, "%12s", "-");
        return std::string(b);
    };
    for (const auto& a : aggregates) {
        std::snprintf(line, sizeof line, "%-10s %8.2f %7zu %12.4e %12.4e %s %s %s %s %7.2f %10s\n",
                      std::string(method_name(a.estimator)).c_str(), a.snr_db, a.trials - a.failures,
                      a.mean_nmse_aggregate, a.median_nmse_aggregate, cell(a.mean_nmse_h_ua).c_str(),
                      cell(a.mean_nmse_h_ur).c_str(), cell(a.mean_nmse_h_ra).c_str(),
                      cell(a.mean_nmse_cascade).c_str(), a.mean_iterations,
                      a.mean_analytic_ops ? std::to_string(static_cast<std::uint64_t>(*a.mean_analytic_ops)).c_str()
                                          : "-");
        os << line;
    }
    return os.str();
}

}  // namespace risce
