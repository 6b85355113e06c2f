#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "risce/channel_model.hpp"
#include "risce/config.hpp"
#include "risce/errors.hpp"
#include "risce/estimators.hpp"
#include "risce/harness.hpp"
#include "risce/metrics.hpp"
#include "risce/signal_model.hpp"
#include "risce/tensor_core.hpp"

namespace py = pybind11;
using namespace risce;

namespace {

py::dict record_dict(const TrialRecord& r) {
    py::dict d;
    d["snr_db"] = r.snr_db;
    d["trial_index"] = r.trial_index;
    d["estimator"] = std::string(method_name(r.estimator));
    d["channel_hash"] = r.channel_hash;
    d["nmse_aggregate"] = r.nmse_aggregate;
    d["nmse_h_ua"] = r.nmse_h_ua;
    d["nmse_h_ur"] = r.nmse_h_ur;
    d["nmse_h_ra"] = r.nmse_h_ra;
    d["nmse_cascade"] = r.nmse_cascade;
    d["iterations"] = r.iterations;
    d["converged"] = r.converged;
    d["analytic_ops"] = r.analytic_ops;
    d["empirical_ops"] = r.empirical_ops;
    d["residual_violations"] = r.residual_violations;
    d["failure_flag"] = r.failure_flag;
    d["wall_time_seconds"] = r.wall_time_seconds;
    return d;
}

}  // namespace

PYBIND11_MODULE(_risce, m) {
    m.doc() = "Tensor-based channel estimation for RIS-assisted MIMO uplink";

    py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<SingularityError>(m, "SingularityError", PyExc_ArithmeticError);

    py::enum_<Method>(m, "Method")
        .value("two_stage", Method::two_stage)
        .value("e_als", Method::e_als)
        .value("ls", Method::ls);

    // tensor_core
    m.def("khatri_rao", [](const CMatrix& a, const CMatrix& b) { return khatri_rao(a, b); });
    m.def("kronecker", &kronecker);
    m.def("dft_matrix", &dft_matrix, py::arg("n"));
    m.def("pinv_right", [](const CMatrix& a, double tol) { return pinv_right(a, tol); }, py::arg("a"),
          py::arg("tol") = kDefaultPinvTol);
    m.def("pinv_left", [](const CMatrix& a, double tol) { return pinv_left(a, tol); }, py::arg("a"),
          py::arg("tol") = kDefaultPinvTol);

    py::class_<SystemConfig>(m, "SystemConfig")
        .def(py::init<>())
        .def_readwrite("M", &SystemConfig::M)
        .def_readwrite("K", &SystemConfig::K)
        .def_readwrite("N", &SystemConfig::N)
        .def_readwrite("L", &SystemConfig::L)
        .def_readwrite("L_off", &SystemConfig::L_off)
        .def_readwrite("noise_power", &SystemConfig::noise_power)
        .def_readwrite("snr_db", &SystemConfig::snr_db)
        .def("tx_power", &SystemConfig::tx_power)
        .def("blocks", &SystemConfig::blocks)
        .def("training_length", &SystemConfig::training_length);

    py::class_<ChannelModelConfig>(m, "ChannelModelConfig")
        .def(py::init<>())
        .def_readwrite("num_paths", &ChannelModelConfig::num_paths)
        .def_readwrite("spacing_ratio", &ChannelModelConfig::spacing_ratio)
        .def_readwrite("pathloss_ref_db", &ChannelModelConfig::pathloss_ref_db)
        .def_readwrite("ris_rows", &ChannelModelConfig::ris_rows)
        .def_readwrite("ris_cols", &ChannelModelConfig::ris_cols);

    py::class_<ChannelSet>(m, "ChannelSet")
        .def(py::init<>())
        .def_readwrite("h_ua", &ChannelSet::h_ua)
        .def_readwrite("h_ra", &ChannelSet::h_ra)
        .def_readwrite("h_ur", &ChannelSet::h_ur);

    m.def("steer_ula", &steer_ula, py::arg("m"), py::arg("theta"), py::arg("spacing_ratio") = 0.5);
    m.def("steer_ura", &steer_ura, py::arg("rows"), py::arg("cols"), py::arg("theta"), py::arg("psi"),
          py::arg("spacing_ratio") = 0.5);
    m.def("pathloss_db", [](const ChannelModelConfig& c, const std::string& link) {
        return pathloss_db(c, link_from_name(link));
    });
    m.def(
        "draw_channels",
        [](const ChannelModelConfig& c, const SystemConfig& s, std::uint64_t seed) {
            Rng rng(seed);
            return draw_channels(c, s, rng);
        },
        py::arg("channel"), py::arg("system"), py::arg("seed"));

    // signal_model
    py::class_<TrainingSchedule>(m, "TrainingSchedule")
        .def_readonly("pilots", &TrainingSchedule::pilots)
        .def_readonly("phases", &TrainingSchedule::phases)
        .def_readonly("off_pilots", &TrainingSchedule::off_pilots)
        .def("training_length", &TrainingSchedule::training_length);
    py::class_<ReceiveTensor>(m, "ReceiveTensor")
        .def_property_readonly("slices", [](const ReceiveTensor& r) { return r.tensor.slices(); })
        .def_readonly("off_stage", &ReceiveTensor::off_stage);

    m.def("make_pilots", &make_pilots, py::arg("K"), py::arg("L"), py::arg("power"));
    m.def("make_phase_schedule", &make_phase_schedule, py::arg("N"), py::arg("mode"));
    m.def("make_schedule", &make_schedule, py::arg("system"), py::arg("mode"));
    m.def(
        "synthesize",
        [](const ChannelSet& ch, const TrainingSchedule& s, double noise_power, std::uint64_t seed) {
            Rng rng(seed);
            return synthesize(ch, s, noise_power, rng);
        },
        py::arg("channels"), py::arg("schedule"), py::arg("noise_power"), py::arg("seed"));

    // estimators
    py::class_<EstimatorConfig>(m, "EstimatorConfig")
        .def(py::init<>())
        .def_readwrite("max_iters", &EstimatorConfig::max_iters)
        .def_readwrite("conv_threshold", &EstimatorConfig::conv_threshold)
        .def_readwrite("pinv_tol", &EstimatorConfig::pinv_tol)
        .def_readwrite("track_residuals", &EstimatorConfig::track_residuals);
    py::class_<ChannelEstimate>(m, "ChannelEstimate")
        .def_readonly("h_ua", &ChannelEstimate::h_ua)
        .def_readonly("h_ur", &ChannelEstimate::h_ur)
        .def_readonly("h_ra", &ChannelEstimate::h_ra)
        .def_readonly("iterations", &ChannelEstimate::iterations)
        .def_readonly("converged", &ChannelEstimate::converged)
        .def_readonly("residuals", &ChannelEstimate::residuals)
        .def_readonly("failed", &ChannelEstimate::failed)
        .def_readonly("failure", &ChannelEstimate::failure)
        .def_property_readonly("ops", [](const ChannelEstimate& e) { return e.ops.macs; });
    py::class_<ParameterEstimate>(m, "ParameterEstimate")
        .def_readonly("h_ua", &ParameterEstimate::h_ua)
        .def_readonly("g", &ParameterEstimate::g)
        .def_readonly("failed", &ParameterEstimate::failed);

    m.def(
        "two_stage_estimate",
        [](const ReceiveTensor& r, const TrainingSchedule& s, const EstimatorConfig& c, std::uint64_t seed) {
            Rng rng(seed);
            return two_stage_estimate(r, s, c, rng);
        },
        py::arg("received"), py::arg("schedule"), py::arg("config"), py::arg("seed") = 0);
    m.def(
        "e_als_estimate",
        [](const ReceiveTensor& r, const TrainingSchedule& s, const EstimatorConfig& c, std::uint64_t seed) {
            Rng rng(seed);
            return e_als_estimate(r, s, c, rng);
        },
        py::arg("received"), py::arg("schedule"), py::arg("config"), py::arg("seed") = 0);
    m.def("ls_baseline", &ls_baseline, py::arg("received"), py::arg("schedule"), py::arg("config"));
    m.def("resolve_scaling", &resolve_scaling, py::arg("estimate"), py::arg("truth"));

    // metrics
    m.def("nmse", &nmse, py::arg("h_hat"), py::arg("h"));
    m.def("aggregate_vector_nmse",
          py::overload_cast<const ChannelEstimate&, const ChannelSet&>(&aggregate_vector_nmse));
    m.def("aggregate_vector_nmse",
          py::overload_cast<const ParameterEstimate&, const ChannelSet&>(&aggregate_vector_nmse));
    m.def("cascade_nmse", &cascade_nmse);
    m.def(
        "complexity_formula",
        [](Method method, const SystemConfig& s) {
            const auto t = complexity_formula(method, dimensions(s, method));
            std::map<std::string, std::uint64_t> all = t.per_iteration;
            all.insert(t.one_time.begin(), t.one_time.end());
            return all;
        },
        py::arg("method"), py::arg("system"));

    // harness
    m.def(
        "run_experiment",
        [](const std::string& config_yaml) {
            const ExperimentConfig cfg = parse_config(config_yaml);
            py::list out;
            for (const auto& r : run_experiment(cfg)) out.append(record_dict(r));
            return out;
        },
        py::arg("config_yaml") = "", "Runs the experiment described by YAML text; returns one dict per record.");
    m.def(
        "run_experiment_csv", [](const std::string& config_yaml) {
            return records_to_csv(run_experiment(parse_config(config_yaml)));
        },
        py::arg("config_yaml") = "");
}
