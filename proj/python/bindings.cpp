#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>

#include "dscdma/detection.hpp"
#include "dscdma/estimation.hpp"
#include "dscdma/harness.hpp"
#include "dscdma/metrics.hpp"

namespace py = pybind11;
using namespace dscdma;

namespace {

std::vector<std::vector<int>> bits_to_lists(int k_users, int n_bits,
                                            const std::vector<std::int8_t>& bits) {
    std::vector<std::vector<int>> out(k_users, std::vector<int>(n_bits));
    for (int k = 0; k < k_users; ++k) {
        for (int i = 0; i < n_bits; ++i) {
            out[k][i] = bits[static_cast<std::size_t>(k) * n_bits + i];
        }
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_dscdma, m) {
    m.doc() = "Asynchronous DS-CDMA uplink simulator: Gold codes, joint delay/amplitude "
              "channel estimation, and SIC multiuser detection";

    // --- codes ---
    py::class_<SpreadingCode>(m, "SpreadingCode")
        .def(py::init<>())
        .def_readonly("chips", &SpreadingCode::chips)
        .def_property_readonly("nc", &SpreadingCode::nc);

    py::class_<CorrelationSet>(m, "CorrelationSet")
        .def_readonly("r_minus", &CorrelationSet::r_minus)
        .def_readonly("r_zero", &CorrelationSet::r_zero)
        .def_readonly("r_plus", &CorrelationSet::r_plus)
        .def_readonly("delays", &CorrelationSet::delays);

    m.def("generate_m_sequence", &generate_m_sequence, py::arg("taps"), py::arg("seed") = 1);
    m.def("generate_gold_family", &generate_gold_family, py::arg("taps_a"), py::arg("taps_b"));
    m.def("build_signature", &build_signature, py::arg("code_bits"));
    m.def("cross_correlation_matrices", &cross_correlation_matrices, py::arg("codes"),
          py::arg("delays"));

    // --- signal ---
    py::class_<UserProfile>(m, "UserProfile")
        .def(py::init([](int index, double amplitude, int delay_chips, const SpreadingCode& c) {
                 return UserProfile{index, amplitude, delay_chips, c};
             }),
             py::arg("index"), py::arg("amplitude"), py::arg("delay_chips"), py::arg("code"))
        .def_readwrite("index", &UserProfile::index)
        .def_readwrite("amplitude", &UserProfile::amplitude)
        .def_readwrite("delay_chips", &UserProfile::delay_chips)
        .def_readwrite("code", &UserProfile::code);

    py::class_<BitFrame>(m, "BitFrame")
        .def_readonly("k_users", &BitFrame::k_users)
        .def_readonly("n_bits", &BitFrame::n_bits)
        .def("at", &BitFrame::at, py::arg("k"), py::arg("i"))
        .def_property_readonly("bits", [](const BitFrame& f) {
            return bits_to_lists(f.k_users, f.n_bits, f.bits);
        });

    py::class_<SampledSignal>(m, "SampledSignal")
        .def(py::init([](std::vector<double> samples, int ns) {
                 return SampledSignal{std::move(samples), ns};
             }),
             py::arg("samples"), py::arg("ns") = 1)
        .def_readonly("samples", &SampledSignal::samples)
        .def_readonly("ns", &SampledSignal::ns);

    m.def("frame_samples", &frame_samples, py::arg("n_bits"), py::arg("nc"), py::arg("ns"));
    m.def(
        "generate_bit_frame",
        [](int k_users, int n_bits, std::uint64_t seed) {
            std::mt19937_64 rng(seed);
            return generate_bit_frame(k_users, n_bits, rng);
        },
        py::arg("k_users"), py::arg("n_bits"), py::arg("seed"));
    m.def(
        "modulate_user",
        [](const UserProfile& profile, const std::vector<int>& bits, int ns,
           std::size_t frame_len) {
            std::vector<std::int8_t> b(bits.begin(), bits.end());
            return modulate_user(profile, b, ns, frame_len);
        },
        py::arg("profile"), py::arg("bits"), py::arg("ns"), py::arg("frame_len"));
    m.def("superpose", &superpose, py::arg("signals"));
    m.def(
        "add_awgn",
        [](const SampledSignal& s, double sigma, std::uint64_t seed) {
            return add_awgn(s, {sigma, seed});
        },
        py::arg("signal"), py::arg("sigma"), py::arg("seed"));
    m.def("snr_to_sigma", &snr_to_sigma, py::arg("snr_db"), py::arg("a_ref"));

    // --- estimation ---
    py::class_<ChannelEstimate>(m, "ChannelEstimate")
        .def(py::init([](std::vector<double> amps, std::vector<int> delays) {
                 return ChannelEstimate{std::move(amps), std::move(delays)};
             }),
             py::arg("amplitudes"), py::arg("delays"))
        .def_readwrite("amplitudes", &ChannelEstimate::amplitudes)
        .def_readwrite("delays", &ChannelEstimate::delays);

    py::class_<PilotWindow>(m, "PilotWindow")
        .def_readonly("chip_rate", &PilotWindow::chip_rate)
        .def_readonly("oversampled", &PilotWindow::oversampled)
        .def_readonly("ns", &PilotWindow::ns);

    py::enum_<AmplitudePosition>(m, "AmplitudePosition")
        .value("first", AmplitudePosition::first)
        .value("middle", AmplitudePosition::middle)
        .value("last", AmplitudePosition::last);

    m.def("extract_pilot_window", &extract_pilot_window, py::arg("received"), py::arg("nc"));
    m.def(
        "estimate_delay",
        [](const std::vector<double>& residual, const SpreadingCode& code) {
            return estimate_delay(residual, code);
        },
        py::arg("residual_chip_rate"), py::arg("code"));
    m.def("cancel_user", &cancel_user, py::arg("window"), py::arg("amp"), py::arg("delay"),
          py::arg("code"));
    m.def("estimate_amplitude", &estimate_amplitude, py::arg("window"), py::arg("delay"),
          py::arg("code"), py::arg("position"));
    m.def("estimate_channel", &estimate_channel, py::arg("received"), py::arg("codes"));
    m.def("estimate_channel_known_delays", &estimate_channel_known_delays, py::arg("received"),
          py::arg("codes"), py::arg("delays"));

    // --- detection ---
    py::class_<DetectionResult>(m, "DetectionResult")
        .def_readonly("k_users", &DetectionResult::k_users)
        .def_readonly("n_bits", &DetectionResult::n_bits)
        .def("at", &DetectionResult::at, py::arg("k"), py::arg("i"))
        .def_property_readonly("decisions", [](const DetectionResult& r) {
            return bits_to_lists(r.k_users, r.n_bits, r.decisions);
        });

    m.def("matched_filter_output", &matched_filter_output, py::arg("received"), py::arg("code"),
          py::arg("delay"), py::arg("bit_index"));
    m.def("conventional_detect", &conventional_detect, py::arg("received"), py::arg("codes"),
          py::arg("est"), py::arg("n_bits"));
    m.def("matrix_model_outputs", &matrix_model_outputs, py::arg("corr"), py::arg("amplitudes"),
          py::arg("frame"));
    m.def(
        "sic_detect",
        [](const SampledSignal& r, const std::vector<SpreadingCode>& codes,
           const ChannelEstimate& est, int n_bits) { return sic_detect(r, codes, est, n_bits); },
        py::arg("received"), py::arg("codes"), py::arg("est"), py::arg("n_bits"));
    m.def(
        "sic_mf_detect",
        [](const SampledSignal& r, const std::vector<SpreadingCode>& codes,
           const ChannelEstimate& est, int n_bits) {
            return sic_mf_detect(r, codes, est, n_bits);
        },
        py::arg("received"), py::arg("codes"), py::arg("est"), py::arg("n_bits"));

    // --- metrics ---
    m.def(
        "power_estimation_error",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            return power_estimation_error(a, b);
        },
        py::arg("true_amps"), py::arg("est_amps"));
    m.def(
        "amplitude_abs_error",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            return amplitude_abs_error(a, b);
        },
        py::arg("true_amps"), py::arg("est_amps"));
    m.def(
        "delay_error_rate",
        [](const std::vector<int>& a, const std::vector<int>& b) {
            return delay_error_rate(a, b);
        },
        py::arg("true_delays"), py::arg("est_delays"));
    m.def(
        "bit_error_rate",
        [](const BitFrame& tx, const DetectionResult& rx, bool skip_pilots) {
            const auto r = bit_error_rate(tx, rx, skip_pilots);
            return py::make_tuple(r.errors, r.rate);
        },
        py::arg("tx"), py::arg("rx"), py::arg("skip_pilots") = true);

    // --- harness ---
    py::enum_<Detector>(m, "Detector")
        .value("mf", Detector::mf)
        .value("sic", Detector::sic)
        .value("sicmf", Detector::sicmf);
    py::enum_<ChannelMode>(m, "ChannelMode")
        .value("known", ChannelMode::known)
        .value("estimated", ChannelMode::estimated);
    py::enum_<DelayMode>(m, "DelayMode")
        .value("random_sorted", DelayMode::random_sorted)
        .value("fixed", DelayMode::fixed);

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("k_users", &ExperimentConfig::k_users)
        .def_readwrite("nc", &ExperimentConfig::nc)
        .def_readwrite("n_bits", &ExperimentConfig::n_bits)
        .def_readwrite("ns", &ExperimentConfig::ns)
        .def_readwrite("snr_grid_db", &ExperimentConfig::snr_grid_db)
        .def_readwrite("trials", &ExperimentConfig::trials)
        .def_readwrite("master_seed", &ExperimentConfig::master_seed)
        .def_readwrite("amplitude_profile_db", &ExperimentConfig::amplitude_profile_db)
        .def_readwrite("delay_mode", &ExperimentConfig::delay_mode)
        .def_readwrite("fixed_delays", &ExperimentConfig::fixed_delays)
        .def_readwrite("channel_mode", &ExperimentConfig::channel_mode)
        .def_readwrite("detectors", &ExperimentConfig::detectors)
        .def_readwrite("code_taps", &ExperimentConfig::code_taps)
        .def_readwrite("code_indices", &ExperimentConfig::code_indices)
        .def_readwrite("output_path", &ExperimentConfig::output_path)
        .def_readwrite("threads", &ExperimentConfig::threads);

    py::class_<TrialMetrics>(m, "TrialMetrics")
        .def_readonly("pee", &TrialMetrics::pee)
        .def_readonly("amp_mae", &TrialMetrics::amp_mae)
        .def_readonly("delay_errors", &TrialMetrics::delay_errors)
        .def_readonly("bit_errors", &TrialMetrics::bit_errors)
        .def_readonly("data_bits", &TrialMetrics::data_bits);

    py::class_<ResultRow>(m, "ResultRow")
        .def_readonly("snr_db", &ResultRow::snr_db)
        .def_readonly("detector", &ResultRow::detector)
        .def_readonly("channel_mode", &ResultRow::channel_mode)
        .def_readonly("ns", &ResultRow::ns)
        .def_readonly("ber", &ResultRow::ber)
        .def_readonly("ber_ci95_low", &ResultRow::ber_ci95_low)
        .def_readonly("ber_ci95_high", &ResultRow::ber_ci95_high)
        .def_readonly("pee", &ResultRow::pee)
        .def_readonly("amp_mae", &ResultRow::amp_mae)
        .def_readonly("delay_error_rate", &ResultRow::delay_error_rate)
        .def_readonly("trials", &ResultRow::trials)
        .def_readonly("master_seed", &ResultRow::master_seed);

    m.def("validate_config", &validate_config, py::arg("config"));
    m.def("mix_seed", &mix_seed, py::arg("master_seed"), py::arg("snr_db"),
          py::arg("trial_index"));
    m.def("run_trial", &run_trial, py::arg("config"), py::arg("snr_db"), py::arg("trial_index"));
    m.def("run_sweep", &run_sweep, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("csv_string", &csv_string, py::arg("rows"));
    m.def("emit_csv", &emit_csv, py::arg("rows"), py::arg("path"));
    m.def("svg_string", &svg_string, py::arg("rows"), py::arg("metric"));
    m.def("emit_plot", &emit_plot, py::arg("rows"), py::arg("metric"), py::arg("path"));
    m.def("load_config", &load_config, py::arg("path"));
    m.def("apply_config_key", &apply_config_key, py::arg("config"), py::arg("key"),
          py::arg("value"));
}
