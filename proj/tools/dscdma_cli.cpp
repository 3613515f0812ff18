#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dscdma/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitIoError = 2;

struct SimulateArgs {
    std::optional<std::string> config_path;
    // key/value overrides collected in the order the keys are applied
    std::vector<std::pair<std::string, std::string>> overrides;
    std::optional<double> snr_start, snr_stop, snr_step;
    std::optional<std::string> plot_path;
    std::string plot_metric = "ber";
};

int run_simulate(const SimulateArgs& args) {
    dscdma::ExperimentConfig config;
    if (args.config_path) {
        config = dscdma::load_config(*args.config_path);
    }
    for (const auto& [key, value] : args.overrides) {
        dscdma::apply_config_key(config, key, value);
    }
    if (args.snr_start || args.snr_stop || args.snr_step) {
        if (!(args.snr_start && args.snr_stop && args.snr_step)) {
            throw std::invalid_argument("--snr-start, --snr-stop and --snr-step go together");
        }
        if (*args.snr_step <= 0.0 || *args.snr_stop < *args.snr_start) {
            throw std::invalid_argument("need snr-step > 0 and snr-stop >= snr-start");
        }
        config.snr_grid_db.clear();
        for (double s = *args.snr_start; s <= *args.snr_stop + 1e-9; s += *args.snr_step) {
            config.snr_grid_db.push_back(s);
        }
    }
    dscdma::validate_config(config);
    if (args.plot_path) {
        dscdma::svg_string({}, args.plot_metric);  // reject bad metrics up front
    }

    const auto rows = dscdma::run_sweep(config);
    std::printf("%-8s %-6s %-10s %12s %12s %12s %12s\n", "snr_db", "det", "channel", "ber",
                "pee", "amp_mae", "delay_err");
    for (const auto& r : rows) {
        std::printf("%-8g %-6s %-10s %12.6g %12.6g %12.6g %12.6g\n", r.snr_db,
                    dscdma::to_string(r.detector), dscdma::to_string(r.channel_mode), r.ber,
                    r.pee, r.amp_mae, r.delay_error_rate);
    }

    dscdma::emit_csv(rows, config.output_path);
    std::printf("wrote %s (%zu rows)\n", config.output_path.c_str(), rows.size());
    if (args.plot_path) {
        dscdma::emit_plot(rows, args.plot_metric, *args.plot_path);
        std::printf("wrote %s (metric %s)\n", args.plot_path->c_str(), args.plot_metric.c_str());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Asynchronous DS-CDMA uplink simulator: joint delay/amplitude channel "
                 "estimation with successive interference cancellation detection"};
    app.require_subcommand(1);

    SimulateArgs args;
    auto* sim = app.add_subcommand("simulate", "Run a Monte Carlo SNR sweep and emit CSV/SVG");

    sim->add_option("--config", args.config_path, "flat key=value config file");

    // Every config key is also a flag; the interface names below are aliases.
    const std::vector<std::pair<std::string, std::string>> string_keys = {
        {"--users,--k_users", "k_users"},
        {"--n-bits,--n_bits", "n_bits"},
        {"--ns", "ns"},
        {"--trials", "trials"},
        {"--seed,--master_seed", "master_seed"},
        {"--snr-grid,--snr_grid_db", "snr_grid_db"},
        {"--detectors", "detectors"},
        {"--channel,--channel_mode", "channel_mode"},
        {"--near-far,--amplitude_profile_db", "amplitude_profile_db"},
        {"--delay-mode,--delay_mode", "delay_mode"},
        {"--code-taps,--code_taps", "code_taps"},
        {"--code-indices,--code_indices", "code_indices"},
        {"--out,--output_path", "output_path"},
        {"--threads", "threads"},
        {"--nc", "nc"},
    };
    for (std::size_t i = 0; i < string_keys.size(); ++i) {
        const std::string key = string_keys[i].second;
        sim->add_option_function<std::string>(
            string_keys[i].first,
            [&args, key](const std::string& value) { args.overrides.emplace_back(key, value); },
            "config key " + key);
    }

    sim->add_option("--snr-start", args.snr_start, "sweep start (dB)");
    sim->add_option("--snr-stop", args.snr_stop, "sweep stop (dB), inclusive");
    sim->add_option("--snr-step", args.snr_step, "sweep step (dB)");
    sim->add_option("--plot", args.plot_path, "write an SVG curve file");
    sim->add_option("--metric", args.plot_metric, "plot metric (default ber)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfigError;
    }

    try {
        return run_simulate(args);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return kExitConfigError;
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return kExitIoError;
    }
}
