#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dscdma/metrics.hpp"

namespace dscdma {

enum class Detector { mf, sic, sicmf };
enum class ChannelMode { known, estimated };
enum class DelayMode { random_sorted, fixed };

const char* to_string(Detector d);
const char* to_string(ChannelMode m);

struct ExperimentConfig {
    int k_users = 4;
    int nc = 32;  // 31-chip Gold code extended by one chip
    int n_bits = 52;
    int ns = 1;
    std::vector<double> snr_grid_db{0, 4, 8, 12, 16};
    int trials = 500;
    std::uint64_t master_seed = 1;
    std::vector<double> amplitude_profile_db;  // empty means equal amplitudes
    DelayMode delay_mode = DelayMode::random_sorted;
    std::vector<int> fixed_delays;
    ChannelMode channel_mode = ChannelMode::estimated;
    std::vector<Detector> detectors{Detector::mf, Detector::sic, Detector::sicmf};
    std::pair<unsigned, unsigned> code_taps{045, 075};
    std::vector<int> code_indices;  // empty means first k_users family members
    std::string output_path = "results.csv";
    int threads = 1;
};

/// Rejects invalid configurations (throws std::invalid_argument).
void validate_config(const ExperimentConfig& config);

/// One aggregated sweep point.
struct ResultRow {
    double snr_db = 0.0;
    Detector detector = Detector::mf;
    ChannelMode channel_mode = ChannelMode::estimated;
    int ns = 1;
    double ber = 0.0;
    double ber_ci95_low = 0.0;
    double ber_ci95_high = 0.0;
    double pee = 0.0;
    double amp_mae = 0.0;
    double delay_error_rate = 0.0;
    long long trials = 0;
    std::uint64_t master_seed = 0;
};

/// Trial-local seed derived from the master seed, the SNR value and the
/// trial index, so that reruns and parallel execution reproduce bit-exactly
/// and different detector or channel-mode settings see identical channels.
std::uint64_t mix_seed(std::uint64_t master_seed, double snr_db, long long trial_index);

/// The harness delay protocol: k distinct chips drawn uniformly, sorted
/// ascending, shifted so the earliest delay is 0.
std::vector<int> draw_delays(int k_users, int nc, std::mt19937_64& rng);

/// Linear amplitudes from the configured dB profile (all ones when empty).
std::vector<double> profile_amplitudes(const ExperimentConfig& config);

/// User signatures for the configured Gold pair and code assignment.
std::vector<SpreadingCode> build_user_codes(const ExperimentConfig& config);

/// Runs one end-to-end trial (frame -> channel -> estimation -> detection)
/// and returns the metrics of every configured detector.
std::vector<std::pair<Detector, TrialMetrics>> run_trial(const ExperimentConfig& config,
                                                         double snr_db, long long trial_index);

/// Monte Carlo sweep over the SNR grid; rows sorted by (detector, snr).
/// Trials may run on config.threads workers; aggregation is a deterministic
/// reduction over trial indices.
std::vector<ResultRow> run_sweep(const ExperimentConfig& config);

/// CSV rendering with full round-trip precision.
std::string csv_string(const std::vector<ResultRow>& rows);
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);

/// Names accepted by emit_plot.
std::vector<std::string> plot_metrics();

/// Standalone SVG line plot, metric vs SNR on a log-scale y axis, one curve
/// per (detector, channel mode) group.
std::string svg_string(const std::vector<ResultRow>& rows, const std::string& metric);
void emit_plot(const std::vector<ResultRow>& rows, const std::string& metric,
               const std::string& path);

/// Flat key=value config file; '#' starts a comment. Unknown keys are
/// rejected.
ExperimentConfig load_config(const std::string& path);

/// Applies one key=value pair onto a config (same keys as the file format).
void apply_config_key(ExperimentConfig& config, const std::string& key,
                      const std::string& value);

}  // namespace dscdma
