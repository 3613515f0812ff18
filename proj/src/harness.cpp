#include "dscdma/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dscdma/detection.hpp"
#include "dscdma/estimation.hpp"

namespace dscdma {

const char* to_string(Detector d) {
    switch (d) {
        case Detector::mf: return "mf";
        case Detector::sic: return "sic";
        case Detector::sicmf: return "sicmf";
    }
    return "?";
}

const char* to_string(ChannelMode m) {
    return m == ChannelMode::known ? "known" : "estimated";
}

void validate_config(const ExperimentConfig& config) {
    if (config.nc != 32) {
        throw std::invalid_argument("spreading factor is fixed at 32 (31-chip Gold + 1)");
    }
    if (config.k_users < 1 || config.k_users > 33) {
        throw std::invalid_argument("user count must lie in [1, 33] (Gold family size)");
    }
    if (config.n_bits < 3) {
        throw std::invalid_argument("frame needs at least one data bit after the two pilots");
    }
    if (config.ns < 1) {
        throw std::invalid_argument("need at least one sample per chip");
    }
    if (config.trials < 1) {
        throw std::invalid_argument("need at least one trial");
    }
    if (config.threads < 1) {
        throw std::invalid_argument("need at least one worker thread");
    }
    if (config.detectors.empty()) {
        throw std::invalid_argument("no detectors configured");
    }
    if (!config.amplitude_profile_db.empty()) {
        if (config.amplitude_profile_db.size() != static_cast<std::size_t>(config.k_users)) {
            throw std::invalid_argument("amplitude profile length must equal the user count");
        }
        for (std::size_t k = 1; k < config.amplitude_profile_db.size(); ++k) {
            if (config.amplitude_profile_db[k] > config.amplitude_profile_db[k - 1]) {
                throw std::invalid_argument(
                    "amplitude profile must be sorted descending (strongest user first)");
            }
        }
    }
    if (config.delay_mode == DelayMode::fixed) {
        if (config.fixed_delays.size() != static_cast<std::size_t>(config.k_users)) {
            throw std::invalid_argument("fixed delays must list one delay per user");
        }
        for (std::size_t k = 0; k < config.fixed_delays.size(); ++k) {
            if (config.fixed_delays[k] < 0 || config.fixed_delays[k] >= config.nc) {
                throw std::invalid_argument("fixed delays must lie in [0, nc-1]");
            }
            if (k > 0 && config.fixed_delays[k] <= config.fixed_delays[k - 1]) {
                throw std::invalid_argument("fixed delays must be sorted ascending and distinct");
            }
        }
    }
    if (!config.code_indices.empty()) {
        if (config.code_indices.size() != static_cast<std::size_t>(config.k_users)) {
            throw std::invalid_argument("code assignment must list one index per user");
        }
        for (const int idx : config.code_indices) {
            if (idx < 0 || idx >= 33) {
                throw std::invalid_argument("code index must lie in [0, 32]");
            }
        }
    }
}

std::uint64_t mix_seed(std::uint64_t master_seed, double snr_db, long long trial_index) {
    const auto split = [](std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    };
    std::uint64_t s = split(master_seed);
    s = split(s ^ std::bit_cast<std::uint64_t>(snr_db));
    s = split(s ^ static_cast<std::uint64_t>(trial_index));
    return s;
}

std::vector<int> draw_delays(int k_users, int nc, std::mt19937_64& rng) {
    std::vector<int> pool(nc);
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < k_users; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng() % (nc - i));
        std::swap(pool[i], pool[j]);
    }
    std::vector<int> delays(pool.begin(), pool.begin() + k_users);
    std::sort(delays.begin(), delays.end());
    const int base = delays.front();
    for (auto& d : delays) {
        d -= base;
    }
    return delays;
}

std::vector<double> profile_amplitudes(const ExperimentConfig& config) {
    std::vector<double> amps(config.k_users, 1.0);
    for (std::size_t k = 0; k < config.amplitude_profile_db.size(); ++k) {
        amps[k] = std::pow(10.0, config.amplitude_profile_db[k] / 20.0);
    }
    return amps;
}

std::vector<SpreadingCode> build_user_codes(const ExperimentConfig& config) {
    const auto family = generate_gold_family(config.code_taps.first, config.code_taps.second);
    std::vector<SpreadingCode> codes;
    codes.reserve(config.k_users);
    for (int k = 0; k < config.k_users; ++k) {
        const int idx = config.code_indices.empty() ? k : config.code_indices[k];
        codes.push_back(build_signature(family.at(idx)));
    }
    return codes;
}

std::vector<std::pair<Detector, TrialMetrics>> run_trial(const ExperimentConfig& config,
                                                         double snr_db, long long trial_index) {
    validate_config(config);
    std::mt19937_64 rng(mix_seed(config.master_seed, snr_db, trial_index));

    const auto codes = build_user_codes(config);
    const auto amps = profile_amplitudes(config);
    const auto delays = (config.delay_mode == DelayMode::fixed)
                            ? config.fixed_delays
                            : draw_delays(config.k_users, config.nc, rng);

    const BitFrame frame = generate_bit_frame(config.k_users, config.n_bits, rng);
    const std::uint64_t noise_seed = rng();

    const std::size_t len = frame_samples(config.n_bits, config.nc, config.ns);
    std::vector<SampledSignal> per_user;
    per_user.reserve(config.k_users);
    for (int k = 0; k < config.k_users; ++k) {
        UserProfile profile{k + 1, amps[k], delays[k], codes[k]};
        per_user.push_back(modulate_user(profile, frame.row(k), config.ns, len));
    }
    const double a_ref = *std::max_element(amps.begin(), amps.end());
    const double sigma = snr_to_sigma(snr_db, a_ref);
    const SampledSignal received = add_awgn(superpose(per_user), {sigma, noise_seed});

    ChannelEstimate est;
    if (config.channel_mode == ChannelMode::estimated) {
        est = estimate_channel(received, codes);
    } else {
        est.amplitudes = amps;
        est.delays = delays;
    }

    TrialMetrics base;
    base.pee = power_estimation_error(amps, est.amplitudes);
    base.amp_mae = amplitude_abs_error(amps, est.amplitudes);
    base.delay_errors = 0;
    for (int k = 0; k < config.k_users; ++k) {
        if (est.delays[k] != delays[k]) {
            ++base.delay_errors;
        }
    }

    std::vector<std::pair<Detector, TrialMetrics>> out;
    out.reserve(config.detectors.size());
    for (const Detector det : config.detectors) {
        DetectionResult decisions;
        switch (det) {
            case Detector::mf:
                decisions = conventional_detect(received, codes, est, config.n_bits);
                break;
            case Detector::sic:
                decisions = sic_detect(received, codes, est, config.n_bits);
                break;
            case Detector::sicmf:
                decisions = sic_mf_detect(received, codes, est, config.n_bits);
                break;
        }
        const auto errors = bit_error_rate(frame, decisions, /*skip_pilots=*/true);
        TrialMetrics m = base;
        m.bit_errors = errors.errors;
        m.data_bits = static_cast<long long>(config.k_users) *
                      (config.n_bits - BitFrame::n_pilots);
        out.emplace_back(det, m);
    }
    return out;
}

namespace {

struct Accumulator {
    double pee_sum = 0.0;
    double mae_sum = 0.0;
    long long delay_errors = 0;
    long long bit_errors = 0;
    long long data_bits = 0;
};

}  // namespace

std::vector<ResultRow> run_sweep(const ExperimentConfig& config) {
    validate_config(config);
    std::vector<ResultRow> rows;

    for (const double snr_db : config.snr_grid_db) {
        using TrialResult = std::vector<std::pair<Detector, TrialMetrics>>;
        std::vector<TrialResult> results(config.trials);

        if (config.threads <= 1) {
            for (int t = 0; t < config.trials; ++t) {
                results[t] = run_trial(config, snr_db, t);
            }
        } else {
            std::atomic<int> next{0};
            auto worker = [&]() {
                for (int t = next.fetch_add(1); t < config.trials; t = next.fetch_add(1)) {
                    results[t] = run_trial(config, snr_db, t);
                }
            };
            std::vector<std::thread> pool;
            const int n_workers = std::min(config.threads, config.trials);
            pool.reserve(n_workers);
            for (int w = 0; w < n_workers; ++w) {
                pool.emplace_back(worker);
            }
            for (auto& th : pool) {
                th.join();
            }
        }

        // Deterministic reduction in trial order, keyed by detector.
        std::vector<Accumulator> acc(config.detectors.size());
        for (int t = 0; t < config.trials; ++t) {
            for (std::size_t d = 0; d < config.detectors.size(); ++d) {
                const TrialMetrics& m = results[t][d].second;
                acc[d].pee_sum += m.pee;
                acc[d].mae_sum += m.amp_mae;
                acc[d].delay_errors += m.delay_errors;
                acc[d].bit_errors += m.bit_errors;
                acc[d].data_bits += m.data_bits;
            }
        }
        for (std::size_t d = 0; d < config.detectors.size(); ++d) {
            ResultRow row;
            row.snr_db = snr_db;
            row.detector = config.detectors[d];
            row.channel_mode = config.channel_mode;
            row.ns = config.ns;
            const double n = static_cast<double>(acc[d].data_bits);
            row.ber = n > 0 ? static_cast<double>(acc[d].bit_errors) / n : 0.0;
            const double half = n > 0 ? 1.96 * std::sqrt(row.ber * (1.0 - row.ber) / n) : 0.0;
            row.ber_ci95_low = std::max(0.0, row.ber - half);
            row.ber_ci95_high = std::min(1.0, row.ber + half);
            row.pee = acc[d].pee_sum / config.trials;
            row.amp_mae = acc[d].mae_sum / config.trials;
            row.delay_error_rate = static_cast<double>(acc[d].delay_errors) /
                                   (static_cast<double>(config.k_users) * config.trials);
            row.trials = config.trials;
            row.master_seed = config.master_seed;
            rows.push_back(row);
        }
    }

    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        if (a.detector != b.detector) {
            return static_cast<int>(a.detector) < static_cast<int>(b.detector);
        }
        return a.snr_db < b.snr_db;
    });
    return rows;
}

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string csv_string(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    out << "snr_db,detector,channel_mode,ns,ber,ber_ci95_low,ber_ci95_high,pee,amp_mae,"
           "delay_error_rate,trials,master_seed\n";
    for (const auto& r : rows) {
        out << format_double(r.snr_db) << ',' << to_string(r.detector) << ','
            << to_string(r.channel_mode) << ',' << r.ns << ',' << format_double(r.ber) << ','
            << format_double(r.ber_ci95_low) << ',' << format_double(r.ber_ci95_high) << ','
            << format_double(r.pee) << ',' << format_double(r.amp_mae) << ','
            << format_double(r.delay_error_rate) << ',' << r.trials << ',' << r.master_seed
            << '\n';
    }
    return out.str();
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    out << csv_string(rows);
    if (!out) {
        throw std::runtime_error("write failed: " + path);
    }
}

}  // namespace dscdma
