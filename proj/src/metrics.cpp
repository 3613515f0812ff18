#include "dscdma/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace dscdma {

double power_estimation_error(std::span<const double> true_amps,
                              std::span<const double> est_amps) {
    if (true_amps.size() != est_amps.size() || true_amps.empty()) {
        throw std::invalid_argument("amplitude vectors must be non-empty and equal-length");
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < true_amps.size(); ++k) {
        const double d = true_amps[k] - est_amps[k];
        acc += d * d;
    }
    return acc / static_cast<double>(true_amps.size());
}

double amplitude_abs_error(std::span<const double> true_amps,
                           std::span<const double> est_amps) {
    if (true_amps.size() != est_amps.size() || true_amps.empty()) {
        throw std::invalid_argument("amplitude vectors must be non-empty and equal-length");
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < true_amps.size(); ++k) {
        acc += std::abs(true_amps[k] - est_amps[k]);
    }
    return acc / static_cast<double>(true_amps.size());
}

double delay_error_rate(std::span<const int> true_delays, std::span<const int> est_delays) {
    if (true_delays.size() != est_delays.size() || true_delays.empty()) {
        throw std::invalid_argument("delay vectors must be non-empty and equal-length");
    }
    int wrong = 0;
    for (std::size_t k = 0; k < true_delays.size(); ++k) {
        if (true_delays[k] != est_delays[k]) {
            ++wrong;
        }
    }
    return static_cast<double>(wrong) / static_cast<double>(true_delays.size());
}

BitErrorCount bit_error_rate(const BitFrame& tx, const DetectionResult& rx, bool skip_pilots) {
    if (tx.k_users != rx.k_users || tx.n_bits != rx.n_bits) {
        throw std::invalid_argument("frame and detection result dimensions differ");
    }
    const int first = skip_pilots ? BitFrame::n_pilots : 0;
    if (tx.n_bits <= first) {
        throw std::invalid_argument("no bits to count");
    }
    BitErrorCount out;
    for (int k = 0; k < tx.k_users; ++k) {
        for (int i = first; i < tx.n_bits; ++i) {
            if (tx.at(k, i) != rx.at(k, i)) {
                ++out.errors;
            }
        }
    }
    const long long counted =
        static_cast<long long>(tx.k_users) * (tx.n_bits - first);
    out.rate = static_cast<double>(out.errors) / static_cast<double>(counted);
    return out;
}

}  // namespace dscdma
