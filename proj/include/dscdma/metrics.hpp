#pragma once

#include <cstdint>
#include <span>

#include "dscdma/detection.hpp"
#include "dscdma/signal.hpp"

namespace dscdma {

/// Per-trial evaluation counters; aggregation across trials sums the counts.
struct TrialMetrics {
    double pee = 0.0;      // mean squared amplitude error
    double amp_mae = 0.0;  // mean absolute amplitude error
    int delay_errors = 0;
    long long bit_errors = 0;
    long long data_bits = 0;
};

/// (1/K) * sum |A_k - A_hat_k|^2
double power_estimation_error(std::span<const double> true_amps,
                              std::span<const double> est_amps);

/// (1/K) * sum |A_k - A_hat_k|
double amplitude_abs_error(std::span<const double> true_amps,
                           std::span<const double> est_amps);

/// Fraction of users whose estimated delay is wrong.
double delay_error_rate(std::span<const int> true_delays, std::span<const int> est_delays);

struct BitErrorCount {
    long long errors = 0;
    double rate = 0.0;
};

/// Disagreements between transmitted and detected bits. With skip_pilots the
/// two known pilot columns are excluded from the count.
BitErrorCount bit_error_rate(const BitFrame& tx, const DetectionResult& rx, bool skip_pilots);

}  // namespace dscdma
