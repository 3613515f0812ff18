#pragma once

#include <span>
#include <vector>

#include "dscdma/codes.hpp"
#include "dscdma/signal.hpp"

namespace dscdma {

/// Joint per-user channel estimate consumed by the detectors.
struct ChannelEstimate {
    std::vector<double> amplitudes;
    std::vector<int> delays;  // chip units, each in [0, nc-1]
};

/// The first two bit periods of the received signal, kept in two consistent
/// views: per-chip averages (used for the delay search) and the raw
/// oversampled samples (used for amplitude estimation).
struct PilotWindow {
    std::vector<double> chip_rate;    // 2*nc values
    std::vector<double> oversampled;  // 2*nc*ns values
    int ns = 1;
};

/// Which of the three amplitude formulas applies: the earliest user, an
/// interior user, or the most-delayed user (which may integrate the whole
/// remainder of its first pilot bit).
enum class AmplitudePosition { first, middle, last };

PilotWindow extract_pilot_window(const SampledSignal& received, int nc);

/// Chip-resolution delay search: argmax over tau in [0, nc-1] of the
/// absolute correlation between the signature and the nc-chip residual
/// window starting at tau. Ties break toward the smallest tau.
int estimate_delay(std::span<const double> residual_chip_rate, const SpreadingCode& code);

/// Subtracts one user's reconstructed two-pilot-bit contribution (signature
/// repeated over both bit periods, zero-prefixed by the delay, truncated at
/// the window edge) from both views.
PilotWindow cancel_user(const PilotWindow& window, double amp, int delay,
                        const SpreadingCode& code);

/// Single-user amplitude readout from the residual window. `first` and
/// `middle` correlate the one chip interval [delay, delay+1) that carries no
/// energy from later (still uncancelled) users; `last` integrates chips
/// [delay, nc) since every interferer is already cancelled.
double estimate_amplitude(const PilotWindow& window, int delay, const SpreadingCode& code,
                          AmplitudePosition position);

/// Successive joint estimation over the pilot window: for each user in
/// ascending-delay order, cancel the previous user's reconstruction, locate
/// the delay, then read the amplitude. With several users the earliest
/// user's delay is taken as 0 -- the signal model anchors the frame at the
/// first arrival -- which keeps the search immune to stacked interference
/// from the users not yet cancelled. A lone user is searched over the full
/// range.
ChannelEstimate estimate_channel(const SampledSignal& received,
                                 const std::vector<SpreadingCode>& codes);

/// Amplitude-only variant used when propagation delays are known at the
/// receiver; the successive cancellation structure is unchanged.
ChannelEstimate estimate_channel_known_delays(const SampledSignal& received,
                                              const std::vector<SpreadingCode>& codes,
                                              const std::vector<int>& delays);

}  // namespace dscdma
