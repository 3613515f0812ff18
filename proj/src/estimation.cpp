#include "dscdma/estimation.hpp"

#include <cmath>
#include <stdexcept>

namespace dscdma {

PilotWindow extract_pilot_window(const SampledSignal& received, int nc) {
    if (nc < 1) {
        throw std::invalid_argument("spreading factor must be positive");
    }
    const int ns = received.ns;
    const std::size_t need = static_cast<std::size_t>(2) * nc * ns;
    if (received.samples.size() < need) {
        throw std::invalid_argument("received signal shorter than two bit periods");
    }
    PilotWindow window;
    window.ns = ns;
    window.oversampled.assign(received.samples.begin(), received.samples.begin() + need);
    window.chip_rate.resize(static_cast<std::size_t>(2) * nc);
    for (std::size_t m = 0; m < window.chip_rate.size(); ++m) {
        double acc = 0.0;
        for (int s = 0; s < ns; ++s) {
            acc += window.oversampled[m * ns + s];
        }
        window.chip_rate[m] = acc / ns;
    }
    return window;
}

int estimate_delay(std::span<const double> residual_chip_rate, const SpreadingCode& code) {
    const int nc = code.nc();
    if (residual_chip_rate.size() != static_cast<std::size_t>(2) * nc) {
        throw std::invalid_argument("delay search expects a two-bit chip-rate residual");
    }
    int best_tau = 0;
    double best = -1.0;
    for (int tau = 0; tau < nc; ++tau) {
        double acc = 0.0;
        for (int m = 0; m < nc; ++m) {
            acc += code.chips[m] * residual_chip_rate[tau + m];
        }
        const double mag = std::abs(acc);
        if (mag > best) {  // strict: ties keep the smallest tau
            best = mag;
            best_tau = tau;
        }
    }
    return best_tau;
}

PilotWindow cancel_user(const PilotWindow& window, double amp, int delay,
                        const SpreadingCode& code) {
    const int nc = code.nc();
    if (delay < 0 || delay >= nc) {
        throw std::invalid_argument("delay must lie in [0, nc-1]");
    }
    const int ns = window.ns;
    PilotWindow out = window;
    const int total_chips = 2 * nc;
    for (int m = delay; m < total_chips; ++m) {
        const double value = amp * code.chips[(m - delay) % nc];
        out.chip_rate[m] -= value;
        for (int s = 0; s < ns; ++s) {
            out.oversampled[static_cast<std::size_t>(m) * ns + s] -= value;
        }
    }
    return out;
}

double estimate_amplitude(const PilotWindow& window, int delay, const SpreadingCode& code,
                          AmplitudePosition position) {
    const int nc = code.nc();
    const int ns = window.ns;
    if (delay < 0 || delay >= nc) {
        throw std::invalid_argument("delay must lie in [0, nc-1]");
    }
    if (window.oversampled.size() != static_cast<std::size_t>(2) * nc * ns) {
        throw std::invalid_argument("pilot window size mismatch");
    }

    if (position == AmplitudePosition::last) {
        // Every interferer is cancelled by now, so the whole remainder of the
        // first pilot bit is usable: chips [delay, nc) against chips
        // [0, nc-delay) of the signature.
        double acc = 0.0;
        for (int m = delay; m < nc; ++m) {
            const double chip = code.chips[m - delay];
            for (int s = 0; s < ns; ++s) {
                acc += window.oversampled[static_cast<std::size_t>(m) * ns + s] * chip;
            }
        }
        return acc * nc / (static_cast<double>(nc - delay) * ns);
    }

    // first / middle: only the chip interval [delay, delay+1) is free of
    // energy from users estimated later, so correlate just that chip against
    // the signature's leading chip.
    double acc = 0.0;
    for (int s = 0; s < ns; ++s) {
        acc += window.oversampled[static_cast<std::size_t>(delay) * ns + s];
    }
    return acc * code.chips[0] * nc / ns;
}

namespace {

ChannelEstimate run_successive(const SampledSignal& received,
                               const std::vector<SpreadingCode>& codes,
                               const std::vector<int>* known_delays) {
    const int k_users = static_cast<int>(codes.size());
    if (k_users < 1) {
        throw std::invalid_argument("need at least one user");
    }
    const int nc = codes[0].nc();
    for (const auto& c : codes) {
        if (c.nc() != nc) {
            throw std::invalid_argument("all spreading codes must share one length");
        }
    }
    if (known_delays && known_delays->size() != codes.size()) {
        throw std::invalid_argument("known delays must match the user count");
    }

    PilotWindow window = extract_pilot_window(received, nc);
    ChannelEstimate est;
    est.amplitudes.reserve(k_users);
    est.delays.reserve(k_users);

    for (int k = 0; k < k_users; ++k) {
        if (k > 0) {
            window = cancel_user(window, est.amplitudes[k - 1], est.delays[k - 1], codes[k - 1]);
        }
        int tau;
        if (known_delays) {
            tau = (*known_delays)[k];
            if (tau < 0 || tau >= nc) {
                throw std::invalid_argument("known delay out of range");
            }
        } else if (k == 0 && k_users > 1) {
            // The model fixes the earliest arrival at the frame origin. Taking
            // tau_1 = 0 rather than searching keeps the first user's peak from
            // being outvoted by the still-uncancelled users piled on top.
            tau = 0;
        } else {
            tau = estimate_delay(window.chip_rate, codes[k]);
        }
        const auto position = (k == 0) ? AmplitudePosition::first
                              : (k == k_users - 1) ? AmplitudePosition::last
                                                   : AmplitudePosition::middle;
        est.delays.push_back(tau);
        est.amplitudes.push_back(estimate_amplitude(window, tau, codes[k], position));
    }
    return est;
}

}  // namespace

ChannelEstimate estimate_channel(const SampledSignal& received,
                                 const std::vector<SpreadingCode>& codes) {
    return run_successive(received, codes, nullptr);
}

ChannelEstimate estimate_channel_known_delays(const SampledSignal& received,
                                              const std::vector<SpreadingCode>& codes,
                                              const std::vector<int>& delays) {
    return run_successive(received, codes, &delays);
}

}  // namespace dscdma
