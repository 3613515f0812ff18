#include "dscdma/signal.hpp"

#include <cmath>
#include <stdexcept>

namespace dscdma {

std::size_t frame_samples(int n_bits, int nc, int ns) {
    return static_cast<std::size_t>(n_bits + 1) * nc * ns;
}

BitFrame generate_bit_frame(int k_users, int n_bits, std::mt19937_64& rng) {
    if (k_users < 1) {
        throw std::invalid_argument("need at least one user");
    }
    if (n_bits < 3) {
        throw std::invalid_argument("frame needs at least one data bit after the two pilots");
    }
    BitFrame frame;
    frame.k_users = k_users;
    frame.n_bits = n_bits;
    frame.bits.resize(static_cast<std::size_t>(k_users) * n_bits);
    for (int k = 0; k < k_users; ++k) {
        for (int i = 0; i < n_bits; ++i) {
            std::int8_t b = 1;
            if (i >= BitFrame::n_pilots) {
                b = (rng() & 1u) ? 1 : -1;
            }
            frame.bits[static_cast<std::size_t>(k) * n_bits + i] = b;
        }
    }
    return frame;
}

SampledSignal modulate_user(const UserProfile& profile, std::span<const std::int8_t> bits,
                            int ns, std::size_t frame_len) {
    const int nc = profile.code.nc();
    const int n_bits = static_cast<int>(bits.size());
    if (profile.amplitude <= 0.0) {
        throw std::invalid_argument("user amplitude must be positive");
    }
    if (profile.delay_chips < 0 || profile.delay_chips >= nc) {
        throw std::invalid_argument("user delay must lie in [0, nc-1]");
    }
    if (ns < 1) {
        throw std::invalid_argument("need at least one sample per chip");
    }
    if (frame_len < frame_samples(n_bits, nc, ns)) {
        throw std::invalid_argument("frame length too small for the bit sequence plus tail");
    }

    SampledSignal out;
    out.ns = ns;
    out.samples.assign(frame_len, 0.0);
    for (int i = 0; i < n_bits; ++i) {
        const double scale = profile.amplitude * static_cast<double>(bits[i]);
        const std::size_t base =
            (static_cast<std::size_t>(i) * nc + profile.delay_chips) * static_cast<std::size_t>(ns);
        std::size_t j = base;
        for (int m = 0; m < nc; ++m) {
            const double value = scale * profile.code.chips[m];
            for (int s = 0; s < ns; ++s) {
                out.samples[j++] = value;
            }
        }
    }
    return out;
}

SampledSignal superpose(const std::vector<SampledSignal>& signals) {
    if (signals.empty()) {
        throw std::invalid_argument("nothing to superpose");
    }
    SampledSignal out = signals.front();
    for (std::size_t k = 1; k < signals.size(); ++k) {
        const auto& s = signals[k];
        if (s.ns != out.ns || s.samples.size() != out.samples.size()) {
            throw std::invalid_argument("superpose requires matching sample rate and length");
        }
        for (std::size_t j = 0; j < out.samples.size(); ++j) {
            out.samples[j] += s.samples[j];
        }
    }
    return out;
}

SampledSignal add_awgn(const SampledSignal& signal, const ChannelParams& params) {
    if (params.sigma < 0.0) {
        throw std::invalid_argument("noise standard deviation must be non-negative");
    }
    SampledSignal out = signal;
    if (params.sigma == 0.0) {
        return out;
    }
    std::mt19937_64 rng(params.seed);
    std::normal_distribution<double> gauss(0.0, params.sigma);
    for (auto& v : out.samples) {
        v += gauss(rng);
    }
    return out;
}

double snr_to_sigma(double snr_db, double a_ref) {
    if (a_ref <= 0.0) {
        throw std::invalid_argument("reference amplitude must be positive");
    }
    return a_ref * std::pow(10.0, -snr_db / 20.0);
}

}  // namespace dscdma
