#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "dscdma/codes.hpp"

namespace dscdma {

/// Transmit-side description of one uplink user.
struct UserProfile {
    int index = 1;  // 1-based user number
    double amplitude = 1.0;
    int delay_chips = 0;  // propagation delay in chip periods, [0, nc-1]
    SpreadingCode code;
};

/// K x N antipodal data matrix. Columns 0 and 1 are pilot symbols, fixed
/// to +1 for every user.
struct BitFrame {
    int k_users = 0;
    int n_bits = 0;
    std::vector<std::int8_t> bits;  // row-major, entries +-1

    static constexpr int n_pilots = 2;

    std::int8_t at(int k, int i) const { return bits[static_cast<std::size_t>(k) * n_bits + i]; }
    std::span<const std::int8_t> row(int k) const {
        return {bits.data() + static_cast<std::size_t>(k) * n_bits, static_cast<std::size_t>(n_bits)};
    }
};

/// Real baseband sample buffer at ns samples per chip. Buffers carry one
/// extra bit period of tail headroom so detection windows reaching past the
/// last bit stay in bounds.
struct SampledSignal {
    std::vector<double> samples;
    int ns = 1;
};

struct ChannelParams {
    double sigma = 0.0;  // per-sample noise standard deviation
    std::uint64_t seed = 0;
};

/// Total sample count for an N-bit frame: (N*nc + nc) * ns.
std::size_t frame_samples(int n_bits, int nc, int ns);

/// Random antipodal frame with the two leading pilot columns forced to +1.
/// Requires n_bits >= 3 so at least one data bit follows the pilots.
BitFrame generate_bit_frame(int k_users, int n_bits, std::mt19937_64& rng);

/// Samples one user's delayed, amplitude-scaled signature train. Output is
/// zero before delay_chips*ns and after the last bit.
SampledSignal modulate_user(const UserProfile& profile, std::span<const std::int8_t> bits,
                            int ns, std::size_t frame_len);

/// Elementwise sum; all inputs must share ns and length.
SampledSignal superpose(const std::vector<SampledSignal>& signals);

/// Adds i.i.d. Gaussian noise of standard deviation params.sigma, seeded by
/// params.seed.
SampledSignal add_awgn(const SampledSignal& signal, const ChannelParams& params);

/// Per-sample amplitude-referenced noise level: sigma = a_ref * 10^(-snr_db/20).
double snr_to_sigma(double snr_db, double a_ref);

}  // namespace dscdma
