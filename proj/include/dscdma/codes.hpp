#pragma once

#include <cstdint>
#include <vector>

namespace dscdma {

/// A user's spreading signature: nc chips, each exactly +-1/sqrt(nc), so the
/// full-bit signature has unit energy.
struct SpreadingCode {
    std::vector<double> chips;

    int nc() const { return static_cast<int>(chips.size()); }
};

/// Partial cross-correlation matrices between delayed user signatures at
/// bit offsets -1, 0, +1. Entry [k][l] correlates user l's signature delayed
/// by delays[l] with user k's signature delayed by delays[k] plus the bit
/// offset. Offsets beyond +-1 vanish because a signature spans one bit.
struct CorrelationSet {
    std::vector<std::vector<double>> r_minus;
    std::vector<std::vector<double>> r_zero;
    std::vector<std::vector<double>> r_plus;
    std::vector<int> delays;
};

/// One period of a maximal-length sequence from a degree-5 LFSR.
///
/// `taps` is the feedback polynomial in the usual octal convention
/// (e.g. 045 = x^5 + x^2 + 1); only the low five coefficient bits drive the
/// feedback. Rejects tap masks whose state period is not 2^5-1 = 31 and the
/// degenerate all-zero seed.
std::vector<std::uint8_t> generate_m_sequence(unsigned taps, unsigned seed);

/// Gold family {u, v, u ^ shift^j(v)} of 33 length-31 sequences from a
/// preferred pair of degree-5 polynomials. The pair is verified by the
/// three-valued periodic cross-correlation test {-9, -1, +7}; anything else
/// is rejected with the offending value in the message.
std::vector<std::vector<std::uint8_t>> generate_gold_family(unsigned taps_a, unsigned taps_b);

/// Extends a 31-chip code with one trailing 0 bit and maps bits {1, 0} to
/// chips {+1/sqrt(32), -1/sqrt(32)}.
SpreadingCode build_signature(const std::vector<std::uint8_t>& code_bits);

/// Closed-form partial cross-correlations at chip resolution for
/// integer-chip delays and rectangular chip pulses. Delays must be sorted
/// ascending and distinct.
CorrelationSet cross_correlation_matrices(const std::vector<SpreadingCode>& codes,
                                          const std::vector<int>& delays);

}  // namespace dscdma
