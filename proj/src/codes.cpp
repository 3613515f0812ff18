#include "dscdma/codes.hpp"

#include <bit>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dscdma {

namespace {

constexpr int kDegree = 5;
constexpr int kPeriod = 31;  // 2^5 - 1
constexpr unsigned kStateMask = 0x1f;

unsigned lfsr_step(unsigned state, unsigned taps) {
    const unsigned feedback = std::popcount(state & taps) & 1u;
    return (state >> 1) | (feedback << (kDegree - 1));
}

/// Periodic cross-correlation of two {0,1} sequences under the +-1 mapping,
/// at a given left-cyclic shift of b.
int periodic_xcorr(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b,
                   int shift) {
    const int n = static_cast<int>(a.size());
    int acc = 0;
    for (int i = 0; i < n; ++i) {
        const int x = a[i] ? 1 : -1;
        const int y = b[(i + shift) % n] ? 1 : -1;
        acc += x * y;
    }
    return acc;
}

}  // namespace

std::vector<std::uint8_t> generate_m_sequence(unsigned taps, unsigned seed) {
    const unsigned mask = taps & kStateMask;
    const unsigned state0 = seed & kStateMask;
    if (state0 == 0) {
        throw std::invalid_argument("m-sequence seed must not be all-zero");
    }
    if (mask == 0) {
        throw std::invalid_argument("empty feedback tap mask");
    }
    // A degree-5 polynomial is primitive iff the state period is 31.
    unsigned state = state0;
    int period = 0;
    do {
        state = lfsr_step(state, mask);
        ++period;
    } while (state != state0 && period <= kPeriod);
    if (period != kPeriod) {
        std::ostringstream msg;
        msg << "tap mask 0" << std::oct << taps << " is not a primitive degree-5 polynomial"
            << " (state period " << std::dec << period << ", expected 31)";
        throw std::invalid_argument(msg.str());
    }

    std::vector<std::uint8_t> out(kPeriod);
    state = state0;
    for (int i = 0; i < kPeriod; ++i) {
        out[i] = static_cast<std::uint8_t>(state & 1u);
        state = lfsr_step(state, mask);
    }
    return out;
}

std::vector<std::vector<std::uint8_t>> generate_gold_family(unsigned taps_a, unsigned taps_b) {
    const auto u = generate_m_sequence(taps_a, 1);
    const auto v = generate_m_sequence(taps_b, 1);

    static const std::set<int> kGoldValues{-9, -1, 7};
    for (int shift = 0; shift < kPeriod; ++shift) {
        const int c = periodic_xcorr(u, v, shift);
        if (!kGoldValues.count(c)) {
            std::ostringstream msg;
            msg << "tap masks 0" << std::oct << taps_a << ", 0" << taps_b
                << " are not a preferred pair: cross-correlation " << std::dec << c
                << " at shift " << shift << " outside {-9, -1, 7}";
            throw std::invalid_argument(msg.str());
        }
    }

    std::vector<std::vector<std::uint8_t>> family;
    family.reserve(kPeriod + 2);
    family.push_back(u);
    family.push_back(v);
    for (int j = 0; j < kPeriod; ++j) {
        std::vector<std::uint8_t> w(kPeriod);
        for (int i = 0; i < kPeriod; ++i) {
            w[i] = u[i] ^ v[(i + j) % kPeriod];
        }
        family.push_back(std::move(w));
    }
    return family;
}

SpreadingCode build_signature(const std::vector<std::uint8_t>& code_bits) {
    if (code_bits.size() != static_cast<std::size_t>(kPeriod)) {
        throw std::invalid_argument("signature construction expects a 31-bit code");
    }
    const int nc = kPeriod + 1;
    const double mag = 1.0 / std::sqrt(static_cast<double>(nc));
    SpreadingCode code;
    code.chips.reserve(nc);
    for (const auto bit : code_bits) {
        code.chips.push_back(bit ? mag : -mag);
    }
    code.chips.push_back(-mag);  // the appended 0 bit
    return code;
}

CorrelationSet cross_correlation_matrices(const std::vector<SpreadingCode>& codes,
                                          const std::vector<int>& delays) {
    const int k_users = static_cast<int>(codes.size());
    if (k_users == 0 || delays.size() != codes.size()) {
        throw std::invalid_argument("codes and delays must be non-empty and equal-length");
    }
    const int nc = codes[0].nc();
    for (const auto& c : codes) {
        if (c.nc() != nc) {
            throw std::invalid_argument("all spreading codes must share one length");
        }
    }
    for (int k = 0; k < k_users; ++k) {
        if (delays[k] < 0 || delays[k] >= nc) {
            throw std::invalid_argument("delays must lie in [0, nc-1]");
        }
        if (k > 0 && delays[k] <= delays[k - 1]) {
            throw std::invalid_argument("delays must be sorted ascending and distinct");
        }
    }

    CorrelationSet set;
    set.delays = delays;
    auto zeros = std::vector<std::vector<double>>(k_users, std::vector<double>(k_users, 0.0));
    set.r_minus = zeros;
    set.r_zero = zeros;
    set.r_plus = zeros;

    // Entry (k,l) at bit offset i is the chip-product sum over the overlap of
    // the two delayed signatures; the relative chip shift is
    // d = delays[k] - delays[l] + i*nc.
    for (int i = -1; i <= 1; ++i) {
        auto& mat = (i < 0) ? set.r_minus : (i == 0 ? set.r_zero : set.r_plus);
        for (int k = 0; k < k_users; ++k) {
            for (int l = 0; l < k_users; ++l) {
                const int d = delays[k] - delays[l] + i * nc;
                double acc = 0.0;
                const int j_lo = std::max(0, -d);
                const int j_hi = std::min(nc - 1, nc - 1 - d);
                for (int j = j_lo; j <= j_hi; ++j) {
                    acc += codes[k].chips[j] * codes[l].chips[j + d];
                }
                mat[k][l] = acc;
            }
        }
    }
    return set;
}

}  // namespace dscdma
