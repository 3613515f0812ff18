#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dscdma/codes.hpp"
#include "dscdma/estimation.hpp"
#include "dscdma/signal.hpp"

namespace dscdma {

/// Hard bit decisions, K x N, entries +-1.
struct DetectionResult {
    int k_users = 0;
    int n_bits = 0;
    std::vector<std::int8_t> decisions;  // row-major

    std::int8_t at(int k, int i) const {
        return decisions[static_cast<std::size_t>(k) * n_bits + i];
    }
};

/// Running residual inside one bit window of the SIC chain. The window
/// covers global samples [win_begin, win_end); z holds just that slice.
struct IcuState {
    SampledSignal z;
    int bit_index = 0;
    std::size_t win_begin = 0;
    std::size_t win_end = 0;
};

/// Optional per-bit capture of the SIC residuals, for diagnostics.
struct SicTrace {
    std::vector<std::vector<double>> z_in;   // residual entering the first ICU
    std::vector<std::vector<double>> z_out;  // residual leaving the last ICU
    std::vector<std::size_t> win_begin;
    std::vector<std::size_t> win_end;
};

/// Correlates the received signal over [i*Tb + delay, (i+1)*Tb + delay) with
/// the user's signature, scaled by 1/ns. Noiseless single-user output is
/// exactly A*b.
double matched_filter_output(const SampledSignal& received, const SpreadingCode& code,
                             int delay, int bit_index);

/// Bank of matched filters with a sign decision per (user, bit); sign(0) is
/// taken as +1.
DetectionResult conventional_detect(const SampledSignal& received,
                                    const std::vector<SpreadingCode>& codes,
                                    const ChannelEstimate& est, int n_bits);

/// Block-tridiagonal matrix form of the matched-filter bank over a whole
/// frame: Y = Z*W*B with Z built from R(1), R(0), R(-1) blocks, W the
/// per-user amplitudes repeated N times, and B the stacked bits.
struct MatrixModel {
    std::vector<std::vector<double>> z;  // NK x NK
    std::vector<double> w_diag;          // NK
    std::vector<double> b;               // NK
};

MatrixModel build_matrix_model(const CorrelationSet& corr,
                               const std::vector<double>& amplitudes, const BitFrame& frame);

/// Z*W*B: the noiseless matched-filter outputs for all (user, bit) pairs,
/// stacked bit-major. Used as an analytic oracle for the sample-domain path.
std::vector<double> matrix_model_outputs(const CorrelationSet& corr,
                                         const std::vector<double>& amplitudes,
                                         const BitFrame& frame);

/// One interference cancellation unit: detect user_k's bit from the current
/// residual, then subtract its reconstruction to feed the next unit.
std::pair<int, IcuState> icu_process(const IcuState& state, int user_k,
                                     const ChannelEstimate& est, const SpreadingCode& code);

/// Single-stage SIC over the frame: per bit, remove the previous bit's
/// tail interference, then run the ICU chain in ascending-delay user order.
DetectionResult sic_detect(const SampledSignal& received,
                           const std::vector<SpreadingCode>& codes, const ChannelEstimate& est,
                           int n_bits, SicTrace* trace = nullptr);

/// SIC/MF hybrid: like sic_detect, but each bit window additionally
/// subtracts the following bit's interference reconstructed from one
/// up-front conventional matched-filter pass.
DetectionResult sic_mf_detect(const SampledSignal& received,
                              const std::vector<SpreadingCode>& codes,
                              const ChannelEstimate& est, int n_bits,
                              SicTrace* trace = nullptr);

}  // namespace dscdma
