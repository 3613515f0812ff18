#include "dscdma/detection.hpp"

#include <algorithm>
#include <stdexcept>

namespace dscdma {

namespace {

std::int8_t sign_decision(double value) { return value >= 0.0 ? 1 : -1; }

void check_users(const std::vector<SpreadingCode>& codes, const ChannelEstimate& est) {
    if (codes.empty()) {
        throw std::invalid_argument("need at least one user");
    }
    if (est.amplitudes.size() != codes.size() || est.delays.size() != codes.size()) {
        throw std::invalid_argument("channel estimate does not match the user count");
    }
    const int nc = codes[0].nc();
    for (std::size_t k = 0; k < codes.size(); ++k) {
        if (codes[k].nc() != nc) {
            throw std::invalid_argument("all spreading codes must share one length");
        }
        if (est.delays[k] < 0 || est.delays[k] >= nc) {
            throw std::invalid_argument("estimated delay out of range");
        }
    }
}

/// Adds coeff * (user signature of bit `bit_index` delayed by `delay`) into
/// the window buffer, clipped to [win_begin, win_end). Sample geometry does
/// the bookkeeping: bits that do not reach into the window contribute
/// nothing.
void accumulate_bit(std::vector<double>& window, std::size_t win_begin, std::size_t win_end,
                    const SpreadingCode& code, double coeff, int delay, int bit_index, int ns) {
    const int nc = code.nc();
    const std::size_t start =
        (static_cast<std::size_t>(bit_index) * nc + delay) * static_cast<std::size_t>(ns);
    const std::size_t stop = start + static_cast<std::size_t>(nc) * ns;
    const std::size_t lo = std::max(start, win_begin);
    const std::size_t hi = std::min(stop, win_end);
    for (std::size_t j = lo; j < hi; ++j) {
        const std::size_t chip = (j - start) / ns;
        window[j - win_begin] += coeff * code.chips[chip];
    }
}

}  // namespace

double matched_filter_output(const SampledSignal& received, const SpreadingCode& code,
                             int delay, int bit_index) {
    const int nc = code.nc();
    const int ns = received.ns;
    if (delay < 0 || delay >= nc || bit_index < 0) {
        throw std::invalid_argument("matched filter delay or bit index out of range");
    }
    const std::size_t start =
        (static_cast<std::size_t>(bit_index) * nc + delay) * static_cast<std::size_t>(ns);
    const std::size_t stop = start + static_cast<std::size_t>(nc) * ns;
    if (stop > received.samples.size()) {
        throw std::invalid_argument("matched filter window exceeds the signal");
    }
    double acc = 0.0;
    for (std::size_t j = start; j < stop; ++j) {
        acc += received.samples[j] * code.chips[(j - start) / ns];
    }
    return acc / ns;
}

DetectionResult conventional_detect(const SampledSignal& received,
                                    const std::vector<SpreadingCode>& codes,
                                    const ChannelEstimate& est, int n_bits) {
    check_users(codes, est);
    if (n_bits < 1) {
        throw std::invalid_argument("need at least one bit");
    }
    const int k_users = static_cast<int>(codes.size());
    DetectionResult result;
    result.k_users = k_users;
    result.n_bits = n_bits;
    result.decisions.resize(static_cast<std::size_t>(k_users) * n_bits);
    for (int k = 0; k < k_users; ++k) {
        for (int i = 0; i < n_bits; ++i) {
            const double y = matched_filter_output(received, codes[k], est.delays[k], i);
            result.decisions[static_cast<std::size_t>(k) * n_bits + i] = sign_decision(y);
        }
    }
    return result;
}

MatrixModel build_matrix_model(const CorrelationSet& corr,
                               const std::vector<double>& amplitudes, const BitFrame& frame) {
    const int k_users = frame.k_users;
    if (corr.r_zero.size() != static_cast<std::size_t>(k_users) ||
        amplitudes.size() != static_cast<std::size_t>(k_users)) {
        throw std::invalid_argument("correlation set, amplitudes and frame disagree on K");
    }
    const int n = frame.n_bits;
    const int dim = n * k_users;

    MatrixModel model;
    model.z.assign(dim, std::vector<double>(dim, 0.0));
    model.w_diag.resize(dim);
    model.b.resize(dim);

    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < k_users; ++k) {
            model.w_diag[static_cast<std::size_t>(i) * k_users + k] = amplitudes[k];
            model.b[static_cast<std::size_t>(i) * k_users + k] = frame.at(k, i);
        }
        // Block row i: R(1) at block i-1, R(0) on the diagonal, R(-1) at
        // block i+1; boundary blocks are simply absent.
        for (int k = 0; k < k_users; ++k) {
            for (int l = 0; l < k_users; ++l) {
                const int row = i * k_users + k;
                model.z[row][i * k_users + l] = corr.r_zero[k][l];
                if (i > 0) {
                    model.z[row][(i - 1) * k_users + l] = corr.r_plus[k][l];
                }
                if (i + 1 < n) {
                    model.z[row][(i + 1) * k_users + l] = corr.r_minus[k][l];
                }
            }
        }
    }
    return model;
}

std::vector<double> matrix_model_outputs(const CorrelationSet& corr,
                                         const std::vector<double>& amplitudes,
                                         const BitFrame& frame) {
    const MatrixModel model = build_matrix_model(corr, amplitudes, frame);
    const std::size_t dim = model.b.size();
    std::vector<double> wb(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        wb[j] = model.w_diag[j] * model.b[j];
    }
    std::vector<double> y(dim, 0.0);
    for (std::size_t r = 0; r < dim; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            acc += model.z[r][c] * wb[c];
        }
        y[r] = acc;
    }
    return y;
}

std::pair<int, IcuState> icu_process(const IcuState& state, int user_k,
                                     const ChannelEstimate& est, const SpreadingCode& code) {
    const int nc = code.nc();
    const int ns = state.z.ns;
    const int delay = est.delays.at(user_k);
    const std::size_t start =
        (static_cast<std::size_t>(state.bit_index) * nc + delay) * static_cast<std::size_t>(ns);
    const std::size_t stop = start + static_cast<std::size_t>(nc) * ns;
    if (start < state.win_begin || stop > state.win_end) {
        throw std::invalid_argument("ICU correlation window violates the bit window");
    }

    double acc = 0.0;
    const std::size_t local = start - state.win_begin;
    for (std::size_t j = 0; j < static_cast<std::size_t>(nc) * ns; ++j) {
        acc += state.z.samples[local + j] * code.chips[j / ns];
    }
    const int decision = sign_decision(acc / ns);

    IcuState next = state;
    const double coeff = est.amplitudes.at(user_k) * decision;
    for (std::size_t j = 0; j < static_cast<std::size_t>(nc) * ns; ++j) {
        next.z.samples[local + j] -= coeff * code.chips[j / ns];
    }
    return {decision, std::move(next)};
}

namespace {

DetectionResult sic_core(const SampledSignal& received, const std::vector<SpreadingCode>& codes,
                         const ChannelEstimate& est, int n_bits, bool cancel_future,
                         SicTrace* trace) {
    check_users(codes, est);
    if (n_bits < 1) {
        throw std::invalid_argument("need at least one bit");
    }
    const int k_users = static_cast<int>(codes.size());
    const int nc = codes[0].nc();
    const int ns = received.ns;
    const int tau_max = *std::max_element(est.delays.begin(), est.delays.end());

    // The hybrid needs one whole-frame matched-filter pass up front to
    // reconstruct the following bit of every user.
    DetectionResult mf;
    if (cancel_future) {
        mf = conventional_detect(received, codes, est, n_bits);
    }

    DetectionResult result;
    result.k_users = k_users;
    result.n_bits = n_bits;
    result.decisions.resize(static_cast<std::size_t>(k_users) * n_bits);

    for (int i = 0; i < n_bits; ++i) {
        const std::size_t win_begin =
            static_cast<std::size_t>(i) * nc * static_cast<std::size_t>(ns);
        const std::size_t win_end =
            (static_cast<std::size_t>(i + 1) * nc + tau_max) * static_cast<std::size_t>(ns);
        if (win_end > received.samples.size()) {
            throw std::invalid_argument("bit window exceeds the signal");
        }

        SampledSignal z;
        z.ns = ns;
        z.samples.assign(received.samples.begin() + win_begin,
                         received.samples.begin() + win_end);

        // Remove the tail of every user's previous bit (already decided) and,
        // for the hybrid, the head of the next bit as predicted by the
        // matched filter.
        if (i > 0) {
            for (int k = 0; k < k_users; ++k) {
                const double coeff = -est.amplitudes[k] * result.at(k, i - 1);
                accumulate_bit(z.samples, win_begin, win_end, codes[k], coeff, est.delays[k],
                               i - 1, ns);
            }
        }
        if (cancel_future && i + 1 < n_bits) {
            for (int k = 0; k < k_users; ++k) {
                const double coeff = -est.amplitudes[k] * mf.at(k, i + 1);
                accumulate_bit(z.samples, win_begin, win_end, codes[k], coeff, est.delays[k],
                               i + 1, ns);
            }
        }

        if (trace) {
            trace->z_in.push_back(z.samples);
            trace->win_begin.push_back(win_begin);
            trace->win_end.push_back(win_end);
        }

        IcuState state{std::move(z), i, win_begin, win_end};
        for (int k = 0; k < k_users; ++k) {
            auto [decision, next] = icu_process(state, k, est, codes[k]);
            result.decisions[static_cast<std::size_t>(k) * n_bits + i] =
                static_cast<std::int8_t>(decision);
            state = std::move(next);
        }
        if (trace) {
            trace->z_out.push_back(state.z.samples);
        }
    }
    return result;
}

}  // namespace

DetectionResult sic_detect(const SampledSignal& received,
                           const std::vector<SpreadingCode>& codes, const ChannelEstimate& est,
                           int n_bits, SicTrace* trace) {
    return sic_core(received, codes, est, n_bits, false, trace);
}

DetectionResult sic_mf_detect(const SampledSignal& received,
                              const std::vector<SpreadingCode>& codes,
                              const ChannelEstimate& est, int n_bits, SicTrace* trace) {
    return sic_core(received, codes, est, n_bits, true, trace);
}

}  // namespace dscdma
