// metrics.hpp - PAPR/CCDF estimation, BER/Q/EVM scoring, and the
// real-multiplication complexity model of both architectures
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cotx/waveform.hpp"

namespace cotx {

// Per non-overlapping window: 10 log10(max |x|^2 / mean |x|^2) with the mean
// taken over the whole stream (global normalization), so clipping lowers
// peaks instead of renormalizing each window.
std::vector<double> papr_windowed(const Waveform& w, int window_samples = 1024);

struct CcdfCurve {
    std::vector<double> thresholds_db;
    std::vector<double> probabilities; // Pr(PAPR > threshold), non-increasing
    int window_samples = 0;
    int n_windows = 0;
};

CcdfCurve ccdf(std::span<const double> paprs_db, std::span<const double> thresholds_db,
               int window_samples);

// PAPR value whose empirical exceedance probability equals prob
// (log-interpolated between order statistics).
double papr_at_probability(std::span<const double> paprs_db, double prob);

struct BerResult {
    std::uint64_t errors = 0;
    std::uint64_t total = 0;
    double ber = 0.0;
};

BerResult ber_count(std::span<const std::uint8_t> rx, std::span<const std::uint8_t> tx);

// Q_dB = 20 log10(sqrt(2) erfc^-1(2 BER)); BER >= 0.5 maps to -inf and
// BER = 0 to +inf (caller falls back to q_from_evm at desk scale).
double q_from_ber(double ber);
double erfc_inv(double y); // Newton on std::erfc

// EVM_rms as a fraction. auto_normalize fits a least-squares complex gain
// from rx onto ref before measuring.
double evm_rms(std::span<const cplx> rx, std::span<const cplx> ref,
               bool auto_normalize = true);
double q_from_evm(double evm); // -20 log10(EVM), the SNR-proxy convention

// Real multiplications per symbol. Both formulas are transcribed literally
// from the complexity model being reproduced; they are not re-derived.
double mults_jfscd(int n, double alpha);
double mults_cascade(int n, int fir_taps = 21);

struct ComplexityReport {
    double jfscd_mults_per_symbol = 0.0;
    double cascade_mults_per_symbol = 0.0;
    double reduction_fraction = 0.0; // 1 - jfscd/cascade
    int n = 0;
    double alpha = 0.0;
    int fir_taps = 0;
};

ComplexityReport complexity_report(int n, double alpha, int fir_taps = 21);

} // namespace cotx
