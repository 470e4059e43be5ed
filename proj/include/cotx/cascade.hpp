// cascade.hpp - conventional reference architecture: pulse shaping (ideal
// frequency-domain or time-domain FIR) followed by separate frequency-domain
// dispersion filtering
#pragma once

#include <span>

#include "cotx/filters.hpp"
#include "cotx/params.hpp"
#include "cotx/waveform.hpp"

namespace cotx {

struct FirFilter {
    std::vector<double> taps; // odd count, symmetric
    int span_symbols = 0;
    int sps = 0;
};

// Sampled raised-cosine impulse response, peak tap 1; the removable
// singularity at |t| = Ts/(2 alpha) is filled with (pi/4) sinc(1/(2 alpha)).
// Tap count = span_symbols * sps + 1 (odd).
FirFilter rc_fir_taps(double alpha, int span_symbols, int sps);

// Zero-stuffs symbols by fir.sps and applies the taps as a centered linear
// convolution; output length = sps * n_symbols.
Waveform fir_shape(std::span<const cplx> symbols, const FirFilter& fir, double fs);

// Overlap-save frequency-domain dispersion filter (per-bin all-pass phasor).
// overlap = 0 is accepted exactly when fft_size equals the waveform length:
// the transform then degenerates to one cyclic block with nothing discarded.
// Otherwise overlap must cover the one-sided band-limited group-delay spread
// and be < fft_size/2.
Waveform fd_cd_filter(const Waveform& w, double beta2, double length_m, CdSign sign,
                      std::size_t fft_size, std::size_t overlap);

enum class ShapingVariant {
    ideal, // exact RC magnitude on the 2N grid, identical block partitioning
    fir,   // practical 21-tap baseline
};

// Pulse shaping followed by fd_cd_filter(precompensate). The ideal variant
// zero-stuffs each frame, runs a 2N-point FFT, and applies the RC and
// dispersion tables as two separate multiplies - an independent route that
// must agree with the block engine to round-off level.
Waveform cascade_precompensate(std::span<const cplx> symbols, const SystemConfig& cfg,
                               const DerivedConstants& consts, ShapingVariant variant);

// Shaping only (no dispersion filter), for post-compensated pipelines.
Waveform cascade_shape_only(std::span<const cplx> symbols, const SystemConfig& cfg,
                            const DerivedConstants& consts, ShapingVariant variant);

} // namespace cotx
