// jfscd.hpp - block engine: joint shaping + dispersion pre-compensation via
// N-point FFT, spectral replication, masked multiply, 2N-point IFFT, and
// overlap-discard stitching
#pragma once

#include <span>

#include "cotx/fft.hpp"
#include "cotx/filters.hpp"
#include "cotx/params.hpp"
#include "cotx/waveform.hpp"

namespace cotx {

struct SymbolFrame {
    cvec symbols;        // exactly N entries, V overlap symbols on each side
    int block_index = 0;
    int valid_begin = 0; // [valid_begin, valid_end) are the non-overlap symbols
    int valid_end = 0;
};

struct OversampledBlock {
    cvec samples;        // 2(N - 2V) samples after discarding
    int block_index = 0;
};

// out[k] = x[k mod N] for k in [0, 2N): periodic copy of an N-bin spectrum,
// equivalent to 2x zero-stuffing in time.
cvec replicate_spectrum(const cvec& x_freq);

class BlockEngine {
public:
    BlockEngine(const SystemConfig& cfg, const DerivedConstants& consts, CdSign sign);

    int n_symbols() const { return n_; }
    int overlap() const { return v_; }
    int hop() const { return n_ - 2 * v_; }
    const JointFilter& filter() const { return filter_; }

    // FFT_N -> replicate -> masked multiply -> IFFT_2N -> drop 2V per side.
    // Stop-band bins are written as exact zeros without multiplication.
    // Scaled so unit symbols map to unit pulse peaks at symbol instants.
    OversampledBlock process_block(const SymbolFrame& frame) const;

    // Partitions the stream into frames advancing by N-2V with V-symbol
    // overlap per side (edges zero-padded), concatenates the retained
    // samples; output length = 2 * n_symbols_in. Frames are independent, so
    // blocks may be processed on several threads; ordering is deterministic.
    Waveform run_stream(std::span<const cplx> symbols, int threads = 1) const;

    SymbolFrame make_frame(std::span<const cplx> symbols, int block_index) const;

private:
    int n_;
    int v_;
    double ts_;
    double fs_;
    JointFilter filter_;   // unit-gain table as built
    cvec scaled_coeffs_;   // filter coeffs with the 2/Ts output gain folded in
    Fft fft_n_;
    Fft fft_2n_;
};

} // namespace cotx
