// rxdsp.hpp - receiver chain: frequency-offset compensation, 2x2
// equalization, carrier-phase recovery, 16QAM decisions and bit demapping
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cotx/channel.hpp"
#include "cotx/params.hpp"
#include "cotx/waveform.hpp"

namespace cotx {

// Gray-mapped 16QAM, unit mean power. Per-axis mapping of bit pairs:
// 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3, all scaled by 1/sqrt(10);
// the first two bits of each 4-bit group drive the real axis.
// Convention: 0000 -> (-3-3j)/sqrt(10).
struct QamConstellation {
    std::array<cplx, 16> points;
    static constexpr int bits_per_symbol = 4;
};

const QamConstellation& qam16();

cvec map_bits(std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> demap_symbols(std::span<const cplx> symbols);
cplx decide_symbol(cplx x); // nearest constellation point

enum class CompMode { genie, estimate };

// genie: multiply by exp(-j 2 pi delta_f n / fs) with the configured offset.
// estimate: 4th-power spectral peak (FFT of w^4, peak bin / 4), then correct.
// Returns the corrected waveform and the offset that was removed.
std::pair<Waveform, double> cfo_compensate(const Waveform& w, CompMode mode,
                                           double delta_f_known);

enum class EqMode { bypass, lms };

struct EqConfig {
    EqMode mode = EqMode::bypass;
    int taps = 15;       // T/2-spaced
    double step = 1e-3;
    int train_symbols = 512;
    int epochs = 8;      // training passes over the prefix before freezing
};

// T/2-spaced 2x2 data-aided LMS converging on the training prefix, then
// frozen over the payload; bypass downsamples at the stronger of the two
// timing phases. Output is one sample per symbol per polarization.
std::pair<cvec, cvec> equalize_2x2(const DualPolWaveform& w,
                                   std::span<const cplx> train_x,
                                   std::span<const cplx> train_y,
                                   const EqConfig& cfg);

struct BpsConfig {
    int test_phases = 32;  // over [0, pi/2)
    int window = 64;       // averaging window, symbols
};

// Blind phase search with quarter-plane unwrapping between neighboring
// symbols. The residual quadrant ambiguity is resolved by the caller
// (prefix_phase_align) against a known prefix.
cvec carrier_phase_recover_bps(std::span<const cplx> symbols, const BpsConfig& cfg = {});

// Genie carrier recovery: remove a known phase track sampled at symbol rate.
cvec carrier_phase_recover_genie(std::span<const cplx> symbols,
                                 std::span<const double> phase_track);

// Least-squares complex gain fitted on the first prefix_len symbols and
// applied to the whole sequence; fixes quadrant ambiguity and any static
// rotation or scale left by earlier stages.
cvec prefix_phase_align(std::span<const cplx> symbols, std::span<const cplx> reference,
                        int prefix_len);

struct RxOptions {
    CompMode cfo = CompMode::genie;
    EqConfig eq;
    CompMode cpe = CompMode::genie;
    BpsConfig bps;
    int prefix_len = 512;
};

struct RxResult {
    cvec symbols_x, symbols_y;
    std::vector<std::uint8_t> bits_x, bits_y;
};

// Full receive chain over a channel run. tx_x/tx_y are the transmitted
// symbol sequences (training prefix and genie references are data-aided).
RxResult rx_chain(const ChannelRun& run, const SystemConfig& cfg,
                  const DerivedConstants& consts, std::span<const cplx> tx_x,
                  std::span<const cplx> tx_y, const RxOptions& opt);

} // namespace cotx
