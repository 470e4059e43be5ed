#include "cotx/cascade.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cotx/fft.hpp"

namespace cotx {

namespace {

double sinc(double x) {
    if (x == 0.0) return 1.0;
    double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

// Raised-cosine impulse response in symbol units, h(0) = 1.
double rc_impulse(double u, double alpha) {
    double denom = 1.0 - (2.0 * alpha * u) * (2.0 * alpha * u);
    if (std::abs(denom) < 1e-10)
        return (std::numbers::pi / 4.0) * sinc(1.0 / (2.0 * alpha));
    return sinc(u) * std::cos(std::numbers::pi * alpha * u) / denom;
}

} // namespace

FirFilter rc_fir_taps(double alpha, int span_symbols, int sps) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("rc_fir_taps: alpha must lie in (0, 1]");
    if (span_symbols <= 0 || sps <= 0)
        throw std::invalid_argument("rc_fir_taps: span and sps must be positive");
    FirFilter f;
    f.span_symbols = span_symbols;
    f.sps = sps;
    const int count = span_symbols * sps + 1;
    const int center = span_symbols * sps / 2;
    f.taps.resize(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        double u = static_cast<double>(k - center) / sps;
        f.taps[static_cast<std::size_t>(k)] = rc_impulse(u, alpha);
    }
    return f;
}

Waveform fir_shape(std::span<const cplx> symbols, const FirFilter& fir, double fs) {
    const int sps = fir.sps;
    const std::size_t n_out = symbols.size() * static_cast<std::size_t>(sps);
    const int center = static_cast<int>(fir.taps.size()) / 2;
    Waveform w;
    w.sample_rate = fs;
    w.samples.assign(n_out, cplx{0.0, 0.0});
    // Zero-stuffed "same" convolution: only every sps-th input is nonzero, so
    // iterate symbols and scatter each one's windowed pulse.
    for (std::size_t s = 0; s < symbols.size(); ++s) {
        const cplx sym = symbols[s];
        if (sym == cplx{0.0, 0.0}) continue;
        const long long base = static_cast<long long>(s) * sps;
        for (std::size_t k = 0; k < fir.taps.size(); ++k) {
            const long long i = base + static_cast<long long>(k) - center;
            if (i < 0 || i >= static_cast<long long>(n_out)) continue;
            w.samples[static_cast<std::size_t>(i)] += sym * fir.taps[k];
        }
    }
    return w;
}

Waveform fd_cd_filter(const Waveform& w, double beta2, double length_m, CdSign sign,
                      std::size_t fft_size, std::size_t overlap) {
    if (!is_power_of_two(fft_size))
        throw std::invalid_argument("fd_cd_filter: fft_size must be a power of two");
    if (overlap >= fft_size / 2)
        throw std::invalid_argument("fd_cd_filter: overlap must be below fft_size/2");
    if (overlap == 0 && fft_size != w.size())
        throw std::invalid_argument(
            "fd_cd_filter: zero overlap requires fft_size == waveform length (cyclic block)");

    const std::vector<double> grid = make_omega_grid(static_cast<int>(fft_size), w.sample_rate);
    cvec phasor(fft_size);
    for (std::size_t k = 0; k < fft_size; ++k)
        phasor[k] = cd_phasor(grid[k], beta2, length_m, sign);

    Fft fft(fft_size);
    Waveform out;
    out.sample_rate = w.sample_rate;

    if (overlap == 0) {
        // Single cyclic block: exact per-bin application, nothing discarded.
        cvec buf = w.samples;
        fft.forward(buf);
        for (std::size_t k = 0; k < fft_size; ++k) buf[k] *= phasor[k];
        fft.inverse(buf);
        out.samples = std::move(buf);
        return out;
    }

    // Guarded overlap-save: each block reads `overlap` extra samples per side
    // (zero-padded beyond the ends) and only the middle hop is kept, so the
    // cyclic wraparound lands entirely in the discarded guards. The caller
    // chooses `overlap` to cover the dispersion memory.
    const std::size_t len = w.size();
    const std::size_t hop = fft_size - 2 * overlap;
    out.samples.assign(len, cplx{0.0, 0.0});
    cvec buf(fft_size);
    for (std::size_t start = 0; start < len; start += hop) {
        for (std::size_t i = 0; i < fft_size; ++i) {
            const long long src = static_cast<long long>(start + i) -
                                  static_cast<long long>(overlap);
            buf[i] = (src >= 0 && src < static_cast<long long>(len))
                         ? w.samples[static_cast<std::size_t>(src)]
                         : cplx{0.0, 0.0};
        }
        fft.forward(buf);
        for (std::size_t k = 0; k < fft_size; ++k) buf[k] *= phasor[k];
        fft.inverse(buf);
        const std::size_t take = std::min(hop, len - start);
        for (std::size_t i = 0; i < take; ++i) out.samples[start + i] = buf[overlap + i];
    }
    return out;
}

namespace {

// Shared frame partitioning with the block engine: frames of N symbols
// advance by N-2V with V overlap per side, 2V output samples dropped per
// side. Shaping and dispersion are applied as two separate table multiplies
// on the zero-stuffed 2N-point spectrum - an independent route to the same
// waveform.
Waveform blockwise_ideal(std::span<const cplx> symbols, const SystemConfig& cfg,
                         const DerivedConstants& consts, bool with_cd) {
    const int n = cfg.block_symbols;
    const int v = effective_overlap(cfg, consts.beta2);
    const int hop = n - 2 * v;
    if (hop <= 0) throw std::invalid_argument("ideal cascade: block must hold 4x overlap");
    const std::size_t s = symbols.size();
    if (s < static_cast<std::size_t>(hop))
        throw std::invalid_argument("ideal cascade: need at least one frame of symbols");

    const std::size_t m = static_cast<std::size_t>(2 * n);
    const std::vector<double>& grid =
        (m == consts.omega_grid_2n.size()) ? consts.omega_grid_2n
                                           : make_omega_grid(2 * n, consts.fs);
    // RC magnitude with the 2/Ts oversampling gain folded in, exact zeros in
    // the stop band; CD phasor kept as a separate table.
    std::vector<double> rc(m);
    cvec cd(m);
    const double gain = 2.0 / consts.ts;
    for (std::size_t k = 0; k < m; ++k) {
        rc[k] = rc_magnitude(grid[k], consts.ts, cfg.rolloff) * gain;
        cd[k] = cd_phasor(grid[k], consts.beta2, cfg.fiber_length, CdSign::precompensate);
    }

    Fft fft_2n(m);
    const std::size_t n_blocks = (s + static_cast<std::size_t>(hop) - 1) /
                                 static_cast<std::size_t>(hop);
    Waveform out;
    out.sample_rate = consts.fs;
    out.samples.resize(2 * n_blocks * static_cast<std::size_t>(hop));

    cvec buf(m);
    for (std::size_t b = 0; b < n_blocks; ++b) {
        const long long first = static_cast<long long>(b) * hop - v;
        for (int i = 0; i < n; ++i) {
            const long long idx = first + i;
            const cplx sym = (idx >= 0 && idx < static_cast<long long>(s))
                                 ? symbols[static_cast<std::size_t>(idx)]
                                 : cplx{0.0, 0.0};
            buf[static_cast<std::size_t>(2 * i)] = sym;
            buf[static_cast<std::size_t>(2 * i + 1)] = cplx{0.0, 0.0};
        }
        fft_2n.forward(buf);
        for (std::size_t k = 0; k < m; ++k) buf[k] *= rc[k];
        if (with_cd)
            for (std::size_t k = 0; k < m; ++k) buf[k] *= cd[k];
        fft_2n.inverse(buf);
        std::copy(buf.begin() + 2 * v, buf.end() - 2 * v,
                  out.samples.begin() +
                      static_cast<std::ptrdiff_t>(2 * b * static_cast<std::size_t>(hop)));
    }
    out.samples.resize(2 * s);
    return out;
}

Waveform fir_variant(std::span<const cplx> symbols, const SystemConfig& cfg,
                     const DerivedConstants& consts, bool with_cd) {
    const FirFilter fir = rc_fir_taps(cfg.rolloff, 10, cfg.sps); // 21-tap baseline
    Waveform shaped = fir_shape(symbols, fir, consts.fs);
    if (!with_cd || cfg.fiber_length == 0.0) return shaped;
    const std::size_t fft_size = static_cast<std::size_t>(2 * cfg.block_symbols);
    return fd_cd_filter(shaped, consts.beta2, cfg.fiber_length, CdSign::precompensate,
                        fft_size, fft_size / 4);
}

} // namespace

Waveform cascade_precompensate(std::span<const cplx> symbols, const SystemConfig& cfg,
                               const DerivedConstants& consts, ShapingVariant variant) {
    return variant == ShapingVariant::ideal ? blockwise_ideal(symbols, cfg, consts, true)
                                            : fir_variant(symbols, cfg, consts, true);
}

Waveform cascade_shape_only(std::span<const cplx> symbols, const SystemConfig& cfg,
                            const DerivedConstants& consts, ShapingVariant variant) {
    return variant == ShapingVariant::ideal ? blockwise_ideal(symbols, cfg, consts, false)
                                            : fir_variant(symbols, cfg, consts, false);
}

} // namespace cotx
