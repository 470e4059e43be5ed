#include "cotx/rxdsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cotx/fft.hpp"

namespace cotx {

namespace {

constexpr double inv_sqrt10 = 0.31622776601683794; // 1/sqrt(10)

// Gray code per axis: bit pair (hi, lo) -> amplitude level.
double gray_level(int hi, int lo) {
    if (hi == 0 && lo == 0) return -3.0;
    if (hi == 0 && lo == 1) return -1.0;
    if (hi == 1 && lo == 1) return +1.0;
    return +3.0; // 10
}

int nearest_level(double v) {
    if (v < -2.0) return -3;
    if (v < 0.0) return -1;
    if (v < 2.0) return +1;
    return +3;
}

void level_to_bits(int level, std::uint8_t& hi, std::uint8_t& lo) {
    switch (level) {
        case -3: hi = 0; lo = 0; break;
        case -1: hi = 0; lo = 1; break;
        case +1: hi = 1; lo = 1; break;
        default: hi = 1; lo = 0; break; // +3
    }
}

} // namespace

const QamConstellation& qam16() {
    static const QamConstellation c = [] {
        QamConstellation q;
        for (int idx = 0; idx < 16; ++idx) {
            const int b0 = (idx >> 3) & 1, b1 = (idx >> 2) & 1;
            const int b2 = (idx >> 1) & 1, b3 = idx & 1;
            q.points[static_cast<std::size_t>(idx)] =
                cplx{gray_level(b0, b1), gray_level(b2, b3)} * inv_sqrt10;
        }
        return q;
    }();
    return c;
}

cvec map_bits(std::span<const std::uint8_t> bits) {
    if (bits.size() % 4 != 0)
        throw std::invalid_argument("map_bits: bit count must be divisible by 4");
    const QamConstellation& c = qam16();
    cvec out(bits.size() / 4);
    for (std::size_t s = 0; s < out.size(); ++s) {
        const std::size_t b = 4 * s;
        const int idx = (bits[b] << 3) | (bits[b + 1] << 2) | (bits[b + 2] << 1) | bits[b + 3];
        out[s] = c.points[static_cast<std::size_t>(idx)];
    }
    return out;
}

cplx decide_symbol(cplx x) {
    const double lr = nearest_level(x.real() / inv_sqrt10);
    const double li = nearest_level(x.imag() / inv_sqrt10);
    return cplx{lr, li} * inv_sqrt10;
}

std::vector<std::uint8_t> demap_symbols(std::span<const cplx> symbols) {
    std::vector<std::uint8_t> bits(4 * symbols.size());
    for (std::size_t s = 0; s < symbols.size(); ++s) {
        const int lr = nearest_level(symbols[s].real() / inv_sqrt10);
        const int li = nearest_level(symbols[s].imag() / inv_sqrt10);
        std::uint8_t b0, b1, b2, b3;
        level_to_bits(lr, b0, b1);
        level_to_bits(li, b2, b3);
        bits[4 * s] = b0;
        bits[4 * s + 1] = b1;
        bits[4 * s + 2] = b2;
        bits[4 * s + 3] = b3;
    }
    return bits;
}

std::pair<Waveform, double> cfo_compensate(const Waveform& w, CompMode mode,
                                           double delta_f_known) {
    double delta_f = delta_f_known;
    if (mode == CompMode::estimate) {
        // 4th-power method: raising to the 4th strips the quadrant modulation
        // and leaves a tone at 4x the offset; its FFT peak locates it.
        std::size_t m = 1;
        while (m * 2 <= w.size()) m *= 2;
        cvec buf(m);
        for (std::size_t n = 0; n < m; ++n) {
            const cplx s = w.samples[n];
            const cplx s2 = s * s;
            buf[n] = s2 * s2;
        }
        Fft fft(m);
        fft.forward(buf);
        std::size_t peak = 0;
        double best = -1.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double mag = std::norm(buf[k]);
            if (mag > best) {
                best = mag;
                peak = k;
            }
        }
        const double signed_bin = (peak <= m / 2)
                                      ? static_cast<double>(peak)
                                      : static_cast<double>(peak) - static_cast<double>(m);
        delta_f = signed_bin * w.sample_rate / static_cast<double>(m) / 4.0;
    }
    Waveform out = w;
    const double step = -2.0 * std::numbers::pi * delta_f / w.sample_rate;
    if (delta_f != 0.0) {
        for (std::size_t n = 0; n < out.size(); ++n) {
            const double ph = step * static_cast<double>(n);
            out.samples[n] *= cplx{std::cos(ph), std::sin(ph)};
        }
    }
    return {std::move(out), delta_f};
}

namespace {

cvec downsample_phase(const cvec& x, std::size_t phase) {
    cvec out;
    out.reserve(x.size() / 2);
    for (std::size_t i = phase; i < x.size(); i += 2) out.push_back(x[i]);
    return out;
}

} // namespace

std::pair<cvec, cvec> equalize_2x2(const DualPolWaveform& w,
                                   std::span<const cplx> train_x,
                                   std::span<const cplx> train_y,
                                   const EqConfig& cfg) {
    const cvec& x = w.x_pol.samples;
    const cvec& y = w.y_pol.samples;
    if (x.size() != y.size())
        throw std::invalid_argument("equalize_2x2: polarizations must have equal length");

    if (cfg.mode == EqMode::bypass) {
        double p0 = 0.0, p1 = 0.0;
        for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
            p0 += std::norm(x[i]) + std::norm(y[i]);
            p1 += std::norm(x[i + 1]) + std::norm(y[i + 1]);
        }
        const std::size_t phase = (p0 >= p1) ? 0 : 1;
        return {downsample_phase(x, phase), downsample_phase(y, phase)};
    }

    const int t = cfg.taps;
    const int c = t / 2;
    const std::size_t n_sym = x.size() / 2;
    cvec hxx(static_cast<std::size_t>(t), cplx{0.0, 0.0});
    cvec hxy = hxx, hyx = hxx, hyy = hxx;
    hxx[static_cast<std::size_t>(c)] = 1.0;
    hyy[static_cast<std::size_t>(c)] = 1.0;

    auto tap_input = [&](const cvec& src, std::size_t k, int tap) -> cplx {
        const long long i = 2 * static_cast<long long>(k) + tap - c;
        if (i < 0 || i >= static_cast<long long>(src.size())) return cplx{0.0, 0.0};
        return src[static_cast<std::size_t>(i)];
    };
    auto filter_at = [&](std::size_t k, cplx& ox, cplx& oy) {
        ox = cplx{0.0, 0.0};
        oy = cplx{0.0, 0.0};
        for (int tap = 0; tap < t; ++tap) {
            const cplx ux = tap_input(x, k, tap);
            const cplx uy = tap_input(y, k, tap);
            ox += hxx[static_cast<std::size_t>(tap)] * ux +
                  hxy[static_cast<std::size_t>(tap)] * uy;
            oy += hyx[static_cast<std::size_t>(tap)] * ux +
                  hyy[static_cast<std::size_t>(tap)] * uy;
        }
    };

    const std::size_t n_train = std::min<std::size_t>(
        {static_cast<std::size_t>(cfg.train_symbols), train_x.size(), train_y.size(), n_sym});
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t k = 0; k < n_train; ++k) {
            cplx ox, oy;
            filter_at(k, ox, oy);
            const cplx ex = train_x[k] - ox;
            const cplx ey = train_y[k] - oy;
            for (int tap = 0; tap < t; ++tap) {
                const cplx ux = std::conj(tap_input(x, k, tap));
                const cplx uy = std::conj(tap_input(y, k, tap));
                hxx[static_cast<std::size_t>(tap)] += cfg.step * ex * ux;
                hxy[static_cast<std::size_t>(tap)] += cfg.step * ex * uy;
                hyx[static_cast<std::size_t>(tap)] += cfg.step * ey * ux;
                hyy[static_cast<std::size_t>(tap)] += cfg.step * ey * uy;
            }
        }
    }

    cvec out_x(n_sym), out_y(n_sym);
    for (std::size_t k = 0; k < n_sym; ++k) filter_at(k, out_x[k], out_y[k]);
    return {std::move(out_x), std::move(out_y)};
}

cvec carrier_phase_recover_bps(std::span<const cplx> symbols, const BpsConfig& cfg) {
    const std::size_t n = symbols.size();
    const int b_count = cfg.test_phases;
    const std::size_t w = static_cast<std::size_t>(cfg.window);
    if (n == 0) return {};

    // Windowed decision-distance sums per test phase via prefix sums.
    std::vector<double> win_err(n * static_cast<std::size_t>(b_count));
    std::vector<double> prefix(n + 1);
    std::vector<cplx> rot(static_cast<std::size_t>(b_count));
    for (int b = 0; b < b_count; ++b) {
        const double phi = (std::numbers::pi / 2.0) * b / b_count;
        rot[static_cast<std::size_t>(b)] = cplx{std::cos(phi), std::sin(phi)};
    }
    for (int b = 0; b < b_count; ++b) {
        prefix[0] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const cplx s = symbols[k] * rot[static_cast<std::size_t>(b)];
            prefix[k + 1] = prefix[k] + std::norm(s - decide_symbol(s));
        }
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t lo = (k >= w / 2) ? k - w / 2 : 0;
            const std::size_t hi = std::min(n, k + w / 2 + 1);
            win_err[k * static_cast<std::size_t>(b_count) + static_cast<std::size_t>(b)] =
                prefix[hi] - prefix[lo];
        }
    }

    cvec out(n);
    double prev_phi = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        int best_b = 0;
        double best = win_err[k * static_cast<std::size_t>(b_count)];
        for (int b = 1; b < b_count; ++b) {
            const double e = win_err[k * static_cast<std::size_t>(b_count) +
                                     static_cast<std::size_t>(b)];
            if (e < best) {
                best = e;
                best_b = b;
            }
        }
        double phi = (std::numbers::pi / 2.0) * best_b / b_count;
        if (k > 0) {
            // Quarter-plane unwrap: stay within pi/4 of the previous estimate.
            const double quarter = std::numbers::pi / 2.0;
            while (phi - prev_phi > quarter / 2.0) phi -= quarter;
            while (prev_phi - phi > quarter / 2.0) phi += quarter;
        }
        prev_phi = phi;
        out[k] = symbols[k] * cplx{std::cos(phi), std::sin(phi)};
    }
    return out;
}

cvec carrier_phase_recover_genie(std::span<const cplx> symbols,
                                 std::span<const double> phase_track) {
    if (symbols.size() != phase_track.size())
        throw std::invalid_argument("genie CPE: track length must match symbols");
    cvec out(symbols.size());
    for (std::size_t k = 0; k < symbols.size(); ++k)
        out[k] = symbols[k] * cplx{std::cos(phase_track[k]), -std::sin(phase_track[k])};
    return out;
}

cvec prefix_phase_align(std::span<const cplx> symbols, std::span<const cplx> reference,
                        int prefix_len) {
    const std::size_t p = std::min<std::size_t>(
        {static_cast<std::size_t>(prefix_len), symbols.size(), reference.size()});
    cplx num{0.0, 0.0};
    double den = 0.0;
    for (std::size_t k = 0; k < p; ++k) {
        num += reference[k] * std::conj(symbols[k]);
        den += std::norm(symbols[k]);
    }
    const cplx g = (den > 0.0) ? num / den : cplx{1.0, 0.0};
    cvec out(symbols.size());
    for (std::size_t k = 0; k < symbols.size(); ++k) out[k] = g * symbols[k];
    return out;
}

RxResult rx_chain(const ChannelRun& run, const SystemConfig& cfg,
                  const DerivedConstants& consts, std::span<const cplx> tx_x,
                  std::span<const cplx> tx_y, const RxOptions& opt) {
    (void)consts;
    // Frequency offset first: one physical offset, estimated once on x and
    // removed identically from both polarizations.
    auto [x, f_hat] = cfo_compensate(run.received.x_pol, opt.cfo, cfg.freq_offset);
    auto [y, f_dup] = cfo_compensate(run.received.y_pol, CompMode::genie, f_hat);
    (void)f_dup;

    DualPolWaveform both{std::move(x), std::move(y)};
    auto [sx, sy] = equalize_2x2(both, tx_x, tx_y, opt.eq);

    if (opt.cpe == CompMode::genie) {
        // Combined laser phase at the symbol instants (even sample indices).
        std::vector<double> track(sx.size(), 0.0);
        for (std::size_t k = 0; k < track.size(); ++k) {
            const std::size_t i = 2 * k;
            double ph = 0.0;
            if (i < run.phi_tx.size()) ph += run.phi_tx[i];
            if (i < run.phi_lo.size()) ph += run.phi_lo[i];
            track[k] = ph;
        }
        sx = carrier_phase_recover_genie(sx, track);
        sy = carrier_phase_recover_genie(sy, track);
    } else {
        sx = carrier_phase_recover_bps(sx, opt.bps);
        sy = carrier_phase_recover_bps(sy, opt.bps);
    }

    RxResult r;
    r.symbols_x = prefix_phase_align(sx, tx_x, opt.prefix_len);
    r.symbols_y = prefix_phase_align(sy, tx_y, opt.prefix_len);
    r.bits_x = demap_symbols(r.symbols_x);
    r.bits_y = demap_symbols(r.symbols_y);
    return r;
}

} // namespace cotx
