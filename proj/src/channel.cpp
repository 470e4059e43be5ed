#include "cotx/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cotx/cascade.hpp"
#include "cotx/fft.hpp"
#include "cotx/rng.hpp"

namespace cotx {

Waveform propagate_cd(const Waveform& w, double beta2, double length_m) {
    if (length_m == 0.0 || beta2 == 0.0 || w.size() == 0) return w;
    const std::size_t len = w.size();
    if (is_power_of_two(len)) {
        // One cyclic block: exact per-bin all-pass application.
        return fd_cd_filter(w, beta2, length_m, CdSign::propagate, len, 0);
    }
    // Guarded overlap-save sized so a single hop covers the waveform.
    const std::size_t m = 2 * next_power_of_two(len);
    return fd_cd_filter(w, beta2, length_m, CdSign::propagate, m, m / 4);
}

DualPolWaveform apply_dgd(const DualPolWaveform& w, double tau_s) {
    if (tau_s == 0.0) return w;
    if (w.x_pol.size() != w.y_pol.size())
        throw std::invalid_argument("apply_dgd: polarizations must have equal length");
    const std::size_t len = w.x_pol.size();
    const std::size_t m = is_power_of_two(len) ? len : 2 * next_power_of_two(len);

    cvec xf(m, cplx{0.0, 0.0});
    cvec yf(m, cplx{0.0, 0.0});
    std::copy(w.x_pol.samples.begin(), w.x_pol.samples.end(), xf.begin());
    std::copy(w.y_pol.samples.begin(), w.y_pol.samples.end(), yf.begin());

    Fft fft(m);
    fft.forward(xf);
    fft.forward(yf);

    const std::vector<double> grid = make_omega_grid(static_cast<int>(m), w.x_pol.sample_rate);
    const double c = std::numbers::sqrt2 / 2.0; // cos 45 deg = sin 45 deg
    for (std::size_t k = 0; k < m; ++k) {
        // Rotate into principal states, delay x by +tau/2 and y by -tau/2,
        // rotate back; the fixed 45-degree axes make DGD mix tributaries.
        const cplx a = c * (xf[k] + yf[k]);
        const cplx b = c * (-xf[k] + yf[k]);
        const double ph = 0.5 * grid[k] * tau_s;
        const cplx da = a * cplx{std::cos(ph), -std::sin(ph)};
        const cplx db = b * cplx{std::cos(ph), std::sin(ph)};
        xf[k] = c * (da - db);
        yf[k] = c * (da + db);
    }
    fft.inverse(xf);
    fft.inverse(yf);

    DualPolWaveform out;
    out.x_pol.sample_rate = w.x_pol.sample_rate;
    out.y_pol.sample_rate = w.y_pol.sample_rate;
    out.x_pol.samples.assign(xf.begin(), xf.begin() + static_cast<std::ptrdiff_t>(len));
    out.y_pol.samples.assign(yf.begin(), yf.begin() + static_cast<std::ptrdiff_t>(len));
    return out;
}

DualPolWaveform load_ase(const DualPolWaveform& w, double osnr_db, double ref_bandwidth,
                         std::uint64_t master_seed) {
    if (std::isinf(osnr_db)) return w;
    const double p_total = w.x_pol.mean_power() + w.y_pol.mean_power();
    const double osnr_lin = std::pow(10.0, osnr_db / 10.0);
    const double fs = w.x_pol.sample_rate;
    // Dual-polarization OSNR convention: the reference-bandwidth noise power
    // is split across both polarizations, then rescaled to the sample rate.
    const double var_per_pol = p_total / (2.0 * osnr_lin) * (fs / ref_bandwidth);
    const double sigma = std::sqrt(var_per_pol / 2.0); // per real component

    DualPolWaveform out = w;
    GaussianRng rx(master_seed, "ase/x");
    for (cplx& s : out.x_pol.samples) s += rx.circular_normal(sigma);
    GaussianRng ry(master_seed, "ase/y");
    for (cplx& s : out.y_pol.samples) s += ry.circular_normal(sigma);
    return out;
}

Waveform apply_phase_noise(const Waveform& w, double linewidth, std::uint64_t master_seed,
                           const char* label, std::vector<double>* phi_out) {
    if (linewidth == 0.0) {
        if (phi_out) phi_out->assign(w.size(), 0.0);
        return w;
    }
    const double var = 2.0 * std::numbers::pi * linewidth / w.sample_rate;
    const double sd = std::sqrt(var);
    GaussianRng rng(master_seed, label);

    Waveform out = w;
    std::vector<double> phi(w.size());
    double acc = 0.0;
    for (std::size_t n = 0; n < w.size(); ++n) {
        if (n > 0) acc += sd * rng.normal(); // phi[0] = 0: Wiener track starts clean
        phi[n] = acc;
        out.samples[n] *= cplx{std::cos(acc), std::sin(acc)};
    }
    if (phi_out) *phi_out = std::move(phi);
    return out;
}

Waveform apply_cfo(const Waveform& w, double delta_f) {
    if (delta_f == 0.0) return w;
    Waveform out = w;
    const double step = 2.0 * std::numbers::pi * delta_f / w.sample_rate;
    for (std::size_t n = 0; n < w.size(); ++n) {
        const double ph = step * static_cast<double>(n);
        out.samples[n] *= cplx{std::cos(ph), std::sin(ph)};
    }
    return out;
}

ChannelRun run_channel(const DualPolWaveform& tx, const SystemConfig& cfg,
                       const DerivedConstants& consts) {
    ChannelRun r;
    // One laser per end: the same labeled track multiplies both polarizations.
    Waveform x = apply_phase_noise(tx.x_pol, cfg.linewidth, cfg.seed, "pn/tx", &r.phi_tx);
    Waveform y = apply_phase_noise(tx.y_pol, cfg.linewidth, cfg.seed, "pn/tx");

    x = propagate_cd(x, consts.beta2, cfg.fiber_length);
    y = propagate_cd(y, consts.beta2, cfg.fiber_length);

    DualPolWaveform both{std::move(x), std::move(y)};
    both = apply_dgd(both, cfg.dgd);
    both = load_ase(both, cfg.osnr_db, cfg.ref_bandwidth, cfg.seed);

    both.x_pol = apply_cfo(both.x_pol, cfg.freq_offset);
    both.y_pol = apply_cfo(both.y_pol, cfg.freq_offset);

    both.x_pol = apply_phase_noise(both.x_pol, cfg.linewidth, cfg.seed, "pn/lo", &r.phi_lo);
    both.y_pol = apply_phase_noise(both.y_pol, cfg.linewidth, cfg.seed, "pn/lo");

    r.received = std::move(both);
    return r;
}

} // namespace cotx
