#include "cotx/sbc.hpp"

#include <cmath>
#include <stdexcept>

namespace cotx {

double threshold_from_cr(double mean_power, double cr_db) {
    if (!(mean_power > 0.0))
        throw std::invalid_argument("threshold_from_cr: mean power must be positive");
    return std::sqrt(mean_power) * std::pow(10.0, cr_db / 20.0);
}

cplx clip_sample(cplx x, double a_th) {
    const double m = std::max(std::abs(x.real()), std::abs(x.imag()));
    if (!(m > a_th)) return x; // comparison only: no multiply on the fast path
    const double scale = a_th / m;
    double re = x.real() * scale;
    double im = x.imag() * scale;
    // The scaled larger component equals a_th up to rounding; clamp both so a
    // second pass sees max(|Re|,|Im|) <= a_th and changes nothing (bitwise
    // idempotence).
    if (std::abs(re) > a_th) re = std::copysign(a_th, re);
    if (std::abs(im) > a_th) im = std::copysign(a_th, im);
    return {re, im};
}

ClipConfig make_clip_config(const Waveform& w, double cr_db) {
    ClipConfig cfg;
    cfg.cr_db = cr_db;
    cfg.threshold = threshold_from_cr(w.mean_power(), cr_db);
    return cfg;
}

Waveform clip_waveform(const Waveform& w, ClipConfig& cfg) {
    if (!(cfg.threshold > 0.0))
        throw std::invalid_argument("clip_waveform: threshold must be positive");
    Waveform out = w;
    for (cplx& s : out.samples) {
        ++cfg.stats.seen;
        const double m = std::max(std::abs(s.real()), std::abs(s.imag()));
        if (m > cfg.threshold) {
            ++cfg.stats.clipped;
            s = clip_sample(s, cfg.threshold);
        }
    }
    return out;
}

} // namespace cotx
