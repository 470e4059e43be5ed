#include "cotx/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace cotx {

std::vector<double> papr_windowed(const Waveform& w, int window_samples) {
    if (window_samples <= 0)
        throw std::invalid_argument("papr_windowed: window must be positive");
    const double mean = w.mean_power();
    if (!(mean > 0.0))
        throw std::invalid_argument("papr_windowed: waveform has no power");
    const std::size_t ws = static_cast<std::size_t>(window_samples);
    const std::size_t n_windows = w.size() / ws; // trailing partial window dropped
    std::vector<double> out(n_windows);
    for (std::size_t i = 0; i < n_windows; ++i) {
        double peak = 0.0;
        for (std::size_t k = i * ws; k < (i + 1) * ws; ++k)
            peak = std::max(peak, std::norm(w.samples[k]));
        out[i] = 10.0 * std::log10(peak / mean);
    }
    return out;
}

CcdfCurve ccdf(std::span<const double> paprs_db, std::span<const double> thresholds_db,
               int window_samples) {
    CcdfCurve c;
    c.window_samples = window_samples;
    c.n_windows = static_cast<int>(paprs_db.size());
    c.thresholds_db.assign(thresholds_db.begin(), thresholds_db.end());
    c.probabilities.resize(thresholds_db.size());
    for (std::size_t t = 0; t < thresholds_db.size(); ++t) {
        std::size_t exceed = 0;
        for (double p : paprs_db)
            if (p > thresholds_db[t]) ++exceed;
        c.probabilities[t] =
            paprs_db.empty() ? 0.0
                             : static_cast<double>(exceed) / static_cast<double>(paprs_db.size());
    }
    return c;
}

double papr_at_probability(std::span<const double> paprs_db, double prob) {
    if (paprs_db.empty())
        throw std::invalid_argument("papr_at_probability: no windows");
    if (!(prob > 0.0 && prob < 1.0))
        throw std::invalid_argument("papr_at_probability: probability must be in (0, 1)");
    std::vector<double> sorted(paprs_db.begin(), paprs_db.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const std::size_t n = sorted.size();
    // Empirical exceedance of the (i+1) largest windows is (i+1)/n; the
    // requested probability is log-interpolated between neighboring order
    // statistics.
    auto p_of = [n](std::size_t i) {
        return static_cast<double>(i + 1) / static_cast<double>(n);
    };
    if (prob <= p_of(0)) return sorted[0];
    if (prob >= p_of(n - 1)) return sorted[n - 1];
    std::size_t i = 0;
    while (p_of(i + 1) < prob) ++i;
    const double lo = std::log10(p_of(i)), hi = std::log10(p_of(i + 1));
    const double t = (std::log10(prob) - lo) / (hi - lo);
    return sorted[i] + t * (sorted[i + 1] - sorted[i]);
}

BerResult ber_count(std::span<const std::uint8_t> rx, std::span<const std::uint8_t> tx) {
    if (rx.size() != tx.size())
        throw std::invalid_argument("ber_count: bit streams must have equal length");
    BerResult r;
    r.total = rx.size();
    for (std::size_t i = 0; i < rx.size(); ++i)
        if (rx[i] != tx[i]) ++r.errors;
    r.ber = r.total ? static_cast<double>(r.errors) / static_cast<double>(r.total) : 0.0;
    return r;
}

double erfc_inv(double y) {
    if (!(y > 0.0 && y < 2.0))
        throw std::invalid_argument("erfc_inv: argument must be in (0, 2)");
    if (y == 1.0) return 0.0;
    if (y > 1.0) return -erfc_inv(2.0 - y);
    // Newton iteration on erfc(x) - y with a log-based starting point.
    double x = std::sqrt(std::max(0.0, -std::log(y)));
    for (int it = 0; it < 100; ++it) {
        const double f = std::erfc(x) - y;
        const double df = -2.0 / std::sqrt(std::numbers::pi) * std::exp(-x * x);
        const double step = f / df;
        x -= step;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

double q_from_ber(double ber) {
    if (ber <= 0.0) return std::numeric_limits<double>::infinity();
    if (ber >= 0.5) return -std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(std::numbers::sqrt2 * erfc_inv(2.0 * ber));
}

double evm_rms(std::span<const cplx> rx, std::span<const cplx> ref, bool auto_normalize) {
    if (rx.size() != ref.size() || rx.empty())
        throw std::invalid_argument("evm_rms: sequences must be non-empty and equal length");
    cplx g{1.0, 0.0};
    if (auto_normalize) {
        cplx num{0.0, 0.0};
        double den = 0.0;
        for (std::size_t i = 0; i < rx.size(); ++i) {
            num += ref[i] * std::conj(rx[i]);
            den += std::norm(rx[i]);
        }
        if (den > 0.0) g = num / den;
    }
    double err = 0.0, pref = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        err += std::norm(g * rx[i] - ref[i]);
        pref += std::norm(ref[i]);
    }
    if (pref == 0.0)
        throw std::invalid_argument("evm_rms: reference has no power");
    return std::sqrt(err / pref);
}

double q_from_evm(double evm) {
    if (evm <= 0.0) return std::numeric_limits<double>::infinity();
    return -20.0 * std::log10(evm);
}

double mults_jfscd(int n, double alpha) {
    const double nn = static_cast<double>(n);
    return (8.0 / nn) *
           (nn / 2.0 * std::log2(nn) + (1.0 + alpha) * nn + nn * std::log2(2.0 * nn));
}

double mults_cascade(int n, int fir_taps) {
    return 2.0 * fir_taps + 16.0 * std::log2(2.0 * static_cast<double>(n)) + 16.0;
}

ComplexityReport complexity_report(int n, double alpha, int fir_taps) {
    ComplexityReport r;
    r.n = n;
    r.alpha = alpha;
    r.fir_taps = fir_taps;
    r.jfscd_mults_per_symbol = mults_jfscd(n, alpha);
    r.cascade_mults_per_symbol = mults_cascade(n, fir_taps);
    r.reduction_fraction = 1.0 - r.jfscd_mults_per_symbol / r.cascade_mults_per_symbol;
    return r;
}

} // namespace cotx
