#include "cotx/filters.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cotx {

double rc_magnitude(double omega, double ts, double alpha) {
    if (ts <= 0.0) throw std::invalid_argument("rc_magnitude: ts must be positive");
    const double w = std::abs(omega);
    const double lo = std::numbers::pi * (1.0 - alpha) / ts;
    const double hi = std::numbers::pi * (1.0 + alpha) / ts;
    if (w <= lo) return ts;
    if (w > hi) return 0.0;
    // alpha = 0 never reaches here: lo == hi collapses the taper to nothing.
    return 0.5 * ts * (1.0 + std::cos((ts / (2.0 * alpha)) * (w - lo)));
}

cplx cd_phasor(double omega, double beta2, double length_m, CdSign sign) {
    double phase = static_cast<int>(sign) * 0.5 * beta2 * omega * omega * length_m;
    return {std::cos(phase), std::sin(phase)};
}

namespace {

JointFilter build_filter(const SystemConfig& cfg, const DerivedConstants& consts,
                         int n_symbols, CdSign sign, bool root_profile) {
    const int m = 2 * n_symbols;
    const std::vector<double>& grid =
        (static_cast<std::size_t>(m) == consts.omega_grid_2n.size())
            ? consts.omega_grid_2n
            : make_omega_grid(m, consts.fs);

    JointFilter f;
    f.coeffs.resize(static_cast<std::size_t>(m));
    f.stopband_mask.resize(static_cast<std::size_t>(m));
    f.n_symbols = n_symbols;
    f.cd_sign = sign;

    const double hi = std::numbers::pi * (1.0 + cfg.rolloff) / consts.ts;
    int passband = 0;
    for (int k = 0; k < m; ++k) {
        const double w = grid[static_cast<std::size_t>(k)];
        // Same strict comparison as rc_magnitude's zero branch, so masked
        // bins are exact zeros and band-edge bins count as passband.
        if (std::abs(w) > hi) {
            f.stopband_mask[static_cast<std::size_t>(k)] = 1;
            f.coeffs[static_cast<std::size_t>(k)] = 0.0;
            continue;
        }
        f.stopband_mask[static_cast<std::size_t>(k)] = 0;
        ++passband;
        double mag = rc_magnitude(w, consts.ts, cfg.rolloff);
        if (root_profile) mag = std::sqrt(mag);
        f.coeffs[static_cast<std::size_t>(k)] =
            mag * cd_phasor(w, consts.beta2, cfg.fiber_length, sign);
    }
    f.passband_count = passband;
    return f;
}

} // namespace

JointFilter build_joint_filter(const SystemConfig& cfg, const DerivedConstants& consts,
                               int n_symbols, CdSign sign) {
    return build_filter(cfg, consts, n_symbols, sign, false);
}

JointFilter build_joint_filter_rrc(const SystemConfig& cfg, const DerivedConstants& consts,
                                   int n_symbols, CdSign sign) {
    return build_filter(cfg, consts, n_symbols, sign, true);
}

} // namespace cotx
