// filters.hpp - frequency-domain tables: dispersion phase, raised-cosine
// magnitude, and their joint product with the stop-band skip mask
#pragma once

#include <cstdint>
#include <vector>

#include "cotx/params.hpp"
#include "cotx/waveform.hpp"

namespace cotx {

enum class CdSign : int {
    precompensate = +1, // conjugate phase applied at the transmitter
    propagate = -1,     // fiber propagation phase
};

// Raised-cosine spectrum magnitude:
//   Ts                                          for |w| <= pi(1-alpha)/Ts
//   (Ts/2)(1 + cos((Ts/2alpha)(|w| - pi(1-alpha)/Ts)))  in the roll-off band
//   0                                           for |w| >  pi(1+alpha)/Ts
// alpha = 0 degenerates to the brick wall. Band-edge bins exactly at
// pi(1+alpha)/Ts count as passband.
double rc_magnitude(double omega, double ts, double alpha);

// All-pass dispersion phasor exp(sign * j (beta2/2) w^2 L).
cplx cd_phasor(double omega, double beta2, double length_m, CdSign sign);

struct JointFilter {
    cvec coeffs;                       // 2N entries over the wraparound grid
    std::vector<std::uint8_t> stopband_mask; // 1 where |w| > pi(1+alpha)/Ts
    int passband_count = 0;
    int n_symbols = 0;
    CdSign cd_sign = CdSign::precompensate;
};

// coeffs[k] = rc_magnitude(w_k) * cd_phasor(w_k); stop-band entries are
// exact zeros. The table is data-independent and immutable once built.
JointFilter build_joint_filter(const SystemConfig& cfg, const DerivedConstants& consts,
                               int n_symbols, CdSign sign);

// Optional root-raised-cosine profile (square root of the same magnitude)
// for match-filtered pipelines; not used by the default configuration.
JointFilter build_joint_filter_rrc(const SystemConfig& cfg, const DerivedConstants& consts,
                                   int n_symbols, CdSign sign);

} // namespace cotx
