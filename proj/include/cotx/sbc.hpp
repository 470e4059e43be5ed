// sbc.hpp - square-boundary clipping: per-sample scaling onto the square
// |Re|,|Im| <= A_th with a comparison-only decision path
#pragma once

#include <cstdint>

#include "cotx/waveform.hpp"

namespace cotx {

struct ClipStats {
    std::uint64_t seen = 0;
    std::uint64_t clipped = 0;
};

struct ClipConfig {
    double cr_db = 0.0;
    double threshold = 0.0; // A_th, > 0
    ClipStats stats;
};

// A_th = sqrt(mean_power) * 10^(cr_db/20)
double threshold_from_cr(double mean_power, double cr_db);

// m = max(|Re|, |Im|); samples with m > A_th are scaled by A_th/m (phase
// preserved exactly); everything else passes through untouched, so the
// decision path costs comparisons only. Components are clamped to A_th
// after scaling so a second pass is a bitwise no-op.
cplx clip_sample(cplx x, double a_th);

// Threshold derived from the waveform's own mean power.
ClipConfig make_clip_config(const Waveform& w, double cr_db);

Waveform clip_waveform(const Waveform& w, ClipConfig& cfg);

} // namespace cotx
