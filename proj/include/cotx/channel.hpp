// channel.hpp - fiber and impairment model: forward dispersion, first-order
// DGD, ASE loading per OSNR, laser phase noise, carrier frequency offset
#pragma once

#include <cstdint>
#include <vector>

#include "cotx/params.hpp"
#include "cotx/waveform.hpp"

namespace cotx {

// Forward dispersion (propagate sign). Power-of-two-length waveforms are
// filtered as a single cyclic block (exact per-bin application); other
// lengths fall back to guarded overlap-save.
Waveform propagate_cd(const Waveform& w, double beta2, double length_m);

// First-order DGD: fixed 45-degree rotation, +tau/2 / -tau/2 frequency-domain
// delays on the principal states, rotate back, so the delay mixes tributaries.
DualPolWaveform apply_dgd(const DualPolWaveform& w, double tau_s);

// Adds circular complex Gaussian noise per polarization with per-sample
// variance P_total / (2 OSNR_lin) * (fs / ref_bandwidth), where P_total is
// the mean total signal power across both polarizations (dual-polarization
// OSNR convention). osnr_db = +inf is the identity.
DualPolWaveform load_ase(const DualPolWaveform& w, double osnr_db, double ref_bandwidth,
                         std::uint64_t master_seed);

// Multiplies by exp(j phi[n]) with phi a Wiener process of increment
// variance 2 pi linewidth / fs. If phi_out is non-null the track is stored
// for genie-mode receivers.
Waveform apply_phase_noise(const Waveform& w, double linewidth, std::uint64_t master_seed,
                           const char* label, std::vector<double>* phi_out = nullptr);

Waveform apply_cfo(const Waveform& w, double delta_f);

struct ChannelRun {
    DualPolWaveform received;
    std::vector<double> phi_tx; // transmit-laser phase track (shared by both pols)
    std::vector<double> phi_lo; // receive-laser phase track
};

// Full impairment chain in the pinned order:
// TX phase noise -> dispersion -> DGD -> ASE -> CFO -> LO phase noise.
// With every impairment disabled (L=0, dgd=0, osnr=inf, linewidth=0,
// offset=0) this is the exact identity.
ChannelRun run_channel(const DualPolWaveform& tx, const SystemConfig& cfg,
                       const DerivedConstants& consts);

} // namespace cotx
