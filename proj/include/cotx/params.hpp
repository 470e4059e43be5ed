// params.hpp - system configuration, validation, and derived physical constants
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cotx {

inline constexpr double speed_of_light = 299792458.0; // m/s

struct ConfigError : std::runtime_error {
    std::string field;
    ConfigError(std::string fld, const std::string& what)
        : std::runtime_error(fld + ": " + what), field(std::move(fld)) {}
};

// All physical and DSP parameters in one validated record.
// Defaults reproduce the reference simulation point:
// 36 GBaud 16QAM at 2 samples/symbol, roll-off 0.2, D = 16 ps/(nm km) over
// 100 km at 1550 nm, 100 kHz linewidth lasers, 1 GHz carrier offset,
// OSNR 23 dB in 12.5 GHz, 128-symbol processing blocks.
struct SystemConfig {
    double baud_rate = 36e9;        // symbols/s
    int sps = 2;                    // samples per symbol (this artifact: exactly 2)
    double rolloff = 0.2;           // raised-cosine alpha, (0, 1]
    double dispersion_D = 16.0;     // ps/(nm km)
    double wavelength = 1550e-9;    // m
    double fiber_length = 100e3;    // m
    double linewidth = 100e3;       // Hz, per laser
    double freq_offset = 1e9;       // Hz
    double osnr_db = 23.0;          // dB in ref_bandwidth
    double ref_bandwidth = 12.5e9;  // Hz
    int block_symbols = 128;        // N, power of two
    int overlap_symbols = -1;       // V per side; -1 derives the default
    double dgd = 0.0;               // s
    unsigned long long seed = 21;   // master RNG seed
    std::string modulation = "QAM16";
};

struct DerivedConstants {
    double beta2 = 0.0;  // s^2/m, sign opposite to dispersion_D
    double ts = 0.0;     // symbol period, s
    double fs = 0.0;     // sample rate, Hz
    std::vector<double> omega_grid_2n; // rad/s, DC at index 0, wraparound to (-fs/2, fs/2]
};

// beta2 = -D lambda^2 / (2 pi c), D converted from ps/(nm km) to s/m^2
double derive_beta2(double dispersion_ps_nm_km, double wavelength_m);

// Angular frequencies of an unshifted n-point DFT at sample rate fs:
// index 0 is DC, indices k <= n/2 map to +k*fs/n, the rest wrap negative.
std::vector<double> make_omega_grid(int n_bins, double fs);

// Effective per-side block overlap: the configured value, or
// ceil(2 |beta2| L pi (1+alpha) / Ts^2) clamped to block_symbols/4 when derived.
int effective_overlap(const SystemConfig& cfg, double beta2);

// Checks every invariant (reporting the offending field) and derives constants.
DerivedConstants validate(const SystemConfig& cfg);

// JSON ingestion with exact field names; unknown keys are an error.
SystemConfig config_from_json_text(const std::string& text);
SystemConfig load_config_file(const std::string& path);
std::string config_to_json_text(const SystemConfig& cfg, int effective_overlap_symbols);

} // namespace cotx
