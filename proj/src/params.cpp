#include "cotx/params.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "cotx/fft.hpp"
#include "json.hpp"

namespace cotx {

double derive_beta2(double dispersion_ps_nm_km, double wavelength_m) {
    if (!std::isfinite(dispersion_ps_nm_km))
        throw ConfigError("dispersion_D", "must be finite");
    if (!std::isfinite(wavelength_m) || wavelength_m <= 0.0)
        throw ConfigError("wavelength", "must be finite and positive");
    // ps/(nm km) -> s/m^2 is a factor 1e-6.
    double d_si = dispersion_ps_nm_km * 1e-6;
    return -d_si * wavelength_m * wavelength_m / (2.0 * std::numbers::pi * speed_of_light);
}

std::vector<double> make_omega_grid(int n_bins, double fs) {
    std::vector<double> w(static_cast<std::size_t>(n_bins));
    double step = 2.0 * std::numbers::pi * fs / n_bins;
    for (int k = 0; k < n_bins; ++k) {
        // Indices up to n/2 inclusive map to non-negative frequency; the rest
        // wrap to (-fs/2, 0), so the single extreme bin sits at +pi*fs.
        int idx = (k <= n_bins / 2) ? k : k - n_bins;
        w[static_cast<std::size_t>(k)] = idx * step;
    }
    return w;
}

int effective_overlap(const SystemConfig& cfg, double beta2) {
    if (cfg.overlap_symbols >= 0) return cfg.overlap_symbols;
    double ts = 1.0 / cfg.baud_rate;
    double spread_symbols = 2.0 * std::abs(beta2) * cfg.fiber_length * std::numbers::pi *
                            (1.0 + cfg.rolloff) / (ts * ts);
    int v = static_cast<int>(std::ceil(spread_symbols));
    int cap = cfg.block_symbols / 4;
    return v > cap ? cap : v;
}

DerivedConstants validate(const SystemConfig& cfg) {
    auto fail = [](const char* field, const char* why) {
        throw ConfigError(field, why);
    };
    if (!(cfg.baud_rate > 0.0) || !std::isfinite(cfg.baud_rate))
        fail("baud_rate", "must be finite and positive");
    if (cfg.sps != 2)
        fail("sps", "only 2 samples per symbol is supported");
    if (!(cfg.rolloff > 0.0 && cfg.rolloff <= 1.0))
        fail("rolloff", "must lie in (0, 1]");
    if (!std::isfinite(cfg.dispersion_D))
        fail("dispersion_D", "must be finite");
    if (!std::isfinite(cfg.wavelength) || cfg.wavelength <= 0.0)
        fail("wavelength", "must be finite and positive");
    if (!(cfg.fiber_length >= 0.0) || !std::isfinite(cfg.fiber_length))
        fail("fiber_length", "must be finite and non-negative");
    if (!(cfg.linewidth >= 0.0) || !std::isfinite(cfg.linewidth))
        fail("linewidth", "must be finite and non-negative");
    if (!std::isfinite(cfg.freq_offset))
        fail("freq_offset", "must be finite");
    if (!std::isfinite(cfg.osnr_db))
        fail("osnr_db", "must be finite");
    if (!(cfg.ref_bandwidth > 0.0) || !std::isfinite(cfg.ref_bandwidth))
        fail("ref_bandwidth", "must be finite and positive");
    if (cfg.block_symbols < 4 || !is_power_of_two(static_cast<std::size_t>(cfg.block_symbols)))
        fail("block_symbols", "must be a power of two (at least 4)");
    if (cfg.overlap_symbols < -1)
        fail("overlap_symbols", "must be non-negative (or -1 to derive)");
    if (cfg.overlap_symbols >= 0 && cfg.block_symbols < 4 * cfg.overlap_symbols)
        fail("overlap_symbols", "block_symbols must be at least four times the overlap");
    if (!(cfg.dgd >= 0.0) || !std::isfinite(cfg.dgd))
        fail("dgd", "must be finite and non-negative");
    if (cfg.modulation != "QAM16")
        fail("modulation", "only QAM16 is supported");

    DerivedConstants c;
    c.beta2 = derive_beta2(cfg.dispersion_D, cfg.wavelength);
    c.ts = 1.0 / cfg.baud_rate;
    c.fs = cfg.baud_rate * cfg.sps;
    c.omega_grid_2n = make_omega_grid(2 * cfg.block_symbols, c.fs);
    return c;
}

namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "baud_rate",   "sps",          "rolloff",       "dispersion_D",
        "wavelength",  "fiber_length", "linewidth",     "freq_offset",
        "osnr_db",     "ref_bandwidth", "block_symbols", "overlap_symbols",
        "dgd",         "seed",         "modulation",
    };
    return keys;
}

double get_number(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError(key, "expected a number");
    return v.get<double>();
}

long long get_integer(const json& j, const char* key, long long fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
    return v.get<long long>();
}

} // namespace

SystemConfig config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config", "root must be a JSON object");
    for (const auto& item : j.items())
        if (known_keys().count(item.key()) == 0)
            throw ConfigError(item.key(), "unknown config key");

    SystemConfig cfg;
    cfg.baud_rate = get_number(j, "baud_rate", cfg.baud_rate);
    cfg.sps = static_cast<int>(get_integer(j, "sps", cfg.sps));
    cfg.rolloff = get_number(j, "rolloff", cfg.rolloff);
    cfg.dispersion_D = get_number(j, "dispersion_D", cfg.dispersion_D);
    cfg.wavelength = get_number(j, "wavelength", cfg.wavelength);
    cfg.fiber_length = get_number(j, "fiber_length", cfg.fiber_length);
    cfg.linewidth = get_number(j, "linewidth", cfg.linewidth);
    cfg.freq_offset = get_number(j, "freq_offset", cfg.freq_offset);
    cfg.osnr_db = get_number(j, "osnr_db", cfg.osnr_db);
    cfg.ref_bandwidth = get_number(j, "ref_bandwidth", cfg.ref_bandwidth);
    cfg.block_symbols = static_cast<int>(get_integer(j, "block_symbols", cfg.block_symbols));
    cfg.overlap_symbols = static_cast<int>(get_integer(j, "overlap_symbols", cfg.overlap_symbols));
    cfg.dgd = get_number(j, "dgd", cfg.dgd);
    cfg.seed = static_cast<unsigned long long>(
        get_integer(j, "seed", static_cast<long long>(cfg.seed)));
    if (j.contains("modulation")) {
        if (!j.at("modulation").is_string()) throw ConfigError("modulation", "expected a string");
        cfg.modulation = j.at("modulation").get<std::string>();
    }
    validate(cfg);
    return cfg;
}

SystemConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return config_from_json_text(ss.str());
}

std::string config_to_json_text(const SystemConfig& cfg, int effective_overlap_symbols) {
    nlohmann::ordered_json j;
    j["baud_rate"] = cfg.baud_rate;
    j["sps"] = cfg.sps;
    j["rolloff"] = cfg.rolloff;
    j["dispersion_D"] = cfg.dispersion_D;
    j["wavelength"] = cfg.wavelength;
    j["fiber_length"] = cfg.fiber_length;
    j["linewidth"] = cfg.linewidth;
    j["freq_offset"] = cfg.freq_offset;
    j["osnr_db"] = cfg.osnr_db;
    j["ref_bandwidth"] = cfg.ref_bandwidth;
    j["block_symbols"] = cfg.block_symbols;
    j["overlap_symbols"] = effective_overlap_symbols;
    j["dgd"] = cfg.dgd;
    j["seed"] = cfg.seed;
    j["modulation"] = cfg.modulation;
    return j.dump(2);
}

} // namespace cotx
