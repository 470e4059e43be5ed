#include "cotx/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "cotx/cascade.hpp"
#include "cotx/channel.hpp"
#include "cotx/jfscd.hpp"
#include "cotx/metrics.hpp"
#include "cotx/rng.hpp"
#include "cotx/rxdsp.hpp"
#include "cotx/sbc.hpp"
#include "json.hpp"

namespace cotx {

namespace {

// Desk-scale sizes: acceptance tolerances are calibrated for these.
constexpr std::size_t q_symbols = std::size_t{1} << 16;
constexpr std::size_t ccdf_symbols = std::size_t{1} << 19; // 2^20 samples at 2 sps
constexpr int papr_window = 1024;
// Scoring skips the data-aided prefix and the block/equalizer edge
// transients of a finite stream.
constexpr std::size_t skip_head = 512;
constexpr std::size_t skip_tail = 64;

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

void write_table(const ExperimentSpec& spec, const SystemConfig& cfg,
                 const DerivedConstants& consts, const std::string& experiment,
                 const Table& t) {
    const int overlap = effective_overlap(cfg, consts.beta2);
    std::ostringstream body;
    if (spec.format == OutputFormat::csv) {
        body << "# experiment=" << experiment << "\n";
        // One comment line per resolved config field, regenerable by itself.
        body << "# baud_rate=" << fmt(cfg.baud_rate) << "\n";
        body << "# sps=" << cfg.sps << "\n";
        body << "# rolloff=" << fmt(cfg.rolloff) << "\n";
        body << "# dispersion_D=" << fmt(cfg.dispersion_D) << "\n";
        body << "# wavelength=" << fmt(cfg.wavelength) << "\n";
        body << "# fiber_length=" << fmt(cfg.fiber_length) << "\n";
        body << "# linewidth=" << fmt(cfg.linewidth) << "\n";
        body << "# freq_offset=" << fmt(cfg.freq_offset) << "\n";
        body << "# osnr_db=" << fmt(cfg.osnr_db) << "\n";
        body << "# ref_bandwidth=" << fmt(cfg.ref_bandwidth) << "\n";
        body << "# block_symbols=" << cfg.block_symbols << "\n";
        body << "# overlap_symbols=" << overlap << "\n";
        body << "# dgd=" << fmt(cfg.dgd) << "\n";
        body << "# seed=" << cfg.seed << "\n";
        body << "# modulation=" << cfg.modulation << "\n";
        for (std::size_t c = 0; c < t.columns.size(); ++c)
            body << (c ? "," : "") << t.columns[c];
        body << "\n";
        for (const auto& row : t.rows) {
            for (std::size_t c = 0; c < row.size(); ++c)
                body << (c ? "," : "") << fmt(row[c]);
            body << "\n";
        }
    } else {
        nlohmann::ordered_json j;
        j["experiment"] = experiment;
        j["config"] = nlohmann::ordered_json::parse(config_to_json_text(cfg, overlap));
        j["columns"] = t.columns;
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& row : t.rows) {
            nlohmann::ordered_json r = nlohmann::ordered_json::array();
            for (double v : row) {
                if (std::isinf(v))
                    r.push_back(v > 0.0 ? "inf" : "-inf");
                else
                    r.push_back(v);
            }
            rows.push_back(std::move(r));
        }
        j["rows"] = std::move(rows);
        body << j.dump(2) << "\n";
    }

    std::ofstream out(spec.output_path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + spec.output_path);
    out << body.str();
    out.flush();
    if (!out) throw IoError("failed writing output file: " + spec.output_path);
}

cvec make_payload(std::uint64_t master, const char* label, std::size_t n_symbols) {
    const std::vector<std::uint8_t> bits =
        generate_prbs(4 * n_symbols, substream_seed(master, label), PrbsMode::prng);
    return map_bits(bits);
}

enum class TxKind { jfscd, cascade_ideal, cascade_fir };

Waveform transmit(const cvec& symbols, const SystemConfig& cfg, const DerivedConstants& consts,
                  TxKind kind) {
    switch (kind) {
        case TxKind::jfscd: {
            BlockEngine eng(cfg, consts, CdSign::precompensate);
            return eng.run_stream(symbols);
        }
        case TxKind::cascade_ideal:
            return cascade_precompensate(symbols, cfg, consts, ShapingVariant::ideal);
        default:
            return cascade_precompensate(symbols, cfg, consts, ShapingVariant::fir);
    }
}

struct LinkScore {
    double ber = 0.0;
    double q_ber = 0.0;
    double evm = 0.0;
    double q_evm = 0.0;
};

// One full link: payload -> TX -> optional square-boundary clip -> channel ->
// genie receiver -> scores. clip_cr_db = NaN disables clipping. All noise
// realizations derive from (seed, label), never from the waveform, so paired
// runs differing only in the transmitter see identical noise.
LinkScore run_link(const SystemConfig& cfg, const DerivedConstants& consts, TxKind kind,
                   double clip_cr_db) {
    const cvec sx = make_payload(cfg.seed, "payload/x", q_symbols);
    const cvec sy = make_payload(cfg.seed, "payload/y", q_symbols);

    Waveform wx = transmit(sx, cfg, consts, kind);
    Waveform wy = transmit(sy, cfg, consts, kind);
    if (!std::isnan(clip_cr_db)) {
        ClipConfig cx = make_clip_config(wx, clip_cr_db);
        wx = clip_waveform(wx, cx);
        ClipConfig cy = make_clip_config(wy, clip_cr_db);
        wy = clip_waveform(wy, cy);
    }

    const ChannelRun run = run_channel({std::move(wx), std::move(wy)}, cfg, consts);

    RxOptions opt;
    if (cfg.dgd != 0.0) opt.eq.mode = EqMode::lms;
    const RxResult rx = rx_chain(run, cfg, consts, sx, sy, opt);

    const std::size_t a = skip_head, b = q_symbols - skip_tail;
    const std::vector<std::uint8_t> tx_bits_x = demap_symbols(std::span(sx).subspan(a, b - a));
    const std::vector<std::uint8_t> tx_bits_y = demap_symbols(std::span(sy).subspan(a, b - a));
    const BerResult bx = ber_count(std::span(rx.bits_x).subspan(4 * a, 4 * (b - a)), tx_bits_x);
    const BerResult by = ber_count(std::span(rx.bits_y).subspan(4 * a, 4 * (b - a)), tx_bits_y);

    LinkScore s;
    s.ber = static_cast<double>(bx.errors + by.errors) / static_cast<double>(bx.total + by.total);
    s.q_ber = q_from_ber(s.ber);

    cvec rx_all, ref_all;
    rx_all.reserve(2 * (b - a));
    ref_all.reserve(2 * (b - a));
    rx_all.insert(rx_all.end(), rx.symbols_x.begin() + static_cast<std::ptrdiff_t>(a),
                  rx.symbols_x.begin() + static_cast<std::ptrdiff_t>(b));
    rx_all.insert(rx_all.end(), rx.symbols_y.begin() + static_cast<std::ptrdiff_t>(a),
                  rx.symbols_y.begin() + static_cast<std::ptrdiff_t>(b));
    ref_all.insert(ref_all.end(), sx.begin() + static_cast<std::ptrdiff_t>(a),
                   sx.begin() + static_cast<std::ptrdiff_t>(b));
    ref_all.insert(ref_all.end(), sy.begin() + static_cast<std::ptrdiff_t>(a),
                   sy.begin() + static_cast<std::ptrdiff_t>(b));
    s.evm = evm_rms(rx_all, ref_all);
    s.q_evm = q_from_evm(s.evm);
    return s;
}

Table experiment_equivalence(const SystemConfig& base) {
    Table t;
    t.columns = {"n", "alpha", "fiber_km", "rel_l2", "q_jfscd_db", "q_cascade_db", "q_diff_db"};
    for (int n : {64, 128}) {
        for (double alpha : {0.01, 0.1, 0.2}) {
            for (double fiber : {0.0, 100e3}) {
                SystemConfig cfg = base;
                cfg.block_symbols = n;
                cfg.rolloff = alpha;
                cfg.fiber_length = fiber;
                const DerivedConstants consts = validate(cfg);

                const cvec sx = make_payload(cfg.seed, "payload/x", q_symbols);
                BlockEngine eng(cfg, consts, CdSign::precompensate);
                const Waveform wa = eng.run_stream(sx);
                const Waveform wb =
                    cascade_precompensate(sx, cfg, consts, ShapingVariant::ideal);
                const double rel = rel_l2_error(wa.samples, wb.samples);
                if (!(rel < 1e-10))
                    throw InvariantFailure(
                        "equivalence: block engine diverged from the cascade oracle (rel L2 " +
                        fmt(rel) + ")");

                const LinkScore qa = run_link(cfg, consts, TxKind::jfscd,
                                              std::numeric_limits<double>::quiet_NaN());
                const LinkScore qb = run_link(cfg, consts, TxKind::cascade_ideal,
                                              std::numeric_limits<double>::quiet_NaN());
                t.rows.push_back({static_cast<double>(n), alpha, fiber / 1e3, rel, qa.q_ber,
                                  qb.q_ber, std::abs(qa.q_ber - qb.q_ber)});
            }
        }
    }
    return t;
}

Table experiment_ccdf(const SystemConfig& cfg, const DerivedConstants& consts,
                      std::vector<double> crs) {
    if (crs.empty()) crs = {6.72, 8.52, std::numeric_limits<double>::infinity()};
    std::sort(crs.begin(), crs.end());

    const cvec sx = make_payload(cfg.seed, "payload/x", ccdf_symbols);
    BlockEngine eng(cfg, consts, CdSign::precompensate);
    const Waveform wx = eng.run_stream(sx);

    std::vector<double> thresholds;
    for (double thr = 5.0; thr <= 13.0 + 1e-9; thr += 0.5) thresholds.push_back(thr);

    Table t;
    t.columns = {"cr_db", "threshold_db", "ccdf_prob", "papr_db_at_1e3"};
    for (double cr : crs) {
        Waveform w = wx;
        if (!std::isinf(cr)) {
            ClipConfig cc = make_clip_config(wx, cr);
            w = clip_waveform(wx, cc);
        }
        const std::vector<double> paprs = papr_windowed(w, papr_window);
        const double p1e3 = papr_at_probability(paprs, 1e-3);
        const CcdfCurve curve = ccdf(paprs, thresholds, papr_window);
        for (std::size_t i = 0; i < thresholds.size(); ++i)
            t.rows.push_back({cr, thresholds[i], curve.probabilities[i], p1e3});
    }
    return t;
}

Table experiment_cr_sweep(const SystemConfig& cfg, const DerivedConstants& consts,
                          std::vector<double> crs) {
    if (crs.empty()) crs = {5.0, 6.0, 7.0, 8.0, 9.0};
    std::sort(crs.begin(), crs.end());
    for (double cr : crs)
        if (!std::isfinite(cr)) throw ConfigError("sweep", "cr values must be finite");

    Table t;
    t.columns = {"cr_db", "ber", "q_ber_db", "evm_pct", "q_evm_db"};
    for (double cr : crs) {
        const LinkScore s = run_link(cfg, consts, TxKind::jfscd, cr);
        t.rows.push_back({cr, s.ber, s.q_ber, 100.0 * s.evm, s.q_evm});
    }
    return t;
}

Table experiment_osnr_sweep(const SystemConfig& base, std::vector<double> osnrs) {
    if (osnrs.empty()) osnrs = {14.0, 16.0, 18.0, 20.0, 22.0, 24.0, 26.0};
    std::sort(osnrs.begin(), osnrs.end());

    Table t;
    t.columns = {"osnr_db", "ber", "q_ber_db", "evm_pct", "q_evm_db"};
    for (double osnr : osnrs) {
        SystemConfig cfg = base;
        cfg.osnr_db = osnr;
        const DerivedConstants consts = validate(cfg);
        const LinkScore s = run_link(cfg, consts, TxKind::jfscd,
                                     std::numeric_limits<double>::quiet_NaN());
        t.rows.push_back({osnr, s.ber, s.q_ber, 100.0 * s.evm, s.q_evm});
    }
    return t;
}

Table experiment_complexity(const SystemConfig& cfg, std::vector<double> ns) {
    if (ns.empty()) ns = {64.0, 128.0, 256.0};
    std::sort(ns.begin(), ns.end());

    Table t;
    t.columns = {"n", "alpha", "fir_taps", "mults_jfscd", "mults_cascade", "reduction_pct"};
    for (double nd : ns) {
        const int n = static_cast<int>(nd);
        if (nd != n || n < 4 || !is_power_of_two(static_cast<std::size_t>(n)))
            throw ConfigError("sweep", "block sizes must be powers of two");
        const ComplexityReport r = complexity_report(n, cfg.rolloff);
        t.rows.push_back({static_cast<double>(r.n), r.alpha, static_cast<double>(r.fir_taps),
                          r.jfscd_mults_per_symbol, r.cascade_mults_per_symbol,
                          100.0 * r.reduction_fraction});
    }
    return t;
}

Table experiment_single_run(const SystemConfig& cfg, const DerivedConstants& consts) {
    const cvec sx = make_payload(cfg.seed, "payload/x", q_symbols);
    BlockEngine eng(cfg, consts, CdSign::precompensate);
    const Waveform wx = eng.run_stream(sx);
    const std::vector<double> paprs = papr_windowed(wx, papr_window);
    const double p1e3 = papr_at_probability(paprs, 1e-3);

    const LinkScore s =
        run_link(cfg, consts, TxKind::jfscd, std::numeric_limits<double>::quiet_NaN());

    Table t;
    t.columns = {"n",   "alpha",    "fiber_km", "osnr_db",  "ber",
                 "q_ber_db", "evm_pct", "q_evm_db", "papr_db_at_1e3"};
    t.rows.push_back({static_cast<double>(cfg.block_symbols), cfg.rolloff,
                      cfg.fiber_length / 1e3, cfg.osnr_db, s.ber, s.q_ber, 100.0 * s.evm,
                      s.q_evm, p1e3});
    return t;
}

} // namespace

ExperimentName experiment_from_name(const std::string& name) {
    if (name == "equivalence") return ExperimentName::equivalence;
    if (name == "ccdf") return ExperimentName::ccdf;
    if (name == "cr_sweep") return ExperimentName::cr_sweep;
    if (name == "osnr_sweep") return ExperimentName::osnr_sweep;
    if (name == "complexity") return ExperimentName::complexity;
    if (name == "single_run") return ExperimentName::single_run;
    throw ConfigError("experiment", "unknown experiment name: " + name);
}

void run_experiment(const ExperimentSpec& spec) {
    const SystemConfig& cfg = spec.config;
    const DerivedConstants consts = validate(cfg);

    Table t;
    std::string name;
    switch (spec.name) {
        case ExperimentName::equivalence:
            name = "equivalence";
            t = experiment_equivalence(cfg);
            break;
        case ExperimentName::ccdf:
            name = "ccdf";
            t = experiment_ccdf(cfg, consts, spec.sweep_values);
            break;
        case ExperimentName::cr_sweep:
            name = "cr_sweep";
            t = experiment_cr_sweep(cfg, consts, spec.sweep_values);
            break;
        case ExperimentName::osnr_sweep:
            name = "osnr_sweep";
            t = experiment_osnr_sweep(cfg, spec.sweep_values);
            break;
        case ExperimentName::complexity:
            name = "complexity";
            t = experiment_complexity(cfg, spec.sweep_values);
            break;
        case ExperimentName::single_run:
            name = "single_run";
            t = experiment_single_run(cfg, consts);
            break;
    }
    write_table(spec, cfg, consts, name, t);
}

std::uint32_t lfsr23_step(std::uint32_t state) {
    const std::uint32_t fb = ((state >> 22) ^ (state >> 17)) & 1u;
    return ((state << 1) | fb) & 0x7FFFFFu;
}

std::vector<std::uint8_t> generate_prbs(std::size_t length, std::uint64_t seed, PrbsMode mode) {
    std::vector<std::uint8_t> bits(length);
    if (mode == PrbsMode::lfsr23) {
        std::uint32_t state = static_cast<std::uint32_t>(seed) & 0x7FFFFFu;
        if (state == 0) state = 1;
        for (std::size_t i = 0; i < length; ++i) {
            bits[i] = static_cast<std::uint8_t>(state & 1u);
            state = lfsr23_step(state);
        }
        return bits;
    }
    GaussianRng rng(seed, "prbs");
    std::uint64_t word = 0;
    int have = 0;
    for (std::size_t i = 0; i < length; ++i) {
        if (have == 0) {
            word = rng.next_u64();
            have = 64;
        }
        bits[i] = static_cast<std::uint8_t>(word & 1u);
        word >>= 1;
        --have;
    }
    return bits;
}

} // namespace cotx
