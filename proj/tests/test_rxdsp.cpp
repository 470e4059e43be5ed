#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <limits>

#include "cotx/channel.hpp"
#include "cotx/experiments.hpp"
#include "cotx/jfscd.hpp"
#include "cotx/metrics.hpp"
#include "cotx/rng.hpp"
#include "cotx/rxdsp.hpp"

using namespace cotx;

namespace {

constexpr std::size_t kLinkSymbols = std::size_t{1} << 16;

cvec payload(const SystemConfig& cfg, const char* label, std::size_t n) {
    return map_bits(generate_prbs(4 * n, substream_seed(cfg.seed, label), PrbsMode::prng));
}

double link_q(const SystemConfig& cfg, const RxOptions& opt) {
    DerivedConstants c = validate(cfg);
    cvec sx = payload(cfg, "payload/x", kLinkSymbols);
    cvec sy = payload(cfg, "payload/y", kLinkSymbols);
    BlockEngine eng(cfg, c, CdSign::precompensate);
    ChannelRun run = run_channel({eng.run_stream(sx), eng.run_stream(sy)}, cfg, c);
    RxResult rx = rx_chain(run, cfg, c, sx, sy, opt);
    const std::size_t a = 512, b = kLinkSymbols - 64;
    auto txbx = demap_symbols(std::span(sx).subspan(a, b - a));
    auto txby = demap_symbols(std::span(sy).subspan(a, b - a));
    auto bx = ber_count(std::span(rx.bits_x).subspan(4 * a, 4 * (b - a)), txbx);
    auto by = ber_count(std::span(rx.bits_y).subspan(4 * a, 4 * (b - a)), txby);
    return q_from_ber(double(bx.errors + by.errors) / double(bx.total + by.total));
}

} // namespace

TEST_CASE("constellation structure") {
    const QamConstellation& q = qam16();
    double p = 0.0;
    for (auto v : q.points) p += std::norm(v);
    CHECK(p / 16.0 == doctest::Approx(1.0).epsilon(1e-15));

    // Gray adjacency: nearest neighbors differ in exactly one bit
    const double step = 2.0 / std::sqrt(10.0);
    for (int i = 0; i < 16; ++i) {
        for (int j = 0; j < 16; ++j) {
            if (std::abs(std::abs(q.points[i] - q.points[j]) - step) < 1e-9) {
                int diff = i ^ j;
                CHECK((diff & (diff - 1)) == 0); // a power of two: one bit
            }
        }
    }
}

TEST_CASE("bit mapping conventions") {
    std::uint8_t zeros[4] = {0, 0, 0, 0};
    cvec corner = map_bits(zeros);
    REQUIRE(corner.size() == 1);
    CHECK(std::abs(corner[0] - cplx{-3.0, -3.0} / std::sqrt(10.0)) < 1e-15);

    std::uint8_t five[5] = {0, 0, 0, 0, 0};
    CHECK_THROWS(map_bits(five)); // not a multiple of 4
}

TEST_CASE("map and demap are mutually inverse for every 12-bit pattern") {
    for (int pattern = 0; pattern < (1 << 12); ++pattern) {
        std::uint8_t bits[12];
        for (int k = 0; k < 12; ++k) bits[k] = std::uint8_t((pattern >> k) & 1);
        cvec sym = map_bits(bits);
        auto back = demap_symbols(sym);
        REQUIRE(back.size() == 12);
        bool same = true;
        for (int k = 0; k < 12; ++k) same = same && back[k] == bits[k];
        CHECK(same);
    }
}

TEST_CASE("random payloads have unit mean power") {
    SystemConfig cfg;
    cvec s = payload(cfg, "payload/x", std::size_t{1} << 16);
    double p = 0.0;
    for (auto v : s) p += std::norm(v);
    CHECK(p / double(s.size()) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("hard decisions pick the nearest constellation point") {
    const QamConstellation& q = qam16();
    GaussianRng g(15);
    for (int i = 0; i < 1000; ++i) {
        cplx x = {1.5 * g.normal(), 1.5 * g.normal()};
        cplx d = decide_symbol(x);
        for (auto p : q.points) CHECK(std::abs(x - d) <= std::abs(x - p) + 1e-12);
    }
}

TEST_CASE("genie frequency-offset compensation inverts the channel rotation") {
    SystemConfig cfg;
    DerivedConstants c = validate(cfg);
    Waveform w = BlockEngine(cfg, c, CdSign::precompensate)
                     .run_stream(payload(cfg, "payload/x", 2048));
    Waveform shifted = apply_cfo(w, 750e6);
    auto [back, removed] = cfo_compensate(shifted, CompMode::genie, 750e6);
    CHECK(removed == 750e6);
    CHECK(rel_l2_error(back.samples, w.samples) < 1e-12);
}

TEST_CASE("fourth-power estimator is bin-accurate on a QPSK probe") {
    const double fs = 72e9;
    const std::size_t m = 4096;
    GaussianRng g(7);
    for (double df : {100e6, -100e6, 3e9}) {
        Waveform p;
        p.sample_rate = fs;
        p.samples.resize(m);
        for (std::size_t n = 0; n < m; ++n) {
            int k = int(g.next_u64() & 3);
            p.samples[n] = std::polar(1.0, M_PI / 4.0 + double(k) * M_PI / 2.0) *
                           std::polar(1.0, 2.0 * M_PI * df * double(n) / fs);
        }
        auto [corrected, fhat] = cfo_compensate(p, CompMode::estimate, 0.0);
        CHECK(std::abs(fhat - df) <= fs / (4.0 * double(m)));
    }

    // no offset: the fourth power is a DC tone, the estimate is zero
    Waveform p;
    p.sample_rate = fs;
    p.samples.resize(m);
    for (std::size_t n = 0; n < m; ++n)
        p.samples[n] = std::polar(1.0, M_PI / 4.0 + double(g.next_u64() & 3) * M_PI / 2.0);
    auto [corrected, fhat] = cfo_compensate(p, CompMode::estimate, 0.0);
    CHECK(fhat == 0.0);
}

TEST_CASE("bypass equalizer recovers symbol instants from a clean waveform") {
    SystemConfig cfg;
    cfg.fiber_length = 0.0;
    cfg.linewidth = 0.0;
    cfg.osnr_db = 500.0;
    DerivedConstants c = validate(cfg);
    const std::size_t n = std::size_t{1} << 13;
    cvec sx = payload(cfg, "payload/x", n), sy = payload(cfg, "payload/y", n);
    BlockEngine eng(cfg, c, CdSign::precompensate);
    DualPolWaveform w{eng.run_stream(sx), eng.run_stream(sy)};
    auto [ex, ey] = equalize_2x2(w, sx, sy, EqConfig{});
    CHECK(rel_l2_error(ex, sx) < 1e-12);
    CHECK(rel_l2_error(ey, sy) < 1e-12);

    // a one-sample delay moves the symbols to the other timing phase; the
    // bypass picks it by power
    DualPolWaveform delayed = w;
    delayed.x_pol.samples.insert(delayed.x_pol.samples.begin(), cplx{0.0, 0.0});
    delayed.x_pol.samples.pop_back();
    delayed.y_pol.samples.insert(delayed.y_pol.samples.begin(), cplx{0.0, 0.0});
    delayed.y_pol.samples.pop_back();
    auto [dx, dy] = equalize_2x2(delayed, sx, sy, EqConfig{});
    CHECK(rel_l2_error(cvec(dx.begin() + 1, dx.end() - 1), cvec(sx.begin() + 1, sx.end() - 1)) <
          1e-12);
}

TEST_CASE("lms equalizer converges to identity on a clean channel") {
    SystemConfig cfg;
    cfg.fiber_length = 0.0;
    cfg.linewidth = 0.0;
    cfg.osnr_db = 500.0;
    DerivedConstants c = validate(cfg);
    const std::size_t n = std::size_t{1} << 13;
    cvec sx = payload(cfg, "payload/x", n), sy = payload(cfg, "payload/y", n);
    BlockEngine eng(cfg, c, CdSign::precompensate);
    DualPolWaveform w{eng.run_stream(sx), eng.run_stream(sy)};
    EqConfig ec;
    ec.mode = EqMode::lms;
    auto [ex, ey] = equalize_2x2(w, sx, sy, ec);
    double e2 = 0.0, p2 = 0.0;
    for (std::size_t k = 512; k < n - 64; ++k) {
        e2 += std::norm(ex[k] - sx[k]) + std::norm(ey[k] - sy[k]);
        p2 += std::norm(sx[k]) + std::norm(sy[k]);
    }
    CHECK(std::sqrt(e2 / p2) < 0.01);
}

TEST_CASE("lms against bypass without polarization delay") {
    // the fractionally spaced equalizer acts as an implicit matched filter,
    // so it slightly beats raw even-sample decimation (measured +0.20 dB)
    SystemConfig cfg;
    RxOptions bypass;
    RxOptions lms;
    lms.eq.mode = EqMode::lms;
    double qb = link_q(cfg, bypass);
    double ql = link_q(cfg, lms);
    CHECK(ql > qb - 0.05);
    CHECK(std::abs(ql - qb) < 0.3);
}

TEST_CASE("lms restores the half-symbol-delay polarization channel") {
    SystemConfig cfg;
    RxOptions lms;
    lms.eq.mode = EqMode::lms;
    double q0 = link_q(cfg, RxOptions{});
    SystemConfig d = cfg;
    d.dgd = validate(cfg).ts / 2.0;
    double qd = link_q(d, lms);
    CHECK(qd >= 0.95 * q0);
}

TEST_CASE("blind phase search removes a constant offset on the test grid") {
    SystemConfig cfg;
    cvec s = payload(cfg, "payload/x", std::size_t{1} << 14);

    // pi/8 is an exact test-phase grid point: removed to roundoff
    cplx rot = std::polar(1.0, M_PI / 8.0);
    cvec rx(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) rx[i] = s[i] * rot;
    cvec aligned = prefix_phase_align(carrier_phase_recover_bps(rx), s, 512);
    double worst = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        worst = std::max(worst, std::abs(aligned[i] - s[i]));
    CHECK(worst < 1e-9);

    // zero offset: output equals input after quadrant alignment
    cvec aligned0 = prefix_phase_align(carrier_phase_recover_bps(s), s, 512);
    worst = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        worst = std::max(worst, std::abs(aligned0[i] - s[i]));
    CHECK(worst < 1e-9);
}

TEST_CASE("blind phase search tracks the default linewidth near the genie") {
    SystemConfig cfg; // 100 kHz linewidth, OSNR 23
    RxOptions genie;
    RxOptions bps;
    bps.cpe = CompMode::estimate;
    double qg = link_q(cfg, genie);
    double qb = link_q(cfg, bps);
    CHECK(qg - qb < 0.2);   // measured 0.089
    CHECK(qg - qb > -0.05); // the genie stays an upper bound
}

TEST_CASE("genie carrier recovery undoes a known phase track") {
    SystemConfig cfg;
    cvec s = payload(cfg, "payload/x", 4096);
    std::vector<double> track(s.size());
    cvec rotated(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        track[i] = 0.3 * std::sin(double(i) / 100.0);
        rotated[i] = s[i] * std::polar(1.0, track[i]);
    }
    cvec back = carrier_phase_recover_genie(rotated, track);
    CHECK(rel_l2_error(back, s) < 1e-12);
}

TEST_CASE("prefix alignment removes a static complex gain") {
    SystemConfig cfg;
    cvec s = payload(cfg, "payload/x", 4096);
    cplx gain = cplx{0.0, 1.0} * 1.07; // quadrant rotation plus scale
    cvec scaled(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) scaled[i] = s[i] * gain;
    cvec aligned = prefix_phase_align(scaled, s, 512);
    CHECK(rel_l2_error(aligned, s) < 1e-12);
}

TEST_CASE("impairment-free chain recovers every bit") {
    SystemConfig cfg;
    cfg.fiber_length = 0.0;
    cfg.linewidth = 0.0;
    cfg.freq_offset = 0.0;
    cfg.dgd = 0.0;
    cfg.osnr_db = 40.0;
    DerivedConstants c = validate(cfg);
    SystemConfig quiet = cfg;
    quiet.osnr_db = std::numeric_limits<double>::infinity();

    const std::size_t n = std::size_t{1} << 13;
    cvec sx = payload(cfg, "payload/x", n), sy = payload(cfg, "payload/y", n);
    BlockEngine eng(cfg, c, CdSign::precompensate);
    ChannelRun run = run_channel({eng.run_stream(sx), eng.run_stream(sy)}, quiet, c);
    RxResult rx = rx_chain(run, quiet, c, sx, sy, RxOptions{});
    auto bx = ber_count(rx.bits_x, demap_symbols(sx));
    auto by = ber_count(rx.bits_y, demap_symbols(sy));
    CHECK(bx.errors == 0);
    CHECK(by.errors == 0);
}

TEST_CASE("genie pipeline upper-bounds the estimator pipeline") {
    SystemConfig cfg;
    cfg.freq_offset = 200e6;
    RxOptions genie;
    RxOptions est;
    est.cfo = CompMode::estimate;
    est.cpe = CompMode::estimate;
    double qg = link_q(cfg, genie);
    double qe = link_q(cfg, est);
    CHECK(qg + 0.02 >= qe); // measured margin +0.07
}
