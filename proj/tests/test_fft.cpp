#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "cotx/fft.hpp"
#include "cotx/rng.hpp"
#include "cotx/waveform.hpp"

using namespace cotx;

namespace {

cvec random_vec(std::size_t n, std::uint64_t seed) {
    GaussianRng g(seed);
    cvec v(n);
    for (auto& x : v) x = {g.normal(), g.normal()};
    return v;
}

} // namespace

TEST_CASE("power-of-two helpers") {
    CHECK(is_power_of_two(1));
    CHECK(is_power_of_two(2));
    CHECK(is_power_of_two(4096));
    CHECK_FALSE(is_power_of_two(0));
    CHECK_FALSE(is_power_of_two(3));
    CHECK_FALSE(is_power_of_two(96));
    CHECK(next_power_of_two(1) == 1);
    CHECK(next_power_of_two(5) == 8);
    CHECK(next_power_of_two(4096) == 4096);
    CHECK(next_power_of_two(4097) == 8192);
}

TEST_CASE("forward transform matches the direct DFT") {
    for (std::size_t n : {8u, 64u, 256u}) {
        cvec x = random_vec(n, 11 + n);
        Fft plan(n);
        cvec got = x;
        plan.forward(got);
        cvec want = dft_direct(x, false);
        CHECK(rel_l2_error(got, want) < 1e-12);
    }
}

TEST_CASE("inverse transform matches the direct inverse DFT") {
    for (std::size_t n : {8u, 128u}) {
        cvec x = random_vec(n, 23 + n);
        Fft plan(n);
        cvec got = x;
        plan.inverse(got);
        cvec want = dft_direct(x, true);
        CHECK(rel_l2_error(got, want) < 1e-12);
    }
}

TEST_CASE("inverse undoes forward") {
    cvec x = random_vec(1024, 5);
    Fft plan(1024);
    cvec y = x;
    plan.forward(y);
    plan.inverse(y);
    CHECK(rel_l2_error(y, x) < 1e-12);
}

TEST_CASE("impulse and constant inputs") {
    const std::size_t n = 64;
    Fft plan(n);

    cvec imp(n, cplx{0.0, 0.0});
    imp[0] = 1.0;
    plan.forward(imp);
    for (auto v : imp) CHECK(std::abs(v - cplx{1.0, 0.0}) < 1e-13);

    cvec ones(n, cplx{1.0, 0.0});
    plan.forward(ones);
    CHECK(std::abs(ones[0] - cplx{double(n), 0.0}) < 1e-11);
    for (std::size_t k = 1; k < n; ++k) CHECK(std::abs(ones[k]) < 1e-11);
}

TEST_CASE("linearity and Parseval") {
    const std::size_t n = 256;
    cvec a = random_vec(n, 1), b = random_vec(n, 2);
    Fft plan(n);

    cvec mix(n);
    for (std::size_t i = 0; i < n; ++i) mix[i] = 2.0 * a[i] + cplx{0.0, -3.0} * b[i];
    cvec fa = a, fb = b, fm = mix;
    plan.forward(fa);
    plan.forward(fb);
    plan.forward(fm);
    cvec want(n);
    for (std::size_t i = 0; i < n; ++i) want[i] = 2.0 * fa[i] + cplx{0.0, -3.0} * fb[i];
    CHECK(rel_l2_error(fm, want) < 1e-12);

    double ex = 0.0, ek = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ex += std::norm(a[i]);
        ek += std::norm(fa[i]);
    }
    CHECK(ex == doctest::Approx(ek / double(n)).epsilon(1e-12));
}

TEST_CASE("invalid sizes are rejected") {
    CHECK_THROWS(Fft(0));
    CHECK_THROWS(Fft(96));
    Fft plan(16);
    cvec wrong(8);
    CHECK_THROWS(plan.forward(wrong));
}
