// rng.hpp - deterministic labeled RNG substreams and portable Gaussian draws
#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "cotx/waveform.hpp"

namespace cotx {

std::uint64_t splitmix64(std::uint64_t x);

// Hashes (master seed, label) into an independent substream seed so that
// enabling one stochastic impairment never perturbs another's realization.
std::uint64_t substream_seed(std::uint64_t master, std::string_view label);

// mt19937_64 + explicit Box-Muller. std::normal_distribution is
// implementation-defined, so realizations would not be stable across
// standard libraries; this recipe is pinned.
class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed) : eng_(seed) {}
    GaussianRng(std::uint64_t master, std::string_view label)
        : eng_(substream_seed(master, label)) {}

    double uniform01();            // in [0, 1)
    std::uint64_t next_u64() { return eng_(); }
    double normal();               // standard normal
    cplx circular_normal(double sigma_per_component);

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace cotx
