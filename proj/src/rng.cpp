#include "cotx/rng.hpp"

#include <cmath>
#include <numbers>

namespace cotx {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t master, std::string_view label) {
    std::uint64_t h = splitmix64(master);
    for (unsigned char c : label) h = splitmix64(h ^ c);
    return splitmix64(h);
}

double GaussianRng::uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double GaussianRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double ang = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(ang);
    has_spare_ = true;
    return r * std::cos(ang);
}

cplx GaussianRng::circular_normal(double sigma_per_component) {
    double re = normal();
    double im = normal();
    return {sigma_per_component * re, sigma_per_component * im};
}

} // namespace cotx
