#include "cotx/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cotx {

bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

Fft::Fft(std::size_t n) : n_(n) {
    if (!is_power_of_two(n)) throw std::invalid_argument("fft size must be a power of two");
    bitrev_.resize(n);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (std::size_t b = 0; b < bits; ++b)
            if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
        bitrev_[i] = r;
    }
    twiddle_.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        double ang = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        twiddle_[k] = {std::cos(ang), std::sin(ang)};
    }
}

void Fft::transform(cplx* a, bool inv) const {
    for (std::size_t i = 0; i < n_; ++i) {
        std::size_t j = bitrev_[i];
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n_; len <<= 1) {
        std::size_t stride = n_ / len;
        std::size_t half = len / 2;
        for (std::size_t start = 0; start < n_; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                cplx w = twiddle_[k * stride];
                if (inv) w = std::conj(w);
                cplx u = a[start + k];
                cplx t = a[start + k + half] * w;
                a[start + k] = u + t;
                a[start + k + half] = u - t;
            }
        }
    }
    if (inv) {
        double scale = 1.0 / static_cast<double>(n_);
        for (std::size_t i = 0; i < n_; ++i) a[i] *= scale;
    }
}

void Fft::forward(cplx* data) const { transform(data, false); }
void Fft::inverse(cplx* data) const { transform(data, true); }

void Fft::forward(cvec& data) const {
    if (data.size() != n_) throw std::invalid_argument("fft input size mismatch");
    transform(data.data(), false);
}

void Fft::inverse(cvec& data) const {
    if (data.size() != n_) throw std::invalid_argument("fft input size mismatch");
    transform(data.data(), true);
}

cvec dft_direct(const cvec& x, bool inverse) {
    const std::size_t n = x.size();
    cvec out(n);
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(k * m % n) /
                         static_cast<double>(n);
            acc += x[m] * cplx{std::cos(ang), std::sin(ang)};
        }
        out[k] = inverse ? acc / static_cast<double>(n) : acc;
    }
    return out;
}

} // namespace cotx
