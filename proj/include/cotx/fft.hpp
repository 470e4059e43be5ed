// fft.hpp - iterative radix-2 FFT for power-of-two sizes
#pragma once

#include <cstddef>
#include <vector>

#include "cotx/waveform.hpp"

namespace cotx {

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

// Precomputed twiddle tables for one transform size; methods are const and
// safe to share across threads. Forward is unscaled; inverse carries 1/n.
class Fft {
public:
    explicit Fft(std::size_t n);

    std::size_t size() const { return n_; }
    void forward(cplx* data) const;
    void inverse(cplx* data) const;
    void forward(cvec& data) const;
    void inverse(cvec& data) const;

private:
    void transform(cplx* data, bool inv) const;

    std::size_t n_;
    std::vector<std::size_t> bitrev_;
    cvec twiddle_;      // forward twiddles, n/2 entries
};

// Direct O(n^2) DFT used as an independent oracle in tests.
cvec dft_direct(const cvec& x, bool inverse);

} // namespace cotx
