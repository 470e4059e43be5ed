// waveform.hpp - complex baseband sample containers shared by all modules
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace cotx {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

struct Waveform {
    cvec samples;
    double sample_rate = 0.0;

    std::size_t size() const { return samples.size(); }
    double mean_power() const;
    double energy() const;
};

struct DualPolWaveform {
    Waveform x_pol;
    Waveform y_pol;
};

// ||a - b|| / ||b|| over a common index range [begin, end); end = 0 means full length
double rel_l2_error(const cvec& a, const cvec& b, std::size_t begin = 0, std::size_t end = 0);

} // namespace cotx
