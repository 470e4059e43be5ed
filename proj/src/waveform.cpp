#include "cotx/waveform.hpp"

#include <cmath>

namespace cotx {

double Waveform::mean_power() const {
    if (samples.empty()) return 0.0;
    return energy() / static_cast<double>(samples.size());
}

double Waveform::energy() const {
    double e = 0.0;
    for (const cplx& s : samples) e += std::norm(s);
    return e;
}

double rel_l2_error(const cvec& a, const cvec& b, std::size_t begin, std::size_t end) {
    if (end == 0) end = b.size();
    double num = 0.0, den = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    if (den == 0.0) return num == 0.0 ? 0.0 : HUGE_VAL;
    return std::sqrt(num / den);
}

} // namespace cotx
