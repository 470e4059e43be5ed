#include "cotx/jfscd.hpp"

#include <stdexcept>
#include <thread>

namespace cotx {

cvec replicate_spectrum(const cvec& x_freq) {
    const std::size_t n = x_freq.size();
    cvec out(2 * n);
    for (std::size_t k = 0; k < 2 * n; ++k) out[k] = x_freq[k % n];
    return out;
}

BlockEngine::BlockEngine(const SystemConfig& cfg, const DerivedConstants& consts, CdSign sign)
    : n_(cfg.block_symbols),
      v_(effective_overlap(cfg, consts.beta2)),
      ts_(consts.ts),
      fs_(consts.fs),
      filter_(build_joint_filter(cfg, consts, cfg.block_symbols, sign)),
      fft_n_(static_cast<std::size_t>(cfg.block_symbols)),
      fft_2n_(static_cast<std::size_t>(2 * cfg.block_symbols)) {
    if (n_ < 4 * v_) throw std::invalid_argument("block engine: block must hold 4x overlap");
    // Unit symbols must map to unit pulse peaks: the coefficient table carries
    // Ts and the inverse transform 1/(2N); folding 2/Ts here makes the
    // even-index output samples reproduce the symbols exactly when L = 0
    // (the raised-cosine spectral fold sums to Ts at every symbol instant).
    scaled_coeffs_.resize(filter_.coeffs.size());
    const double gain = 2.0 / ts_;
    for (std::size_t k = 0; k < filter_.coeffs.size(); ++k)
        scaled_coeffs_[k] = filter_.coeffs[k] * gain;
}

SymbolFrame BlockEngine::make_frame(std::span<const cplx> symbols, int block_index) const {
    const int hop = n_ - 2 * v_;
    const long long start = static_cast<long long>(block_index) * hop - v_;
    SymbolFrame f;
    f.symbols.resize(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
        const long long idx = start + i;
        f.symbols[static_cast<std::size_t>(i)] =
            (idx >= 0 && idx < static_cast<long long>(symbols.size()))
                ? symbols[static_cast<std::size_t>(idx)]
                : cplx{0.0, 0.0};
    }
    f.block_index = block_index;
    f.valid_begin = v_;
    f.valid_end = n_ - v_;
    return f;
}

OversampledBlock BlockEngine::process_block(const SymbolFrame& frame) const {
    if (frame.symbols.size() != static_cast<std::size_t>(n_))
        throw std::invalid_argument("process_block: frame length must equal block size");
    cvec spec = frame.symbols;
    fft_n_.forward(spec);

    const std::size_t m = static_cast<std::size_t>(2 * n_);
    cvec out(m);
    for (std::size_t k = 0; k < m; ++k) {
        // Stop-band bins are exact zeros; no multiplication happens there.
        if (filter_.stopband_mask[k]) {
            out[k] = cplx{0.0, 0.0};
            continue;
        }
        out[k] = spec[k % static_cast<std::size_t>(n_)] * scaled_coeffs_[k];
    }
    fft_2n_.inverse(out);

    OversampledBlock block;
    block.block_index = frame.block_index;
    const std::size_t drop = static_cast<std::size_t>(2 * v_);
    block.samples.assign(out.begin() + static_cast<std::ptrdiff_t>(drop),
                         out.end() - static_cast<std::ptrdiff_t>(drop));
    return block;
}

Waveform BlockEngine::run_stream(std::span<const cplx> symbols, int threads) const {
    const int hop = n_ - 2 * v_;
    const std::size_t s = symbols.size();
    if (s < static_cast<std::size_t>(hop))
        throw std::invalid_argument("run_stream: need at least one frame of symbols");

    const std::size_t n_blocks = (s + static_cast<std::size_t>(hop) - 1) /
                                 static_cast<std::size_t>(hop);
    Waveform w;
    w.sample_rate = fs_;
    w.samples.resize(2 * n_blocks * static_cast<std::size_t>(hop));

    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t m = first; m < n_blocks; m += stride) {
            OversampledBlock b = process_block(make_frame(symbols, static_cast<int>(m)));
            std::copy(b.samples.begin(), b.samples.end(),
                      w.samples.begin() +
                          static_cast<std::ptrdiff_t>(2 * m * static_cast<std::size_t>(hop)));
        }
    };

    if (threads <= 1 || n_blocks < 2) {
        work(0, 1);
    } else {
        const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(threads), n_blocks);
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(work, t, nt);
        for (auto& th : pool) th.join();
    }

    w.samples.resize(2 * s); // the padded tail of the last frame is transient
    return w;
}

} // namespace cotx
