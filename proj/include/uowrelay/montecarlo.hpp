#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "channels.hpp"
#include "metrics.hpp"
#include "random.hpp"

namespace uowrelay::mc {

struct SimConfig {
    std::uint64_t trials = 1000000;
    std::uint64_t root_seed = 1;
    std::uint64_t batch_size = 4096; // trials grabbed per scheduling step
    int workers = 1;
    bool bit_level = false;          // ASEP: draw bit errors instead of averaging Pe(snr)
    bool half_duplex_prelog = false; // capacity: multiply by 1/2

    void validate() const {
        if (trials < 1000)
            throw std::invalid_argument("SimConfig: trials must be >= 1000");
        if (batch_size < 1 || batch_size > trials)
            throw std::invalid_argument("SimConfig: need 1 <= batch_size <= trials");
        if (workers < 1)
            throw std::invalid_argument("SimConfig: workers must be >= 1");
    }
};

struct SimEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::uint64_t trials = 0;
};

namespace detail {

// Trials run in fixed blocks of 4096, each on rng::child(root_seed, block).
// A block's statistics depend only on (root_seed, block index) and land in
// an indexed slot, and the reduction below walks slots in a fixed order, so
// the result is byte-identical for any worker count or batch size (batches
// only set how many blocks a worker grabs per scheduling step).
constexpr std::uint64_t kBlock = 4096;

struct BlockStats {
    double sum = 0.0;
    double sumsq = 0.0;
};

inline std::uint64_t block_count(std::uint64_t trials) {
    return (trials + kBlock - 1) / kBlock;
}

template <typename BlockFn>
std::vector<BlockStats> run_blocks(std::uint64_t n_blocks, const SimConfig& cfg,
                                   BlockFn fn) {
    std::vector<BlockStats> slot(n_blocks);
    std::uint64_t grab = (cfg.batch_size + kBlock - 1) / kBlock;
    std::atomic<std::uint64_t> next{0};
    auto work = [&] {
        for (;;) {
            std::uint64_t b0 = next.fetch_add(grab);
            if (b0 >= n_blocks) return;
            std::uint64_t b1 = std::min(b0 + grab, n_blocks);
            for (std::uint64_t b = b0; b < b1; ++b) slot[b] = fn(b);
        }
    };
    if (cfg.workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(size_t(cfg.workers));
        for (int w = 0; w < cfg.workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return slot;
}

// Pairwise reduction in block order: scheduling-independent and better
// conditioned than a running sum over thousands of blocks.
inline BlockStats tree_reduce(const std::vector<BlockStats>& v, size_t lo, size_t hi) {
    if (hi - lo == 1) return v[lo];
    size_t mid = lo + (hi - lo) / 2;
    BlockStats a = tree_reduce(v, lo, mid), b = tree_reduce(v, mid, hi);
    return {a.sum + b.sum, a.sumsq + b.sumsq};
}

inline SimEstimate mean_estimate(const std::vector<BlockStats>& slots) {
    BlockStats tot = tree_reduce(slots, 0, slots.size());
    double n = double(slots.size()) * double(kBlock);
    double mean = tot.sum / n;
    double var = (tot.sumsq - n * mean * mean) / (n - 1.0);
    if (var < 0.0) var = 0.0;
    return {mean, std::sqrt(var / n), std::uint64_t(n)};
}

inline double bpsk_style_error(double snr, const metrics::ModulationParams& mod) {
    return 0.5 * mod.eta * std::erfc(std::sqrt(mod.beta * snr));
}

} // namespace detail

// Fraction of trials where the weaker hop falls at or below the threshold.
inline SimEstimate simulate_outage(const metrics::Scenario& s, const SimConfig& cfg) {
    s.validate();
    cfg.validate();
    std::uint64_t n_blocks = detail::block_count(cfg.trials);
    auto slots = detail::run_blocks(n_blocks, cfg, [&](std::uint64_t b) {
        rng::Xoshiro256pp r = rng::Xoshiro256pp::child(cfg.root_seed, b);
        std::uint64_t count = 0;
        for (std::uint64_t t = 0; t < detail::kBlock; ++t) {
            double g1 = channels::egg_sample(s.uwo, r);
            double g2 = channels::alpha_mu_sample(s.rf, r);
            if (std::min(g1, g2) <= s.threshold_snr) ++count;
        }
        return detail::BlockStats{double(count), double(count)};
    });
    detail::BlockStats tot = detail::tree_reduce(slots, 0, slots.size());
    double n = double(n_blocks) * double(detail::kBlock);
    double p = tot.sum / n;
    return {p, std::sqrt(p * (1.0 - p) / n), std::uint64_t(n)};
}

// Average end-to-end symbol error over faded SNR pairs.  The default
// estimator averages the conditional error e1 + e2 - 2 e1 e2 with
// e_i = (eta/2) erfc(sqrt(beta g_i)); bit_level instead draws one error
// event per hop and counts the XOR, which is unbiased but noisier.
inline SimEstimate simulate_asep(const metrics::Scenario& s, const SimConfig& cfg) {
    s.validate();
    cfg.validate();
    const metrics::ModulationParams& mod = s.modulation;
    std::uint64_t n_blocks = detail::block_count(cfg.trials);
    auto slots = detail::run_blocks(n_blocks, cfg, [&](std::uint64_t b) {
        rng::Xoshiro256pp r = rng::Xoshiro256pp::child(cfg.root_seed, b);
        detail::BlockStats st;
        for (std::uint64_t t = 0; t < detail::kBlock; ++t) {
            double e1 = detail::bpsk_style_error(channels::egg_sample(s.uwo, r), mod);
            double e2 = detail::bpsk_style_error(channels::alpha_mu_sample(s.rf, r), mod);
            double v;
            if (cfg.bit_level) {
                bool b1 = r.uniform() < e1, b2 = r.uniform() < e2;
                v = (b1 != b2) ? 1.0 : 0.0;
            } else {
                v = e1 + e2 - 2.0 * e1 * e2;
            }
            st.sum += v;
            st.sumsq += v * v;
        }
        return st;
    });
    return detail::mean_estimate(slots);
}

// Average log2(1 + min snr) over the two hops, optionally halved for a
// half-duplex relay.
inline SimEstimate simulate_capacity(const metrics::Scenario& s, const SimConfig& cfg) {
    s.validate();
    cfg.validate();
    double prelog = cfg.half_duplex_prelog ? 0.5 : 1.0;
    std::uint64_t n_blocks = detail::block_count(cfg.trials);
    auto slots = detail::run_blocks(n_blocks, cfg, [&](std::uint64_t b) {
        rng::Xoshiro256pp r = rng::Xoshiro256pp::child(cfg.root_seed, b);
        detail::BlockStats st;
        for (std::uint64_t t = 0; t < detail::kBlock; ++t) {
            double g1 = channels::egg_sample(s.uwo, r);
            double g2 = channels::alpha_mu_sample(s.rf, r);
            double v = prelog * std::log2(1.0 + std::min(g1, g2));
            st.sum += v;
            st.sumsq += v * v;
        }
        return st;
    });
    return detail::mean_estimate(slots);
}

} // namespace uowrelay::mc
