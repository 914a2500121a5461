#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "rdbound/rng.hpp"

namespace rdbound {

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;  // sample standard deviation / sqrt(trials)
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

struct McOptions {
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    std::uint32_t chunks = 64;
    unsigned threads = 1;
};

/// Running mean / sum of squared deviations (Welford), mergeable with Chan's rule.
struct MomentAccumulator {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }

    void merge(const MomentAccumulator& other) {
        if (other.count == 0) return;
        if (count == 0) {
            *this = other;
            return;
        }
        const double na = static_cast<double>(count);
        const double nb = static_cast<double>(other.count);
        const double n = na + nb;
        const double delta = other.mean - mean;
        mean += delta * nb / n;
        m2 += other.m2 + delta * delta * na * nb / n;
        count += other.count;
    }

    double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
};

namespace detail {

// Combines chunk results as a balanced binary tree over chunk indices, so the
// floating-point operation order depends only on the chunk count.
inline MomentAccumulator pairwise_reduce(std::vector<MomentAccumulator> parts) {
    if (parts.empty()) return {};
    std::size_t width = parts.size();
    while (width > 1) {
        const std::size_t half = (width + 1) / 2;
        for (std::size_t i = 0; i + half < width; ++i) {
            parts[i].merge(parts[i + half]);
        }
        width = half;
    }
    return parts.front();
}

inline void run_chunks(std::uint32_t chunks, unsigned threads, const auto& body) {
    threads = std::max(1u, std::min<unsigned>(threads, chunks));
    if (threads == 1) {
        for (std::uint32_t c = 0; c < chunks; ++c) body(c);
        return;
    }
    std::atomic<std::uint32_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::uint32_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) body(c);
        });
    }
}

}  // namespace detail

/// Chunked, seed-deterministic parallel loop. Chunk c covers trials
/// [c*T/C, (c+1)*T/C) and draws from rng_stream(seed, c); `visit(rng, acc)`
/// is called once per trial with that chunk's accumulator. Results are
/// bit-identical for fixed (seed, trials, chunks) at any thread count.
template <typename Visit>
MomentAccumulator mc_accumulate(const McOptions& opt, Visit&& visit) {
    if (opt.chunks == 0) throw std::domain_error("mc_accumulate needs at least one chunk");
    std::vector<MomentAccumulator> parts(opt.chunks);
    detail::run_chunks(opt.chunks, opt.threads, [&](std::uint32_t c) {
        const std::uint64_t begin = opt.trials * c / opt.chunks;
        const std::uint64_t end = opt.trials * (c + 1) / opt.chunks;
        Rng rng = rng_stream(opt.seed, c);
        MomentAccumulator acc;
        for (std::uint64_t i = begin; i < end; ++i) visit(rng, acc);
        parts[c] = acc;
    });
    return detail::pairwise_reduce(std::move(parts));
}

/// Mean and standard error of `sampler(rng)` over exactly opt.trials draws.
template <typename Sampler>
MonteCarloEstimate mc_mean(Sampler&& sampler, const McOptions& opt) {
    if (opt.trials < 2) throw std::domain_error("mc_mean requires at least two trials");
    const MomentAccumulator acc =
        mc_accumulate(opt, [&](Rng& rng, MomentAccumulator& a) { a.add(sampler(rng)); });
    return {acc.mean, std::sqrt(acc.variance() / static_cast<double>(acc.count)), acc.count, opt.seed};
}

}  // namespace rdbound
