#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace rdbound {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// The 128-bit counter is (block index, stream id) and the 64-bit key is the
/// seed, so every (seed, stream) pair addresses its own sequence without any
/// jump-ahead bookkeeping. Satisfies UniformRandomBitGenerator.
class Philox4x32 {
public:
    using result_type = std::uint32_t;
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    Philox4x32(std::uint64_t seed, std::uint64_t stream_id)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream_id) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        if (lane_ == 4) {
            const Counter ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                              static_cast<std::uint32_t>(stream_),
                              static_cast<std::uint32_t>(stream_ >> 32)};
            buffer_ = bijection(ctr, key_);
            ++block_;
            lane_ = 0;
        }
        return buffer_[lane_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t hi = (*this)();
        const std::uint64_t lo = (*this)();
        return (hi << 32) | lo;
    }

    /// The raw 10-round bijection, exposed for known-answer tests.
    static Counter bijection(Counter ctr, Key key) {
        constexpr std::uint32_t mul0 = 0xD2511F53u;
        constexpr std::uint32_t mul1 = 0xCD9E8D57u;
        constexpr std::uint32_t weyl0 = 0x9E3779B9u;
        constexpr std::uint32_t weyl1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += weyl0;
                key[1] += weyl1;
            }
            const std::uint64_t p0 = std::uint64_t{mul0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{mul1} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

private:
    Key key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    Counter buffer_{};
    int lane_ = 4;
};

using Rng = Philox4x32;

/// Independent stream `stream_id` under `seed`.
inline Rng rng_stream(std::uint64_t seed, std::uint64_t stream_id) { return Rng(seed, stream_id); }

/// Uniform double in the open interval (0, 1), 53-bit resolution.
inline double uniform01(Rng& rng) {
    constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
    return (static_cast<double>(rng.next_u64() >> 11) + 0.5) * scale;
}

}  // namespace rdbound
