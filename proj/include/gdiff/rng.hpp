#pragma once

#include <cmath>
#include <cstdint>

namespace gdiff {

// Philox4x32-10 counter-based generator. The key is the 64-bit seed and the
// 128-bit counter is split as (block index, stream id), so any
// (seed, stream, position) triple maps to the same output no matter in which
// order or on which worker it is evaluated. Parallel partitioning of samples
// therefore cannot change the variates a given sample sees.
struct Philox {
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    // One 4x32 block: counter (block, stream), key = seed.
    static void block(std::uint64_t seed, std::uint64_t stream,
                      std::uint64_t block_index, std::uint32_t out[4]) {
        std::uint32_t c0 = static_cast<std::uint32_t>(block_index);
        std::uint32_t c1 = static_cast<std::uint32_t>(block_index >> 32);
        std::uint32_t c2 = static_cast<std::uint32_t>(stream);
        std::uint32_t c3 = static_cast<std::uint32_t>(stream >> 32);
        std::uint32_t k0 = static_cast<std::uint32_t>(seed);
        std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
        for (int round = 0; round < 10; ++round) {
            std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c0;
            std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c2;
            std::uint32_t n0 = static_cast<std::uint32_t>(p1 >> 32) ^ c1 ^ k0;
            std::uint32_t n1 = static_cast<std::uint32_t>(p1);
            std::uint32_t n2 = static_cast<std::uint32_t>(p0 >> 32) ^ c3 ^ k1;
            std::uint32_t n3 = static_cast<std::uint32_t>(p0);
            c0 = n0;
            c1 = n1;
            c2 = n2;
            c3 = n3;
            k0 += kWeyl0;
            k1 += kWeyl1;
        }
        out[0] = c0;
        out[1] = c1;
        out[2] = c2;
        out[3] = c3;
    }
};

// Uniform double in [0, 1) with 53 random mantissa bits.
inline double uniform_from_bits(std::uint32_t hi, std::uint32_t lo) {
    std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Random-access stream of N(0,1) variates. Position p is stable under any
// partitioning: each Philox block yields the pair (2b, 2b+1) via Box-Muller,
// which consumes a fixed number of uniforms (no rejection), so indexing is
// exact. u1 is mapped into (0,1] to keep log(u1) finite.
class NormalStream {
  public:
    NormalStream(std::uint64_t seed, std::uint64_t stream)
        : seed_(seed), stream_(stream) {}

    static void pair_at(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t block_index, double& z0, double& z1) {
        std::uint32_t w[4];
        Philox::block(seed, stream, block_index, w);
        double u1 = 1.0 - uniform_from_bits(w[0], w[1]);  // (0, 1]
        double u2 = uniform_from_bits(w[2], w[3]);        // [0, 1)
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 6.283185307179586476925286766559 * u2;
        z0 = r * std::cos(theta);
        z1 = r * std::sin(theta);
    }

    static double at(std::uint64_t seed, std::uint64_t stream,
                     std::uint64_t position) {
        double z0, z1;
        pair_at(seed, stream, position >> 1, z0, z1);
        return (position & 1u) ? z1 : z0;
    }

    // Sequential access; from position 0 every generated pair is used fully.
    double next() {
        if (position_ & 1u) {
            ++position_;
            return cached_;
        }
        double z0;
        pair_at(seed_, stream_, position_ >> 1, z0, cached_);
        ++position_;
        return z0;
    }

    std::uint64_t position() const { return position_; }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t position_ = 0;
    double cached_ = 0.0;
};

// Random-access uniform [0,1) stream (used by synthetic spectrum generation).
inline double uniform_at(std::uint64_t seed, std::uint64_t stream,
                         std::uint64_t position) {
    std::uint32_t w[4];
    Philox::block(seed, stream, position >> 1, w);
    return (position & 1u) ? uniform_from_bits(w[2], w[3])
                           : uniform_from_bits(w[0], w[1]);
}

}  // namespace gdiff
