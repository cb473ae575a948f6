#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace heapseq {

// All randomness in the library flows through this generator so that runs
// are reproducible across machines and worker counts. xoshiro256** with
// splitmix64 seeding; both algorithms are fully specified by their authors,
// unlike std::uniform_real_distribution.
inline constexpr std::string_view rng_identity = "xoshiro256starstar/splitmix64 v1";

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class rng256 {
public:
    explicit rng256(std::uint64_t seed = 0) { reseed(seed); }

    void reseed(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : state_) w = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound) by rejection; bound >= 1.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % bound;
        std::uint64_t x;
        do { x = next(); } while (x >= limit);
        return x % bound;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4]{};
};

// Per-trial seed derivation: one logical stream per (master, n, trial).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t n, std::uint64_t trial) {
    std::uint64_t s = master;
    s ^= 0x9E3779B97F4A7C15ULL * (n + 1);
    s ^= 0xBF58476D1CE4E5B9ULL * (trial + 1);
    std::uint64_t st = s;
    return splitmix64(st);
}

// Fisher-Yates permutation of 1..n.
inline std::vector<std::int64_t> random_permutation(std::size_t n, rng256& rng) {
    std::vector<std::int64_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<std::int64_t>(i + 1);
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(p[i - 1], p[j]);
    }
    return p;
}

inline std::vector<double> uniform_stream(std::size_t n, rng256& rng) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform01();
    return v;
}

// Relative-rank stream: the t-th entry is uniform on {1..t}, which is
// exactly the law of the rank of the t-th element of a random permutation
// among the elements seen so far.
inline std::vector<std::int64_t> relrank_stream(std::size_t n, rng256& rng) {
    std::vector<std::int64_t> v(n);
    for (std::size_t t = 1; t <= n; ++t)
        v[t - 1] = static_cast<std::int64_t>(rng.below(t)) + 1;
    return v;
}

} // namespace heapseq
