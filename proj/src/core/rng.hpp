#pragma once

#include <cstdint>
#include <vector>

namespace prindt {

// SplitMix64 finalizer. Bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seed for one resampling repetition. Defined as
//   mix64(master_seed XOR (rep_index + 1) * 0x9e3779b97f4a7c15)
// so every repetition owns an independent stream that can be derived
// without running the preceding repetitions.
inline std::uint64_t repetition_seed(std::uint64_t master_seed, std::uint64_t rep_index) {
    return mix64(master_seed ^ ((rep_index + 1) * 0x9e3779b97f4a7c15ULL));
}

/// Small deterministic generator (SplitMix64 stream).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        return mix64(z);
    }

    // Unbiased draw from [0, n) by rejection.
    std::uint64_t bounded(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n; // 2^64 mod n
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

private:
    std::uint64_t state_;
};

// First k positions of a Fisher-Yates shuffle of {0, 1, ..., n-1}.
// Result is the sampled index set in selection order.
inline std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Rng& rng) {
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.bounded(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

} // namespace prindt
