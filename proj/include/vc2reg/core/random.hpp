#pragma once

#include "vc2reg/core/rational.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <string_view>

namespace vc2reg {

// splitmix64 finaliser; used to derive sub-stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t hash_tag(std::string_view tag) {
    std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

// Seeded stream. Sub-streams are derived as
//   seed' = mix64(mix64(seed ^ fnv1a(tag)) ^ i0) ^ i1 ... (each index folded through mix64)
// and the engine is std::mt19937_64 seeded with seed'. All draws below use only
// raw 64-bit engine outputs, so sequences are identical on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static std::uint64_t derive(std::uint64_t seed, std::string_view tag,
                                std::initializer_list<std::uint64_t> idx = {}) {
        std::uint64_t s = mix64(seed ^ hash_tag(tag));
        for (auto i : idx) s = mix64(s ^ i);
        return s;
    }
    static Rng stream(std::uint64_t seed, std::string_view tag,
                      std::initializer_list<std::uint64_t> idx = {}) {
        return Rng(derive(seed, tag, idx));
    }

    std::uint64_t next() { return engine_(); }

    // Uniform integer in [0, k) by rejection of the biased low range.
    std::uint64_t below(std::uint64_t k) {
        if (k == 0) throw std::invalid_argument("below(0)");
        const std::uint64_t reject = (0 - k) % k;
        for (;;) {
            std::uint64_t r = next();
            if (r >= reject) return r % k;
        }
    }

    template <class Vec>
    void shuffle(Vec& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

// Exact Bernoulli(p): one 64-bit draw r, success iff r < floor(p * 2^64).
// p = 1 always succeeds (a draw is still consumed to keep streams aligned).
class Bernoulli {
public:
    explicit Bernoulli(const Rational& p) {
        if (p < 0 || p > 1) throw std::invalid_argument("probability outside [0,1]");
        always_ = (p == 1);
        if (!always_) {
            BigInt t = floor_of(p * Rational(BigInt(1) << 64));
            threshold_ = t.convert_to<std::uint64_t>();
        }
    }
    bool operator()(Rng& rng) const {
        std::uint64_t r = rng.next();
        return always_ || r < threshold_;
    }

private:
    std::uint64_t threshold_ = 0;
    bool always_ = false;
};

}  // namespace vc2reg
