#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string_view>
#include <vector>

namespace misinfo {

// All randomness flows through named streams derived from one base seed, so
// parallel schedules cannot change results: each (stage, fold, column, ...)
// owns an independent generator.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag,
                                 std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t h = base ^ 0x9e3779b97f4a7c15ull;
    auto mix = [&h](std::uint64_t v) {
        h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h *= 0xff51afd7ed558ccdull;
        h ^= h >> 33;
    };
    for (char c : tag) mix(static_cast<unsigned char>(c));
    mix(a);
    mix(b);
    return h;
}

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

// Uniform integer in [0, n). Implemented directly (rejection sampling) so the
// draw sequence does not depend on the standard library's distribution.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % n;
}

inline double uniform_real(std::mt19937_64& rng) {
    return (rng() >> 11) * 0x1.0p-53;  // 53-bit mantissa in [0,1)
}

// Marsaglia polar method; two normals per round, cached.
class NormalSampler {
public:
    explicit NormalSampler(std::mt19937_64& rng) : rng_(rng) {}

    double operator()(double mean, double stddev) {
        if (has_spare_) {
            has_spare_ = false;
            return mean + stddev * spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform_real(rng_) - 1.0;
            v = 2.0 * uniform_real(rng_) - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return mean + stddev * u * f;
    }

private:
    std::mt19937_64& rng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Fisher-Yates. Own implementation for the same reason as uniform_index.
template <typename T>
void shuffle_inplace(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[uniform_index(rng, i)]);
    }
}

// A shuffle expressed as an explicit permutation: perm[i] is the source index
// of output element i. Invertible, which tests rely on.
inline std::vector<std::size_t> random_permutation(std::size_t n, std::mt19937_64& rng) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    shuffle_inplace(perm, rng);
    return perm;
}

template <typename T>
std::vector<T> apply_permutation(const std::vector<T>& v, const std::vector<std::size_t>& perm) {
    std::vector<T> out(v.size());
    for (std::size_t i = 0; i < perm.size(); ++i) out[i] = v[perm[i]];
    return out;
}

inline std::vector<std::size_t> invert_permutation(const std::vector<std::size_t>& perm) {
    std::vector<std::size_t> inv(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = i;
    return inv;
}

}  // namespace misinfo
