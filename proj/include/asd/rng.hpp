#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace asd {

// Deterministic random source. std::mt19937_64 output is pinned by the
// standard, but the std distributions are not, so the int/real mappings
// are done here to keep results identical across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1) with 53-bit resolution.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return unit() < p; }

    // Uniform in [0, n), unbiased via rejection.
    std::uint64_t index(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r < threshold);
        return r % n;
    }

    // Uniform integer in [lo, hi] inclusive.
    long long int_in(long long lo, long long hi) {
        return lo + static_cast<long long>(index(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // Uniform in [lo, hi).
    double real_in(double lo, double hi) { return lo + (hi - lo) * unit(); }

    // Stable stream derivation (splitmix64 of seed ^ stream tag).
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 engine_;
};

// Fisher-Yates with the unbiased index mapping above.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.index(i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace asd
