#pragma once

#include <cstdint>
#include <random>

namespace rodsim {

// splitmix64; used to spread user seeds and derive per-replicate streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic RNG wrapper. All distribution mapping is done here by hand so
// that streams are identical across standard libraries; std distributions are
// deliberately not used.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1), 53-bit resolution
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return uniform() < p;
    }

    // uniform integer in [0, n); n must be > 0
    std::uint64_t below(std::uint64_t n) {
        // Lemire-style rejection; unbiased.
        std::uint64_t x = engine_();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            std::uint64_t threshold = (0ULL - n) % n;
            while (lo < threshold) {
                x = engine_();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Sum of two uniforms; triangular over [lo, hi] peaked at the midpoint.
    double triangular(double lo, double hi) {
        return lo + (hi - lo) * 0.5 * (uniform() + uniform());
    }

    // Marsaglia polar method, one value per call (spare discarded to keep the
    // stream position a simple function of call count).
    double gaussian(double mean, double stddev) {
        double u, v, s;
        do {
            u = uniform(-1.0, 1.0);
            v = uniform(-1.0, 1.0);
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        return mean + stddev * u * std::sqrt(-2.0 * std::log(s) / s);
    }

private:
    std::mt19937_64 engine_;
};

// Stream for replicate `index` of a batch with master seed `master`.
constexpr std::uint64_t replicate_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index + 0x51ed270b7a63b3c1ULL));
}

} // namespace rodsim
