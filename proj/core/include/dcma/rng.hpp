#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dcma {

// Counter-style stream RNG: an mt19937_64 whose seed is derived from a master
// seed and a stream index through splitmix64 mixing.  Every Monte Carlo trial
// gets its own stream, so sweeps reproduce bit-identically no matter how the
// trials are scheduled across threads.
//
// Uniform and Gaussian draws are implemented here instead of <random>'s
// distributions because the standard leaves their algorithms
// implementation-defined and we want cross-platform reproducibility.
class StreamRng {
public:
    explicit StreamRng(std::uint64_t seed, std::uint64_t stream = 0)
        : gen_(mix(mix(seed + 0x9e3779b97f4a7c15ull) ^ mix(stream + 0xbf58476d1ce4e5b9ull))) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Marsaglia polar method; caches the second variate.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double r = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * r;
        have_spare_ = true;
        return u * r;
    }

    std::uint64_t uniform_index(std::uint64_t n) {
        // modulo bias is < 2^-40 for the n used here (shuffles, subsampling)
        return gen_() % n;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace dcma
