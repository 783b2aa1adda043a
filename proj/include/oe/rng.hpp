#ifndef OE_RNG_HPP
#define OE_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>

namespace oe {

// Deterministic seeded RNG. All randomness in the toolkit flows from a single
// master seed through named sub-streams, so adding a new consumer never
// perturbs the draws seen by existing ones. Gaussian and uniform variates are
// generated from raw 64-bit output directly (no std::*_distribution), keeping
// results identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // splitmix-style warmup so nearby seeds decorrelate
        next_u64();
        next_u64();
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // integer in [0, n)
    std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // polar Box-Muller
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    // complex standard normal, E|z|^2 = 1
    std::complex<double> cnormal() {
        return {normal() / std::sqrt(2.0), normal() / std::sqrt(2.0)};
    }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Derive the seed of a named sub-stream from a master seed (FNV-1a over the
// stream name mixed into the seed).
inline std::uint64_t substream_seed(std::uint64_t master, std::string_view name) {
    std::uint64_t h = 1469598103934665603ULL ^ master;
    for (char c : name) {
        h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
        h *= 1099511628211ULL;
    }
    return h;
}

inline Rng substream(std::uint64_t master, std::string_view name) {
    return Rng(substream_seed(master, name));
}

} // namespace oe

#endif
