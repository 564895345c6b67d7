#pragma once

#include <complex>
#include <cstdint>
#include <cmath>

namespace ckballs {

// xoshiro256** with splitmix64 seeding. Implementation-defined distributions
// from <random> are avoided so that seeded runs reproduce bit-identically
// across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) {
            x += 0x9e3779b97f4a7c15ull;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
            word = z ^ (z >> 31);
        }
    }

    std::uint64_t next_u64() {
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

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t uniform_index(std::uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

    double normal() {
        // Box-Muller; one value per call keeps the stream position simple.
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    std::complex<double> complex_normal() {
        const double r = std::sqrt(-2.0 * std::log(std::max(uniform(), 1e-300)));
        const double th = 2.0 * M_PI * uniform();
        return {r * std::cos(th) * M_SQRT1_2, r * std::sin(th) * M_SQRT1_2};
    }

    // uniform on the closed unit disk
    std::complex<double> unit_disk() {
        const double r = std::sqrt(uniform());
        const double th = 2.0 * M_PI * uniform();
        return {r * std::cos(th), r * std::sin(th)};
    }

    std::complex<double> unit_circle() {
        const double th = 2.0 * M_PI * uniform();
        return {std::cos(th), std::sin(th)};
    }

    // deterministic child stream, independent of call order across tasks
    Rng child(std::uint64_t task_index) const {
        return Rng(state_[0] ^ (0x9e3779b97f4a7c15ull * (task_index + 1)));
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4];
};

}  // namespace ckballs
