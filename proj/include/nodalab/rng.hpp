// Deterministic random numbers. std::mt19937_64 is seeded explicitly and the
// variate transforms are implemented here (std::uniform_real_distribution is
// implementation-defined), so a given seed reproduces byte-identical streams.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "nodalab/vec.hpp"

namespace nodalab {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller (deterministic, no cached state).
    double normal() {
        double u1 = uniform();
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    // Uniform direction on S^{n-1}.
    Vec unit_vector(int n) {
        Vec v(n);
        double m = 0.0;
        while (m == 0.0) {
            for (int i = 0; i < n; ++i) v[i] = normal();
            m = norm(v);
        }
        for (auto& x : v) x /= m;
        return v;
    }

    // Uniform point in the unit ball of R^n (rejection from the cube).
    Vec in_unit_ball(int n) {
        Vec v(n);
        for (;;) {
            for (int i = 0; i < n; ++i) v[i] = uniform(-1.0, 1.0);
            if (dot(v, v) <= 1.0) return v;
        }
    }

    // Derive an independent stream for work chunk `k` (splitmix64 mix), so
    // chunked parallel sampling is reproducible for any thread count.
    static std::uint64_t substream(std::uint64_t seed, std::uint64_t k) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (k + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace nodalab
