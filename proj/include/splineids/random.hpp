#ifndef SPLINEIDS_RANDOM_HPP
#define SPLINEIDS_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace splineids {

/**
 * Seeded generator with a platform-independent draw sequence.
 *
 * The engine is std::mt19937_64, whose output is fixed by the standard.
 * The std:: distributions are not, so every variate is derived here from
 * raw 64-bit draws:
 *  - uniform:  top 53 bits scaled into [0, 1)
 *  - normal:   Box-Muller, one variate per two uniforms (cosine branch)
 *  - poisson:  Knuth's product method, in chunks of rate <= 30
 *  - below(n): rejection sampling on the 64-bit draw
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1p-53; }

    double normal(double mean = 0.0, double sigma = 1.0) {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
        return mean + sigma * z;
    }

    bool bernoulli(double p) { return uniform() < p; }

    std::uint64_t poisson(double rate) {
        std::uint64_t count = 0;
        while (rate > 0.0) {
            const double chunk = rate > 30.0 ? 30.0 : rate;
            rate -= chunk;
            const double limit = std::exp(-chunk);
            double product = uniform();
            while (product > limit) {
                ++count;
                product *= uniform();
            }
        }
        return count;
    }

    /// Uniform integer in [0, n); n must be positive.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t draw;
        do {
            draw = engine_();
        } while (draw >= limit);
        return draw % n;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace splineids

#endif  // SPLINEIDS_RANDOM_HPP
