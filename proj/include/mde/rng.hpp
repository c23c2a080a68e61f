#pragma once

#include <cmath>
#include <cstdint>

#include "mde/errors.hpp"

namespace mde {

// SplitMix64 generator. The simulation tables are contractually
// bit-reproducible for a given seed, which rules out the <random> engines:
// normal_distribution's algorithm is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

    // Stream for replication i. Depends only on the constructor seed, never
    // on how many draws were taken, so substreams are stable under
    // reordering and parallel scheduling.
    Rng substream(std::uint64_t i) const {
        std::uint64_t z = seed_ + (i + 1) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return Rng(z ^ (z >> 31));
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform on (0,1]; never 0, so log(u) stays finite.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * (1.0 / 9007199254740992.0);
    }

    // Box-Muller with the spare kept; the cache is per-stream state, so a
    // stream's output is a pure function of its seed.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double th = 6.28318530717958647692 * u2;
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

    double exponential(double mean) {
        if (!(mean > 0.0)) throw DomainError("exponential draw needs mean > 0");
        return -mean * std::log(uniform());
    }

    // Knuth's product method, chunked so exp(-lambda) never underflows.
    long poisson(double lambda) {
        if (!(lambda > 0.0)) throw DomainError("poisson draw needs lambda > 0");
        long total = 0;
        while (lambda > 30.0) {
            total += poisson_small(15.0);
            lambda -= 15.0;
        }
        return total + poisson_small(lambda);
    }

private:
    long poisson_small(double lambda) {
        double limit = std::exp(-lambda);
        double p = 1.0;
        long k = 0;
        do {
            ++k;
            p *= uniform();
        } while (p > limit);
        return k - 1;
    }

    std::uint64_t seed_;
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace mde
