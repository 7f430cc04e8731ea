#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace uowrelay::rng {

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// xoshiro256++ with splitmix64 seeding; child(root, k) yields streams that
// are deterministic functions of (root, k) alone, so any scheduling of the
// k's reproduces identical draws.
struct Xoshiro256pp {
    std::array<uint64_t, 4> s{1, 2, 3, 4};

    static Xoshiro256pp seeded(uint64_t seed) {
        Xoshiro256pp r;
        uint64_t sm = seed;
        for (auto& w : r.s) w = splitmix64(sm);
        if ((r.s[0] | r.s[1] | r.s[2] | r.s[3]) == 0) r.s[0] = 1;
        return r;
    }
    static Xoshiro256pp child(uint64_t root_seed, uint64_t stream_index) {
        return seeded(root_seed ^ (0x9e3779b97f4a7c15ull * (stream_index + 1)));
    }

    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t next() {
        uint64_t result = rotl(s[0] + s[3], 23) + s[0];
        uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }

    double uniform() { // (0, 1)
        for (;;) {
            double u = double(next() >> 11) * 0x1.0p-53;
            if (u > 0.0) return u;
        }
    }
    double normal() {
        // Marsaglia polar, uncached; throughput is dominated by downstream work
        for (;;) {
            double u = 2.0 * uniform() - 1.0, v = 2.0 * uniform() - 1.0;
            double q = u * u + v * v;
            if (q > 0.0 && q < 1.0) return u * std::sqrt(-2.0 * std::log(q) / q);
        }
    }
    double exponential() { return -std::log(uniform()); }

    // ln of a unit-scale gamma variate.  Marsaglia-Tsang for shape >= 1;
    // smaller shapes use the boost ln G_a = ln G_{a+1} + ln(U)/a, which stays
    // finite in log space for shapes as small as the catalog's 0.0075 where
    // the variate itself underflows.
    double gamma_log(double shape) {
        if (!(shape > 0.0)) throw std::domain_error("gamma_log: shape <= 0");
        double boost = 0.0, a = shape;
        if (a < 1.0) {
            boost = std::log(uniform()) / a;
            a += 1.0;
        }
        double d = a - 1.0 / 3.0, c = 1.0 / (3.0 * std::sqrt(d));
        for (;;) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x)
                return std::log(d * v) + boost;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
                return std::log(d * v) + boost;
        }
    }
    double gamma(double shape) { return std::exp(gamma_log(shape)); }
};

} // namespace uowrelay::rng
