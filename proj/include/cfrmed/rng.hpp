#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "cfrmed/errors.hpp"

namespace cfrmed {

/// SplitMix64 (Steele, Lea & Flood 2014). Chosen for its fixed, widely
/// published constants: streams reproduce bit-for-bit from a 64-bit seed.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n), unbiased via rejection.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
        for (;;) {
            std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

private:
    std::uint64_t state_;
};

/// Independent child stream i of a base seed (replicates, permutation
/// batches). One SplitMix64 output step of a distinct state; documented so
/// results reproduce across runs and parallel schedules.
inline std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) {
    SplitMix64 g(base_seed ^ (0xA0761D6478BD642FULL + index * 0xE7037ED1A0B428DBULL));
    return g.next();
}

namespace rng_detail {

// Inversion by sequential pmf accumulation; exact, O(np) expected. Assumes
// 0 < p <= 0.5 and small enough np that q^n does not underflow.
inline std::int64_t binomial_inversion(SplitMix64& g, std::int64_t n, double p) {
    const double q = 1.0 - p;
    const double s = p / q;
    double f = std::exp(static_cast<double>(n) * std::log1p(-p));  // q^n
    double u = g.next_double();
    std::int64_t k = 0;
    while (u > f && k < n) {
        u -= f;
        ++k;
        f *= s * static_cast<double>(n - k + 1) / static_cast<double>(k);
    }
    return k;
}

// BTRS transformed rejection with squeeze (Hoermann 1993), exact for
// np >= 10 and p <= 0.5. Constants as published.
inline std::int64_t binomial_btrs(SplitMix64& g, std::int64_t n, double p) {
    const double nd = static_cast<double>(n);
    const double q = 1.0 - p;
    const double spq = std::sqrt(nd * p * q);
    const double b = 1.15 + 2.53 * spq;
    const double a = -0.0873 + 0.0248 * b + 0.01 * p;
    const double c = nd * p + 0.5;
    const double v_r = 0.92 - 4.2 / b;
    const double alpha = (2.83 + 5.1 / b) * spq;
    const double lpq = std::log(p / q);
    const std::int64_t m = static_cast<std::int64_t>(std::floor((nd + 1.0) * p));
    const double h = std::lgamma(static_cast<double>(m) + 1.0) + std::lgamma(nd - static_cast<double>(m) + 1.0);
    for (;;) {
        double u = g.next_double() - 0.5;
        double v = g.next_double();
        double us = 0.5 - std::abs(u);
        std::int64_t k = static_cast<std::int64_t>(std::floor((2.0 * a / us + b) * u + c));
        if (k < 0 || k > n) continue;
        if (us >= 0.07 && v <= v_r) return k;
        const double kd = static_cast<double>(k);
        v = std::log(v * alpha / (a / (us * us) + b));
        if (v <= h - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0) + (kd - static_cast<double>(m)) * lpq)
            return k;
    }
}

} // namespace rng_detail

/// Exact Binomial(n, p) sample: inversion in the small-np regime, BTRS
/// rejection otherwise. Deterministic given the generator state.
inline std::int64_t binomial(SplitMix64& g, std::int64_t n, double p) {
    if (n < 0 || p < 0.0 || p > 1.0) throw Error("binomial: need n >= 0 and p in [0,1]");
    if (n == 0 || p == 0.0) return 0;
    if (p == 1.0) return n;
    if (p > 0.5) return n - binomial(g, n, 1.0 - p);
    if (static_cast<double>(n) * p < 30.0) return rng_detail::binomial_inversion(g, n, p);
    return rng_detail::binomial_btrs(g, n, p);
}

/// Multinomial sample via the conditional-binomial chain.
inline std::vector<std::int64_t> multinomial(SplitMix64& g, std::int64_t n, const std::vector<double>& p) {
    std::vector<std::int64_t> counts(p.size(), 0);
    double remaining_p = 0.0;
    for (double x : p) remaining_p += x;
    std::int64_t remaining_n = n;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        if (remaining_n == 0) break;
        if (remaining_p <= 0.0) break;
        double cond = p[i] / remaining_p;
        if (cond > 1.0) cond = 1.0;
        counts[i] = binomial(g, remaining_n, cond);
        remaining_n -= counts[i];
        remaining_p -= p[i];
    }
    if (!p.empty()) counts[p.size() - 1] += remaining_n;
    return counts;
}

} // namespace cfrmed
