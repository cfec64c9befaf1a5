// Prime sieves and the elementary arithmetic functions applied to point counts.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ellnum/modarith.hpp"

namespace ellnum {

struct PrimePower {
    u64 prime;
    int exponent;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

using Factorization = std::vector<PrimePower>;

/// Primes <= x in ascending order; empty for x < 2.
inline std::vector<u64> primes_up_to(u64 x) {
    std::vector<u64> out;
    if (x < 2) return out;
    out.push_back(2);
    // Odd-only sieve: index i stands for 2i + 1.
    const u64 half = (x - 1) / 2 + 1;
    std::vector<unsigned char> composite(half, 0);
    for (u64 i = 1; i < half; ++i) {
        if (composite[i]) continue;
        const u64 q = 2 * i + 1;
        out.push_back(q);
        if (q > x / q) continue;
        for (u64 j = (q * q) / 2; j < half; j += q) composite[j] = 1;
    }
    return out;
}

/// Primes in [lo, hi] by a segmented sieve over the base primes <= sqrt(hi).
inline std::vector<u64> primes_in_range(u64 lo, u64 hi) {
    std::vector<u64> out;
    if (hi < 2 || lo > hi) return out;
    lo = std::max<u64>(lo, 2);
    const auto base = primes_up_to(isqrt(hi));
    std::vector<unsigned char> composite(hi - lo + 1, 0);
    for (u64 q : base) {
        u64 start = std::max(q * q, (lo + q - 1) / q * q);
        for (u64 m = start; m <= hi; m += q) {
            composite[m - lo] = 1;
            if (m > hi - q) break;
        }
    }
    for (u64 v = lo; v <= hi; ++v) {
        if (!composite[v - lo]) out.push_back(v);
        if (v == hi) break;
    }
    return out;
}

/// Factorization by trial division; intended for rare or one-off values.
inline Factorization factorize_trial(u64 n) {
    if (n == 0) throw std::invalid_argument("factorize: n must be positive");
    Factorization f;
    auto strip = [&](u64 q) {
        int e = 0;
        while (n % q == 0) {
            n /= q;
            ++e;
        }
        if (e > 0) f.push_back({q, e});
    };
    strip(2);
    strip(3);
    for (u64 q = 5; q <= n / q; q += 6) {
        strip(q);
        strip(q + 2);
    }
    if (n > 1) f.push_back({n, 1});
    return f;
}

inline int omega_of(const Factorization& f) { return static_cast<int>(f.size()); }

inline int big_omega_of(const Factorization& f) {
    int s = 0;
    for (const auto& pp : f) s += pp.exponent;
    return s;
}

inline int omega_z_of(const Factorization& f, u64 z) {
    return static_cast<int>(std::count_if(f.begin(), f.end(), [z](const PrimePower& pp) { return pp.prime < z; }));
}

inline u64 divisor_count_of(const Factorization& f) {
    u64 d = 1;
    for (const auto& pp : f) d *= static_cast<u64>(pp.exponent + 1);
    return d;
}

/// n = squarefree * powerful with coprime parts.
struct PowerfulSplit {
    u64 squarefree;
    u64 powerful;

    friend bool operator==(const PowerfulSplit&, const PowerfulSplit&) = default;
};

inline PowerfulSplit powerful_part_of(const Factorization& f) {
    PowerfulSplit s{1, 1};
    for (const auto& pp : f) {
        if (pp.exponent == 1) {
            s.squarefree *= pp.prime;
        } else {
            for (int i = 0; i < pp.exponent; ++i) s.powerful *= pp.prime;
        }
    }
    return s;
}

/// All positive divisors, ascending.
inline std::vector<u64> divisors_of(const Factorization& f) {
    std::vector<u64> d{1};
    for (const auto& pp : f) {
        const std::size_t n = d.size();
        u64 power = 1;
        for (int e = 1; e <= pp.exponent; ++e) {
            power *= pp.prime;
            for (std::size_t i = 0; i < n; ++i) d.push_back(d[i] * power);
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

inline bool is_squarefree(u64 n) {
    const auto f = factorize_trial(n);
    return std::all_of(f.begin(), f.end(), [](const PrimePower& pp) { return pp.exponent == 1; });
}

inline int omega(u64 n) { return omega_of(factorize_trial(n)); }
inline int big_omega(u64 n) { return big_omega_of(factorize_trial(n)); }
inline int omega_z(u64 n, u64 z) { return omega_z_of(factorize_trial(n), z); }
inline u64 divisor_count(u64 n) { return divisor_count_of(factorize_trial(n)); }
inline PowerfulSplit powerful_part(u64 n) { return powerful_part_of(factorize_trial(n)); }

/// Smallest-prime-factor table. Immutable after construction.
class FactorSieve {
public:
    static constexpr u64 kDefaultLimit = 2000000;

    explicit FactorSieve(u64 limit = kDefaultLimit) : limit_(std::max<u64>(limit, 1)), spf_(limit_ + 1, 0) {
        if (limit_ > 0xFFFFFFFFULL) throw std::invalid_argument("FactorSieve: limit must fit in 32 bits");
        for (u64 i = 2; i <= limit_; ++i) {
            if (spf_[i] == 0) {
                spf_[i] = static_cast<std::uint32_t>(i);
                primes_.push_back(i);
            }
            for (u64 q : primes_) {
                if (q > spf_[i] || q * i > limit_) break;
                spf_[q * i] = static_cast<std::uint32_t>(q);
            }
        }
    }

    u64 limit() const noexcept { return limit_; }
    const std::vector<u64>& primes() const noexcept { return primes_; }

    u64 smallest_factor(u64 n) const {
        if (n < 2 || n > limit_) throw std::out_of_range("smallest_factor: n outside [2, limit]");
        return spf_[n];
    }

    /// Sieve lookup up to the limit; trial division over sieved primes above it.
    Factorization factorize(u64 n) const {
        if (n == 0) throw std::invalid_argument("factorize: n must be positive");
        Factorization f;
        if (n <= limit_) {
            while (n > 1) {
                const u64 q = spf_[n];
                int e = 0;
                while (n % q == 0) {
                    n /= q;
                    ++e;
                }
                f.push_back({q, e});
            }
            return f;
        }
        for (u64 q : primes_) {
            if (q > n / q) break;
            int e = 0;
            while (n % q == 0) {
                n /= q;
                ++e;
            }
            if (e > 0) f.push_back({q, e});
        }
        if (n > 1 && !primes_.empty() && primes_.back() < n / primes_.back()) {
            // Residual beyond limit^2: finish with plain trial division.
            for (const auto& pp : factorize_trial(n)) f.push_back(pp);
        } else if (n > 1) {
            f.push_back({n, 1});
        }
        return f;
    }

    int omega(u64 n) const { return omega_of(factorize(n)); }
    int big_omega(u64 n) const { return big_omega_of(factorize(n)); }
    int omega_z(u64 n, u64 z) const { return omega_z_of(factorize(n), z); }
    u64 divisor_count(u64 n) const { return divisor_count_of(factorize(n)); }
    PowerfulSplit powerful_part(u64 n) const { return powerful_part_of(factorize(n)); }

private:
    u64 limit_;
    std::vector<std::uint32_t> spf_;
    std::vector<u64> primes_;
};

/// Natural log of the natural log. Rejects x below e^e, where the value drops
/// under 1 and the centering it feeds stops meaning anything.
inline double loglog(double x) {
    static const double floor = std::exp(std::numbers::e);
    if (!(x >= floor)) throw std::domain_error("loglog: x must be >= e^e");
    return std::log(std::log(x));
}

/// Below this the double logarithm is too small for any statistic to mean anything.
inline constexpr double kLogLogGuard = 16.0;

inline void require_stats_scale(double x) {
    if (!(x >= kLogLogGuard)) throw std::domain_error("x must be >= 16");
}

/// Smallest integer >= v, snapping values within rounding noise of an integer.
inline u64 ceil_real(double v) {
    const double r = std::round(v);
    if (std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(v))) return static_cast<u64>(r);
    return static_cast<u64>(std::ceil(v));
}

/// Sum of 1/p over primes p in [lo, hi], accumulated in ascending order.
inline double reciprocal_prime_sum(u64 lo, u64 hi) {
    double s = 0;
    for (u64 p : primes_in_range(lo, hi)) s += 1.0 / static_cast<double>(p);
    return s;
}

}  // namespace ellnum
