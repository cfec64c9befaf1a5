// Empirical distribution of omega(N_p) over the good primes p <= x: centered
// moments, a standardized histogram with its Kolmogorov-Smirnov distance to
// the normal law, admissible/inadmissible partitions and pi_E(x, d).
//
// All sums run over good primes in ascending order, so results are
// bit-reproducible. Bad primes never enter any statistic.
#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "ellnum/arith.hpp"
#include "ellnum/np_table.hpp"

namespace ellnum {

/// A sieve large enough to factor every N_p in the table (N_p <= limit + 1 + 2 sqrt(limit)).
inline FactorSieve sieve_for(const NpTable& table) {
    return FactorSieve(std::max<u64>(2, table.limit() + 1 + isqrt(4 * table.limit())));
}

namespace detail {

inline std::span<const NpEntry> stats_range(const NpTable& table, u64 x, const FactorSieve& sieve) {
    require_stats_scale(static_cast<double>(x));
    if (x > table.limit()) {
        throw std::out_of_range("x = " + std::to_string(x) + " above table limit " + std::to_string(table.limit()));
    }
    auto range = table.entries_up_to(x);
    if (range.empty()) throw std::domain_error("no good primes <= " + std::to_string(x));
    for (const auto& e : range) {
        if (e.np > sieve.limit()) {
            throw std::invalid_argument("factor sieve limit " + std::to_string(sieve.limit()) + " below N_" +
                                        std::to_string(e.p) + " = " + std::to_string(e.np));
        }
    }
    return range;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace detail

struct MomentReport {
    u64 x = 0;
    u64 pi_x = 0;
    u64 n_good = 0;
    double loglog_x = 0;
    double mean_omega = 0;
    double m2 = 0;          // sum (omega(N_p) - loglog x)^2
    double m4 = 0;          // sum (omega(N_p) - loglog x)^4
    double ratio2 = 0;      // m2 / (pi(x) loglog x)
    double ratio2_alt = 0;  // m2 / (x loglog x)
    double ratio4 = 0;      // m4 / (pi(x) (loglog x)^2)
};

inline MomentReport moments(const NpTable& table, u64 x, const FactorSieve& sieve) {
    const auto range = detail::stats_range(table, x, sieve);
    MomentReport r;
    r.x = x;
    r.pi_x = table.prime_count_up_to(x);
    r.n_good = range.size();
    r.loglog_x = loglog(static_cast<double>(x));
    double sum = 0;
    for (const auto& e : range) {
        const double w = sieve.omega(e.np);
        const double d = w - r.loglog_x;
        sum += w;
        r.m2 += d * d;
        r.m4 += d * d * d * d;
    }
    const double L = r.loglog_x;
    r.mean_omega = sum / static_cast<double>(r.n_good);
    r.ratio2 = r.m2 / (static_cast<double>(r.pi_x) * L);
    r.ratio2_alt = r.m2 / (static_cast<double>(x) * L);
    r.ratio4 = r.m4 / (static_cast<double>(r.pi_x) * L * L);
    return r;
}

struct HistogramBin {
    double left;
    double right;
    double mass;
};

struct StandardizedDistribution {
    u64 x = 0;
    u64 n = 0;
    double loglog_x = 0;
    std::vector<HistogramBin> bins;
    /// sup_t |F_n(t) - Phi(t)|, left limits included.
    double ks_statistic = 0;
};

/// Histogram of (omega(N_p) - loglog x) / sqrt(loglog x) on equal-width bins
/// spanning the observed range, plus the KS distance to the standard normal.
inline StandardizedDistribution standardized_distribution(const NpTable& table, u64 x, std::size_t bins,
                                                          const FactorSieve& sieve) {
    if (bins < 1) throw std::invalid_argument("standardized_distribution: bins must be >= 1");
    const auto range = detail::stats_range(table, x, sieve);
    StandardizedDistribution d;
    d.x = x;
    d.n = range.size();
    d.loglog_x = loglog(static_cast<double>(x));
    const double scale = std::sqrt(d.loglog_x);
    std::vector<double> z;
    z.reserve(range.size());
    for (const auto& e : range) z.push_back((sieve.omega(e.np) - d.loglog_x) / scale);
    std::sort(z.begin(), z.end());

    const double lo = z.front();
    const double hi = z.back() > lo ? z.back() : lo + 1.0;
    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<u64> counts(bins, 0);
    for (double v : z) {
        auto b = static_cast<std::size_t>((v - lo) / width);
        ++counts[std::min(b, bins - 1)];
    }
    for (std::size_t i = 0; i < bins; ++i) {
        d.bins.push_back({lo + width * static_cast<double>(i), i + 1 == bins ? hi : lo + width * static_cast<double>(i + 1),
                          static_cast<double>(counts[i]) / static_cast<double>(d.n)});
    }

    const double n = static_cast<double>(d.n);
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double phi = detail::normal_cdf(z[i]);
        d.ks_statistic = std::max({d.ks_statistic, static_cast<double>(i + 1) / n - phi, phi - static_cast<double>(i) / n});
    }
    return d;
}

struct AdmissibilityProfile {
    u64 x = 0;
    double epsilon = 0;
    double threshold = 0;  // (1 - epsilon) loglog x
    u64 admissible_count = 0;
    u64 inadmissible_count = 0;
    double inadmissible_recip_sum = 0;
};

/// A good prime is admissible when omega(N_p) >= (1 - epsilon) loglog x.
inline AdmissibilityProfile admissibility_profile(const NpTable& table, u64 x, double epsilon,
                                                  const FactorSieve& sieve) {
    if (!(epsilon > 0 && epsilon < 1)) throw std::invalid_argument("epsilon must lie in (0, 1)");
    const auto range = detail::stats_range(table, x, sieve);
    AdmissibilityProfile a;
    a.x = x;
    a.epsilon = epsilon;
    a.threshold = (1.0 - epsilon) * loglog(static_cast<double>(x));
    for (const auto& e : range) {
        if (sieve.omega(e.np) >= a.threshold) {
            ++a.admissible_count;
        } else {
            ++a.inadmissible_count;
            a.inadmissible_recip_sum += 1.0 / static_cast<double>(e.p);
        }
    }
    return a;
}

struct RecipSumReport {
    u64 x = 0;
    double a = 0, b = 0, epsilon = 0, threshold = 0;
    /// Inclusive prime range [ceil(x^a), ceil(x^b) - 1].
    u64 lo = 0, hi = 0;
    double full_sum = 0;          // good primes in range
    double admissible_sum = 0;
    double inadmissible_sum = 0;  // accumulated separately from the other two
    double bad_prime_sum = 0;
    /// full_sum - admissible_sum.
    double difference = 0;
    bool empty = false;
};

/// Sum of 1/p over admissible good primes in [x^a, x^b), beside the
/// unrestricted sum over good primes and the inadmissible remainder.
inline RecipSumReport admissible_recip_sum(const NpTable& table, u64 x, double a, double b, double epsilon,
                                           const FactorSieve& sieve) {
    if (!(a > 0 && a < b && b < 1)) throw std::invalid_argument("admissible_recip_sum: need 0 < a < b < 1");
    if (!(epsilon > 0 && epsilon < 1)) throw std::invalid_argument("epsilon must lie in (0, 1)");
    RecipSumReport r;
    r.x = x;
    r.a = a;
    r.b = b;
    r.epsilon = epsilon;
    r.threshold = (1.0 - epsilon) * loglog(static_cast<double>(x));
    const double fx = static_cast<double>(x);
    r.lo = ceil_real(std::pow(fx, a));
    const u64 top = ceil_real(std::pow(fx, b));
    r.hi = top == 0 ? 0 : top - 1;
    if (r.hi > table.limit()) {
        throw std::out_of_range("admissible_recip_sum: x^b needs table limit >= " + std::to_string(r.hi));
    }
    for (const auto& e : table.entries_up_to(r.hi)) {
        if (e.p < r.lo) continue;
        const double inv = 1.0 / static_cast<double>(e.p);
        r.full_sum += inv;
        if (sieve.omega(e.np) >= r.threshold) {
            r.admissible_sum += inv;
        } else {
            r.inadmissible_sum += inv;
        }
    }
    for (u64 p : table.bad_primes()) {
        if (p >= r.lo && p <= r.hi) r.bad_prime_sum += 1.0 / static_cast<double>(p);
    }
    r.difference = r.full_sum - r.admissible_sum;
    r.empty = r.full_sum == 0;
    return r;
}

/// Number of good p <= x with d | N_p; d must be squarefree.
inline u64 pi_e(const NpTable& table, u64 x, u64 d) {
    if (d == 0 || !is_squarefree(d)) throw std::invalid_argument("pi_e: d = " + std::to_string(d) + " is not squarefree");
    if (x > table.limit()) throw std::out_of_range("pi_e: x above table limit");
    u64 c = 0;
    for (const auto& e : table.entries_up_to(x)) c += e.np % d == 0;
    return c;
}

}  // namespace ellnum
