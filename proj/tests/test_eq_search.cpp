#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "reference_values.hpp"
#include "support.hpp"

using namespace ellnum;

namespace {

/// All k-sets (ascending primes) of distinct good primes p <= bound with N-product <= x,
/// grouped by product. Plain nested loops over the table; no pruning beyond the bound.
std::map<u64, std::vector<PrimeSet>> brute_products(const NpTable& t, unsigned k, u64 x) {
    std::map<u64, std::vector<PrimeSet>> out;
    const auto e = t.entries();
    if (k == 1) {
        for (const auto& a : e) {
            if (a.np <= x) out[a.np].push_back({a.p});
        }
    } else if (k == 2) {
        for (std::size_t i = 0; i < e.size(); ++i) {
            for (std::size_t j = i + 1; j < e.size(); ++j) {
                if (e[i].np * e[j].np <= x) out[e[i].np * e[j].np].push_back({e[i].p, e[j].p});
            }
        }
    } else if (k == 3) {
        for (std::size_t i = 0; i < e.size(); ++i) {
            for (std::size_t j = i + 1; j < e.size(); ++j) {
                if (e[i].np * e[j].np > x) continue;
                for (std::size_t l = j + 1; l < e.size(); ++l) {
                    const u64 v = e[i].np * e[j].np * e[l].np;
                    if (v <= x) out[v].push_back({e[i].p, e[j].p, e[l].p});
                }
            }
        }
    }
    for (auto& [n, sets] : out) std::sort(sets.begin(), sets.end());
    return out;
}

bool contains(const std::vector<PrimeSet>& v, const PrimeSet& s) { return std::find(v.begin(), v.end(), s) != v.end(); }

const CensusEntry* find_entry(const GkCensus& c, u64 n) {
    auto it = std::lower_bound(c.entries.begin(), c.entries.end(), n,
                               [](const CensusEntry& e, u64 v) { return e.n < v; });
    return it != c.entries.end() && it->n == n ? &*it : nullptr;
}

/// True iff m splits into `parts` factors, each with omega > thr.
bool splits(u64 m, unsigned parts, double thr) {
    if (parts == 1) return oracle::omega(m) > thr;
    for (u64 d = 2; d <= m; ++d) {
        if (m % d == 0 && oracle::omega(d) > thr && splits(m / d, parts - 1, thr)) return true;
    }
    return false;
}

}  // namespace

TEST(EqSearch, HassePrimeWindowExamples) {
    EXPECT_EQ(hasse_prime_window(1057), (PrimeWindow{993, 1123}));
    EXPECT_EQ(hasse_prime_window(1), (PrimeWindow{1, 3}));
    const auto w = hasse_prime_window(624);
    for (u64 p : {593ULL, 619ULL, 661ULL}) {
        EXPECT_GE(p, w.lo);
        EXPECT_LE(p, w.hi);
    }
}

TEST(EqSearch, HassePrimeWindowIsExact) {
    for (u64 n = 1; n <= 20000; ++n) {
        const auto w = hasse_prime_window(n);
        // Every p allowed by (n - p - 1)^2 <= 4p lies in the window; every prime in it is allowed.
        for (u64 p = (n > 400 ? n - 400 : 0); p <= n + 400; ++p) {
            const long long t = static_cast<long long>(n) - static_cast<long long>(p) - 1;
            const bool ok = static_cast<u64>(t * t) <= 4 * p;
            if (ok && oracle::is_prime(p)) ASSERT_TRUE(p >= w.lo && p <= w.hi) << n << " " << p;
            if (p >= w.lo && p <= w.hi) ASSERT_TRUE(ok) << n << " " << p;
        }
    }
}

TEST(EqSearch, G1Examples) {
    const auto r = g1(fixture::e37(), 1057);
    EXPECT_EQ(r.primes, (std::vector<u64>{1009, 1063}));
    EXPECT_EQ(r.multiplicity(), 2u);
    EXPECT_EQ(g1(fixture::eb(), 624).primes, (std::vector<u64>{593, 619, 661}));
    EXPECT_EQ(g1(fixture::e37(), 2).multiplicity(), 0u);
}

TEST(EqSearch, G1ExactAgainstTableScan) {
    const auto t = fixture::table(fixture::e37(), 5000);
    std::map<u64, std::vector<u64>> by_n;
    for (const auto& e : t->entries()) by_n[e.np].push_back(e.p);
    const NpOracle from_table(t);
    const NpOracle direct(fixture::e37());
    for (u64 n = 1; n <= 2000; ++n) {
        const auto want = by_n.count(n) ? by_n[n] : std::vector<u64>{};
        ASSERT_EQ(g1(from_table, n).primes, want) << n;
        if (n % 97 == 0) ASSERT_EQ(g1(direct, n).primes, want) << n;
    }
}

TEST(EqSearch, FindProgressionsExamples) {
    const auto recs = find_progressions(fixture::eb(), 10262, 11441, 2);
    std::map<u64, std::size_t> got;
    for (const auto& r : recs) got[r.n] = r.multiplicity();
    for (const auto& row : reference::kMultiplicityRows) {
        ASSERT_TRUE(got.count(row.n)) << row.n;
        EXPECT_EQ(got[row.n], row.g1) << row.n;
    }
    const auto r3 = find_progressions(fixture::eb(), 600, 700, 3);
    EXPECT_TRUE(std::any_of(r3.begin(), r3.end(), [](const ProgressionRecord& r) { return r.n == 624; }));
    EXPECT_TRUE(find_progressions(fixture::e37(), 5, 4, 2).empty());
}

TEST(EqSearch, FindProgressionsMatchesGrouping) {
    const auto t = fixture::table(fixture::eb(), 5000);
    std::map<u64, std::vector<u64>> by_n;
    for (const auto& e : t->entries()) by_n[e.np].push_back(e.p);
    const auto recs = find_progressions(t, 1, 4800, 2);
    std::vector<ProgressionRecord> want;
    for (const auto& [n, ps] : by_n) {
        if (n <= 4800 && ps.size() >= 2) want.push_back({n, ps});
    }
    EXPECT_EQ(recs, want);
    EXPECT_THROW(find_progressions(t, 1, 5000, 2), std::out_of_range);
}

TEST(EqSearch, GkSolutionsExamples) {
    const auto s3360 = gk_solutions(fixture::e37(), 3, 3360);
    EXPECT_TRUE(contains(s3360.solutions, {2, 13, 43}));
    EXPECT_TRUE(contains(s3360.solutions, {3, 5, 67}));
    EXPECT_GE(s3360.count(), 2u);
    const auto s25200 = gk_solutions(fixture::e37(), 3, 25200);
    EXPECT_TRUE(contains(s25200.solutions, {5, 43, 73}));
    EXPECT_TRUE(contains(s25200.solutions, {17, 19, 61}));
    const auto s1 = gk_solutions(fixture::e37(), 1, 1057);
    EXPECT_EQ(s1.count(), 2u);
    EXPECT_EQ(s1.count(), g1(fixture::e37(), 1057).multiplicity());
    EXPECT_EQ(s3360.ordered_count(), 6 * s3360.count());
    EXPECT_GT(s3360.search_bound, 0u);
}

TEST(EqSearch, GkSolutionsMatchBruteForce) {
    const auto t = fixture::table(fixture::e37(), 5000);
    const NpOracle o(t);
    for (unsigned k : {1u, 2u, 3u}) {
        const auto brute = brute_products(*t, k, 4000);
        for (u64 n = 1; n <= 4000; ++n) {
            const auto sol = gk_solutions(o, k, n);
            const auto it = brute.find(n);
            ASSERT_EQ(sol.solutions, it == brute.end() ? std::vector<PrimeSet>{} : it->second) << "k=" << k << " n=" << n;
            for (const auto& s : sol.solutions) {
                ASSERT_TRUE(std::is_sorted(s.begin(), s.end()));
                ASSERT_EQ(std::set<u64>(s.begin(), s.end()).size(), k);
                ASSERT_LE(s.back(), sol.search_bound);
            }
        }
    }
}

TEST(EqSearch, GkSolutionsPermutationInvariant) {
    const auto sol = gk_solutions(fixture::e37(), 3, 25200);
    for (const auto& s : sol.solutions) {
        PrimeSet r(s.rbegin(), s.rend());
        std::sort(r.begin(), r.end());
        EXPECT_TRUE(contains(sol.solutions, r));
    }
    EXPECT_EQ(std::set<PrimeSet>(sol.solutions.begin(), sol.solutions.end()).size(), sol.count());
}

TEST(EqSearch, CensusMatchesGkSolutionsK2) {
    const auto plan = plan_census(fixture::e37(), 2, 10000);
    const auto census = gk_census(fixture::table(fixture::e37(), plan.prime_bound), 2, 10000);
    const NpOracle o(fixture::e37());
    ASSERT_FALSE(census.entries.empty());
    for (const auto& e : census.entries) {
        ASSERT_EQ(e.count, gk_solutions(o, 2, e.n).count()) << e.n;
    }
    // Independent double loop: N >= 5 for every good prime, so factors are <= 2000 and p <= 2100.
    const auto brute = brute_products(*fixture::table(fixture::e37(), 3000), 2, 10000);
    ASSERT_EQ(census.entries.size(), brute.size());
    for (const auto& e : census.entries) {
        const auto& sets = brute.at(e.n);
        ASSERT_EQ(e.count, sets.size());
        const std::size_t w = std::min<std::size_t>(16, sets.size());
        ASSERT_EQ(e.witnesses, std::vector<PrimeSet>(sets.begin(), sets.begin() + static_cast<std::ptrdiff_t>(w)));
    }
}

TEST(EqSearch, CensusSelfConsistentK3) {
    const auto census = gk_census(fixture::e37(), 3, 3000);
    const auto t = fixture::table(fixture::e37(), 1000);
    const auto brute = brute_products(*t, 3, 3000);
    ASSERT_EQ(census.entries.size(), brute.size());
    for (const auto& e : census.entries) {
        ASSERT_LE(e.n, 3000u);
        ASSERT_EQ(e.count, brute.at(e.n).size());
        for (const auto& s : e.witnesses) {
            u64 prod = 1;
            for (u64 p : s) prod *= *t->np(p);
            ASSERT_EQ(prod, e.n);
        }
    }
}

TEST(EqSearch, CensusPruneModesAgree) {
    for (unsigned k : {2u, 3u}) {
        CensusOptions both, hasse, linear;
        hasse.prune = PruneBound::hasse;
        linear.prune = PruneBound::linear;
        const auto pl = plan_census(fixture::e37(), k, 10000, PruneBound::linear);
        const auto big = fixture::table(fixture::e37(), pl.prime_bound);
        const auto a = gk_census(big, k, 10000, both);
        const auto b = gk_census(big, k, 10000, hasse);
        const auto c = gk_census(big, k, 10000, linear);
        EXPECT_EQ(a.entries, b.entries) << k;
        EXPECT_EQ(a.entries, c.entries) << k;
    }
}

TEST(EqSearch, CensusDeterministicAcrossWorkersAndSegments) {
    const auto plan = plan_census(fixture::e37(), 3, 200000);
    const auto t = fixture::table(fixture::e37(), plan.prime_bound);
    const auto ref = gk_census(t, 3, 200000);
    CensusOptions o;
    o.workers = 4;
    o.segment_span = 777;
    const auto other = gk_census(t, 3, 200000, o);
    EXPECT_EQ(ref.entries, other.entries);
    EXPECT_EQ(ref.max_count, other.max_count);
    EXPECT_EQ(ref.argmax, other.argmax);
    CensusOptions dense;
    dense.collect_witnesses = false;
    dense.workers = 3;
    dense.segment_span = 5000;
    std::vector<std::pair<u64, u64>> a, b;
    for (const auto& e : ref.entries) a.push_back({e.n, e.count});
    census_scan(t, 3, 200000, dense, [&](const CensusEntry& e) { b.push_back({e.n, e.count}); });
    EXPECT_EQ(a, b);
}

TEST(EqSearch, CensusEmptyAndBudget) {
    const auto empty = gk_census(fixture::e37(), 3, 0);
    EXPECT_TRUE(empty.entries.empty());
    EXPECT_EQ(empty.max_count, 0u);
    const auto t = fixture::table(fixture::e37(), 3000);
    CensusOptions tight;
    tight.max_entries = 10;
    try {
        gk_census(t, 2, 10000, tight);
        FAIL() << "expected BudgetExceededError";
    } catch (const BudgetExceededError& e) {
        EXPECT_GT(e.completed(), 0u);
        EXPECT_LT(e.completed(), 10000u);
    }
}

TEST(EqSearch, CensusTableTooSmall) {
    EXPECT_THROW(gk_census(fixture::table(fixture::e37(), 100), 2, 10000), std::out_of_range);
}

TEST(EqSearch, CensusWitnessAt3017520) {
    const auto plan = plan_census(fixture::e37(), 3, 4000000);
    const auto census = gk_census(fixture::table(fixture::e37(), plan.prime_bound), 3, 4000000);
    const auto* e = find_entry(census, 3017520);
    ASSERT_NE(e, nullptr);
    EXPECT_GE(e->count, 2u);
    EXPECT_TRUE(contains(gk_solutions(fixture::e37(), 3, 3017520).solutions, {101, 107, 251}));
    EXPECT_TRUE(contains(gk_solutions(fixture::e37(), 3, 3017520).solutions, {113, 127, 167}));
}

TEST(EqSearch, CensusWitnessAt3107520AsPublished) {
    const auto plan = plan_census(fixture::e37(), 3, 4000000);
    const auto census = gk_census(fixture::table(fixture::e37(), plan.prime_bound), 3, 4000000);
    const auto* e = find_entry(census, 3107520);
    ASSERT_NE(e, nullptr);
    EXPECT_GE(e->count, 2u);
    const auto all = gk_solutions(fixture::e37(), 3, 3107520).solutions;
    EXPECT_TRUE(contains(all, {101, 107, 251})) << "published set does not multiply to 3107520";
    EXPECT_TRUE(contains(all, {113, 127, 167})) << "published set does not multiply to 3107520";
}

TEST(EqSearch, BkCountExamples) {
    const auto t = fixture::table(fixture::e37(), 100000);
    const auto r1 = bk_count(*t, 1, 10000, 0.008);
    EXPECT_LE(r1.count, 1229u);
    EXPECT_THROW(bk_count(*t, 2, 15, 0.008), std::domain_error);
}

TEST(EqSearch, BkCountDensityFloorK3) {
    const auto r3 = bk_count(*fixture::table(fixture::e37(), 100000), 3, 100000, 0.008);
    EXPECT_GT(r3.density_ratio, 0.05) << "count " << r3.count << ", threshold " << r3.threshold;
}

TEST(EqSearch, BkCountMatchesDoubleLoop) {
    const auto t = fixture::table(fixture::e37(), 100000);
    for (u64 x : {100ULL, 1000ULL, 10000ULL}) {
        const double thr = (1.0 - 0.008) * std::log(std::log(static_cast<double>(x)));
        std::vector<u64> adm;
        for (const auto& e : t->entries_up_to(x)) {
            if (oracle::omega(e.np) >= thr) adm.push_back(e.p);
        }
        u64 pairs = 0, singles = 0;
        for (std::size_t i = 0; i < adm.size(); ++i) {
            singles += adm[i] <= x;
            for (std::size_t j = i + 1; j < adm.size(); ++j) pairs += adm[i] * adm[j] <= x;
        }
        EXPECT_EQ(bk_count(*t, 2, x, 0.008).count, pairs) << x;
        EXPECT_EQ(bk_count(*t, 1, x, 0.008).count, singles) << x;
    }
}

TEST(EqSearch, BkCountRestrictedRange) {
    const auto t = fixture::table(fixture::e37(), 100000);
    const u64 x = 100000000;
    const auto r = bk_count(*t, 1, x, 0.008, PrimeRange{0.125, 0.25});
    EXPECT_EQ(r.prime_lo, 10u);
    EXPECT_EQ(r.prime_hi, 99u);
    const double thr = (1.0 - 0.008) * std::log(std::log(1e8));
    u64 want = 0;
    for (const auto& e : t->entries_up_to(99)) want += e.p >= 10 && oracle::omega(e.np) >= thr;
    EXPECT_EQ(r.count, want);
}

TEST(EqSearch, DenseProductCountExamples) {
    EXPECT_THROW(dense_product_count(7, 3, 0.008), std::domain_error);
    // loglog 16 ~ 1.02, so each factor needs omega >= 2, i.e. >= 6; 6^3 > 16.
    EXPECT_EQ(dense_product_count(16, 3, 0.008), 0u);
    for (u64 x = 16; x <= 3000; x += 37) EXPECT_LE(dense_product_count(x, 3, 0.008), x);
    EXPECT_LE(dense_product_count(10000, 3, 0.008), 10000u);
    EXPECT_THROW(dense_product_count(2000000, 3, 0.008), std::invalid_argument);
}

TEST(EqSearch, DenseProductCountMonotoneInX) {
    u64 prev = 0;
    for (u64 x = 16; x <= 10000; x += 37) {
        const u64 c = dense_product_count(x, 3, 0.008);
        EXPECT_GE(c, prev) << "drops at x = " << x << ", threshold " << admissibility_threshold(x, 0.008);
        prev = c;
    }
}

TEST(EqSearch, DenseProductCountMatchesDivisorRecursion) {
    for (unsigned k : {2u, 3u}) {
        for (u64 x = 16; x <= 200; ++x) {
            const double thr = (1.0 - 0.008) * std::log(std::log(static_cast<double>(x)));
            u64 want = 0;
            for (u64 m = 2; m <= x; ++m) want += splits(m, k, thr);
            ASSERT_EQ(dense_product_count(x, k, 0.008), want) << "x=" << x << " k=" << k;
        }
    }
    // Looser epsilon lowers the threshold.
    for (u64 x : {500ULL, 1000ULL}) {
        const double thr = (1.0 - 0.5) * std::log(std::log(static_cast<double>(x)));
        u64 want = 0;
        for (u64 m = 2; m <= x; ++m) want += splits(m, 2, thr);
        EXPECT_EQ(dense_product_count(x, 2, 0.5), want) << x;
    }
}

TEST(EqSearch, DefaultEpsilon) {
    EXPECT_DOUBLE_EQ(default_epsilon(3), 0.008);
    EXPECT_LT(default_epsilon(3), 2.0 / (20.0 * 12.0));
    EXPECT_DOUBLE_EQ(default_epsilon(4), 0.9 * 2.0 / (20.0 * 20.0));
    EXPECT_DOUBLE_EQ(default_epsilon(2), 0.9 * 2.0 / (20.0 * 6.0));
}
