// Solving N_{p1} * ... * N_{pk} = n over pairwise distinct good primes.
//
// Every search here is finite because of the Hasse bound: N_p = n forces p
// into an explicit window around n, so the candidate primes for any product
// are known before enumeration starts.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <thread>
#include <unordered_map>
#include <vector>

#include "ellnum/arith.hpp"
#include "ellnum/np_table.hpp"

namespace ellnum {

/// Answers N_p queries from a table where it covers p, by direct counting elsewhere.
class NpOracle {
public:
    explicit NpOracle(CurveModel model, CountOptions opt = {}) : model_(std::move(model)), opt_(opt) {}

    explicit NpOracle(std::shared_ptr<const NpTable> table, CountOptions opt = {})
        : model_(table->curve()), opt_(opt), table_(std::move(table)) {}

    const CurveModel& curve() const noexcept { return model_; }
    const CountOptions& count_options() const noexcept { return opt_; }

    /// nullopt for bad primes; p must be prime.
    std::optional<u64> np(u64 p) const {
        if (table_ && p <= table_->limit()) return table_->np(p);
        if (!is_good_prime(model_, p)) return std::nullopt;
        return count_points(ReducedCurve::reduce(model_, p), opt_);
    }

private:
    CurveModel model_;
    CountOptions opt_;
    std::shared_ptr<const NpTable> table_;
};

struct PrimeWindow {
    u64 lo;
    u64 hi;

    friend bool operator==(const PrimeWindow&, const PrimeWindow&) = default;
};

/// Integers p that can satisfy N_p = n: (sqrt(p) - 1)^2 <= n <= (sqrt(p) + 1)^2.
/// When n is a perfect square the closed endpoints are the squares
/// (sqrt(n) -/+ 1)^2, which are never prime, so they are dropped.
inline PrimeWindow hasse_prime_window(u64 n) {
    const u64 r = isqrt(4 * n);
    PrimeWindow w{n + 1 - r, n + 1 + r};
    if (r * r == 4 * n) {
        ++w.lo;
        --w.hi;
    }
    return w;
}

struct ProgressionRecord {
    u64 n = 0;
    std::vector<u64> primes;

    std::size_t multiplicity() const noexcept { return primes.size(); }
    friend bool operator==(const ProgressionRecord&, const ProgressionRecord&) = default;
};

/// G_1(E, n) with its witnesses: every good prime in the Hasse window is tested.
inline ProgressionRecord g1(const NpOracle& oracle, u64 n) {
    ProgressionRecord rec{n, {}};
    if (n == 0) return rec;
    const PrimeWindow w = hasse_prime_window(n);
    for (u64 p : primes_in_range(w.lo, w.hi)) {
        const auto np = oracle.np(p);
        if (np && *np == n) rec.primes.push_back(p);
    }
    return rec;
}

inline ProgressionRecord g1(const CurveModel& model, u64 n, const CountOptions& opt = {}) {
    return g1(NpOracle(model, opt), n);
}

/// Every n in [n_lo, n_hi] with G_1(n) >= min_multiplicity. The table must
/// reach the Hasse window of n_hi.
inline std::vector<ProgressionRecord> find_progressions(const std::shared_ptr<const NpTable>& table, u64 n_lo,
                                                        u64 n_hi, std::size_t min_multiplicity) {
    std::vector<ProgressionRecord> out;
    if (min_multiplicity == 0) throw std::invalid_argument("find_progressions: min_multiplicity must be >= 1");
    if (n_lo > n_hi || n_hi == 0) return out;
    n_lo = std::max<u64>(n_lo, 1);
    const u64 need = hasse_prime_window(n_hi).hi;
    if (table->limit() < need) {
        throw std::out_of_range("find_progressions: table limit " + std::to_string(table->limit()) + " below " +
                                std::to_string(need));
    }
    std::map<u64, std::size_t> groups;
    for (const auto& e : table->entries()) {
        if (e.np >= n_lo && e.np <= n_hi) ++groups[e.np];
    }
    const NpOracle oracle(table);
    for (const auto& [n, size] : groups) {
        if (size < min_multiplicity) continue;
        ProgressionRecord rec = g1(oracle, n);
        if (rec.multiplicity() >= min_multiplicity) out.push_back(std::move(rec));
    }
    return out;
}

inline std::vector<ProgressionRecord> find_progressions(const CurveModel& model, u64 n_lo, u64 n_hi,
                                                        std::size_t min_multiplicity, const BuildOptions& opt = {}) {
    if (n_lo > n_hi || n_hi == 0) return {};
    auto table = std::make_shared<const NpTable>(build_table(model, hasse_prime_window(n_hi).hi, opt));
    return find_progressions(table, n_lo, n_hi, min_multiplicity);
}

inline u64 factorial(unsigned k) {
    u64 f = 1;
    for (unsigned i = 2; i <= k; ++i) f *= i;
    return f;
}

/// A k-set is stored as its primes in ascending order.
using PrimeSet = std::vector<u64>;

struct GkSolution {
    u64 n = 0;
    unsigned k = 0;
    std::vector<PrimeSet> solutions;  // lexicographically sorted
    /// Largest prime that could take part, fixed before enumeration.
    u64 search_bound = 0;

    std::size_t count() const noexcept { return solutions.size(); }
    /// Count of ordered k-tuples: each unordered set has k! orderings.
    u64 ordered_count() const { return static_cast<u64>(solutions.size()) * factorial(k); }
};

namespace detail {

struct Factor {
    u64 np;
    u64 p;
};

/// b^e <= limit, overflow-safe.
inline bool power_fits(u64 partial, u64 b, unsigned e, u64 limit) {
    u128 v = partial;
    for (unsigned i = 0; i < e; ++i) {
        v *= b;
        if (v > limit) return false;
    }
    return true;
}

}  // namespace detail

/// All unordered k-sets of distinct good primes whose N-product is exactly n.
inline GkSolution gk_solutions(const NpOracle& oracle, unsigned k, u64 n) {
    if (k == 0) throw std::invalid_argument("gk_solutions: k must be >= 1");
    if (n == 0) throw std::invalid_argument("gk_solutions: n must be >= 1");
    GkSolution sol{n, k, {}, 0};

    // Each factor N_p divides n, and p lies in the Hasse window of that divisor.
    std::vector<u64> candidates;
    for (u64 d : divisors_of(factorize_trial(n))) {
        const PrimeWindow w = hasse_prime_window(d);
        sol.search_bound = std::max(sol.search_bound, w.hi);
        const auto ps = primes_in_range(w.lo, w.hi);
        candidates.insert(candidates.end(), ps.begin(), ps.end());
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::vector<detail::Factor> factors;
    for (u64 p : candidates) {
        const auto np = oracle.np(p);
        if (np && n % *np == 0) factors.push_back({*np, p});
    }
    std::sort(factors.begin(), factors.end(),
              [](const detail::Factor& a, const detail::Factor& b) { return a.np != b.np ? a.np < b.np : a.p < b.p; });

    PrimeSet chosen;
    std::function<void(std::size_t, u64)> dfs = [&](std::size_t start, u64 remaining) {
        const unsigned left = k - static_cast<unsigned>(chosen.size());
        if (left == 0) {
            if (remaining == 1) {
                PrimeSet s = chosen;
                std::sort(s.begin(), s.end());
                sol.solutions.push_back(std::move(s));
            }
            return;
        }
        for (std::size_t i = start; i < factors.size(); ++i) {
            const u64 v = factors[i].np;
            if (!detail::power_fits(1, v, left, remaining)) break;
            if (remaining % v != 0) continue;
            chosen.push_back(factors[i].p);
            dfs(i + 1, remaining / v);
            chosen.pop_back();
        }
    };
    dfs(0, n);
    std::sort(sol.solutions.begin(), sol.solutions.end());
    return sol;
}

inline GkSolution gk_solutions(const CurveModel& model, unsigned k, u64 n, const CountOptions& opt = {}) {
    return gk_solutions(NpOracle(model, opt), k, n);
}

// ---------------------------------------------------------------------------
// Census: n -> G_k(E, n) for every attained n <= x.

/// Which a-priori bound limits the primes entering a census.
/// hasse: p in the Hasse window of the largest admissible factor value M.
/// linear: p <= 100 M, from N_p >= p / 100.
enum class PruneBound { hasse, linear, both };

struct CensusOptions {
    unsigned workers = 1;
    /// Width of each n-segment processed in one pass.
    u64 segment_span = u64{1} << 24;
    bool collect_witnesses = true;
    std::size_t max_witnesses = 16;
    /// In-memory census refuses to hold more entries than this.
    std::size_t max_entries = 50000000;
    PruneBound prune = PruneBound::both;
};

struct CensusEntry {
    u64 n = 0;
    u64 count = 0;
    /// Lexicographically smallest sets, at most max_witnesses of them.
    std::vector<PrimeSet> witnesses;

    friend bool operator==(const CensusEntry&, const CensusEntry&) = default;
};

struct CensusPlan {
    unsigned k = 0;
    u64 x = 0;
    /// Largest value a single factor N_p can take.
    u64 max_factor = 0;
    /// Primes above this cannot take part.
    u64 prime_bound = 0;
};

struct GkCensus {
    CensusPlan plan;
    std::vector<CensusEntry> entries;  // ascending n
    u64 max_count = 0;
    u64 argmax = 0;  // smallest n attaining max_count
};

/// Fixes the search space: the k-1 smallest N values over all good primes give
/// the largest possible single factor; primes beyond its window cannot occur.
inline CensusPlan plan_census(const CurveModel& model, unsigned k, u64 x, PruneBound prune = PruneBound::both,
                              const CountOptions& opt = {}) {
    if (k == 0) throw std::invalid_argument("census: k must be >= 1");
    CensusPlan plan{k, x, 0, 0};
    if (x == 0) return plan;
    std::vector<u64> smallest;  // k-1 smallest N values seen, ascending
    if (k > 1) {
        for (u64 p = 2;; ++p) {
            if (!is_prime_u64(p)) continue;
            if (smallest.size() == k - 1 && hasse_interval(p).lo >= smallest.back()) break;
            if (!is_good_prime(model, p)) continue;
            const u64 v = count_points(model, p, opt);
            smallest.insert(std::upper_bound(smallest.begin(), smallest.end(), v), v);
            if (smallest.size() > k - 1) smallest.pop_back();
        }
    }
    u128 prod = 1;
    for (u64 v : smallest) prod *= v;
    plan.max_factor = prod > x ? 0 : static_cast<u64>(x / prod);
    if (plan.max_factor == 0) return plan;
    const u64 hasse_hi = hasse_prime_window(plan.max_factor).hi;
    const u64 linear_hi = plan.max_factor > (~u64{0}) / 100 ? ~u64{0} : 100 * plan.max_factor;
    switch (prune) {
        case PruneBound::hasse: plan.prime_bound = hasse_hi; break;
        case PruneBound::linear: plan.prime_bound = linear_hi; break;
        case PruneBound::both: plan.prime_bound = std::min(hasse_hi, linear_hi); break;
    }
    return plan;
}

namespace detail {

inline void insert_witness(std::vector<PrimeSet>& ws, PrimeSet s, std::size_t cap) {
    if (cap == 0) return;
    auto it = std::lower_bound(ws.begin(), ws.end(), s);
    if (ws.size() >= cap && it == ws.end()) return;
    ws.insert(it, std::move(s));
    if (ws.size() > cap) ws.pop_back();
}

/// Visits every k-set (by index into `f`, sorted by N) with N-product in [lo, hi],
/// restricted to first indices i with i % stride == offset.
template <class Emit>
void enumerate_products(const std::vector<Factor>& f, unsigned k, u64 lo, u64 hi, std::size_t offset,
                        std::size_t stride, Emit&& emit) {
    std::vector<std::size_t> idx;
    idx.reserve(k);
    auto rec = [&](auto& self, std::size_t start, u64 partial) -> void {
        const unsigned left = k - static_cast<unsigned>(idx.size());
        if (left == 1) {
            const u64 need = (lo + partial - 1) / partial;
            const u64 cap = hi / partial;
            auto it = std::lower_bound(f.begin() + static_cast<std::ptrdiff_t>(start), f.end(), need,
                                       [](const Factor& a, u64 v) { return a.np < v; });
            for (; it != f.end() && it->np <= cap; ++it) {
                if (idx.empty() && static_cast<std::size_t>(it - f.begin()) % stride != offset) continue;
                idx.push_back(static_cast<std::size_t>(it - f.begin()));
                emit(partial * it->np, idx);
                idx.pop_back();
            }
            return;
        }
        for (std::size_t i = start; i < f.size(); ++i) {
            if (!power_fits(partial, f[i].np, left, hi)) break;
            if (idx.empty() && i % stride != offset) continue;
            idx.push_back(i);
            self(self, i + 1, partial * f[i].np);
            idx.pop_back();
        }
    };
    rec(rec, 0, 1);
}

}  // namespace detail

/// Streams the census in ascending n, one segment at a time. The table must
/// reach plan.prime_bound.
inline CensusPlan census_scan(const std::shared_ptr<const NpTable>& table, unsigned k, u64 x,
                              const CensusOptions& opt, const std::function<void(const CensusEntry&)>& sink) {
    const CensusPlan plan = plan_census(table->curve(), k, x, opt.prune);
    if (plan.max_factor == 0) return plan;
    if (table->limit() < plan.prime_bound) {
        throw std::out_of_range("census: table limit " + std::to_string(table->limit()) + " below prime bound " +
                                std::to_string(plan.prime_bound));
    }
    std::vector<detail::Factor> f;
    for (const auto& e : table->entries_up_to(plan.prime_bound)) {
        if (e.np <= plan.max_factor) f.push_back({e.np, e.p});
    }
    std::sort(f.begin(), f.end(),
              [](const detail::Factor& a, const detail::Factor& b) { return a.np != b.np ? a.np < b.np : a.p < b.p; });

    const unsigned workers = std::max(1u, opt.workers);
    const u64 span = std::max<u64>(opt.segment_span, 1);
    auto to_set = [&f](const std::vector<std::size_t>& idx) {
        PrimeSet s;
        for (std::size_t i : idx) s.push_back(f[i].p);
        std::sort(s.begin(), s.end());
        return s;
    };

    for (u64 lo = 1; lo <= x; lo = (x - lo < span) ? x + 1 : lo + span) {
        const u64 hi = (x - lo < span) ? x : lo + span - 1;
        std::vector<CensusEntry> seg;
        if (opt.collect_witnesses) {
            using Map = std::unordered_map<u64, CensusEntry>;
            std::vector<Map> maps(workers);
            auto run = [&](std::size_t w) {
                detail::enumerate_products(f, k, lo, hi, w, workers, [&](u64 n, const std::vector<std::size_t>& idx) {
                    CensusEntry& e = maps[w][n];
                    e.n = n;
                    ++e.count;
                    detail::insert_witness(e.witnesses, to_set(idx), opt.max_witnesses);
                });
            };
            if (workers == 1) {
                run(0);
            } else {
                std::vector<std::jthread> pool;
                for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
            }
            Map& merged = maps[0];
            for (std::size_t w = 1; w < workers; ++w) {
                for (auto& [n, e] : maps[w]) {
                    CensusEntry& m = merged[n];
                    m.n = n;
                    m.count += e.count;
                    for (auto& s : e.witnesses) detail::insert_witness(m.witnesses, std::move(s), opt.max_witnesses);
                }
            }
            seg.reserve(merged.size());
            for (auto& [n, e] : merged) seg.push_back(std::move(e));
            std::sort(seg.begin(), seg.end(), [](const CensusEntry& a, const CensusEntry& b) { return a.n < b.n; });
        } else {
            std::vector<std::uint32_t> counts(hi - lo + 1, 0);
            auto run = [&](std::size_t w) {
                detail::enumerate_products(f, k, lo, hi, w, workers, [&](u64 n, const std::vector<std::size_t>&) {
                    std::atomic_ref<std::uint32_t>(counts[n - lo]).fetch_add(1, std::memory_order_relaxed);
                });
            };
            if (workers == 1) {
                run(0);
            } else {
                std::vector<std::jthread> pool;
                for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
            }
            for (u64 i = 0; i < counts.size(); ++i) {
                if (counts[i] != 0) seg.push_back({lo + i, counts[i], {}});
            }
        }
        for (const auto& e : seg) sink(e);
    }
    return plan;
}

/// In-memory census. Throws BudgetExceededError (with the largest completed
/// bound) once more than opt.max_entries distinct n have been found.
inline GkCensus gk_census(const std::shared_ptr<const NpTable>& table, unsigned k, u64 x,
                          const CensusOptions& opt = {}) {
    GkCensus out;
    u64 completed = 0;
    out.plan = census_scan(table, k, x, opt, [&](const CensusEntry& e) {
        if (out.entries.size() >= opt.max_entries) {
            throw BudgetExceededError("census: entry budget of " + std::to_string(opt.max_entries) + " exceeded",
                                      completed);
        }
        completed = e.n;
        if (e.count > out.max_count) {
            out.max_count = e.count;
            out.argmax = e.n;
        }
        out.entries.push_back(e);
    });
    if (out.plan.k == 0) out.plan = {k, x, 0, 0};
    return out;
}

inline GkCensus gk_census(const CurveModel& model, unsigned k, u64 x, const CensusOptions& opt = {},
                          const BuildOptions& build = {}) {
    const CensusPlan plan = plan_census(model, k, x, opt.prune, build.count);
    auto table = std::make_shared<const NpTable>(build_table(model, plan.prime_bound, build));
    return gk_census(table, k, x, opt);
}

// ---------------------------------------------------------------------------
// Admissible products B_k(x) and dense products D(x).

inline double admissibility_threshold(double x, double epsilon) {
    if (!(epsilon > 0 && epsilon < 1)) throw std::invalid_argument("epsilon must lie in (0, 1)");
    require_stats_scale(x);
    return (1.0 - epsilon) * loglog(x);
}

/// 0.9 * 2 / (20 (k^2 + k)), strictly inside the bound 2 / (20 (k^2 + k)); k = 3 uses 0.008.
inline double default_epsilon(unsigned k) {
    if (k == 3) return 0.008;
    return 0.9 * 2.0 / (20.0 * (static_cast<double>(k) * k + k));
}

struct PrimeRange {
    double a;
    double b;
};

struct BkReport {
    u64 x = 0;
    unsigned k = 0;
    double epsilon = 0;
    double threshold = 0;
    u64 count = 0;
    double density_ratio = 0;
    /// Inclusive prime range actually used.
    u64 prime_lo = 2;
    u64 prime_hi = 0;
};

/// Primes that can occur in a product of k distinct primes <= x (or in the
/// requested [x^a, x^b) range).
inline PrimeWindow bk_prime_range(unsigned k, u64 x, std::optional<PrimeRange> range) {
    u64 small = 1;
    const auto ps = primes_up_to(64);
    for (unsigned i = 0; i + 1 < k && i < ps.size(); ++i) small *= ps[i];
    PrimeWindow w{2, x / small};
    if (range) {
        if (!(range->a > 0 && range->a < range->b && range->b < 1)) {
            throw std::invalid_argument("bk_count: need 0 < a < b < 1");
        }
        w.lo = std::max<u64>(2, ceil_real(std::pow(static_cast<double>(x), range->a)));
        const u64 top = ceil_real(std::pow(static_cast<double>(x), range->b));
        w.hi = std::min(w.hi, top == 0 ? 0 : top - 1);
    }
    return w;
}

/// |B_k(x)|: squarefree products of k distinct admissible primes, each admissible
/// meaning omega(N_p) >= (1 - epsilon) loglog x.
inline BkReport bk_count(const NpTable& table, unsigned k, u64 x, double epsilon,
                         std::optional<PrimeRange> range = std::nullopt) {
    if (k == 0) throw std::invalid_argument("bk_count: k must be >= 1");
    BkReport rep;
    rep.x = x;
    rep.k = k;
    rep.epsilon = epsilon;
    rep.threshold = admissibility_threshold(static_cast<double>(x), epsilon);
    const PrimeWindow w = bk_prime_range(k, x, range);
    rep.prime_lo = w.lo;
    rep.prime_hi = w.hi;
    if (table.limit() < w.hi) throw std::out_of_range("bk_count: table limit below " + std::to_string(w.hi));

    std::vector<u64> admissible;
    for (const auto& e : table.entries_up_to(w.hi)) {
        if (e.p >= w.lo && omega(e.np) >= rep.threshold) admissible.push_back(e.p);
    }
    auto rec = [&](auto& self, std::size_t start, unsigned left, u64 partial) -> u64 {
        if (left == 1) {
            const u64 cap = x / partial;
            auto end = std::upper_bound(admissible.begin(), admissible.end(), cap);
            const auto first = admissible.begin() + static_cast<std::ptrdiff_t>(start);
            return end > first ? static_cast<u64>(end - first) : 0;
        }
        u64 total = 0;
        for (std::size_t i = start; i < admissible.size(); ++i) {
            if (!detail::power_fits(partial, admissible[i], left, x)) break;
            total += self(self, i + 1, left - 1, partial * admissible[i]);
        }
        return total;
    };
    rep.count = rec(rec, 0, k, 1);
    rep.density_ratio = static_cast<double>(rep.count) * std::log(static_cast<double>(x)) / static_cast<double>(x);
    return rep;
}

inline BkReport bk_count(const CurveModel& model, unsigned k, u64 x, double epsilon,
                         std::optional<PrimeRange> range = std::nullopt, const BuildOptions& build = {}) {
    const PrimeWindow w = bk_prime_range(k, x, range);
    return bk_count(build_table(model, w.hi, build), k, x, epsilon, range);
}

/// |D(x)|: n <= x expressible as n_1 ... n_k with omega(n_i) > (1 - epsilon) loglog x.
/// Brute force over a sieve; refuses x above `ceiling`.
inline u64 dense_product_count(u64 x, unsigned k, double epsilon, u64 ceiling = 1000000) {
    if (k == 0) throw std::invalid_argument("dense_product_count: k must be >= 1");
    const double thr = admissibility_threshold(static_cast<double>(x), epsilon);
    if (x > ceiling) {
        throw std::invalid_argument("dense_product_count: x = " + std::to_string(x) + " above brute-force ceiling " +
                                    std::to_string(ceiling));
    }
    const FactorSieve sieve(x);
    std::vector<u64> dense;
    for (u64 m = 2; m <= x; ++m) {
        if (sieve.omega(m) > thr) dense.push_back(m);
    }
    std::vector<unsigned char> reach(x + 1, 0);
    for (u64 m : dense) reach[m] = 1;
    for (unsigned level = 2; level <= k; ++level) {
        std::vector<unsigned char> next(x + 1, 0);
        for (u64 a = 2; a <= x; ++a) {
            if (!reach[a]) continue;
            for (u64 s : dense) {
                if (s > x / a) break;
                next[a * s] = 1;
            }
        }
        reach.swap(next);
    }
    return static_cast<u64>(std::count(reach.begin(), reach.end(), 1));
}

}  // namespace ellnum
