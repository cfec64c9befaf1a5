// Counting N_p(E) = #E(F_p): exhaustive enumeration, quadratic-character sum,
// and baby-step/giant-step order finding inside the Hasse interval.
#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "ellnum/curve.hpp"

namespace ellnum {

struct CountOptions {
    /// Largest prime handled by the character sum; BSGS above.
    u64 naive_threshold = 100000;
    /// Seeds point sampling in BSGS. Never changes the returned order.
    u64 seed = 1;
    int max_points = 8;
    int max_twist_points = 8;
};

struct HasseInterval {
    u64 lo;
    u64 hi;
};

/// Integers N with (N - p - 1)^2 <= 4p.
inline HasseInterval hasse_interval(u64 p) {
    const u64 r = isqrt(4 * p);
    return {p + 1 > r ? p + 1 - r : 0, p + 1 + r};
}

/// Exact integer form of |N - p - 1| <= 2 sqrt(p).
inline bool satisfies_hasse(u64 p, u64 n) {
    const i128 t = static_cast<i128>(n) - static_cast<i128>(p) - 1;
    return t * t <= static_cast<i128>(4) * p;
}

/// Exhaustive count, O(p^2). Oracle and the path for p = 2, 3.
inline u64 count_naive(const ReducedCurve& rc) {
    const u64 p = rc.p();
    u64 n = 1;
    for (u64 x = 0; x < p; ++x) {
        const u64 r = rc.rhs(x);
        for (u64 y = 0; y < p; ++y) n += rc.lhs(x, y) == r;
    }
    return n;
}

/// p + 1 + sum_x (f(x) | p) with f = 4x^3 + b2 x^2 + 2 b4 x + b6. O(p) time and bytes.
inline u64 count_charsum(const ReducedCurve& rc) {
    const u64 p = rc.p();
    if (p < 5) throw std::invalid_argument("count_charsum: requires p >= 5");

    std::vector<unsigned char> square(p, 0);
    for (u64 x = 0, s = 0; x <= (p - 1) / 2; ++x) {
        square[s] = 1;
        s = add_mod(s, (2 * x + 1) % p, p);
    }

    // f(x) walked by forward differences: additions only.
    const u64 b2 = rc.b2(), b4 = rc.b4(), b6 = rc.b6();
    u64 f = b6;
    u64 d1 = add_mod(add_mod(4, b2, p), add_mod(b4, b4, p), p);
    u64 d2 = add_mod(24 % p, add_mod(b2, b2, p), p);
    const u64 d3 = 24 % p;
    i64 sum = 0;
    for (u64 x = 0; x < p; ++x) {
        if (f != 0) sum += square[f] ? 1 : -1;
        f = add_mod(f, d1, p);
        d1 = add_mod(d1, d2, p);
        d2 = add_mod(d2, d3, p);
    }
    return static_cast<u64>(static_cast<i64>(p) + 1 + sum);
}

/// Twist by d (d a non-residue gives the non-trivial twist): a1 = a3 = 0,
/// a2 = d b2/4, a4 = d^2 b4/2, a6 = d^3 b6/4. Odd p only.
inline ReducedCurve quadratic_twist(const ReducedCurve& rc, u64 d) {
    const u64 p = rc.p();
    if (p == 2) throw std::invalid_argument("quadratic_twist: p must be odd");
    d %= p;
    const u64 inv2 = inv_mod(2, p);
    const u64 inv4 = mul_mod(inv2, inv2, p);
    const u64 d2 = mul_mod(d, d, p);
    const u64 d3 = mul_mod(d2, d, p);
    return ReducedCurve::from_residues(
        p, {0, mul_mod(mul_mod(d, rc.b2(), p), inv4, p), 0, mul_mod(mul_mod(d2, rc.b4(), p), inv2, p),
            mul_mod(mul_mod(d3, rc.b6(), p), inv4, p)});
}

inline u64 least_nonresidue(u64 p) {
    u64 d = 2;
    while (jacobi(d, p) != -1) ++d;
    return d;
}

namespace detail {

inline CurvePoint random_point(const ReducedCurve& rc, std::mt19937_64& rng) {
    const u64 p = rc.p();
    const u64 inv2 = inv_mod(2, p);
    while (true) {
        const u64 x = rng() % p;
        const auto s = sqrt_mod(rc.two_torsion_poly(x), p);
        if (!s) continue;
        const u64 root = (rng() & 1) ? *s : neg_mod(*s, p);
        const u64 shift = add_mod(mul_mod(rc.a1(), x, p), rc.a3(), p);
        return CurvePoint::affine(x, mul_mod(sub_mod(root, shift, p), inv2, p));
    }
}

/// All m in [lo, hi] with m*P = infinity, by baby-step/giant-step.
inline std::vector<u64> annihilators_in(const ReducedCurve& rc, const CurvePoint& P, u64 lo, u64 hi) {
    std::vector<u64> out;
    const u64 step = isqrt(hi - lo) + 1;

    struct Baby {
        u64 x, y, j;
    };
    std::vector<Baby> baby;
    baby.reserve(step);
    CurvePoint cur = P;
    for (u64 j = 1; j < step; ++j) {
        if (cur.infinity) {
            // ord(P) = j is small: the answer is every multiple of j.
            for (u64 m = (lo + j - 1) / j * j; m <= hi; m += j) out.push_back(m);
            return out;
        }
        baby.push_back({cur.x, cur.y, j});
        cur = add_unchecked(rc, cur, P);
    }
    const CurvePoint giant = cur;
    std::sort(baby.begin(), baby.end(), [](const Baby& a, const Baby& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });

    CurvePoint r = mul_unchecked(rc, lo, P);
    for (u64 base = lo; base <= hi; base += step) {
        const CurvePoint target = negate(rc, r);
        if (target.infinity) {
            out.push_back(base);
        } else {
            auto it = std::lower_bound(baby.begin(), baby.end(), target, [](const Baby& b, const CurvePoint& t) {
                return b.x != t.x ? b.x < t.x : b.y < t.y;
            });
            if (it != baby.end() && it->x == target.x && it->y == target.y && base + it->j <= hi) {
                out.push_back(base + it->j);
            }
        }
        r = add_unchecked(rc, r, giant);
    }
    return out;
}

}  // namespace detail

struct BsgsOutcome {
    u64 order = 0;
    int points_used = 0;
    int twist_points_used = 0;
    bool fell_back = false;
};

/// Group order by BSGS in the Hasse interval, intersecting candidates over
/// random points, then twist points, then falling back to the character sum.
inline BsgsOutcome count_bsgs_detailed(const ReducedCurve& rc, const CountOptions& opt = {}) {
    const u64 p = rc.p();
    if (p < 5) throw std::invalid_argument("count_bsgs: requires p >= 5");
    const HasseInterval iv = hasse_interval(p);
    std::mt19937_64 rng(opt.seed ^ (p * 0x9E3779B97F4A7C15ULL));

    BsgsOutcome out;
    std::vector<u64> cands;
    if (opt.max_points > 0) {
        cands = detail::annihilators_in(rc, detail::random_point(rc, rng), iv.lo, iv.hi);
        out.points_used = 1;
    }
    auto keep_if = [&cands](auto pred) { cands.erase(std::remove_if(cands.begin(), cands.end(), [&](u64 m) { return !pred(m); }), cands.end()); };

    while (cands.size() > 1 && out.points_used < opt.max_points) {
        const CurvePoint P = detail::random_point(rc, rng);
        keep_if([&](u64 m) { return detail::mul_unchecked(rc, m, P).infinity; });
        ++out.points_used;
    }
    if (cands.size() > 1 && opt.max_twist_points > 0) {
        const ReducedCurve twist = quadratic_twist(rc, least_nonresidue(p));
        while (cands.size() > 1 && out.twist_points_used < opt.max_twist_points) {
            const CurvePoint P = detail::random_point(twist, rng);
            keep_if([&](u64 m) { return detail::mul_unchecked(twist, 2 * p + 2 - m, P).infinity; });
            ++out.twist_points_used;
        }
    }
    if (cands.size() == 1) {
        out.order = cands.front();
    } else {
        out.order = count_charsum(rc);
        out.fell_back = true;
    }
    return out;
}

inline u64 count_bsgs(const ReducedCurve& rc, const CountOptions& opt = {}) { return count_bsgs_detailed(rc, opt).order; }

/// Dispatch by size: p <= 3 naive, p <= naive_threshold character sum, BSGS above.
inline u64 count_points(const ReducedCurve& rc, const CountOptions& opt = {}) {
    const u64 p = rc.p();
    if (p <= 3) return count_naive(rc);
    if (p <= opt.naive_threshold) return count_charsum(rc);
    return count_bsgs(rc, opt);
}

/// Throws BadReductionError (naming p and the discriminant) for bad primes.
inline u64 count_points(const CurveModel& model, u64 p, const CountOptions& opt = {}) {
    return count_points(ReducedCurve::reduce(model, p), opt);
}

}  // namespace ellnum
