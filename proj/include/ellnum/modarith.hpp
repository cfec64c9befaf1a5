// Fixed-width modular arithmetic for primes below 2^63.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

namespace ellnum {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline u64 add_mod(u64 a, u64 b, u64 m) {
    const u64 s = a + b;
    return (s >= m || s < a) ? s - m : s;
}

inline u64 sub_mod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

inline u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 neg_mod(u64 a, u64 m) { return a == 0 ? 0 : m - a; }

inline u64 pow_mod(u64 base, u64 exp, u64 m) {
    u64 result = 1 % m;
    base %= m;
    while (exp != 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

/// Inverse of a modulo m; a must be a unit.
inline u64 inv_mod(u64 a, u64 m) {
    i128 t = 0, new_t = 1;
    i128 r = m, new_r = a % m;
    while (new_r != 0) {
        const i128 q = r / new_r;
        i128 tmp = t - q * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - q * new_r;
        r = new_r;
        new_r = tmp;
    }
    if (r != 1) throw std::domain_error("inv_mod: element is not invertible");
    if (t < 0) t += m;
    return static_cast<u64>(t);
}

/// Reduce a signed value into [0, m).
inline u64 reduce_signed(i64 v, u64 m) {
    const i64 r = static_cast<i64>(static_cast<i128>(v) % static_cast<i128>(m));
    return r < 0 ? static_cast<u64>(r + static_cast<i64>(m)) : static_cast<u64>(r);
}

/// Floor of the square root, exact for every 64-bit input.
inline u64 isqrt(u64 n) {
    if (n < 2) return n;
    u64 r = static_cast<u64>(__builtin_sqrtl(static_cast<long double>(n)));
    while (static_cast<u128>(r) * r > n) --r;
    while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline u64 isqrt128(u128 n) {
    if (n < 2) return static_cast<u64>(n);
    u64 r = static_cast<u64>(__builtin_sqrtl(static_cast<long double>(n)));
    while (static_cast<u128>(r) * r > n) --r;
    while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

/// Deterministic Miller-Rabin for all 64-bit n.
inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// Jacobi symbol (a/n) for odd n, by quadratic reciprocity.
inline int jacobi(u64 a, u64 n) {
    a %= n;
    int sign = 1;
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            const u64 r = n & 7;
            if (r == 3 || r == 5) sign = -sign;
        }
        const u64 t = a;
        a = n;
        n = t;
        if ((a & 3) == 3 && (n & 3) == 3) sign = -sign;
        a %= n;
    }
    return n == 1 ? sign : 0;
}

/// Square root modulo an odd prime (Tonelli-Shanks); nullopt for non-residues.
inline std::optional<u64> sqrt_mod(u64 a, u64 p) {
    a %= p;
    if (a == 0) return 0;
    if (p == 2) return a;
    if (jacobi(a, p) != 1) return std::nullopt;
    if ((p & 3) == 3) return pow_mod(a, (p + 1) / 4, p);

    u64 q = p - 1;
    int s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    u64 z = 2;
    while (jacobi(z, p) != -1) ++z;

    int m = s;
    u64 c = pow_mod(z, q, p);
    u64 t = pow_mod(a, q, p);
    u64 r = pow_mod(a, (q + 1) / 2, p);
    while (t != 1) {
        int i = 0;
        u64 t2 = t;
        while (t2 != 1) {
            t2 = mul_mod(t2, t2, p);
            ++i;
        }
        u64 b = c;
        for (int j = 0; j < m - i - 1; ++j) b = mul_mod(b, b, p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    return r;
}

}  // namespace ellnum
