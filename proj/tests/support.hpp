// Independent reference implementations used as oracles, plus shared fixtures.
// Nothing here calls into the library's counting or factoring code.
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "ellnum/ellnum.hpp"

namespace oracle {

using ll = long long;
using ull = unsigned long long;

inline constexpr std::array<ll, 5> kE37{0, 0, 1, -1, 0};
inline constexpr std::array<ll, 5> kEB{0, 0, 3, -1, 2};

inline ll md(ll v, ll p) { return ((v % p) + p) % p; }

/// 1 + #{(x, y) mod p : y^2 + a1xy + a3y = x^3 + a2x^2 + a4x + a6}, by direct substitution.
inline ull brute_np(const std::array<ll, 5>& a, ll p) {
    ull c = 1;
    for (ll x = 0; x < p; ++x) {
        const ll r = md(md(md(x * x, p) * x, p) + md(a[1], p) * md(x * x, p) + md(a[3], p) * x + a[4], p);
        for (ll y = 0; y < p; ++y) {
            const ll l = md(y * y + md(a[0], p) * x % p * y + md(a[2], p) * y, p);
            c += l == r;
        }
    }
    return c;
}

inline bool is_prime(ull n) {
    if (n < 2) return false;
    for (ull d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

inline std::vector<ull> primes_to(ull x) {
    std::vector<ull> v;
    for (ull n = 2; n <= x; ++n) {
        if (is_prime(n)) v.push_back(n);
    }
    return v;
}

inline std::map<ull, int> factor(ull n) {
    std::map<ull, int> f;
    for (ull d = 2; d * d <= n; ++d) {
        while (n % d == 0) {
            ++f[d];
            n /= d;
        }
    }
    if (n > 1) ++f[n];
    return f;
}

inline int omega(ull n) { return static_cast<int>(factor(n).size()); }

inline ll disc(const std::array<ll, 5>& a) {
    const ll b2 = a[0] * a[0] + 4 * a[1];
    const ll b4 = 2 * a[3] + a[0] * a[2];
    const ll b6 = a[2] * a[2] + 4 * a[4];
    const ll b8 = a[0] * a[0] * a[4] + 4 * a[1] * a[4] - a[0] * a[2] * a[3] + a[1] * a[2] * a[2] - a[3] * a[3];
    return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
}

}  // namespace oracle

namespace fixture {

inline const ellnum::CurveModel& e37() {
    static const ellnum::CurveModel m = ellnum::parse_curve("0,0,1,-1,0");
    return m;
}

inline const ellnum::CurveModel& eb() {
    static const ellnum::CurveModel m = ellnum::parse_curve("0,0,3,-1,2");
    return m;
}

/// Tables shared across tests: memoized in-process and cached on disk so that
/// separate test processes do not rebuild them.
inline std::shared_ptr<const ellnum::NpTable> table(const ellnum::CurveModel& m, ellnum::u64 limit) {
    static std::mutex mu;
    static std::map<std::pair<std::string, ellnum::u64>, std::shared_ptr<const ellnum::NpTable>> memo;
    std::lock_guard lock(mu);
    auto& slot = memo[{m.spec(), limit}];
    if (!slot) {
        slot = std::make_shared<const ellnum::NpTable>(ellnum::cached_table(m, limit, {}, ELLNUM_TEST_CACHE));
    }
    return slot;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("ellnum_test_" + name + "_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace fixture
