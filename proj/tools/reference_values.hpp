// Published numeric values checked by `verify-paper` and the acceptance suite.
#pragma once

#include <array>
#include <cstdint>

namespace ellnum::reference {

inline constexpr const char* kCurve37a = "0,0,1,-1,0";
inline constexpr const char* kCurveB = "0,0,3,-1,2";

/// Two prime triples whose N-products are claimed equal to `product`.
struct ProductIdentity {
    std::uint64_t product;
    std::array<std::uint64_t, 3> left;
    std::array<std::uint64_t, 3> right;
    /// Printed N values for the left and right triples; zero when not printed.
    std::array<std::uint64_t, 3> left_np;
    std::array<std::uint64_t, 3> right_np;
};

inline constexpr std::array<ProductIdentity, 4> kProductIdentities{{
    {3360, {2, 13, 43}, {3, 5, 67}, {0, 0, 0}, {0, 0, 0}},
    {25200, {5, 43, 73}, {17, 19, 61}, {0, 0, 0}, {0, 0, 0}},
    {3107520, {101, 107, 251}, {113, 127, 167}, {99, 120, 254}, {132, 127, 180}},
    {1988217000, {1009, 1181, 1601}, {1063, 1283, 1399}, {1057, 1125, 1648}, {1057, 1320, 1425}},
}};

inline constexpr std::uint64_t kProgressionN = 1057;
inline constexpr std::array<std::uint64_t, 2> kProgressionPrimes{1009, 1063};

struct TripleRow {
    std::uint64_t n;
    std::array<std::uint64_t, 3> primes;  // as printed, not sorted
};

inline constexpr std::array<TripleRow, 10> kTripleRows{{
    {624, {593, 661, 619}},
    {6495, {6337, 6449, 6389}},
    {7440, {7369, 7523, 7487}},
    {8568, {8563, 8423, 8527}},
    {11422, {11299, 11617, 11519}},
    {12312, {12161, 12421, 12391}},
    {12672, {12721, 12791, 12619}},
    {32022, {31873, 31699, 32213}},
    {34240, {34603, 34217, 34327}},
    {37464, {37693, 37571, 37517}},
}};

struct MultiplicityRow {
    std::uint64_t n;
    std::size_t g1;
};

inline constexpr std::array<MultiplicityRow, 11> kMultiplicityRows{{
    {10262, 2}, {10494, 2}, {10630, 2}, {10697, 2}, {10704, 2}, {11072, 2},
    {11100, 2}, {11168, 2}, {11276, 2}, {11422, 3}, {11441, 2},
}};
inline constexpr std::uint64_t kMultiplicityLo = 10262;
inline constexpr std::uint64_t kMultiplicityHi = 11441;

inline constexpr std::uint64_t kCensusX = 4000000;
inline constexpr std::uint64_t kCensusN = 3107520;
inline constexpr std::uint64_t kExtendedCensusX = 2000000000;
inline constexpr std::uint64_t kExtendedCensusN = 1988217000;

}  // namespace ellnum::reference
