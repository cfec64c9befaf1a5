// Weierstrass models over Q and their reductions modulo a prime.
//
//   E : y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
//
// CurveModel keeps the integral coefficients exactly; ReducedCurve carries the
// residues for one good prime and implements the chord-tangent group law on
// the full five-coefficient form, so characteristics 2 and 3 need no special
// casing.
#pragma once

#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "ellnum/errors.hpp"
#include "ellnum/modarith.hpp"

namespace ellnum {

using BigInt = boost::multiprecision::cpp_int;

class CurveModel {
public:
    /// Throws SingularModelError when the discriminant vanishes.
    static CurveModel from_coefficients(const BigInt& a1, const BigInt& a2, const BigInt& a3, const BigInt& a4,
                                        const BigInt& a6) {
        CurveModel m;
        m.a_ = {a1, a2, a3, a4, a6};
        m.b2_ = a1 * a1 + 4 * a2;
        m.b4_ = 2 * a4 + a1 * a3;
        m.b6_ = a3 * a3 + 4 * a6;
        m.b8_ = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        m.disc_ = -m.b2_ * m.b2_ * m.b8_ - 8 * m.b4_ * m.b4_ * m.b4_ - 27 * m.b6_ * m.b6_ + 9 * m.b2_ * m.b4_ * m.b6_;
        if (m.disc_ == 0) throw SingularModelError("singular Weierstrass model " + m.spec() + " (discriminant 0)");
        return m;
    }

    const BigInt& a1() const noexcept { return a_[0]; }
    const BigInt& a2() const noexcept { return a_[1]; }
    const BigInt& a3() const noexcept { return a_[2]; }
    const BigInt& a4() const noexcept { return a_[3]; }
    const BigInt& a6() const noexcept { return a_[4]; }
    const std::array<BigInt, 5>& coefficients() const noexcept { return a_; }

    const BigInt& b2() const noexcept { return b2_; }
    const BigInt& b4() const noexcept { return b4_; }
    const BigInt& b6() const noexcept { return b6_; }
    const BigInt& b8() const noexcept { return b8_; }
    const BigInt& discriminant() const noexcept { return disc_; }

    /// Canonical "a1,a2,a3,a4,a6" text.
    std::string spec() const {
        std::string out;
        for (std::size_t i = 0; i < a_.size(); ++i) {
            if (i != 0) out += ',';
            out += a_[i].str();
        }
        return out;
    }

    friend bool operator==(const CurveModel& l, const CurveModel& r) { return l.a_ == r.a_; }

private:
    CurveModel() = default;

    std::array<BigInt, 5> a_;
    BigInt b2_, b4_, b6_, b8_, disc_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline BigInt parse_bigint(std::string_view field, std::string_view whole) {
    field = trim(field);
    std::string_view digits = field;
    if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
    if (digits.empty()) throw ParseError("malformed curve spec '" + std::string(whole) + "': empty coefficient");
    for (char c : digits) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw ParseError("malformed curve spec '" + std::string(whole) + "': bad coefficient '" +
                             std::string(field) + "'");
        }
    }
    const BigInt v{std::string(digits)};
    return field.front() == '-' ? BigInt(-v) : v;
}

}  // namespace detail

/// Parse "a1,a2,a3,a4,a6"; spaces around fields are tolerated.
inline CurveModel parse_curve(std::string_view text) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        fields.push_back(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (fields.size() != 5) {
        throw ParseError("malformed curve spec '" + std::string(text) + "': expected 5 comma-separated integers, got " +
                         std::to_string(fields.size()));
    }
    std::array<BigInt, 5> a;
    for (std::size_t i = 0; i < 5; ++i) a[i] = detail::parse_bigint(fields[i], text);
    return CurveModel::from_coefficients(a[0], a[1], a[2], a[3], a[4]);
}

inline u64 reduce_big(const BigInt& v, u64 p) {
    BigInt r = v % p;
    if (r < 0) r += p;
    return r.convert_to<u64>();
}

/// True iff p does not divide the discriminant of this model.
inline bool is_good_prime(const CurveModel& model, u64 p) {
    if (!is_prime_u64(p)) throw std::invalid_argument("is_good_prime: " + std::to_string(p) + " is not prime");
    return reduce_big(model.discriminant(), p) != 0;
}

/// Quadratic-residue symbol (a|p) for an odd prime p.
inline int legendre(u64 a, u64 p) {
    if (p == 2 || !is_prime_u64(p)) throw std::invalid_argument("legendre: modulus must be an odd prime");
    return jacobi(a % p, p);
}

struct CurvePoint {
    u64 x = 0;
    u64 y = 0;
    bool infinity = true;

    static CurvePoint at_infinity() { return {}; }
    static CurvePoint affine(u64 x, u64 y) { return {x, y, false}; }

    friend bool operator==(const CurvePoint& l, const CurvePoint& r) {
        if (l.infinity || r.infinity) return l.infinity == r.infinity;
        return l.x == r.x && l.y == r.y;
    }
};

/// A model reduced at a good prime (or a curve given directly by residues).
class ReducedCurve {
public:
    /// Throws BadReductionError if p divides the discriminant.
    static ReducedCurve reduce(const CurveModel& model, u64 p) {
        if (!is_prime_u64(p)) throw std::invalid_argument("reduce: " + std::to_string(p) + " is not prime");
        if (reduce_big(model.discriminant(), p) == 0) throw BadReductionError(p, model.discriminant().str());
        const auto& c = model.coefficients();
        return ReducedCurve(p, {reduce_big(c[0], p), reduce_big(c[1], p), reduce_big(c[2], p), reduce_big(c[3], p),
                                reduce_big(c[4], p)});
    }

    /// Curve given by residues a1,a2,a3,a4,a6 mod p; rejects singular ones.
    static ReducedCurve from_residues(u64 p, std::array<u64, 5> a) {
        if (!is_prime_u64(p)) throw std::invalid_argument("from_residues: " + std::to_string(p) + " is not prime");
        for (auto& v : a) v %= p;
        ReducedCurve rc(p, a);
        if (rc.discriminant() == 0) throw SingularModelError("singular reduced curve mod " + std::to_string(p));
        return rc;
    }

    u64 p() const noexcept { return p_; }
    u64 a1() const noexcept { return a_[0]; }
    u64 a2() const noexcept { return a_[1]; }
    u64 a3() const noexcept { return a_[2]; }
    u64 a4() const noexcept { return a_[3]; }
    u64 a6() const noexcept { return a_[4]; }
    u64 b2() const noexcept { return b2_; }
    u64 b4() const noexcept { return b4_; }
    u64 b6() const noexcept { return b6_; }

    u64 discriminant() const {
        const u64 p = p_;
        const u64 a1 = a_[0], a2 = a_[1], a3 = a_[2], a4 = a_[3], a6 = a_[4];
        u64 b8 = mul_mod(mul_mod(a1, a1, p), a6, p);
        b8 = add_mod(b8, mul_mod(4 % p, mul_mod(a2, a6, p), p), p);
        b8 = sub_mod(b8, mul_mod(mul_mod(a1, a3, p), a4, p), p);
        b8 = add_mod(b8, mul_mod(a2, mul_mod(a3, a3, p), p), p);
        b8 = sub_mod(b8, mul_mod(a4, a4, p), p);
        u64 d = neg_mod(mul_mod(mul_mod(b2_, b2_, p), b8, p), p);
        d = sub_mod(d, mul_mod(8 % p, mul_mod(b4_, mul_mod(b4_, b4_, p), p), p), p);
        d = sub_mod(d, mul_mod(27 % p, mul_mod(b6_, b6_, p), p), p);
        d = add_mod(d, mul_mod(9 % p, mul_mod(b2_, mul_mod(b4_, b6_, p), p), p), p);
        return d;
    }

    bool contains(const CurvePoint& P) const {
        if (P.infinity) return true;
        if (P.x >= p_ || P.y >= p_) return false;
        return lhs(P.x, P.y) == rhs(P.x);
    }

    /// x^3 + a2 x^2 + a4 x + a6
    u64 rhs(u64 x) const {
        const u64 p = p_;
        u64 v = add_mod(x, a_[1], p);
        v = add_mod(mul_mod(v, x, p), a_[3], p);
        return add_mod(mul_mod(v, x, p), a_[4], p);
    }

    /// y^2 + a1 xy + a3 y
    u64 lhs(u64 x, u64 y) const {
        const u64 p = p_;
        const u64 t = add_mod(add_mod(y, mul_mod(a_[0], x, p), p), a_[2], p);
        return mul_mod(y, t, p);
    }

    /// 4x^3 + b2 x^2 + 2 b4 x + b6, the discriminant of the quadratic in y.
    u64 two_torsion_poly(u64 x) const {
        const u64 p = p_;
        u64 v = add_mod(mul_mod(4 % p, x, p), b2_, p);
        v = add_mod(mul_mod(v, x, p), mul_mod(2 % p, b4_, p), p);
        return add_mod(mul_mod(v, x, p), b6_, p);
    }

private:
    ReducedCurve(u64 p, std::array<u64, 5> a) : p_(p), a_(a) {
        const u64 a1 = a_[0], a2 = a_[1], a3 = a_[2], a4 = a_[3], a6 = a_[4];
        b2_ = add_mod(mul_mod(a1, a1, p), mul_mod(4 % p, a2, p), p);
        b4_ = add_mod(mul_mod(2 % p, a4, p), mul_mod(a1, a3, p), p);
        b6_ = add_mod(mul_mod(a3, a3, p), mul_mod(4 % p, a6, p), p);
    }

    u64 p_;
    std::array<u64, 5> a_;
    u64 b2_ = 0, b4_ = 0, b6_ = 0;
};

/// -(x, y) = (x, -y - a1 x - a3)
inline CurvePoint negate(const ReducedCurve& rc, const CurvePoint& P) {
    if (P.infinity) return P;
    const u64 p = rc.p();
    const u64 y = sub_mod(sub_mod(neg_mod(P.y, p), mul_mod(rc.a1(), P.x, p), p), rc.a3(), p);
    return CurvePoint::affine(P.x, y);
}

namespace detail {

// Group law without on-curve validation; callers guarantee membership.
inline CurvePoint add_unchecked(const ReducedCurve& rc, const CurvePoint& P, const CurvePoint& Q) {
    if (P.infinity) return Q;
    if (Q.infinity) return P;
    const u64 p = rc.p();
    const u64 a1 = rc.a1(), a2 = rc.a2(), a3 = rc.a3(), a4 = rc.a4(), a6 = rc.a6();
    u64 lambda, nu;
    if (P.x == Q.x) {
        const u64 denom = add_mod(add_mod(add_mod(P.y, P.y, p), mul_mod(a1, P.x, p), p), a3, p);
        if (add_mod(P.y, Q.y, p) == sub_mod(0, add_mod(mul_mod(a1, Q.x, p), a3, p), p) || denom == 0) {
            return CurvePoint::at_infinity();
        }
        const u64 x2 = mul_mod(P.x, P.x, p);
        u64 num = mul_mod(3 % p, x2, p);
        num = add_mod(num, mul_mod(mul_mod(2 % p, a2, p), P.x, p), p);
        num = add_mod(num, a4, p);
        num = sub_mod(num, mul_mod(a1, P.y, p), p);
        u64 nnum = neg_mod(mul_mod(x2, P.x, p), p);
        nnum = add_mod(nnum, mul_mod(a4, P.x, p), p);
        nnum = add_mod(nnum, mul_mod(2 % p, a6, p), p);
        nnum = sub_mod(nnum, mul_mod(a3, P.y, p), p);
        const u64 inv = inv_mod(denom, p);
        lambda = mul_mod(num, inv, p);
        nu = mul_mod(nnum, inv, p);
    } else {
        const u64 inv = inv_mod(sub_mod(Q.x, P.x, p), p);
        lambda = mul_mod(sub_mod(Q.y, P.y, p), inv, p);
        nu = mul_mod(sub_mod(mul_mod(P.y, Q.x, p), mul_mod(Q.y, P.x, p), p), inv, p);
    }
    u64 x3 = add_mod(mul_mod(lambda, lambda, p), mul_mod(a1, lambda, p), p);
    x3 = sub_mod(sub_mod(sub_mod(x3, a2, p), P.x, p), Q.x, p);
    u64 y3 = neg_mod(mul_mod(add_mod(lambda, a1, p), x3, p), p);
    y3 = sub_mod(sub_mod(y3, nu, p), a3, p);
    return CurvePoint::affine(x3, y3);
}

inline CurvePoint mul_unchecked(const ReducedCurve& rc, u64 m, CurvePoint P) {
    CurvePoint acc = CurvePoint::at_infinity();
    while (m != 0) {
        if (m & 1) acc = add_unchecked(rc, acc, P);
        m >>= 1;
        if (m != 0) P = add_unchecked(rc, P, P);
    }
    return acc;
}

}  // namespace detail

/// P + Q under the chord-tangent law; throws std::domain_error for off-curve inputs.
inline CurvePoint point_add(const ReducedCurve& rc, const CurvePoint& P, const CurvePoint& Q) {
    if (!rc.contains(P) || !rc.contains(Q)) throw std::domain_error("point_add: input point not on curve");
    return detail::add_unchecked(rc, P, Q);
}

/// m*P by double-and-add.
inline CurvePoint scalar_mul(const ReducedCurve& rc, u64 m, const CurvePoint& P) {
    if (!rc.contains(P)) throw std::domain_error("scalar_mul: input point not on curve");
    return detail::mul_unchecked(rc, m, P);
}

/// Every affine point plus infinity, by exhaustive search. O(p^2).
inline std::vector<CurvePoint> enumerate_points(const ReducedCurve& rc) {
    std::vector<CurvePoint> pts{CurvePoint::at_infinity()};
    for (u64 x = 0; x < rc.p(); ++x) {
        const u64 r = rc.rhs(x);
        for (u64 y = 0; y < rc.p(); ++y) {
            if (rc.lhs(x, y) == r) pts.push_back(CurvePoint::affine(x, y));
        }
    }
    return pts;
}

}  // namespace ellnum
