#pragma once

/**
 * Fixed-precision arithmetic in Z_p and Q_p.
 *
 * A value is stored as prime^valuation * unit with the unit kept modulo
 * prime^precision, so the represented number is known modulo
 * prime^(valuation + precision). Multiplication and inversion preserve the
 * relative precision; addition can cancel leading digits, in which case the
 * lost digits are subtracted from the result's precision rather than being
 * silently refilled.
 *
 * Exact zero is a distinguished value (infinite valuation): rational inputs
 * make it detectable, and it keeps the unit invariant (unit coprime to p)
 * meaningful for everything else.
 */

#include <string>
#include <vector>

#include "heckelab/errors.hpp"
#include "heckelab/rational.hpp"

namespace heckelab::padic {

inline constexpr int kDefaultPrecision = 32;

// A place of Q: the archimedean place or a finite prime.
struct Place {
    bool infinite;
    Int prime; // meaningful only when !infinite

    static Place at_infinity() { return Place{true, Int(0)}; }

    static Place at_prime(const Int& p) {
        if (!is_prime(p)) throw NotPrime("place tag " + p.get_str() + " is not prime");
        return Place{false, p};
    }
};

class PAdicValue {
public:
    // Exact zero at the given prime and working precision.
    static PAdicValue zero(const Int& p, int precision = kDefaultPrecision) {
        check_params(p, precision);
        PAdicValue v;
        v.prime_ = p;
        v.precision_ = precision;
        v.exact_zero_ = true;
        return v;
    }

    static PAdicValue from_parts(const Int& p, long valuation, const Int& unit,
                                 int precision) {
        check_params(p, precision);
        Int pk = pow_int(p, static_cast<unsigned long>(precision));
        Int u = mod_nonneg(unit, pk);
        if (u == 0 || mpz_divisible_p(u.get_mpz_t(), p.get_mpz_t()))
            throw ZeroInput("unit part divisible by p");
        PAdicValue v;
        v.prime_ = p;
        v.valuation_ = valuation;
        v.unit_ = u;
        v.precision_ = precision;
        return v;
    }

    const Int& prime() const { return prime_; }
    bool is_zero() const { return exact_zero_; }
    int precision() const { return precision_; }

    long valuation() const {
        if (exact_zero_) throw ZeroInput("valuation of exact zero");
        return valuation_;
    }

    const Int& unit_digits() const {
        if (exact_zero_) throw ZeroInput("unit part of exact zero");
        return unit_;
    }

    // |x|_p as an exact rational; 0 for exact zero.
    Rat abs_value() const {
        if (exact_zero_) return Rat(0);
        if (valuation_ >= 0)
            return make_rat(Int(1), pow_int(prime_, static_cast<unsigned long>(valuation_)));
        return Rat(pow_int(prime_, static_cast<unsigned long>(-valuation_)));
    }

    // Base-p digits of the unit part, least significant first.
    std::vector<int> unit_digit_list() const {
        std::vector<int> ds;
        if (exact_zero_) return ds;
        Int u = unit_;
        for (int i = 0; i < precision_; ++i) {
            Int d = mod_nonneg(u, prime_);
            ds.push_back(static_cast<int>(d.get_si()));
            u = (u - d) / prime_;
        }
        return ds;
    }

    // Residue of the represented value modulo p^d; requires valuation >= 0.
    Int residue(int d) const {
        if (d < 0) throw DepthExceedsPrecision("negative depth");
        if (exact_zero_) return Int(0);
        if (valuation_ < 0) throw ZeroInput("residue of a non-integral value");
        if (valuation_ >= d) return Int(0);
        if (valuation_ + precision_ < d)
            throw DepthExceedsPrecision("value known modulo p^" +
                                        std::to_string(valuation_ + precision_) +
                                        " only");
        Int pd = pow_int(prime_, static_cast<unsigned long>(d));
        return mod_nonneg(pow_int(prime_, static_cast<unsigned long>(valuation_)) * unit_, pd);
    }

private:
    PAdicValue() = default;

    static void check_params(const Int& p, int precision) {
        if (!is_prime(p)) throw NotPrime(p.get_str() + " is not prime");
        if (precision < 1) throw ZeroInput("precision must be >= 1");
    }

    Int prime_{0};
    long valuation_{0};
    Int unit_{0};
    int precision_{kDefaultPrecision};
    bool exact_zero_{false};
};

// Truncation of the image of r in Q_p. Zero maps to the exact-zero value.
inline PAdicValue from_rational(const Rat& r, const Int& p,
                                int precision = kDefaultPrecision) {
    if (r == 0) return PAdicValue::zero(p, precision);
    Int num = r.get_num();
    Int den = r.get_den();
    long vn = val_p(num, p);
    long vd = val_p(den, p);
    Int pk = pow_int(p, static_cast<unsigned long>(precision));
    Int nu = num / pow_int(p, static_cast<unsigned long>(vn));
    Int du = den / pow_int(p, static_cast<unsigned long>(vd));
    Int unit = mod_nonneg(nu * invmod(du, pk), pk);
    return PAdicValue::from_parts(p, vn - vd, unit, precision);
}

inline void require_same_prime(const PAdicValue& a, const PAdicValue& b) {
    if (a.prime() != b.prime())
        throw MismatchedPrime("operands at p=" + a.prime().get_str() + " and p=" +
                              b.prime().get_str());
}

inline PAdicValue add(const PAdicValue& a, const PAdicValue& b) {
    require_same_prime(a, b);
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const Int& p = a.prime();
    long va = a.valuation(), vb = b.valuation();
    // Absolute knowledge: a mod p^(va+ka), b mod p^(vb+kb).
    long m = std::min(va + a.precision(), vb + b.precision());
    long v = std::min(va, vb);
    long digits = m - v;
    Int pm = pow_int(p, static_cast<unsigned long>(digits));
    Int s = pow_int(p, static_cast<unsigned long>(va - v)) * a.unit_digits() +
            pow_int(p, static_cast<unsigned long>(vb - v)) * b.unit_digits();
    s = mod_nonneg(s, pm);
    if (s == 0)
        throw PrecisionExhausted("cancellation consumed all " + std::to_string(digits) +
                                 " tracked digits");
    long t = val_p(s, p);
    Int unit = s / pow_int(p, static_cast<unsigned long>(t));
    return PAdicValue::from_parts(p, v + t, unit, static_cast<int>(digits - t));
}

inline PAdicValue negate(const PAdicValue& a) {
    if (a.is_zero()) return a;
    Int pk = pow_int(a.prime(), static_cast<unsigned long>(a.precision()));
    return PAdicValue::from_parts(a.prime(), a.valuation(), pk - a.unit_digits(),
                                  a.precision());
}

inline PAdicValue sub(const PAdicValue& a, const PAdicValue& b) {
    return add(a, negate(b));
}

inline PAdicValue mul(const PAdicValue& a, const PAdicValue& b) {
    require_same_prime(a, b);
    if (a.is_zero() || b.is_zero())
        return PAdicValue::zero(a.prime(), std::min(a.precision(), b.precision()));
    int k = std::min(a.precision(), b.precision());
    Int pk = pow_int(a.prime(), static_cast<unsigned long>(k));
    Int unit = mod_nonneg(a.unit_digits() * b.unit_digits(), pk);
    return PAdicValue::from_parts(a.prime(), a.valuation() + b.valuation(), unit, k);
}

inline PAdicValue inv(const PAdicValue& a) {
    if (a.is_zero()) throw DivisionByZero("inverse of exact zero");
    Int pk = pow_int(a.prime(), static_cast<unsigned long>(a.precision()));
    return PAdicValue::from_parts(a.prime(), -a.valuation(),
                                  invmod(a.unit_digits(), pk), a.precision());
}

// True when a and b agree modulo p^m, m the smaller of the two absolute
// precisions. This is the right notion of equality for truncated values.
inline bool congruent(const PAdicValue& a, const PAdicValue& b) {
    require_same_prime(a, b);
    if (a.is_zero() && b.is_zero()) return true;
    // Exact zero has unbounded absolute precision, so a nonzero truncation
    // (whose unit is a definite nonzero digit) can never match it.
    if (a.is_zero() || b.is_zero()) return false;
    long m = std::min(a.valuation() + a.precision(), b.valuation() + b.precision());
    bool a_vanishes = a.valuation() >= m;
    bool b_vanishes = b.valuation() >= m;
    if (a_vanishes && b_vanishes) return true;
    if (a_vanishes != b_vanishes) return false;
    if (a.valuation() != b.valuation()) return false;
    Int pm = pow_int(a.prime(), static_cast<unsigned long>(m - a.valuation()));
    return mod_nonneg(a.unit_digits() - b.unit_digits(), pm) == 0;
}

inline PAdicValue operator+(const PAdicValue& a, const PAdicValue& b) { return add(a, b); }
inline PAdicValue operator-(const PAdicValue& a, const PAdicValue& b) { return sub(a, b); }
inline PAdicValue operator*(const PAdicValue& a, const PAdicValue& b) { return mul(a, b); }

// |r|_v as an exact rational: p^(-v_p(r)) at a finite place, |r| at infinity.
inline Rat abs_at_place(const Rat& r, const Place& place) {
    if (r == 0) return Rat(0);
    if (place.infinite) return rat_abs(r);
    long v = val_p(r, place.prime);
    if (v >= 0)
        return make_rat(Int(1), pow_int(place.prime, static_cast<unsigned long>(v)));
    return Rat(pow_int(place.prime, static_cast<unsigned long>(-v)));
}

// The finitely many places where |r|_v != 1, i.e. infinity plus the primes
// dividing numerator or denominator.
inline std::vector<Place> support(const Rat& r) {
    if (r == 0) throw ZeroInput("support of zero");
    std::vector<Place> places;
    places.push_back(Place::at_infinity());
    for (auto& [p, e] : factorize(Int(r.get_num()) * Int(r.get_den())))
        places.push_back(Place::at_prime(p));
    return places;
}

// prod_v |r|_v over all places; exactly 1 for every nonzero rational.
inline Rat product_formula_check(const Rat& r) {
    if (r == 0) throw ZeroInput("product formula needs a nonzero rational");
    Rat prod(1);
    for (const Place& v : support(r)) prod *= abs_at_place(r, v);
    return prod;
}

} // namespace heckelab::padic
