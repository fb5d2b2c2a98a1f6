#pragma once

/**
 * Exact integer and rational arithmetic helpers on top of GMP, plus the
 * small amount of multiplicative number theory the rest of the library
 * needs: p-adic valuations, modular inverses, primality and factoring.
 */

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "heckelab/errors.hpp"

namespace heckelab {

using Int = mpz_class;
using Rat = mpq_class;

// num/den with den != 0, canonicalized (den > 0, gcd 1).
inline Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw DivisionByZero("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat make_rat(long num, long den = 1) {
    return make_rat(Int(num), Int(den));
}

inline Int pow_int(const Int& base, unsigned long exp) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

// floor(r) as an integer.
inline Int rat_floor(const Rat& r) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

// r - floor(r), in [0, 1).
inline Rat rat_frac(const Rat& r) {
    return r - Rat(rat_floor(r));
}

inline Rat rat_abs(const Rat& r) {
    return r >= 0 ? r : Rat(-r);
}

// a mod m in [0, m), m > 0.
inline Int mod_nonneg(const Int& a, const Int& m) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

// Multiplicative inverse of a modulo m.
inline Int invmod(const Int& a, const Int& m) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw DivisionByZero("no inverse modulo m");
    return r;
}

inline bool is_prime(const Int& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 32) != 0;
}

// v_p(n) for n != 0.
inline long val_p(const Int& n, const Int& p) {
    if (n == 0) throw ZeroInput("valuation of zero");
    Int m = abs(n);
    long v = 0;
    Int q, r;
    for (;;) {
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
        if (r != 0) break;
        m = q;
        ++v;
    }
    return v;
}

// v_p(r) for a nonzero rational.
inline long val_p(const Rat& r, const Int& p) {
    if (r == 0) throw ZeroInput("valuation of zero");
    return val_p(Int(r.get_num()), p) - val_p(Int(r.get_den()), p);
}

namespace detail {

inline Int pollard_rho(const Int& n) {
    // n composite, odd, not a prime power handled elsewhere.
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(0xbf58476d1ce4e5b9ULL);
    for (;;) {
        Int c = rng.get_z_range(n - 1) + 1;
        Int x = rng.get_z_range(n);
        Int y = x, d = 1;
        while (d == 1) {
            x = mod_nonneg(x * x + c, n);
            y = mod_nonneg(y * y + c, n);
            y = mod_nonneg(y * y + c, n);
            Int diff = x - y;
            if (diff == 0) break;
            mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        }
        if (d != 1 && d != n) return d;
    }
}

inline void factor_into(Int n, std::vector<std::pair<Int, int>>& out) {
    if (n <= 1) return;
    if (is_prime(n)) {
        out.emplace_back(n, 1);
        return;
    }
    Int d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

} // namespace detail

// Prime factorization of |n|, primes ascending. n must be nonzero.
inline std::vector<std::pair<Int, int>> factorize(const Int& n) {
    if (n == 0) throw ZeroInput("factorize(0)");
    Int m = abs(n);
    std::vector<std::pair<Int, int>> fac;
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L}) {
        if (m == 1) break;
        Int ip(p);
        if (mpz_divisible_p(m.get_mpz_t(), ip.get_mpz_t())) {
            long v = val_p(m, ip);
            fac.emplace_back(ip, static_cast<int>(v));
            m /= pow_int(ip, static_cast<unsigned long>(v));
        }
    }
    if (m > 1) {
        std::vector<std::pair<Int, int>> rest;
        detail::factor_into(m, rest);
        // merge equal primes from the recursive split
        std::sort(rest.begin(), rest.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (auto& [p, e] : rest) {
            if (!fac.empty() && fac.back().first == p)
                fac.back().second += e;
            else
                fac.emplace_back(p, e);
        }
    }
    std::sort(fac.begin(), fac.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return fac;
}

// Canonical "num/den" form, den > 0 and gcd 1. Round-trips losslessly.
inline std::string rat_string(const Rat& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

// Accepts "num/den" or a bare integer. Throws std::invalid_argument on
// malformed input (a usage error, not a domain error).
inline Rat parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return make_rat(Int(s), Int(1));
    return make_rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
}

} // namespace heckelab
