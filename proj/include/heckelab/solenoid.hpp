#pragma once

/**
 * The one-prime solenoid: the quotient of R x Q_p by the diagonal Z[1/p],
 * fibered over a circle with Cantor fiber Z_p. Points are kept in the
 * canonical form (base, fiber) with base in [0, period) and fiber in the
 * compact piece; the translation flow moves the base and, at each full turn
 * of the circle, shifts the fiber by -period (the monodromy).
 *
 * Everything is exact: the fiber is carried as a rational with denominator
 * prime to p (its truncated p-adic expansion is derived on demand), and flow
 * times are rationals, so the flow law and the cylinder statistics are
 * checked with exact equality rather than tolerances.
 */

#include <map>

#include "heckelab/errors.hpp"
#include "heckelab/padic.hpp"
#include "heckelab/rational.hpp"

namespace heckelab::solenoid {

// Residue of a rational with p-free denominator modulo m.
inline Int rational_mod(const Rat& r, const Int& m) {
    return mod_nonneg(Int(r.get_num()) * invmod(Int(r.get_den()), m), m);
}

struct SolenoidPoint {
    Int prime;
    int precision;   // working precision of the p-adic fiber view
    long level;      // compact piece p^level * Z_p; 0 is the standard solenoid
    Rat base;        // circle coordinate in [0, p^level)
    Rat fiber_exact; // element of p^level * Z_p, exact

    // Circle circumference p^level.
    Rat period() const {
        return level >= 0
                   ? Rat(pow_int(prime, static_cast<unsigned long>(level)))
                   : make_rat(Int(1), pow_int(prime, static_cast<unsigned long>(-level)));
    }

    // The fiber coordinate as a truncated p-adic integer.
    padic::PAdicValue fiber() const {
        return padic::from_rational(fiber_exact, prime, precision);
    }

    bool operator==(const SolenoidPoint& o) const {
        return prime == o.prime && level == o.level && base == o.base &&
               fiber_exact == o.fiber_exact;
    }
};

namespace detail {

// Smallest-denominator z0 in Z[1/p] with v_p(x + z0) >= level.
inline Rat integral_shift(const Rat& x, const Int& p, long level) {
    if (x == 0) return Rat(0);
    long v = val_p(x, p);
    if (v >= level) return Rat(0);
    // scale to the level-0 problem
    Rat pc = level >= 0 ? Rat(pow_int(p, static_cast<unsigned long>(level)))
                        : make_rat(Int(1), pow_int(p, static_cast<unsigned long>(-level)));
    Rat t = x / pc;
    long j = level - v; // = -v_p(t) > 0
    Int pj = pow_int(p, static_cast<unsigned long>(j));
    Int num = t.get_num();
    Int den = t.get_den() / pj; // prime-to-p part of the denominator
    Int c = mod_nonneg(num * invmod(den, pj), pj);
    return pc * make_rat(-c, pj);
}

} // namespace detail

// Canonical representative of the Z[1/p]-orbit of (x_inf, x_p): shift both
// coordinates by the same z in Z[1/p] so the fiber lands in p^level * Z_p,
// then by the remaining p^level * Z freedom so the base lands in
// [0, p^level). Constant on orbits.
inline SolenoidPoint canonicalize(const Rat& x_inf, const Rat& x_p, const Int& p,
                                  int precision = padic::kDefaultPrecision,
                                  long level = 0) {
    if (!is_prime(p)) throw NotPrime(p.get_str() + " is not prime");
    if (precision < 1) throw ZeroInput("precision must be >= 1");
    if (level < 0) throw ZeroInput("period level must be >= 0");
    Rat z0 = detail::integral_shift(x_p, p, level);
    Rat pc = level >= 0 ? Rat(pow_int(p, static_cast<unsigned long>(level)))
                        : make_rat(Int(1), pow_int(p, static_cast<unsigned long>(-level)));
    Int turns = rat_floor((x_inf + z0) / pc);
    Rat shift = z0 - Rat(turns) * pc;
    SolenoidPoint pt;
    pt.prime = p;
    pt.precision = precision;
    pt.level = level;
    pt.base = x_inf + shift;
    pt.fiber_exact = x_p + shift;
    return pt;
}

// Translation flow by rational time t: adds t to the real coordinate and
// recanonicalizes. The projection to the circle is rotation by t; each full
// turn translates the fiber by -period.
inline SolenoidPoint flow(const SolenoidPoint& pt, const Rat& t) {
    return canonicalize(pt.base + t, pt.fiber_exact, pt.prime, pt.precision, pt.level);
}

// Histogram of the fiber residue modulo p^depth over the first n returns to
// the fiber (times 0, period, 2*period, ...).
inline std::map<Int, long> cylinder_histogram(const SolenoidPoint& pt, int depth,
                                              long steps) {
    if (depth < 0 || depth > pt.precision)
        throw DepthExceedsPrecision("depth " + std::to_string(depth) +
                                    " exceeds fiber precision " +
                                    std::to_string(pt.precision));
    if (steps < 0) throw ZeroInput("step count must be >= 0");
    Int pd = pow_int(pt.prime, static_cast<unsigned long>(depth));
    Rat period = pt.period();
    std::map<Int, long> hist;
    for (long j = 0; j < steps; ++j)
        hist[rational_mod(pt.fiber_exact - Rat(j) * period, pd)] += 1;
    return hist;
}

} // namespace heckelab::solenoid
