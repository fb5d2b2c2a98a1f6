#pragma once

/**
 * The (p+1)-regular tree on homothety classes of Z_p-lattices in Q_p^2.
 *
 * A vertex is kept in Hermite normal form: the class of the lattice with
 * column basis (p^m, 0), (u, 1), where the shift u lives in Z[1/p] and is
 * reduced modulo p^m into [0, p^m). Two vertices are equal iff (p, m, u)
 * coincide, which gives O(1) equality and a total order for sets and maps.
 *
 * Distances are read off the elementary divisors of the change-of-basis
 * matrix (exact rational arithmetic; no p-adic truncation is ever needed
 * because all shifts are p-power rationals).
 */

#include <vector>

#include "heckelab/errors.hpp"
#include "heckelab/rational.hpp"

namespace heckelab::bttree {

struct BTVertex {
    Int prime;
    long scale;  // m
    Rat shift;   // u in Z[1/p] interval [0, p^m), reduced mod p^m

    static BTVertex root(const Int& p) { return make(p, 0, Rat(0)); }

    static BTVertex make(const Int& p, long m, const Rat& u) {
        if (!is_prime(p)) throw NotPrime(p.get_str() + " is not prime");
        BTVertex v;
        v.prime = p;
        v.scale = m;
        v.shift = reduce_shift(p, m, u);
        return v;
    }

    bool operator==(const BTVertex& o) const {
        return prime == o.prime && scale == o.scale && shift == o.shift;
    }

    bool operator<(const BTVertex& o) const {
        int c = cmp(prime, o.prime);
        if (c != 0) return c < 0;
        if (scale != o.scale) return scale < o.scale;
        return cmp(shift, o.shift) < 0;
    }

private:
    // u mod p^m, canonical representative in [0, p^m).
    static Rat reduce_shift(const Int& p, long m, const Rat& u) {
        if (u != 0) {
            Int den = u.get_den();
            long dv = val_p(den, p);
            if (pow_int(p, static_cast<unsigned long>(dv)) != den)
                throw ZeroInput("shift denominator must be a power of p");
        }
        Rat pm = m >= 0 ? Rat(pow_int(p, static_cast<unsigned long>(m)))
                        : make_rat(Int(1), pow_int(p, static_cast<unsigned long>(-m)));
        Rat r = u - pm * Rat(rat_floor(u / pm));
        return r;
    }
};

// The p+1 classes at distance 1: one step down the scale and p steps up with
// every possible new shift digit.
inline std::vector<BTVertex> bt_neighbors(const BTVertex& v) {
    std::vector<BTVertex> out;
    out.push_back(BTVertex::make(v.prime, v.scale - 1, v.shift));
    Rat pm = v.scale >= 0
                 ? Rat(pow_int(v.prime, static_cast<unsigned long>(v.scale)))
                 : make_rat(Int(1), pow_int(v.prime, static_cast<unsigned long>(-v.scale)));
    for (Int k = 0; k < v.prime; ++k)
        out.push_back(BTVertex::make(v.prime, v.scale + 1, v.shift + Rat(k) * pm));
    return out;
}

// Graph distance via elementary divisors: for C the change of basis between
// the two normal-form lattices, d = v_p(det C) - 2 * min_entry_valuation(C).
inline long bt_distance(const BTVertex& v, const BTVertex& w) {
    if (v.prime != w.prime)
        throw MismatchedPrime("vertices at p=" + v.prime.get_str() + " and p=" +
                              w.prime.get_str());
    const Int& p = v.prime;
    // A = [[p^mv, uv],[0,1]], B = [[p^mw, uw],[0,1]], C = A^-1 B.
    // C = [[p^(mw-mv), (uw-uv)/p^mv],[0,1]].
    long det_val = w.scale - v.scale;
    long min_val = std::min(det_val, 0L);
    Rat off = w.shift - v.shift;
    if (off != 0) min_val = std::min(min_val, val_p(off, p) - v.scale);
    return det_val - 2 * min_val;
}

// Action of the n-th power of diag(p, 1) on the canonical basis of v: the
// first basis vector is scaled by p^n, so the class is (m+n, u mod p^(m+n)).
// Walking the scale down truncates the shift, which is the tree-level shadow
// of the fact that the geodesic flow really lives on marked bases.
inline BTVertex flow_h_p(const BTVertex& v, long n) {
    return BTVertex::make(v.prime, v.scale + n, v.shift);
}

namespace detail {

inline void sphere_dfs(const BTVertex& v, const BTVertex* parent, long remaining,
                       std::vector<BTVertex>& out) {
    if (remaining == 0) {
        out.push_back(v);
        return;
    }
    for (const BTVertex& w : bt_neighbors(v)) {
        if (parent && w == *parent) continue;
        sphere_dfs(w, &v, remaining - 1, out);
    }
}

} // namespace detail

// All vertices at distance exactly n from v: 1 for n = 0, else (p+1)p^(n-1).
inline std::vector<BTVertex> bt_sphere(const BTVertex& v, long n) {
    if (n < 0) throw ZeroInput("sphere radius must be >= 0");
    std::vector<BTVertex> out;
    detail::sphere_dfs(v, nullptr, n, out);
    return out;
}

} // namespace heckelab::bttree
