#pragma once

/**
 * Hecke neighbors, spheres and the Hecke correspondence T_N on the modular
 * surface, computed two independent ways:
 *
 *  - sphere_tree: walks the restricted product of (p+1)-regular trees. For
 *    each prime power p^v dividing N it enumerates the no-backtracking words
 *    of length v and follows them through the neighbor formulas, reducing at
 *    the end of each per-prime leg.
 *  - sphere_coset: acts on the base point by the upper-triangular
 *    representatives (a b; 0 d), ad = N, 0 <= b < d, gcd(a,b,d) = 1.
 *
 * Both return the same multiset of reduced points; the coset route serves as
 * the oracle for the tree route in the test suites.
 *
 * Child labeling of the tree at p: letter 0 is z -> p*z, letter j in 1..p is
 * z -> (z + (j-1))/p. On raw (unreduced) coordinates these are the p+1
 * index-p sublattices of Z + zZ, and undoing a step is itself a labeled
 * step: letter 0 is undone by letter 1, and any letter j >= 1 is undone by
 * letter 0. The no-backtracking constraint is exactly the exclusion of those
 * two bigrams, which is why legs walk on raw coordinates and reduce only at
 * the ends: reduction permutes the labels.
 */

#include <map>
#include <thread>
#include <vector>

#include "heckelab/errors.hpp"
#include "heckelab/modsurface.hpp"
#include "heckelab/rational.hpp"

namespace heckelab::hecke {

using modsurface::HPoint;
using modsurface::IntMatrix2;

// Finite map prime -> no-backtracking edge word; an absent prime means the
// walk stays at that tree's root.
using TreeAddress = std::map<Int, std::vector<int>>;

using PointMultiset = std::map<HPoint, Int>;

struct HeckeSphere {
    Int radius;
    HPoint center;        // reduced
    PointMultiset points; // reduced point -> multiplicity

    Int total_multiplicity() const {
        Int t = 0;
        for (const auto& [pt, m] : points) t += m;
        return t;
    }

    bool same_multiset(const HeckeSphere& o) const { return points == o.points; }
};

// psi(N) = N * prod_{p | N} (1 + 1/p), the sphere cardinality with
// multiplicity.
inline Int expected_cardinality(const Int& n) {
    Int t = 1;
    for (auto& [p, e] : factorize(n))
        t *= (p + 1) * pow_int(p, static_cast<unsigned long>(e - 1));
    return t;
}

// The p+1 neighbor formulas in labeling order: p*z, then (z+k)/p for
// ascending k. Raw coordinates, no reduction.
inline std::vector<HPoint> neighbors(const HPoint& z, const Int& p) {
    if (!is_prime(p)) throw NotPrime(p.get_str() + " is not prime");
    std::vector<HPoint> out;
    out.emplace_back(z.x * p, z.y * p);
    for (Int k = 0; k < p; ++k) out.emplace_back((z.x + k) / p, z.y / p);
    return out;
}

namespace detail {

inline HPoint apply_letter(const HPoint& z, const Int& p, long letter) {
    if (letter == 0) return HPoint(z.x * p, z.y * p);
    return HPoint((z.x + (letter - 1)) / p, z.y / p);
}

inline bool letter_allowed(long prev, long letter) {
    if (prev < 0) return true;       // first step of a leg
    if (prev == 0) return letter != 1;
    return letter != 0;
}

inline void check_letter_range(const Int& p, long letter) {
    if (letter < 0 || letter > p)
        throw InvalidWord("letter " + std::to_string(letter) + " outside 0.." +
                          p.get_str());
}

inline void leg_dfs(const Int& p, const HPoint& z, long prev, int remaining,
                    PointMultiset& out, const Int& weight) {
    if (remaining == 0) {
        out[modsurface::reduce(z).first] += weight;
        return;
    }
    long pl = p.get_si();
    for (long c = 0; c <= pl; ++c) {
        if (!letter_allowed(prev, c)) continue;
        leg_dfs(p, apply_letter(z, p, c), c, remaining - 1, out, weight);
    }
}

inline void leg_dfs_raw(const Int& p, const HPoint& z, long prev, int remaining,
                        std::vector<HPoint>& out) {
    if (remaining == 0) {
        out.push_back(z);
        return;
    }
    long pl = p.get_si();
    for (long c = 0; c <= pl; ++c) {
        if (!letter_allowed(prev, c)) continue;
        leg_dfs_raw(p, apply_letter(z, p, c), c, remaining - 1, out);
    }
}

// Reduced leaf multiset of the depth-v tree sphere at one prime, starting
// from a reduced point.
inline PointMultiset leg_sphere(const HPoint& start, const Int& p, int v,
                                const Int& weight) {
    PointMultiset out;
    leg_dfs(p, start, -1, v, out, weight);
    return out;
}

// Runs fn over the inputs, optionally chunked across threads; local
// multisets are merged by addition so the result is schedule-independent.
template <typename In, typename Fn>
PointMultiset accumulate_multisets(const std::vector<In>& inputs, unsigned threads,
                                   Fn fn) {
    PointMultiset total;
    if (threads <= 1 || inputs.size() < 2) {
        for (const In& in : inputs) fn(in, total);
        return total;
    }
    unsigned n = std::min<unsigned>(threads, static_cast<unsigned>(inputs.size()));
    std::vector<PointMultiset> locals(n);
    std::vector<std::thread> workers;
    std::size_t chunk = (inputs.size() + n - 1) / n;
    for (unsigned t = 0; t < n; ++t) {
        std::size_t lo = t * chunk;
        std::size_t hi = std::min(inputs.size(), lo + chunk);
        workers.emplace_back([&, lo, hi, t] {
            for (std::size_t i = lo; i < hi; ++i) fn(inputs[i], locals[t]);
        });
    }
    for (auto& w : workers) w.join();
    for (const auto& local : locals)
        for (const auto& [pt, m] : local) total[pt] += m;
    return total;
}

inline std::vector<std::pair<Int, int>> factor_radius(const Int& n) {
    if (n < 1) throw ZeroInput("sphere radius must be >= 1");
    if (n == 1) return {};
    auto fac = factorize(n);
    for (const auto& [p, e] : fac)
        if (!mpz_fits_slong_p(p.get_mpz_t()))
            throw ZeroInput("prime factor " + p.get_str() + " too large to enumerate");
    return fac;
}

} // namespace detail

// Follow one address through the trees, primes in increasing order; each
// per-prime leg starts from the reduced current point, walks the word on raw
// coordinates and reduces at the end.
inline HPoint walk(const HPoint& z, const TreeAddress& addr) {
    HPoint cur = modsurface::reduce(z).first;
    for (const auto& [p, word] : addr) {
        if (!is_prime(p)) throw NotPrime("address key " + p.get_str() + " is not prime");
        HPoint raw = cur;
        long prev = -1;
        for (int letter : word) {
            detail::check_letter_range(p, letter);
            if (!detail::letter_allowed(prev, letter))
                throw InvalidWord("letter " + std::to_string(letter) +
                                  " backtracks after " + std::to_string(prev));
            raw = detail::apply_letter(raw, p, letter);
            prev = letter;
        }
        cur = modsurface::reduce(raw).first;
    }
    return cur;
}

// Sphere of radius N with an explicit prime processing order. The order must
// be a permutation of the primes dividing N.
inline HeckeSphere sphere_tree_ordered(const HPoint& z, const Int& n,
                                       const std::vector<Int>& prime_order,
                                       unsigned threads = 1) {
    auto fac = detail::factor_radius(n);
    std::map<Int, int> exponent;
    for (auto& [p, e] : fac) exponent[p] = e;
    if (prime_order.size() != fac.size())
        throw ZeroInput("prime order must cover exactly the primes dividing N");
    {
        std::map<Int, int> seen;
        for (const Int& p : prime_order) {
            if (!exponent.count(p))
                throw ZeroInput("prime " + p.get_str() + " does not divide N");
            if (seen[p]++)
                throw ZeroInput("duplicate prime in processing order");
        }
    }

    HPoint center = modsurface::reduce(z).first;
    PointMultiset stage{{center, Int(1)}};
    for (const Int& p : prime_order) {
        int v = exponent[p];
        std::vector<std::pair<HPoint, Int>> inputs(stage.begin(), stage.end());
        stage = detail::accumulate_multisets(
            inputs, threads, [&](const std::pair<HPoint, Int>& in, PointMultiset& out) {
                detail::leg_dfs(p, in.first, -1, v, out, in.second);
            });
    }
    return HeckeSphere{n, center, std::move(stage)};
}

// Sphere of radius N via tree walks, primes processed in increasing order.
inline HeckeSphere sphere_tree(const HPoint& z, const Int& n, unsigned threads = 1) {
    std::vector<Int> order;
    for (auto& [p, e] : detail::factor_radius(n)) order.push_back(p);
    return sphere_tree_ordered(z, n, order, threads);
}

// Raw leaf coordinates of the tree enumeration (before the final leg's
// reduction), in DFS order.
inline std::vector<HPoint> sphere_tree_raw(const HPoint& z, const Int& n) {
    auto fac = detail::factor_radius(n);
    std::vector<HPoint> stage{modsurface::reduce(z).first};
    for (std::size_t i = 0; i < fac.size(); ++i) {
        const auto& [p, v] = fac[i];
        std::vector<HPoint> next;
        for (const HPoint& w : stage) {
            HPoint start = i == 0 ? w : modsurface::reduce(w).first;
            detail::leg_dfs_raw(p, start, -1, v, next);
        }
        stage = std::move(next);
    }
    return stage;
}

// All integral (a b; 0 d) with a*d = N, 0 <= b < d and, when primitive,
// gcd(a,b,d) = 1; ordered by descending a then ascending b.
inline std::vector<IntMatrix2> coset_representatives(const Int& n, bool primitive = true) {
    if (n < 1) throw ZeroInput("index must be >= 1");
    std::vector<Int> divisors{1};
    for (const auto& [p, e] : detail::factor_radius(n)) {
        std::vector<Int> next;
        Int pe = 1;
        for (int i = 0; i <= e; ++i) {
            for (const Int& d : divisors) next.push_back(d * pe);
            pe *= p;
        }
        divisors = std::move(next);
    }
    std::sort(divisors.begin(), divisors.end(), std::greater<Int>());
    std::vector<IntMatrix2> reps;
    for (const Int& a : divisors) {
        Int d = n / a;
        Int g = gcd(a, d);
        for (Int b = 0; b < d; ++b) {
            if (primitive && gcd(g, b) != 1) continue;
            reps.push_back(IntMatrix2{a, b, 0, d});
        }
    }
    return reps;
}

// Sphere of radius N via the coset representatives: acts by (a z + b)/d,
// reduces, accumulates multiplicities. Equals sphere_tree as a multiset.
inline HeckeSphere sphere_coset(const HPoint& z, const Int& n, unsigned threads = 1,
                                bool primitive = true) {
    auto reps = coset_representatives(n, primitive);
    PointMultiset points = detail::accumulate_multisets(
        reps, threads, [&](const IntMatrix2& m, PointMultiset& out) {
            out[modsurface::reduce(modsurface::moebius_apply(m, z)).first] += 1;
        });
    return HeckeSphere{n, modsurface::reduce(z).first, std::move(points)};
}

inline std::vector<HPoint> sphere_coset_raw(const HPoint& z, const Int& n,
                                            bool primitive = true) {
    std::vector<HPoint> out;
    for (const IntMatrix2& m : coset_representatives(n, primitive))
        out.push_back(modsurface::moebius_apply(m, z));
    return out;
}

// Full correspondence without the primitivity constraint: the union over
// k^2 | N of the primitive spheres of radius N/k^2.
inline HeckeSphere sphere_tree_full(const HPoint& z, const Int& n, unsigned threads = 1) {
    HeckeSphere total{n, modsurface::reduce(z).first, {}};
    for (Int k = 1; k * k <= n; ++k) {
        if (n % (k * k) != 0) continue;
        HeckeSphere part = sphere_tree(z, n / (k * k), threads);
        for (const auto& [pt, m] : part.points) total.points[pt] += m;
    }
    return total;
}

// True iff processing the primes of N in the given order yields the same
// sphere multiset as the increasing order.
inline bool order_invariance_check(const HPoint& z, const Int& n,
                                   const std::vector<Int>& prime_order) {
    return sphere_tree_ordered(z, n, prime_order).same_multiset(sphere_tree(z, n));
}

} // namespace heckelab::hecke
