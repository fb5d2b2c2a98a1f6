#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "heckelab/hecke.hpp"
#include "test_util.hpp"

using namespace heckelab;
using namespace heckelab::hecke;
using modsurface::HPoint;
using modsurface::IntMatrix2;
using testutil::rand_long;

namespace {

const HPoint kI{Rat(0), Rat(1)};
const HPoint kGeneric{make_rat(1, 3), make_rat(7, 5)};

HPoint rand_point(std::mt19937_64& g) {
    Rat x = make_rat(rand_long(g, -60, 60), rand_long(g, 1, 24));
    Rat y = testutil::rand_positive_rational(g, 40, 16);
    return HPoint(x, y);
}

PointMultiset reduce_multiset(const std::vector<HPoint>& pts) {
    PointMultiset out;
    for (const HPoint& p : pts) out[modsurface::reduce(p).first] += 1;
    return out;
}

} // namespace

TEST_CASE("neighbor formulas in labeling order") {
    HPoint z = kGeneric;
    auto nb3 = neighbors(z, Int(3));
    REQUIRE(nb3.size() == 4);
    CHECK(nb3[0] == HPoint(Rat(1), make_rat(21, 5)));          // 3z
    CHECK(nb3[1] == HPoint(make_rat(1, 9), make_rat(7, 15))); // z/3
    CHECK(nb3[2] == HPoint(make_rat(4, 9), make_rat(7, 15))); // (z+1)/3
    CHECK(nb3[3] == HPoint(make_rat(7, 9), make_rat(7, 15))); // (z+2)/3

    auto nb2 = neighbors(kI, Int(2));
    REQUIRE(nb2.size() == 3);
    CHECK(nb2[0] == HPoint(Rat(0), Rat(2)));
    CHECK(nb2[1] == HPoint(Rat(0), make_rat(1, 2)));
    CHECK(nb2[2] == HPoint(make_rat(1, 2), make_rat(1, 2)));

    CHECK_THROWS_AS(neighbors(kI, Int(4)), NotPrime);
}

TEST_CASE("neighbors of i at p=2 collapse with multiplicity") {
    PointMultiset m = reduce_multiset(neighbors(kI, Int(2)));
    REQUIRE(m.size() == 2);
    CHECK(m.at(HPoint(Rat(0), Rat(2))) == 2);
    CHECK(m.at(kI) == 1);
}

TEST_CASE("walk follows labeled words") {
    CHECK(walk(kGeneric, {}) == modsurface::reduce(kGeneric).first);
    CHECK(walk(kI, {{Int(2), {0}}}) == HPoint(Rat(0), Rat(2)));
    CHECK(walk(kI, {{Int(2), {0, 0}}}) == HPoint(Rat(0), Rat(4)));
    // letter 1 (divide, shift 0) undoes letter 0 (multiply) and vice versa
    CHECK_THROWS_AS(walk(kI, {{Int(2), {0, 1}}}), InvalidWord);
    CHECK_THROWS_AS(walk(kI, {{Int(2), {2, 0}}}), InvalidWord);
    CHECK_THROWS_AS(walk(kI, {{Int(2), {3}}}), InvalidWord);
    CHECK_THROWS_AS(walk(kI, {{Int(6), {0}}}), NotPrime);
    // allowed continuations: multiply twice, or divide with any shift
    CHECK_NOTHROW(walk(kI, {{Int(2), {1, 2}}}));
    CHECK_NOTHROW(walk(kI, {{Int(3), {0, 2, 3}}}));
}

TEST_CASE("walk composes per-prime legs in increasing prime order") {
    // multiply at 2 then at 3: i -> 2i -> 6i
    CHECK(walk(kI, {{Int(2), {0}}, {Int(3), {0}}}) == HPoint(Rat(0), Rat(6)));
    auto s = sphere_tree(kI, Int(6));
    CHECK(s.points.count(HPoint(Rat(0), Rat(6))) == 1);
    // walking an address of the sphere shape always lands inside the sphere
    CHECK(s.points.count(walk(kI, {{Int(2), {2}}, {Int(3), {3}}})) == 1);
}

TEST_CASE("sphere cardinality matches the divisor-sum formula") {
    CHECK(expected_cardinality(Int(1)) == 1);
    CHECK(expected_cardinality(Int(12)) == 24);
    CHECK(expected_cardinality(Int(30)) == 72);
    for (int n = 1; n <= 120; ++n) {
        HeckeSphere s = sphere_tree(kI, Int(n));
        CHECK(s.total_multiplicity() == expected_cardinality(Int(n)));
    }
    for (const long p : {2L, 3L, 5L, 7L, 11L}) {
        HeckeSphere s = sphere_tree(kGeneric, Int(p));
        CHECK(s.total_multiplicity() == p + 1);
    }
}

TEST_CASE("radius-1 sphere is the reduced center") {
    HeckeSphere s = sphere_tree(kGeneric, Int(1));
    REQUIRE(s.points.size() == 1);
    CHECK(s.points.begin()->first == modsurface::reduce(kGeneric).first);
    CHECK(s.points.begin()->second == 1);
}

TEST_CASE("sphere points are reduced") {
    HeckeSphere s = sphere_tree(kGeneric, Int(60));
    for (const auto& [pt, mult] : s.points) {
        CHECK(modsurface::is_reduced(pt));
        CHECK(mult > 0);
    }
}

TEST_CASE("coset representatives") {
    auto r1 = coset_representatives(Int(1));
    REQUIRE(r1.size() == 1);
    CHECK(r1[0] == IntMatrix2{1, 0, 0, 1});

    auto r2 = coset_representatives(Int(2));
    REQUIRE(r2.size() == 3);
    CHECK(r2[0] == IntMatrix2{2, 0, 0, 1});
    CHECK(r2[1] == IntMatrix2{1, 0, 0, 2});
    CHECK(r2[2] == IntMatrix2{1, 1, 0, 2});

    auto r6 = coset_representatives(Int(6));
    CHECK(r6.size() == 12);
    for (const auto& m : r6) {
        CHECK(m.a * m.d == 6);
        CHECK(m.c == 0);
        CHECK(m.b >= 0);
        CHECK(m.b < m.d);
        CHECK(gcd(gcd(m.a, m.b), m.d) == 1);
    }

    // without primitivity the count is the divisor sum sigma(N)
    CHECK(coset_representatives(Int(4), false).size() == 7);
    CHECK(coset_representatives(Int(4), true).size() == 6);
}

TEST_CASE("coset sphere on fixed inputs") {
    HeckeSphere s = sphere_coset(kI, Int(2));
    REQUIRE(s.points.size() == 2);
    CHECK(s.points.at(HPoint(Rat(0), Rat(2))) == 2);
    CHECK(s.points.at(kI) == 1);
    HeckeSphere one = sphere_coset(kGeneric, Int(1));
    CHECK(one.points.begin()->first == modsurface::reduce(kGeneric).first);
}

TEST_CASE("tree and coset spheres agree as multisets") {
    for (int n = 1; n <= 60; ++n) {
        CAPTURE(n);
        CHECK(sphere_tree(kI, Int(n)).same_multiset(sphere_coset(kI, Int(n))));
        CHECK(sphere_tree(kGeneric, Int(n)).same_multiset(sphere_coset(kGeneric, Int(n))));
    }
    CHECK(sphere_tree(kGeneric, Int(30)).same_multiset(sphere_coset(kGeneric, Int(30))));
}

TEST_CASE("full correspondence includes imprimitive sublattices") {
    for (const long n : {4L, 12L, 36L}) {
        HeckeSphere tree = sphere_tree_full(kGeneric, Int(n));
        HeckeSphere coset = sphere_coset(kGeneric, Int(n), 1, false);
        CHECK(tree.same_multiset(coset));
        Int sigma = 0;
        for (Int d = 1; d <= n; ++d)
            if (Int(n) % d == 0) sigma += d;
        CHECK(tree.total_multiplicity() == sigma);
    }
}

TEST_CASE("neighbor relation is symmetric on reduced classes") {
    auto g = testutil::rng(22);
    for (const long pl : {2L, 3L, 5L}) {
        Int p(pl);
        for (int t = 0; t < 25; ++t) {
            HPoint z = modsurface::reduce(rand_point(g)).first;
            PointMultiset nz = reduce_multiset(neighbors(z, p));
            for (const auto& [w, mult] : nz) {
                PointMultiset nw = reduce_multiset(neighbors(w, p));
                CHECK(nw.count(z) == 1);
            }
        }
    }
}

TEST_CASE("spheres compose multiplicatively over coprime radii") {
    auto compose = [](const HPoint& z, long m, long n) {
        HeckeSphere inner = sphere_tree(z, Int(m));
        PointMultiset total;
        for (const auto& [w, mult] : inner.points) {
            HeckeSphere outer = sphere_tree(w, Int(n));
            for (const auto& [pt, c] : outer.points) total[pt] += mult * c;
        }
        return total;
    };
    for (const auto& [m, n] : std::vector<std::pair<long, long>>{{4, 9}, {2, 15}, {8, 3}}) {
        CHECK(sphere_tree(kGeneric, Int(m * n)).points == compose(kGeneric, m, n));
        CHECK(sphere_tree(kI, Int(m * n)).points == compose(kI, m, n));
    }
}

TEST_CASE("prime processing order does not change the sphere") {
    CHECK(order_invariance_check(kI, Int(6), {Int(3), Int(2)}));
    CHECK(order_invariance_check(kI, Int(8), {Int(2)}));
    CHECK(order_invariance_check(kGeneric, Int(30), {Int(5), Int(3), Int(2)}));
    CHECK(order_invariance_check(kGeneric, Int(60), {Int(3), Int(5), Int(2)}));
    CHECK_THROWS_AS(order_invariance_check(kI, Int(6), {Int(5), Int(2)}), ZeroInput);
    CHECK_THROWS_AS(order_invariance_check(kI, Int(6), {Int(2)}), ZeroInput);
}

TEST_CASE("parallel enumeration is deterministic") {
    HeckeSphere serial = sphere_tree(kGeneric, Int(84));
    HeckeSphere par = sphere_tree(kGeneric, Int(84), 4);
    CHECK(serial.same_multiset(par));
    CHECK(sphere_coset(kGeneric, Int(84)).same_multiset(sphere_coset(kGeneric, Int(84), 4)));
}

TEST_CASE("raw sphere listings have the full cardinality") {
    auto raw = sphere_tree_raw(kI, Int(12));
    CHECK(Int(raw.size()) == expected_cardinality(Int(12)));
    CHECK(reduce_multiset(raw) == sphere_tree(kI, Int(12)).points);
    auto rawc = sphere_coset_raw(kI, Int(12));
    CHECK(rawc.size() == raw.size());
    CHECK(reduce_multiset(rawc) == sphere_tree(kI, Int(12)).points);
}
