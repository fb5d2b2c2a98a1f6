#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "heckelab/modsurface.hpp"
#include "test_util.hpp"

using namespace heckelab;
using namespace heckelab::modsurface;
using testutil::rand_long;

namespace {

// --- independent oracles -----------------------------------------------

// Adaptive Simpson quadrature.
double simpson(const std::function<double(double)>& f, double a, double b) {
    double m = 0.5 * (a + b);
    return (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
}

double adaptive(const std::function<double(double)>& f, double a, double b,
                double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double left = simpson(f, a, m), right = simpson(f, m, b);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive(f, a, m, left, tol / 2, depth - 1) +
           adaptive(f, m, b, right, tol / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-12) {
    if (a == b) return 0.0;
    return adaptive(f, a, b, simpson(f, a, b), tol, 40);
}

// Numerical mu(region) for a strip or box: dx dy/y^2 by nested quadrature
// (the y-tail beyond Y contributes exactly 1/Y).
double measure_by_quadrature(double x0, double x1, double y0, double y1) {
    const double kCut = 1e5;
    auto inner = [&](double) {
        double hi = std::min(y1, kCut);
        double v = integrate([](double y) { return 1.0 / (y * y); }, y0, hi);
        if (y1 > kCut) v += 1.0 / kCut - 1.0 / y1;
        return v;
    };
    double area = integrate(inner, x0, x1);
    return 3.0 / std::numbers::pi * area;
}

// All images of z under words of length <= max_len in S, T, T^-1.
std::vector<HPoint> orbit_ball(const HPoint& z, int max_len) {
    std::vector<HPoint> frontier{z}, all{z};
    IntMatrix2 tinv{1, -1, 0, 1};
    for (int i = 0; i < max_len; ++i) {
        std::vector<HPoint> next;
        for (const HPoint& w : frontier) {
            for (const IntMatrix2& g : {kS, kT, tinv}) next.push_back(moebius_apply(g, w));
        }
        all.insert(all.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return all;
}

HPoint rand_point(std::mt19937_64& g) {
    Rat x = make_rat(rand_long(g, -120, 120), rand_long(g, 1, 40));
    Rat y = testutil::rand_positive_rational(g, 80, 25);
    return HPoint(x, y);
}

} // namespace

TEST_CASE("moebius action on fixed inputs") {
    HPoint i(Rat(0), Rat(1));
    CHECK(moebius_apply(kIdentity, i) == i);
    CHECK(moebius_apply(kS, i) == i); // i is the fixed point of S

    HPoint z(make_rat(1, 2), make_rat(1, 2));
    HPoint img = moebius_apply(kS, z);
    CHECK(img.x == -1);
    CHECK(img.y == 1);

    CHECK_THROWS_AS(moebius_apply(IntMatrix2{2, 4, 1, 2}, i), SingularMatrix);
}

TEST_CASE("moebius with negative determinant keeps y > 0") {
    HPoint z(make_rat(1, 3), make_rat(7, 5));
    HPoint img = moebius_apply(IntMatrix2{1, 0, 0, -1}, z);
    CHECK(img.x == make_rat(-1, 3));
    CHECK(img.y == make_rat(7, 5));
}

TEST_CASE("reduce on fixed inputs") {
    HPoint i(Rat(0), Rat(1));
    auto [ri, gi] = reduce(i);
    CHECK(ri == i);
    CHECK(gi == kIdentity);

    auto [r1, g1] = reduce(HPoint(make_rat(5, 2), Rat(3)));
    CHECK(r1.x == make_rat(-1, 2));
    CHECK(r1.y == 3);

    // (1/2, 1/2) is equivalent to i
    auto [r2, g2] = reduce(HPoint(make_rat(1, 2), make_rat(1, 2)));
    CHECK(r2 == i);
    CHECK(moebius_apply(g2, HPoint(make_rat(1, 2), make_rat(1, 2))) == i);
}

TEST_CASE("word-search oracle confirms (1/2,1/2) ~ i") {
    HPoint z(make_rat(1, 2), make_rat(1, 2));
    HPoint i(Rat(0), Rat(1));
    bool found = false;
    for (const HPoint& w : orbit_ball(z, 6))
        if (w == i) found = true;
    CHECK(found);
}

TEST_CASE("reduce output satisfies the domain inequalities exactly") {
    auto g = testutil::rng(10);
    Rat half = make_rat(1, 2);
    for (int t = 0; t < 400; ++t) {
        HPoint z = rand_point(g);
        auto [r, m] = reduce(z);
        CHECK(r.x >= -half);
        CHECK(r.x < half);
        Rat norm = r.x * r.x + r.y * r.y;
        CHECK(norm >= 1);
        if (norm == 1) CHECK(r.x <= 0);
        CHECK(is_reduced(r));
        // the reducing matrix really carries z to the reduced point
        CHECK(moebius_apply(m, z) == r);
        CHECK((m.det() == 1));
        // idempotent
        auto [r2, m2] = reduce(r);
        CHECK(r2 == r);
        CHECK(m2 == kIdentity);
    }
}

TEST_CASE("reduce is constant on PSL(2,Z) orbits") {
    auto g = testutil::rng(11);
    IntMatrix2 tinv{1, -1, 0, 1};
    for (int t = 0; t < 300; ++t) {
        HPoint z = rand_point(g);
        HPoint moved = z;
        int len = static_cast<int>(rand_long(g, 1, 12));
        for (int s = 0; s < len; ++s) {
            switch (rand_long(g, 0, 2)) {
                case 0: moved = moebius_apply(kS, moved); break;
                case 1: moved = moebius_apply(kT, moved); break;
                default: moved = moebius_apply(tinv, moved); break;
            }
        }
        CHECK(reduce(moved).first == reduce(z).first);
    }
}

TEST_CASE("boundary convention picks one representative per orbit") {
    // x = 1/2 and x = -1/2 are T-equivalent; the half-open interval keeps -1/2
    auto [r, g] = reduce(HPoint(make_rat(1, 2), Rat(3)));
    CHECK(r.x == make_rat(-1, 2));
    // the two arc points (x, y), (-x, y) with x^2+y^2 = 1 are S-equivalent
    auto [ra, ga] = reduce(HPoint(make_rat(5, 13), make_rat(12, 13)));
    CHECK(ra.x == make_rat(-5, 13));
    CHECK(ra.y == make_rat(12, 13));
}

TEST_CASE("measure of fixed regions") {
    double mu2 = measure_of(TestFunction::ystrip(Rat(2)));
    CHECK(mu2 == doctest::Approx(3.0 / (2.0 * std::numbers::pi)).epsilon(1e-12));
    double mu32 = measure_of(TestFunction::ystrip(make_rat(3, 2)));
    CHECK(mu32 == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-12));
    CHECK(measure_of(TestFunction::full()) == 1.0);
}

TEST_CASE("closed forms agree with quadrature") {
    CHECK(measure_of(TestFunction::ystrip(Rat(2))) ==
          doctest::Approx(measure_by_quadrature(-0.5, 0.5, 2.0, 1e300)).epsilon(1e-8));
    CHECK(measure_of(TestFunction::ystrip(make_rat(3, 2))) ==
          doctest::Approx(measure_by_quadrature(-0.5, 0.5, 1.5, 1e300)).epsilon(1e-8));
    TestFunction box = TestFunction::box(make_rat(-1, 4), make_rat(1, 4), Rat(1), Rat(2));
    CHECK(measure_of(box) ==
          doctest::Approx(measure_by_quadrature(-0.25, 0.25, 1.0, 2.0)).epsilon(1e-8));
}

TEST_CASE("measure is additive on disjoint boxes") {
    Rat x0 = make_rat(-2, 5), xm = make_rat(1, 10), x1 = make_rat(2, 5);
    Rat y0 = make_rat(11, 10), y1 = Rat(3);
    TestFunction whole = TestFunction::box(x0, x1, y0, y1);
    TestFunction left = TestFunction::box(x0, xm, y0, y1);
    TestFunction right = TestFunction::box(xm, x1, y0, y1);
    CHECK(whole.area_rational() == left.area_rational() + right.area_rational());
}

TEST_CASE("regions outside the domain are rejected") {
    CHECK_THROWS_AS(TestFunction::ystrip(make_rat(1, 2)), RegionOutsideDomain);
    CHECK_THROWS_AS(TestFunction::box(make_rat(-1, 2), make_rat(1, 2), make_rat(9, 10), Rat(2)),
                    RegionOutsideDomain);
    CHECK_THROWS_AS(TestFunction::box(make_rat(-3, 5), Rat(0), Rat(1), Rat(2)),
                    RegionOutsideDomain);
    // off-center box may go below y = 1 as long as it clears the circle
    CHECK_NOTHROW(TestFunction::box(make_rat(2, 5), make_rat(1, 2), make_rat(93, 100), Rat(2)));
}

TEST_CASE("test function evaluation is closed-region") {
    TestFunction f = TestFunction::ystrip(Rat(2));
    CHECK(f.contains(HPoint(Rat(0), Rat(2))));
    CHECK(f.on_boundary(HPoint(Rat(0), Rat(2))));
    CHECK(!f.contains(HPoint(Rat(0), make_rat(199, 100))));
    TestFunction b = TestFunction::box(make_rat(-1, 4), make_rat(1, 4), Rat(1), Rat(2));
    CHECK(b.contains(HPoint(make_rat(1, 4), make_rat(3, 2))));
    CHECK(b.on_boundary(HPoint(make_rat(1, 4), make_rat(3, 2))));
    CHECK(!b.on_boundary(HPoint(Rat(0), make_rat(3, 2))));
}
