#pragma once

/**
 * Exact-rational points of the upper half-plane, integral Moebius actions,
 * and reduction into the standard fundamental domain of PSL(2,Z):
 *
 *     -1/2 <= x < 1/2,  x^2 + y^2 >= 1,  and x <= 0 on the unit circle.
 *
 * Every operation is exact: coordinates are rationals and the reduction is a
 * sequence of integer translations and inversions, so two points are in the
 * same orbit iff their reduced forms are componentwise equal. That exactness
 * is what makes multiplicity counting on Hecke spheres decidable.
 */

#include <numbers>
#include <utility>

#include "heckelab/errors.hpp"
#include "heckelab/rational.hpp"

namespace heckelab::modsurface {

// A point x + iy of the upper half-plane, y > 0.
struct HPoint {
    Rat x;
    Rat y;

    HPoint(Rat x_, Rat y_) : x(std::move(x_)), y(std::move(y_)) {
        if (y <= 0) throw ZeroInput("point must satisfy y > 0");
    }

    bool operator==(const HPoint& o) const { return x == o.x && y == o.y; }

    // Lexicographic (x, y); used as the canonical ordering of sphere points.
    bool operator<(const HPoint& o) const {
        int c = cmp(x, o.x);
        if (c != 0) return c < 0;
        return cmp(y, o.y) < 0;
    }
};

struct IntMatrix2 {
    Int a, b, c, d;

    Int det() const { return a * d - b * c; }

    IntMatrix2 operator*(const IntMatrix2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }

    bool operator==(const IntMatrix2& o) const = default;

    // Fix the sign of a PSL(2,Z) representative: first nonzero of (a, b)
    // positive. Keeps serialized output canonical.
    IntMatrix2 psl_canonical() const {
        bool flip = a != 0 ? a < 0 : b < 0;
        if (!flip) return *this;
        return {-a, -b, -c, -d};
    }
};

inline const IntMatrix2 kIdentity{1, 0, 0, 1};
inline const IntMatrix2 kS{0, -1, 1, 0};  // z -> -1/z
inline const IntMatrix2 kT{1, 1, 0, 1};   // z -> z + 1

// Fractional-linear action (a z + b) / (c z + d), exactly. A matrix of
// negative determinant acts through z -> conj(z) first so the image stays in
// the upper half-plane.
inline HPoint moebius_apply(const IntMatrix2& m, const HPoint& z) {
    Int det = m.det();
    if (det == 0) throw SingularMatrix("matrix has determinant 0");
    Rat cx_d = m.c * z.x + m.d;
    Rat ax_b = m.a * z.x + m.b;
    Rat y2 = z.y * z.y;
    Rat denom = cx_d * cx_d + m.c * m.c * y2;
    Rat nx = ax_b * cx_d + m.a * m.c * y2;
    Rat ny = (det > 0 ? Rat(det) : Rat(-det)) * z.y;
    return HPoint(nx / denom, ny / denom);
}

inline bool is_reduced(const HPoint& z) {
    Rat half = make_rat(1, 2);
    if (z.x < -half || z.x >= half) return false;
    Rat norm = z.x * z.x + z.y * z.y;
    if (norm < 1) return false;
    if (norm == 1 && z.x > 0) return false;
    return true;
}

// Unique reduced representative of the PSL(2,Z)-orbit of z, together with a
// matrix g such that moebius_apply(g, z) is the returned point.
inline std::pair<HPoint, IntMatrix2> reduce(const HPoint& z) {
    Rat x = z.x, y = z.y;
    IntMatrix2 g = kIdentity;
    Rat half = make_rat(1, 2);
    for (;;) {
        // translate x into [-1/2, 1/2)
        Int n = rat_floor(x + half);
        if (n != 0) {
            x -= Rat(n);
            g = IntMatrix2{1, -n, 0, 1} * g;
        }
        Rat norm = x * x + y * y;
        if (norm >= 1) break;
        // |z| < 1: invert
        x = -x / norm;
        y = y / norm;
        g = kS * g;
    }
    // boundary convention on the unit circle: x <= 0
    if (x * x + y * y == 1 && x > 0) {
        x = -x;
        g = kS * g;
    }
    return {HPoint(x, y), g.psl_canonical()};
}

// Indicator test functions whose support sits inside the closed fundamental
// domain. Regions are closed: boundary points count as inside.
class TestFunction {
public:
    enum class Kind { YStrip, Box, Full };

    // indicator of { y >= c }, c >= 1 so the strip lies in the domain
    static TestFunction ystrip(const Rat& c) {
        if (c < 1) throw RegionOutsideDomain("y-strip needs c >= 1");
        TestFunction f;
        f.kind_ = Kind::YStrip;
        f.y0_ = c;
        return f;
    }

    // indicator of [x0,x1] x [y0,y1]
    static TestFunction box(const Rat& x0, const Rat& x1, const Rat& y0, const Rat& y1) {
        Rat half = make_rat(1, 2);
        if (x0 > x1 || y0 > y1 || y0 <= 0)
            throw RegionOutsideDomain("degenerate box");
        if (x0 < -half || x1 > half)
            throw RegionOutsideDomain("box exceeds |x| <= 1/2");
        // lowest point of the box closest to the unit circle
        Rat ax = 0;
        if (x0 > 0) ax = x0;
        if (x1 < 0) ax = -x1;
        if (ax * ax + y0 * y0 < 1)
            throw RegionOutsideDomain("box dips below the unit circle");
        TestFunction f;
        f.kind_ = Kind::Box;
        f.x0_ = x0;
        f.x1_ = x1;
        f.y0_ = y0;
        f.y1_ = y1;
        return f;
    }

    static TestFunction full() {
        TestFunction f;
        f.kind_ = Kind::Full;
        return f;
    }

    Kind kind() const { return kind_; }

    bool contains(const HPoint& z) const {
        switch (kind_) {
            case Kind::Full: return true;
            case Kind::YStrip: return z.y >= y0_;
            case Kind::Box:
                return z.x >= x0_ && z.x <= x1_ && z.y >= y0_ && z.y <= y1_;
        }
        return false;
    }

    // Exact boundary hit; measure zero but reported by the experiments.
    bool on_boundary(const HPoint& z) const {
        switch (kind_) {
            case Kind::Full: return false;
            case Kind::YStrip: return z.y == y0_;
            case Kind::Box:
                if (!contains(z)) return false;
                return z.x == x0_ || z.x == x1_ || z.y == y0_ || z.y == y1_;
        }
        return false;
    }

    // integral of dx dy / y^2 over the region, exact. Defined for strips and
    // boxes; the full domain's value is pi/3 and is handled in measure_of.
    Rat area_rational() const {
        switch (kind_) {
            case Kind::YStrip: return 1 / y0_;
            case Kind::Box: return (x1_ - x0_) * (1 / y0_ - 1 / y1_);
            case Kind::Full: break;
        }
        throw RegionOutsideDomain("no rational area for the full domain");
    }

    std::string describe() const {
        switch (kind_) {
            case Kind::YStrip: return "ystrip:" + rat_string(y0_);
            case Kind::Box:
                return "box:" + rat_string(x0_) + "," + rat_string(x1_) + "," +
                       rat_string(y0_) + "," + rat_string(y1_);
            case Kind::Full: return "full";
        }
        return "?";
    }

private:
    TestFunction() = default;

    Kind kind_{Kind::Full};
    Rat x0_, x1_, y0_, y1_;
};

// mu(region) for the hyperbolic measure normalized to a probability measure
// on the modular surface: d(mu) = (3/pi) dx dy / y^2.
inline double measure_of(const TestFunction& f) {
    if (f.kind() == TestFunction::Kind::Full) return 1.0;
    return 3.0 / std::numbers::pi * f.area_rational().get_d();
}

} // namespace heckelab::modsurface
