#pragma once

/**
 * Numerical verification that Hecke spheres spread out over the modular
 * surface: multiplicity-weighted averages of indicator test functions over
 * spheres of growing radius, tabulated against the integral for the
 * normalized hyperbolic measure.
 *
 * Averages are formed as exact rationals (hit count over total multiplicity)
 * and only converted to floating point for reporting, so a table built twice
 * is identical bit for bit.
 */

#include <cmath>
#include <vector>

#include "heckelab/hecke.hpp"
#include "heckelab/modsurface.hpp"
#include "heckelab/rational.hpp"

namespace heckelab::equidist {

using modsurface::HPoint;
using modsurface::TestFunction;

struct EmpiricalAverage {
    Rat value;         // exact weighted average, in [0,1] for indicators
    Int hits;          // multiplicity-weighted points inside the region
    Int total;         // sphere cardinality with multiplicity
    Int boundary_hits; // points landing exactly on the region boundary
};

// Multiplicity-weighted average of f over the sphere of radius n centered at
// z, via the tree construction. Boundary points count as inside and are
// tallied separately.
inline EmpiricalAverage empirical_average_exact(const HPoint& z, const Int& n,
                                                const TestFunction& f,
                                                unsigned threads = 1) {
    hecke::HeckeSphere sphere = hecke::sphere_tree(z, n, threads);
    EmpiricalAverage r{Rat(0), Int(0), Int(0), Int(0)};
    for (const auto& [pt, mult] : sphere.points) {
        r.total += mult;
        if (f.contains(pt)) r.hits += mult;
        if (f.on_boundary(pt)) r.boundary_hits += mult;
    }
    r.value = make_rat(r.hits, r.total);
    return r;
}

inline double empirical_average(const HPoint& z, const Int& n, const TestFunction& f,
                                unsigned threads = 1) {
    return empirical_average_exact(z, n, f, threads).value.get_d();
}

struct EquidistRow {
    Int radius;
    Int sphere_size;   // with multiplicity
    Rat empirical;     // exact average
    double target;     // mu(f)
    double abs_error;  // |empirical - target|
    Int boundary_hits;
};

struct EquidistReport {
    HPoint center;
    TestFunction test;
    std::vector<EquidistRow> rows;
};

// One row per radius; rows are independent and reproducible.
inline EquidistReport convergence_table(const HPoint& z, const std::vector<Int>& radii,
                                        const TestFunction& f, unsigned threads = 1) {
    if (radii.empty()) throw ZeroInput("radius list must be nonempty");
    EquidistReport report{modsurface::reduce(z).first, f, {}};
    double target = modsurface::measure_of(f);
    for (const Int& n : radii) {
        EmpiricalAverage avg = empirical_average_exact(z, n, f, threads);
        EquidistRow row;
        row.radius = n;
        row.sphere_size = avg.total;
        row.empirical = avg.value;
        row.target = target;
        row.abs_error = std::abs(avg.value.get_d() - target);
        row.boundary_hits = avg.boundary_hits;
        report.rows.push_back(std::move(row));
    }
    return report;
}

} // namespace heckelab::equidist
