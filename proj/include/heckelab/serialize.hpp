#pragma once

/**
 * Deterministic JSON/CSV serialization shared by the CLI and the test
 * drivers. Rationals print as "num/den" with positive denominator and gcd 1,
 * sphere multisets in ascending point order, object keys sorted; identical
 * inputs always serialize to identical bytes.
 */

#include <json.hpp>

#include <cstdio>
#include <string>

#include "heckelab/bttree.hpp"
#include "heckelab/equidist.hpp"
#include "heckelab/hecke.hpp"
#include "heckelab/modsurface.hpp"
#include "heckelab/padic.hpp"
#include "heckelab/solenoid.hpp"

namespace heckelab::io {

using json = nlohmann::ordered_json;

// Fixed-format double: shortest representation with 12 significant digits,
// stable across runs.
inline std::string num_string(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
}

inline json point_json(const modsurface::HPoint& z) {
    return json{{"x", rat_string(z.x)}, {"y", rat_string(z.y)}};
}

inline json matrix_json(const modsurface::IntMatrix2& m) {
    return json{{"a", m.a.get_str()},
                {"b", m.b.get_str()},
                {"c", m.c.get_str()},
                {"d", m.d.get_str()}};
}

inline json sphere_points_json(const hecke::HeckeSphere& s) {
    json arr = json::array();
    for (const auto& [pt, mult] : s.points) {
        json row = point_json(pt);
        row["mult"] = mult.get_str();
        arr.push_back(row);
    }
    return arr;
}

inline json raw_points_json(const std::vector<modsurface::HPoint>& pts) {
    json arr = json::array();
    for (const auto& pt : pts) {
        json row = point_json(pt);
        row["mult"] = "1";
        arr.push_back(row);
    }
    return arr;
}

inline json padic_json(const padic::PAdicValue& v) {
    json j;
    j["prime"] = v.prime().get_str();
    j["precision"] = v.precision();
    if (v.is_zero()) {
        j["valuation"] = "inf";
        j["unit"] = "0";
        j["digits"] = json::array();
    } else {
        j["valuation"] = v.valuation();
        j["unit"] = v.unit_digits().get_str();
        json ds = json::array();
        for (int d : v.unit_digit_list()) ds.push_back(d);
        j["digits"] = ds;
    }
    j["abs"] = rat_string(v.abs_value());
    return j;
}

inline json vertex_json(const bttree::BTVertex& v) {
    return json{{"m", v.scale}, {"u", rat_string(v.shift)}};
}

inline json report_json(const equidist::EquidistReport& r) {
    json j;
    j["center"] = point_json(r.center);
    j["test"] = r.test.describe();
    json rows = json::array();
    for (const auto& row : r.rows) {
        rows.push_back(json{{"N", row.radius.get_str()},
                            {"size", row.sphere_size.get_str()},
                            {"empirical", num_string(row.empirical.get_d())},
                            {"empirical_exact", rat_string(row.empirical)},
                            {"target", num_string(row.target)},
                            {"abs_error", num_string(row.abs_error)},
                            {"boundary_hits", row.boundary_hits.get_str()}});
    }
    j["rows"] = rows;
    return j;
}

inline std::string report_csv(const equidist::EquidistReport& r) {
    std::string out = "N,size,empirical,target,abs_error\n";
    for (const auto& row : r.rows) {
        out += row.radius.get_str() + "," + row.sphere_size.get_str() + "," +
               num_string(row.empirical.get_d()) + "," + num_string(row.target) + "," +
               num_string(row.abs_error) + "\n";
    }
    return out;
}

} // namespace heckelab::io
