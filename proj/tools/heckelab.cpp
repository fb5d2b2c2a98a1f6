/**
 * heckelab command-line interface.
 *
 * Subcommands: padic, reduce, neighbors, sphere, tree, solenoid, equidist.
 * All output is deterministic: identical invocations produce byte-identical
 * bytes (canonical rational strings, fixed field order, fixed float format).
 */

#include <CLI11.hpp>

#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "heckelab/config.hpp"
#include "heckelab/equidist.hpp"
#include "heckelab/serialize.hpp"

namespace hl = heckelab;
using hl::Int;
using hl::Rat;
using hl::io::json;

namespace {

hl::modsurface::HPoint parse_point(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("point must be <x>,<y> with rational parts");
    return hl::modsurface::HPoint(hl::parse_rational(s.substr(0, comma)),
                                  hl::parse_rational(s.substr(comma + 1)));
}

// --- tiny expression evaluator over Q_p ------------------------------------

struct ExprParser {
    std::string src;
    std::size_t pos = 0;
    Int prime;
    int precision;

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    hl::padic::PAdicValue parse() {
        auto v = expr();
        skip_ws();
        if (pos != src.size())
            throw std::invalid_argument("trailing characters in expression");
        return v;
    }

    hl::padic::PAdicValue expr() {
        auto v = term();
        for (;;) {
            if (eat('+'))
                v = hl::padic::add(v, term());
            else if (eat('-'))
                v = hl::padic::sub(v, term());
            else
                return v;
        }
    }

    hl::padic::PAdicValue term() {
        auto v = factor();
        for (;;) {
            if (eat('*'))
                v = hl::padic::mul(v, factor());
            else if (eat('/'))
                v = hl::padic::mul(v, hl::padic::inv(factor()));
            else
                return v;
        }
    }

    hl::padic::PAdicValue factor() {
        skip_ws();
        if (eat('-')) return hl::padic::negate(factor());
        if (eat('(')) {
            auto v = expr();
            if (!eat(')')) throw std::invalid_argument("missing ')'");
            return v;
        }
        std::size_t start = pos;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        if (start == pos) throw std::invalid_argument("expected a number");
        return hl::padic::from_rational(Rat(Int(src.substr(start, pos - start))), prime,
                                        precision);
    }
};

std::vector<Int> sieve_primes(long max) {
    std::vector<Int> out;
    std::vector<bool> composite(std::max(2L, max + 1), false);
    for (long i = 2; i <= max; ++i) {
        if (composite[i]) continue;
        out.emplace_back(i);
        for (long j = 2 * i; j <= max; j += i) composite[j] = true;
    }
    return out;
}

std::vector<Int> parse_radius_list(const std::string& s) {
    std::vector<Int> out;
    if (s.rfind("primes:", 0) == 0) {
        return sieve_primes(std::stol(s.substr(7)));
    }
    if (s.rfind("powers:", 0) == 0) {
        auto rest = s.substr(7);
        auto colon = rest.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("powers list must be powers:<p>:<max>");
        Int p(rest.substr(0, colon));
        Int max(rest.substr(colon + 1));
        for (Int v = p; v <= max; v *= p) out.push_back(v);
        return out;
    }
    std::size_t start = 0;
    while (start <= s.size()) {
        auto comma = s.find(',', start);
        std::string tok =
            comma == std::string::npos ? s.substr(start) : s.substr(start, comma - start);
        if (!tok.empty()) out.emplace_back(tok);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument("empty radius list");
    return out;
}

hl::modsurface::TestFunction parse_test(const std::string& s) {
    if (s.rfind("ystrip:", 0) == 0)
        return hl::modsurface::TestFunction::ystrip(hl::parse_rational(s.substr(7)));
    if (s == "full") return hl::modsurface::TestFunction::full();
    if (s.rfind("box:", 0) == 0) {
        std::vector<Rat> parts;
        std::string rest = s.substr(4);
        std::size_t start = 0;
        for (int i = 0; i < 4; ++i) {
            auto comma = rest.find(',', start);
            std::string tok = comma == std::string::npos ? rest.substr(start)
                                                         : rest.substr(start, comma - start);
            parts.push_back(hl::parse_rational(tok));
            start = comma == std::string::npos ? rest.size() : comma + 1;
        }
        return hl::modsurface::TestFunction::box(parts[0], parts[1], parts[2], parts[3]);
    }
    throw std::invalid_argument("test must be ystrip:<c>, box:<x0,x1,y0,y1> or full");
}

struct Output {
    std::string path;       // empty = stdout
    std::string output_dir; // prefix for relative paths

    void emit(const std::string& payload) const {
        if (path.empty()) {
            std::cout << payload;
            return;
        }
        std::filesystem::path p(path);
        if (p.is_relative()) p = std::filesystem::path(output_dir) / p;
        std::ofstream f(p);
        if (!f) throw std::runtime_error("cannot open output file " + p.string());
        f << payload;
    }
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hecke spheres, p-adic arithmetic and lattice trees on the modular surface"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::optional<int> precision_flag;
    std::optional<std::string> format_flag;
    std::optional<unsigned> threads_flag;
    app.add_option("--config", config_path, "config file (key=value)");
    app.add_option("--precision", precision_flag, "p-adic working precision");
    app.add_option("--format", format_flag, "output format: json or csv");
    app.add_option("--out", out_path, "write output to a file instead of stdout");
    app.add_option("--threads", threads_flag, "worker threads for sphere enumeration");

    // padic
    auto* padic_cmd = app.add_subcommand("padic", "arithmetic in Q_p and the product formula");
    padic_cmd->fallthrough();
    std::string padic_p = "2";
    padic_cmd->add_option("--p", padic_p, "prime");
    auto* eval_cmd = padic_cmd->add_subcommand("eval", "evaluate an expression in Q_p");
    eval_cmd->fallthrough();
    std::string expr_text;
    eval_cmd->add_option("expr", expr_text, "expression over integers with + - * / ( )")
        ->required();
    auto* pf_cmd = padic_cmd->add_subcommand("product-formula",
                                             "per-place absolute values of a rational");
    pf_cmd->fallthrough();
    std::string pf_value;
    pf_cmd->add_option("value", pf_value, "nonzero rational num/den")->required();
    padic_cmd->require_subcommand(1);

    // reduce
    auto* reduce_cmd = app.add_subcommand("reduce", "reduce a point into the fundamental domain");
    reduce_cmd->fallthrough();
    std::string reduce_point;
    reduce_cmd->add_option("--point", reduce_point, "x_num/x_den,y_num/y_den")->required();

    // neighbors
    auto* nb_cmd = app.add_subcommand("neighbors", "the p+1 Hecke neighbor formulas of a point");
    nb_cmd->fallthrough();
    std::string nb_p = "2", nb_point;
    nb_cmd->add_option("--p", nb_p, "prime");
    nb_cmd->add_option("--point", nb_point, "x,y")->required();

    // sphere
    auto* sphere_cmd = app.add_subcommand("sphere", "Hecke sphere of radius N");
    sphere_cmd->fallthrough();
    std::string sphere_n, sphere_point, sphere_method = "tree";
    bool sphere_raw = false, sphere_reduced = false, sphere_full = false;
    sphere_cmd->add_option("--N", sphere_n, "radius")->required();
    sphere_cmd->add_option("--point", sphere_point, "x,y")->required();
    sphere_cmd->add_option("--method", sphere_method, "tree | coset | both");
    sphere_cmd->add_flag("--raw", sphere_raw, "emit unreduced walk endpoints");
    sphere_cmd->add_flag("--reduced", sphere_reduced, "emit the reduced multiset (default)");
    sphere_cmd->add_flag("--full", sphere_full, "include imprimitive sublattices");

    // tree
    auto* tree_cmd = app.add_subcommand("tree", "the (p+1)-regular lattice tree at p");
    tree_cmd->fallthrough();
    std::string tree_p = "2";
    tree_cmd->add_option("--p", tree_p, "prime");
    auto* tsphere_cmd = tree_cmd->add_subcommand("sphere", "vertices at distance n from the root");
    tsphere_cmd->fallthrough();
    long tree_n = 1;
    tsphere_cmd->add_option("--n", tree_n, "radius")->required();
    auto* tdist_cmd = tree_cmd->add_subcommand("distance", "graph distance between two vertices");
    tdist_cmd->fallthrough();
    std::string tree_v, tree_w;
    tdist_cmd->add_option("--v", tree_v, "m,u")->required();
    tdist_cmd->add_option("--w", tree_w, "m,u")->required();
    tree_cmd->require_subcommand(1);

    // solenoid
    auto* sol_cmd = app.add_subcommand("solenoid", "orbit statistics of the solenoid flow");
    sol_cmd->fallthrough();
    std::string sol_p = "2";
    sol_cmd->add_option("--p", sol_p, "prime");
    auto* orbit_cmd = sol_cmd->add_subcommand("orbit", "integer-time orbit and cylinder histogram");
    orbit_cmd->fallthrough();
    long sol_steps = 0;
    int sol_depth = 1;
    long sol_period = 0;
    std::string sol_base = "0", sol_fiber = "0";
    orbit_cmd->add_option("--steps", sol_steps, "number of time steps")->required();
    orbit_cmd->add_option("--depth", sol_depth, "cylinder depth d (residues mod p^d)")->required();
    orbit_cmd->add_option("--base", sol_base, "initial circle coordinate (rational)");
    orbit_cmd->add_option("--fiber", sol_fiber, "initial fiber coordinate (rational)");
    orbit_cmd->add_option("--period", sol_period, "use the compact piece p^c Z_p (circle length p^c)");
    sol_cmd->require_subcommand(1);

    // equidist
    auto* eq_cmd = app.add_subcommand("equidist", "sphere averages against the hyperbolic measure");
    eq_cmd->fallthrough();
    std::string eq_point, eq_list, eq_test;
    eq_cmd->add_option("--point", eq_point, "center x,y")->required();
    eq_cmd->add_option("--N-list", eq_list, "csv | primes:<max> | powers:<p>:<max>")->required();
    eq_cmd->add_option("--test", eq_test, "ystrip:<c> | box:<x0,x1,y0,y1> | full")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        hl::config::Config cfg = hl::config::load(config_path);
        if (precision_flag) cfg.default_precision = *precision_flag;
        if (format_flag) cfg.default_format = *format_flag;
        if (threads_flag) cfg.threads = *threads_flag;
        hl::config::validate(cfg);
        Output out{out_path, cfg.output_dir};
        const int prec = cfg.default_precision;
        const unsigned threads = cfg.threads;
        const bool csv = cfg.default_format == "csv";

        if (eval_cmd->parsed()) {
            Int p(padic_p);
            if (!hl::is_prime(p)) throw hl::NotPrime(p.get_str() + " is not prime");
            ExprParser parser{expr_text, 0, p, prec};
            json j = hl::io::padic_json(parser.parse());
            j["expr"] = expr_text;
            out.emit(dump(j));
        } else if (pf_cmd->parsed()) {
            Rat r = hl::parse_rational(pf_value);
            json places = json::array();
            for (const auto& place : hl::padic::support(r)) {
                places.push_back(
                    json{{"place", place.infinite ? "inf" : place.prime.get_str()},
                         {"abs", hl::rat_string(hl::padic::abs_at_place(r, place))}});
            }
            json j{{"value", hl::rat_string(r)},
                   {"places", places},
                   {"product", hl::rat_string(hl::padic::product_formula_check(r))}};
            out.emit(dump(j));
        } else if (reduce_cmd->parsed()) {
            auto [zr, g] = hl::modsurface::reduce(parse_point(reduce_point));
            out.emit(dump(json{{"point", hl::io::point_json(zr)},
                               {"matrix", hl::io::matrix_json(g)}}));
        } else if (nb_cmd->parsed()) {
            Int p(nb_p);
            auto pts = hl::hecke::neighbors(parse_point(nb_point), p);
            json j{{"p", p.get_str()}, {"neighbors", hl::io::raw_points_json(pts)}};
            out.emit(dump(j));
        } else if (sphere_cmd->parsed()) {
            Int n(sphere_n);
            auto z = parse_point(sphere_point);
            if (sphere_raw && sphere_reduced)
                throw std::invalid_argument("--raw and --reduced are exclusive");
            bool primitive = !sphere_full;
            auto tree_sphere = [&] {
                return primitive ? hl::hecke::sphere_tree(z, n, threads)
                                 : hl::hecke::sphere_tree_full(z, n, threads);
            };
            auto coset_sphere = [&] {
                return hl::hecke::sphere_coset(z, n, threads, primitive);
            };
            json j{{"N", n.get_str()}};
            if (sphere_method == "both") {
                auto a = tree_sphere();
                auto b = coset_sphere();
                j["center"] = hl::io::point_json(a.center);
                j["tree"] = hl::io::sphere_points_json(a);
                j["coset"] = hl::io::sphere_points_json(b);
                j["total"] = a.total_multiplicity().get_str();
                j["equal"] = a.same_multiset(b);
            } else if (sphere_method == "tree" || sphere_method == "coset") {
                if (sphere_raw) {
                    auto pts = sphere_method == "tree"
                                   ? hl::hecke::sphere_tree_raw(z, n)
                                   : hl::hecke::sphere_coset_raw(z, n, primitive);
                    j["points"] = hl::io::raw_points_json(pts);
                    j["total"] = std::to_string(pts.size());
                } else {
                    auto s = sphere_method == "tree" ? tree_sphere() : coset_sphere();
                    j["center"] = hl::io::point_json(s.center);
                    j["points"] = hl::io::sphere_points_json(s);
                    j["total"] = s.total_multiplicity().get_str();
                }
            } else {
                throw std::invalid_argument("--method must be tree, coset or both");
            }
            out.emit(dump(j));
        } else if (tsphere_cmd->parsed() || tdist_cmd->parsed()) {
            Int p(tree_p);
            if (tsphere_cmd->parsed()) {
                auto root = hl::bttree::BTVertex::root(p);
                auto sphere = hl::bttree::bt_sphere(root, tree_n);
                std::sort(sphere.begin(), sphere.end());
                json verts = json::array();
                for (const auto& v : sphere) verts.push_back(hl::io::vertex_json(v));
                out.emit(dump(json{{"p", p.get_str()},
                                   {"n", tree_n},
                                   {"count", sphere.size()},
                                   {"vertices", verts}}));
            } else {
                auto parse_vertex = [&](const std::string& s) {
                    auto comma = s.find(',');
                    if (comma == std::string::npos)
                        throw std::invalid_argument("vertex must be m,u");
                    return hl::bttree::BTVertex::make(
                        p, std::stol(s.substr(0, comma)),
                        hl::parse_rational(s.substr(comma + 1)));
                };
                auto v = parse_vertex(tree_v);
                auto w = parse_vertex(tree_w);
                out.emit(dump(json{{"p", p.get_str()},
                                   {"v", hl::io::vertex_json(v)},
                                   {"w", hl::io::vertex_json(w)},
                                   {"distance", hl::bttree::bt_distance(v, w)}}));
            }
        } else if (orbit_cmd->parsed()) {
            Int p(sol_p);
            auto pt = hl::solenoid::canonicalize(hl::parse_rational(sol_base),
                                                 hl::parse_rational(sol_fiber), p, prec,
                                                 sol_period);
            Int pd = hl::pow_int(p, static_cast<unsigned long>(sol_depth));
            auto hist = hl::solenoid::cylinder_histogram(pt, sol_depth, sol_steps);
            std::string rows_csv = "time,base,fiber_residue\n";
            json rows = json::array();
            hl::solenoid::SolenoidPoint cur = pt;
            for (long j = 0; j < sol_steps; ++j) {
                Int residue = hl::solenoid::rational_mod(cur.fiber_exact, pd);
                rows_csv += std::to_string(j) + "," + hl::rat_string(cur.base) + "," +
                            residue.get_str() + "\n";
                rows.push_back(json{{"time", j},
                                    {"base", hl::rat_string(cur.base)},
                                    {"fiber_residue", residue.get_str()}});
                cur = hl::solenoid::flow(cur, Rat(1));
            }
            if (csv) {
                out.emit(rows_csv);
            } else {
                json jh;
                for (const auto& [res, count] : hist) jh[res.get_str()] = count;
                out.emit(dump(json{{"p", p.get_str()},
                                   {"depth", sol_depth},
                                   {"steps", sol_steps},
                                   {"period_level", sol_period},
                                   {"histogram", jh},
                                   {"rows", rows}}));
            }
        } else if (eq_cmd->parsed()) {
            auto z = parse_point(eq_point);
            auto radii = parse_radius_list(eq_list);
            auto f = parse_test(eq_test);
            auto report = hl::equidist::convergence_table(z, radii, f, threads);
            out.emit(csv ? hl::io::report_csv(report) : dump(hl::io::report_json(report)));
        }
        return 0;
    } catch (const hl::DomainError& e) {
        std::cerr << e.name() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
