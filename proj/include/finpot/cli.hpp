#pragma once

#include <cstdlib>
#include <fstream>
#include <cmath>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "finpot/ast.hpp"
#include "finpot/determinant.hpp"
#include "finpot/exponential.hpp"
#include "finpot/json_io.hpp"
#include "finpot/random_instances.hpp"
#include "finpot/residue.hpp"
#include "finpot/segal_wilson.hpp"

namespace finpot::cli {

/// One operator through every determinant route. Returns the route values
/// in the order ast, exterior, charpoly, plemelj_smithies, logdet.
inline std::vector<Rational> det_routes(const FinitePotentOperator<Rational>& phi) {
    ASTDecomposition<Rational> a = lift_ast(phi);
    const long n = static_cast<long>(a.core_dim());
    std::vector<Rational> v;
    v.push_back(det_one_plus(phi));
    Rational ext = 1;
    for (long r = 1; r <= n + 1; ++r) ext += exterior_trace(phi, r);
    v.push_back(ext);
    Rational cp = char_poly(a.core_matrix).eval(Rational(-1));
    v.push_back(n % 2 ? Rational(-cp) : cp);
    v.push_back(plemelj_smithies_series(phi, n).eval(Rational(1)));
    Rational ld = 0;
    LaurentSeries<Rational> series = log_det_series(phi, n + 2);
    for (const auto& [d, c] : series.coeffs()) ld += c;
    v.push_back(ld);
    return v;
}

struct SelftestReport {
    long operators = 0, residues = 0, failures = 0;
};

inline SelftestReport selftest(long count, unsigned long seed) {
    SelftestReport rep;
    RandomInstances gen(seed);
    for (long i = 0; i < count; ++i) {
        std::vector<Rational> v = det_routes(gen.finite_potent());
        ++rep.operators;
        for (const auto& x : v)
            if (x != v.front()) {
                ++rep.failures;
                break;
            }
    }
    for (long i = 0; i < count / 4; ++i) {
        RationalFunction f = gen.rational_function(), g = gen.rational_function();
        Rational a(gen.integer(-3, 3));
        ++rep.residues;
        if (residue_tate(f, g, a) != residue_classical(f, g, Place::point(a))) ++rep.failures;
    }
    return rep;
}

namespace detail {

inline std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Inline JSON when it looks like JSON, otherwise a file path.
inline std::string inline_or_file(const std::string& s) {
    std::size_t i = s.find_first_not_of(" \t\r\n");
    if (i != std::string::npos && (s[i] == '{' || s[i] == '[')) return s;
    return slurp(s);
}

inline Json parse_json(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(what + ": " + e.what());
    }
}

inline long default_prec(long fallback) {
    if (const char* p = std::getenv("FINPOT_PREC")) {
        try {
            long v = std::stol(p);
            if (v > 0) return v;
        } catch (const std::exception&) {
        }
        throw ParseError(std::string("FINPOT_PREC must be a positive integer, got '") + p + "'");
    }
    return fallback;
}

inline void print_text(const Json& j, std::ostream& out, const std::string& indent = "") {
    for (const auto& [k, v] : j.items()) {
        out << indent << k << ":";
        if (v.is_string()) out << " " << v.get<std::string>() << "\n";
        else if (v.is_object()) {
            out << "\n";
            print_text(v, out, indent + "  ");
        } else out << " " << v.dump() << "\n";
    }
}

}  // namespace detail

inline const char* usage() {
    return "usage: finpot <verb> [flags]\n"
           "verbs: trace det detpoly ast exterior invert ps-series logdet regdet\n"
           "       exp zassenhaus infprod residue cocycle pairing reciprocity\n"
           "       sw-pairing selftest\n"
           "run 'finpot <verb> --help' for the flags of a verb\n";
}

/// Runs one command (args exclude the program name). Exit codes: 0 success,
/// 1 domain error, 2 parse error or bad usage.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Determinants, traces and residues of finite potent endomorphisms", "finpot"};
    app.require_subcommand(1);

    std::string op_text, op_file, op2_text, family_text, f_text, g_text, ft_text, place_text = "t";
    std::string format = "json", route;
    long r = 1, order = -1, prec = -1, m = 2, weight = 1, compat_m = 1, cut = 0, T = 40, count = 200;
    unsigned long seed = 1;

    auto verb = [&](const std::string& name, const std::string& help) {
        CLI::App* s = app.add_subcommand(name, help);
        s->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
        return s;
    };
    auto op_flags = [&](CLI::App* s) {
        s->add_option("--op", op_text, "operator JSON, inline or a file path");
        s->add_option("--op-file", op_file, "file holding the operator JSON");
    };
    auto fg_flags = [&](CLI::App* s) {
        s->add_option("--f", f_text, "rational function of t")->required();
        s->add_option("--g", g_text, "rational function of t")->required();
    };

    for (auto [v, what] : {std::pair{"trace", "Tate trace of op"}, std::pair{"det", "det(1+op)"},
                           std::pair{"detpoly", "det(1+mu op) as a polynomial in mu"},
                           std::pair{"ast", "core / nilpotent decomposition of op"},
                           std::pair{"invert", "psi with (1+op)(1+psi) = 1"}})
        op_flags(verb(v, what));
    {
        CLI::App* s = verb("exterior", "trace of the r-th exterior power");
        op_flags(s);
        s->add_option("--r", r, "exterior degree")->required()->check(CLI::PositiveNumber);
    }
    {
        CLI::App* s = verb("ps-series", "Plemelj-Smithies expansion");
        op_flags(s);
        s->add_option("--order", order, "highest mu power (default: core dimension)");
    }
    {
        CLI::App* s = verb("logdet", "exp of the log trace series");
        op_flags(s);
        s->add_option("--prec", prec, "series precision");
    }
    {
        CLI::App* s = verb("regdet", "m-regularized determinant");
        op_flags(s);
        s->add_option("--m", m, "regularization order (>= 2)");
        s->add_option("--prec", prec, "series precision");
    }
    {
        CLI::App* s = verb("exp", "exp_{z^k}(op) and its determinant");
        op_flags(s);
        s->add_option("--weight", weight, "degree weight k");
        s->add_option("--prec", prec, "series precision");
    }
    {
        CLI::App* s = verb("zassenhaus", "C1..C3 and the identity through z^4");
        op_flags(s);
        s->add_option("--op2", op2_text, "second operator JSON")->required();
        s->add_option("--prec", prec, "series precision (<= 5)");
    }
    {
        CLI::App* s = verb("infprod", "determinant of a product of exponentials");
        s->add_option("--family", family_text, "[{\"weight\":k,\"op\":{...}}, ...], inline or a file path")->required();
        s->add_option("--compat-m", compat_m, "index from which all traces vanish")->required();
        s->add_option("--prec", prec, "series precision");
        s->add_option("--cut", cut, "V+ cut for the E0 check");
    }
    {
        CLI::App* s = verb("residue", "res_p(f dg)");
        fg_flags(s);
        s->add_option("--place", place_text, "inf or a monic irreducible polynomial in t");
        s->add_option("--route", route, "classical or tate")->check(CLI::IsMember({"classical", "tate"}));
    }
    {
        CLI::App* s = verb("cocycle", "local symbol exp(z^2 res/2)");
        fg_flags(s);
        s->add_option("--place", place_text, "inf or a monic irreducible polynomial in t");
        s->add_option("--prec", prec, "z precision");
        s->add_option("--cut", cut, "V+ cut for the operator route");
        s->add_option("--route", route, "symbol or operator")->check(CLI::IsMember({"symbol", "operator"}));
    }
    {
        CLI::App* s = verb("pairing", "commutator pairing exp(z^2 res)");
        fg_flags(s);
        s->add_option("--place", place_text, "inf or a monic irreducible polynomial in t");
        s->add_option("--prec", prec, "z precision");
    }
    {
        CLI::App* s = verb("reciprocity", "sum of residues and product of symbols over P^1");
        fg_flags(s);
        s->add_option("--prec", prec, "z precision");
    }
    {
        CLI::App* s = verb("sw-pairing", "truncated Toeplitz pairing against its closed form");
        s->add_option("--f", f_text, "polynomial in z without constant term")->required();
        s->add_option("--ftilde", ft_text, "polynomial in 1/z without constant term")->required();
        s->add_option("--T", T, "truncation size");
    }
    {
        CLI::App* s = verb("selftest", "cross-route agreement on random instances");
        s->add_option("--count", count, "random operators");
        s->add_option("--seed", seed, "generator seed");
    }

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        out << Json{{"error", "parse_error"}, {"detail", e.what()}}.dump() << "\n";
        err << usage();
        return 2;
    }
    const std::string name = app.get_subcommands().front()->get_name();

    auto operator_arg = [&](const std::string& text, const std::string& file) {
        if (!file.empty()) return parse_operator(detail::slurp(file));
        if (text.empty()) throw ParseError("--op or --op-file is required");
        return parse_operator(detail::inline_or_file(text));
    };
    auto function_arg = [](const std::string& text, const std::string& var = "t") {
        return parse_rational_function(text, var);
    };

    Json res;
    try {
        if (name == "trace" || name == "det" || name == "detpoly" || name == "ast" || name == "invert" ||
            name == "exterior" || name == "ps-series" || name == "logdet" || name == "regdet" || name == "exp" ||
            name == "zassenhaus") {
            FinitePotentOperator<Rational> phi = operator_arg(op_text, op_file);
            if (name == "trace") {
                res["value"] = to_string(tate_trace(phi));
            } else if (name == "det") {
                res["value"] = to_string(det_one_plus(phi));
            } else if (name == "detpoly") {
                res["value"] = to_json(det_poly(phi), "mu");
            } else if (name == "ast") {
                Certificate<Rational> c = certify_finite_potent(phi);
                ASTDecomposition<Rational> a = lift_ast(phi);
                res["certificate_n"] = c.n;
                res["indices"] = a.indices;
                res["core_dim"] = a.core_dim();
                res["nil_dim"] = a.nil_matrix.rows();
                res["nil_degree"] = a.nil_degree;
                res["core_basis"] = columns_to_json(a.core_basis);
                res["nil_basis"] = columns_to_json(a.nil_basis);
                res["core_matrix"] = to_json(a.core_matrix);
                res["nil_matrix"] = to_json(a.nil_matrix);
            } else if (name == "invert") {
                res["psi"] = to_json(invert_one_plus(phi));
            } else if (name == "exterior") {
                res["value"] = to_string(exterior_trace(phi, r));
            } else if (name == "ps-series") {
                long n = order >= 0 ? order : static_cast<long>(lift_ast(phi).core_dim());
                std::vector<Rational> p = power_traces(phi, n);
                Json alpha = Json::array();
                for (long k = 0; k <= n; ++k) alpha.push_back(to_string(plemelj_smithies_alpha(p, k)));
                res["alpha"] = alpha;
                res["value"] = to_json(plemelj_smithies_series(phi, n), "mu");
            } else if (name == "logdet") {
                res["value"] = to_json(log_det_series(phi, prec > 0 ? prec : detail::default_prec(10)));
            } else if (name == "regdet") {
                res["value"] = to_json(regularized_det_series(phi, m, prec > 0 ? prec : detail::default_prec(10)));
            } else if (name == "exp") {
                OperatorSeries<Rational> s = exp_op(phi, weight, prec > 0 ? prec : detail::default_prec(10));
                Json terms = Json::object();
                for (const auto& [d, t] : s.terms) terms[std::to_string(d)] = to_json(t);
                res["terms"] = terms;
                res["core"] = s.core;
                res["det"] = to_json(det_series(s));
                res["trace"] = to_string(tate_trace(phi));
            } else {
                FinitePotentOperator<Rational> psi = parse_operator(detail::inline_or_file(op2_text));
                long p = prec > 0 ? prec : std::min(5L, detail::default_prec(5));
                ZassenhausTerms<Rational> z = zassenhaus_terms(phi, psi);
                res["c1"] = to_json(z.c1);
                res["c2"] = to_json(z.c2);
                res["c3"] = to_json(z.c3);
                res["holds"] = zassenhaus_check(phi, psi, p);
            }
        } else if (name == "infprod") {
            Json fam = detail::parse_json(detail::inline_or_file(family_text), "family JSON");
            if (!fam.is_array()) throw ParseError("family must be a JSON array");
            std::vector<std::pair<long, FinitePotentOperator<Rational>>> family;
            for (const auto& e : fam) {
                if (!e.is_object() || !e.contains("op")) throw ParseError("family members need \"op\"");
                family.emplace_back(e.contains("weight") ? finpot::detail::json_long(e["weight"], "weight") : 1,
                                    operator_from_json(e["op"]));
            }
            res["value"] = to_json(infinite_product_det(family, compat_m, prec > 0 ? prec : detail::default_prec(10),
                                                        HalfSpaceSpec{cut}));
        } else if (name == "residue" || name == "cocycle" || name == "pairing" || name == "reciprocity") {
            RationalFunction f = function_arg(f_text), g = function_arg(g_text);
            long pz = prec > 0 ? prec : detail::default_prec(8);
            if (name == "reciprocity") {
                ReciprocityResult rr = reciprocity_check(f, g, pz);
                res["sum"] = to_string(rr.sum);
                res["product"] = rr.product.to_string();
            } else {
                Place p = Place::parse(place_text);
                if (name == "residue") {
                    res["value"] = to_string(route == "tate" ? residue_tate(f, g, p.root()) : residue_classical(f, g, p));
                } else if (name == "pairing") {
                    res["value"] = pairing(f, g, p, pz).to_string();
                } else {
                    SymbolValue v = route == "operator" ? cocycle_operator_route(f, g, p.root(), pz, cut)
                                                        : cocycle(f, g, p, pz);
                    res["value"] = v.to_string();
                }
            }
        } else if (name == "sw-pairing") {
            LoopExponent a = LoopExponent::from_function(function_arg(f_text, "z"), LoopExponent::Side::plus);
            LoopExponent b = LoopExponent::from_function(function_arg(ft_text, "z"), LoopExponent::Side::minus);
            Rational exact = sw_pairing_truncated(a, b, T);
            Rational r0 = sw_pairing_closed(a, b);
            std::ostringstream approx, err_s;
            approx.precision(17);
            approx << exact.get_d();
            err_s.precision(3);
            err_s << std::fabs(exact.get_d() - std::exp(r0.get_d()));
            res["T"] = T;
            res["exponent"] = to_string(r0);
            res["truncated"] = to_string(exact);
            res["truncated_approx"] = approx.str();
            res["error"] = err_s.str();
            res["matches_residue"] = sw_vs_tate_check(a, b);
        } else {
            SelftestReport rep = selftest(count, seed);
            res["operators"] = rep.operators;
            res["residues"] = rep.residues;
            res["failures"] = rep.failures;
            if (format == "json") out << res.dump() << "\n";
            else detail::print_text(res, out);
            return rep.failures == 0 ? 0 : 1;
        }
    } catch (const ParseError& e) {
        out << Json{{"error", e.code()}, {"detail", e.what()}}.dump() << "\n";
        return 2;
    } catch (const Error& e) {
        out << Json{{"error", e.code()}, {"detail", e.what()}}.dump() << "\n";
        return 1;
    }
    if (format == "json") out << res.dump() << "\n";
    else detail::print_text(res, out);
    return 0;
}

}  // namespace finpot::cli
