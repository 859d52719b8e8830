#pragma once

#include <cctype>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "finpot/errors.hpp"
#include "finpot/laurent_series.hpp"
#include "finpot/matrix.hpp"
#include "finpot/operator.hpp"
#include "finpot/polynomial.hpp"
#include "finpot/rational.hpp"

namespace finpot {

using Json = nlohmann::json;  // std::map backed, so keys come out sorted

namespace detail {

inline Rational json_rational(const Json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(Integer(std::to_string(j.get<long long>())));
    throw ParseError("expected a rational as \"p/q\" or an integer");
}

inline long json_long(const Json& j, const char* what) {
    if (!j.is_number_integer()) throw ParseError(std::string(what) + " must be an integer");
    return j.get<long>();
}

}  // namespace detail

// ---- operators

inline Json to_json(const FinitePotentOperator<Rational>& phi) {
    Json entries = Json::array();
    for (const auto& [i, j, v] : phi.finite.entries()) entries.push_back({i, j, to_string(v)});
    Json out;
    out["entries"] = entries;
    if (phi.tail.is_none()) {
        out["tail"] = nullptr;
    } else {
        Json t;
        t["kind"] = "jordan_blocks";
        t["block_size"] = phi.tail.block_size;
        t["start"] = phi.tail.start;
        if (!phi.tail.is_plain_jordan()) {
            Json c = Json::array();
            for (const auto& x : phi.tail.poly) c.push_back(to_string(x));
            t["coeffs"] = c;
        }
        out["tail"] = t;
    }
    return out;
}

inline FinitePotentOperator<Rational> operator_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("operator must be a JSON object");
    std::vector<std::tuple<long, long, Rational>> entries;
    if (j.contains("entries")) {
        if (!j["entries"].is_array()) throw ParseError("\"entries\" must be an array");
        for (const auto& e : j["entries"]) {
            if (!e.is_array() || e.size() != 3) throw ParseError("each entry must be [i, j, \"p/q\"]");
            entries.emplace_back(detail::json_long(e[0], "row"), detail::json_long(e[1], "column"),
                                 detail::json_rational(e[2]));
        }
    }
    TailDescriptor<Rational> tail;
    if (j.contains("tail") && !j["tail"].is_null()) {
        const Json& t = j["tail"];
        if (!t.is_object()) throw ParseError("\"tail\" must be an object or null");
        if (t.value("kind", std::string("jordan_blocks")) != "jordan_blocks")
            throw ParseError("unknown tail kind");
        if (!t.contains("block_size") || !t.contains("start")) throw ParseError("tail needs block_size and start");
        long s = detail::json_long(t["block_size"], "block_size");
        long start = detail::json_long(t["start"], "start");
        if (s < 1) throw ParseError("block_size must be positive");
        if (t.contains("coeffs")) {
            std::vector<Rational> poly;
            for (const auto& c : t["coeffs"]) poly.push_back(detail::json_rational(c));
            if (static_cast<long>(poly.size()) > s) throw ParseError("more tail coefficients than block_size");
            tail = TailDescriptor<Rational>::polynomial(s, start, poly);
        } else {
            tail = TailDescriptor<Rational>::jordan(s, start);
        }
    }
    return FinitePotentOperator<Rational>::from_entries(entries, tail);
}

inline FinitePotentOperator<Rational> parse_operator(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("operator JSON: ") + e.what());
    }
    return operator_from_json(j);
}

// ---- series, polynomials, matrices

/// {"var":"z","min":-1,"prec":8,"coeffs":{"-1":"1/2","0":"1"}}; exact series
/// carry "prec": null.
inline Json to_json(const LaurentSeries<Rational>& s) {
    Json out;
    out["var"] = s.var();
    out["min"] = s.is_zero() ? Json(nullptr) : Json(s.min_degree());
    out["prec"] = s.exact() ? Json(nullptr) : Json(s.prec());
    Json c = Json::object();
    for (const auto& [d, v] : s.coeffs()) c[std::to_string(d)] = to_string(v);
    out["coeffs"] = c;
    return out;
}

inline LaurentSeries<Rational> series_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("coeffs")) throw ParseError("series JSON needs \"coeffs\"");
    std::string var = j.value("var", std::string("z"));
    long prec = LaurentSeries<Rational>::kExact;
    if (j.contains("prec") && !j["prec"].is_null()) prec = detail::json_long(j["prec"], "prec");
    std::map<long, Rational> c;
    for (const auto& [k, v] : j["coeffs"].items()) {
        try {
            c[std::stol(k)] = detail::json_rational(v);
        } catch (const std::invalid_argument&) {
            throw ParseError("series degree '" + k + "' is not an integer");
        }
    }
    return LaurentSeries<Rational>(std::move(c), prec, var);
}

/// Inverse of LaurentSeries::to_string for rational coefficients:
/// "1 - 1/2*z^2 + z^-1 + O(z^8)".
inline LaurentSeries<Rational> parse_series_text(const std::string& text, const std::string& var = "z") {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s.empty()) throw ParseError("empty series");
    std::map<long, Rational> c;
    long prec = LaurentSeries<Rational>::kExact;
    std::size_t i = 0;
    auto read_int = [&](long& out) {
        std::size_t b = i;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (b == i || !std::isdigit(static_cast<unsigned char>(s[i - 1]))) throw ParseError("expected an exponent");
        out = std::stol(s.substr(b, i - b));
    };
    auto read_power = [&](long& deg) {
        if (s.compare(i, var.size(), var) != 0) throw ParseError("expected '" + var + "' in '" + text + "'");
        i += var.size();
        deg = 1;
        if (i < s.size() && s[i] == '^') {
            ++i;
            read_int(deg);
        }
    };
    bool first = true;
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        } else if (!first) {
            throw ParseError("expected '+' or '-' in '" + text + "'");
        }
        first = false;
        if (s.compare(i, 2, "O(") == 0) {
            i += 2;
            long p = 0;
            read_power(p);
            if (i >= s.size() || s[i] != ')') throw ParseError("unclosed O(...)");
            ++i;
            prec = p;
            continue;
        }
        Rational coeff = 1;
        long deg = 0;
        if (std::isdigit(static_cast<unsigned char>(s[i]))) {
            std::size_t b = i;
            while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/')) ++i;
            coeff = parse_rational(s.substr(b, i - b));
            if (i < s.size() && s[i] == '*') {
                ++i;
                read_power(deg);
            }
        } else {
            read_power(deg);
        }
        c[deg] += sign * coeff;
    }
    if (s == "0") c.clear();
    return LaurentSeries<Rational>(std::move(c), prec, var);
}

/// Ascending coefficient list in `var`.
inline Json to_json(const Polynomial<Rational>& p, const std::string& var) {
    Json c = Json::array();
    for (long k = 0; k <= p.degree(); ++k) c.push_back(to_string(p.coeff(k)));
    return Json{{"var", var}, {"coeffs", c}};
}

inline Json to_json(const Matrix<Rational>& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json r = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(to_string(m(i, j)));
        rows.push_back(r);
    }
    return rows;
}

/// Columns as a list of vectors (basis matrices).
inline Json columns_to_json(const Matrix<Rational>& m) {
    Json cols = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
        Json c = Json::array();
        for (std::size_t i = 0; i < m.rows(); ++i) c.push_back(to_string(m(i, j)));
        cols.push_back(c);
    }
    return cols;
}

}  // namespace finpot
