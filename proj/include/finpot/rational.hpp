#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "finpot/errors.hpp"

namespace finpot {

// GMP keeps mpq_class canonical (reduced, positive denominator) after every
// arithmetic operation; only construction from raw parts needs canonicalize().
using Integer = mpz_class;
using Rational = mpq_class;

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }
inline bool is_zero(const Integer& x) { return sgn(x) == 0; }
inline Rational one_like(const Rational&) { return Rational(1); }
inline Rational zero_like(const Rational&) { return Rational(0); }

/// Parses "p", "-p" or "p/q" with decimal integers.
inline Rational parse_rational(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw ParseError("empty rational");
    std::size_t slash = s.find('/');
    auto valid_int = [](std::string_view v, bool allow_sign) {
        if (v.empty()) return false;
        std::size_t i = 0;
        if (allow_sign && (v[0] == '-' || v[0] == '+')) i = 1;
        if (i == v.size()) return false;
        for (; i < v.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(v[i]))) return false;
        return true;
    };
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid_int(num, true) || !valid_int(den, false))
        throw ParseError("malformed rational '" + std::string(text) + "'");
    if (num[0] == '+') num.erase(0, 1);
    Integer d(den);
    if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    Rational q(Integer(num), d);
    q.canonicalize();
    return q;
}

/// "p/q", or "p" when the denominator is one.
inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

inline Rational factorial(unsigned n) {
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rational(f);
}

namespace detail {

// Unqualified calls so that ADL picks up overloads for scalar types declared
// after the templates that use them.
template <typename T>
bool scalar_is_zero(const T& x) {
    using finpot::is_zero;
    return is_zero(x);
}

template <typename T>
std::string scalar_to_string(const T& x) {
    using finpot::to_string;
    return to_string(x);
}

}  // namespace detail

}  // namespace finpot
