#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <utility>

#include "finpot/errors.hpp"
#include "finpot/polynomial.hpp"
#include "finpot/rational.hpp"

namespace finpot {

using RatPoly = Polynomial<Rational>;

/// Element of Q(t), kept as num/den with den monic and gcd(num, den) = 1.
class RationalFunction {
public:
    RationalFunction() : den_(Rational(1)) {}
    RationalFunction(long c) : num_(Rational(c)), den_(Rational(1)) {}            // NOLINT
    RationalFunction(const Rational& c) : num_(c), den_(Rational(1)) {}          // NOLINT
    RationalFunction(RatPoly num) : num_(std::move(num)), den_(Rational(1)) {}   // NOLINT
    RationalFunction(RatPoly num, RatPoly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

    static RationalFunction t() { return RationalFunction(RatPoly::x()); }

    const RatPoly& numerator() const { return num_; }
    const RatPoly& denominator() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.degree() == 0; }

    RationalFunction operator-() const { return {-num_, den_}; }
    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        return {a.num_ * b.num_, a.den_ * b.den_};
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        if (b.is_zero()) fail("domain_error", "division by the zero function");
        return {a.num_ * b.den_, a.den_ * b.num_};
    }
    RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
    RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }

    RationalFunction pow(long e) const {
        if (e < 0) return RationalFunction(Rational(1)) / pow(-e);
        return {num_.pow(static_cast<unsigned>(e)), den_.pow(static_cast<unsigned>(e))};
    }

    RationalFunction derivative() const {
        return {num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_};
    }

    /// f(q(t)) for a polynomial q.
    RationalFunction compose(const RatPoly& q) const { return {num_.compose(q), den_.compose(q)}; }

    /// f(1/w) as a function of w.
    RationalFunction at_infinity() const {
        // p(1/w) = w^{-deg p} rev(p)(w)
        long shift = den_.degree() - num_.degree();
        RatPoly n = reversed(num_), d = reversed(den_);
        if (shift >= 0) n = n * RatPoly::monomial(Rational(1), static_cast<std::size_t>(shift));
        else d = d * RatPoly::monomial(Rational(1), static_cast<std::size_t>(-shift));
        return {n, d};
    }

    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

    std::string to_string(const std::string& var = "t") const {
        if (is_polynomial()) return num_.to_string(var);
        auto wrap = [&](const RatPoly& p) {
            std::string s = p.to_string(var);
            bool atomic = p.degree() <= 0 ? s.find('/') == std::string::npos && s[0] != '-'
                                          : s.find_first_of("+-* ", 1) == std::string::npos;
            return atomic ? s : "(" + s + ")";
        };
        return wrap(num_) + "/" + wrap(den_);
    }

private:
    static RatPoly reversed(const RatPoly& p) {
        std::vector<Rational> c(p.coeffs().rbegin(), p.coeffs().rend());
        return RatPoly(std::move(c));
    }

    void normalize() {
        if (den_.is_zero()) fail("domain_error", "rational function with zero denominator");
        if (num_.is_zero()) {
            den_ = RatPoly(Rational(1));
            return;
        }
        RatPoly g = gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = num_ / g;
            den_ = den_ / g;
        }
        Rational lc = den_.leading();
        if (lc != 1) {
            Rational inv = 1 / lc;
            num_ = num_ * inv;
            den_ = den_ * inv;
        }
    }

    RatPoly num_, den_;
};

inline bool is_zero(const RationalFunction& f) { return f.is_zero(); }
inline std::string to_string(const RationalFunction& f) { return f.to_string(); }

/// Multiplicity of the monic irreducible p in the polynomial a (a != 0).
inline long multiplicity(RatPoly a, const RatPoly& p) {
    if (a.is_zero()) fail("domain_error", "multiplicity in the zero polynomial");
    long m = 0;
    for (;;) {
        auto [q, r] = divmod(a, p);
        if (!r.is_zero()) return m;
        a = std::move(q);
        ++m;
    }
}

/// Order of f at the finite place p: positive for zeros, negative for poles.
inline long valuation(const RationalFunction& f, const RatPoly& p) {
    if (f.is_zero()) fail("domain_error", "valuation of the zero function");
    return multiplicity(f.numerator(), p) - multiplicity(f.denominator(), p);
}

/// Order at infinity, deg den - deg num.
inline long valuation_at_infinity(const RationalFunction& f) {
    if (f.is_zero()) fail("domain_error", "valuation of the zero function");
    return f.denominator().degree() - f.numerator().degree();
}

namespace detail {

// Recursive descent over  + - * / ^ ( )  with integer constants, one variable,
// unary minus and implicit multiplication ("2t", "(t+1)(t-1)").
class FunctionParser {
public:
    FunctionParser(std::string_view text, std::string var) : s_(text), var_(std::move(var)) {}

    RationalFunction parse() {
        skip();
        if (pos_ == s_.size()) throw ParseError("empty expression");
        RationalFunction r = expr();
        skip();
        if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
        return r;
    }

private:
    RationalFunction expr() {
        RationalFunction acc = term();
        for (;;) {
            skip();
            if (eat('+')) acc = acc + term();
            else if (eat('-')) acc = acc - term();
            else return acc;
        }
    }

    RationalFunction term() {
        RationalFunction acc = unary();
        for (;;) {
            skip();
            if (eat('*')) acc = acc * unary();
            else if (eat('/')) {
                RationalFunction d = unary();
                if (d.is_zero()) fail("domain_error", "division by zero in '" + std::string(s_) + "'");
                acc = acc / d;
            } else if (starts_atom()) acc = acc * power();
            else return acc;
        }
    }

    RationalFunction unary() {
        skip();
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }

    RationalFunction power() {
        RationalFunction base = atom();
        skip();
        if (!eat('^')) return base;
        skip();
        long e;
        if (eat('(')) {
            e = integer_exponent();
            skip();
            if (!eat(')')) error("expected ')' after exponent");
        } else {
            e = integer_exponent();
        }
        if (e < 0 && base.is_zero()) fail("domain_error", "negative power of zero");
        return base.pow(e);
    }

    long integer_exponent() {
        skip();
        bool neg = eat('-');
        if (!neg) eat('+');
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) error("expected integer exponent");
        if (pos_ - start > 6) error("exponent too large");
        long e = std::stol(std::string(s_.substr(start, pos_ - start)));
        return neg ? -e : e;
    }

    RationalFunction atom() {
        skip();
        if (pos_ == s_.size()) error("unexpected end of input");
        char c = s_[pos_];
        if (eat('(')) {
            RationalFunction r = expr();
            skip();
            if (!eat(')')) error("expected ')'");
            return r;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return RationalFunction(Rational(Integer(std::string(s_.substr(start, pos_ - start)))));
        }
        if (s_.compare(pos_, var_.size(), var_) == 0) {
            pos_ += var_.size();
            return RationalFunction::t();
        }
        error("unexpected '" + std::string(1, c) + "'");
    }

    bool starts_atom() {
        skip();
        if (pos_ == s_.size()) return false;
        char c = s_[pos_];
        return c == '(' || std::isdigit(static_cast<unsigned char>(c)) || s_.compare(pos_, var_.size(), var_) == 0;
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    [[noreturn]] void error(const std::string& what) {
        throw ParseError(what + " at position " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
    }

    std::string_view s_;
    std::string var_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses strings such as "(t^2+1)/(t-3)" or "z^-1 + 2z^-2".
inline RationalFunction parse_rational_function(std::string_view text, const std::string& var = "t") {
    return detail::FunctionParser(text, var).parse();
}

/// Parses a polynomial; rejects proper fractions in the variable.
inline RatPoly parse_polynomial(std::string_view text, const std::string& var = "t") {
    RationalFunction f = parse_rational_function(text, var);
    if (!f.is_polynomial()) throw ParseError("expected a polynomial, got '" + std::string(text) + "'");
    return f.numerator() * (Rational(1) / f.denominator().leading());
}

}  // namespace finpot
