#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "finpot/errors.hpp"
#include "finpot/rational.hpp"

namespace finpot {

/// Dense univariate polynomial over a field F, lowest degree first.
/// Trailing zero coefficients are never stored.
template <typename F>
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<F> coeffs) : c_(std::move(coeffs)) { trim(); }
    Polynomial(const F& constant) : c_{constant} { trim(); }  // NOLINT: implicit scalar embedding
    Polynomial(long constant) : Polynomial(F(constant)) {}     // NOLINT

    static Polynomial monomial(const F& coeff, std::size_t degree) {
        std::vector<F> c(degree + 1, zero_like(coeff));
        c[degree] = coeff;
        return Polynomial(std::move(c));
    }
    static Polynomial x() { return monomial(F(1), 1); }

    /// -1 for the zero polynomial.
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<F>& coeffs() const { return c_; }

    F coeff(long i) const {
        if (i < 0 || i > degree()) return c_.empty() ? F(0) : zero_like(c_[0]);
        return c_[static_cast<std::size_t>(i)];
    }
    const F& leading() const {
        if (c_.empty()) fail("domain_error", "leading coefficient of zero polynomial");
        return c_.back();
    }

    Polynomial monic() const {
        if (is_zero()) return *this;
        F inv = one_like(leading()) / leading();
        return *this * inv;
    }

    template <typename X>
    X eval(const X& x) const {
        X acc = x * F(0);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    Polynomial derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<F> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * F(static_cast<long>(i));
        return Polynomial(std::move(d));
    }

    /// p(q(x))
    Polynomial compose(const Polynomial& q) const {
        Polynomial acc;
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * q + Polynomial(c_[i]);
        return acc;
    }

    Polynomial pow(unsigned e) const {
        Polynomial result(F(1)), base = *this;
        while (e) {
            if (e & 1u) result = result * base;
            base = base * base;
            e >>= 1u;
        }
        return result;
    }

    Polynomial operator-() const {
        std::vector<F> c = c_;
        for (auto& v : c) v = -v;
        return Polynomial(std::move(c));
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<F> c(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (i < a.c_.size() && i < b.c_.size()) c[i] = a.c_[i] + b.c_[i];
            else c[i] = i < a.c_.size() ? a.c_[i] : b.c_[i];
        }
        return Polynomial(std::move(c));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<F> c(a.c_.size() + b.c_.size() - 1, zero_like(a.c_[0]));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (detail::scalar_is_zero(a.c_[i])) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        }
        return Polynomial(std::move(c));
    }
    friend Polynomial operator*(const Polynomial& a, const F& s) {
        std::vector<F> c = a.c_;
        for (auto& v : c) v *= s;
        return Polynomial(std::move(c));
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    /// Returns (quotient, remainder) with deg remainder < deg divisor.
    friend std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
        if (b.is_zero()) fail("domain_error", "polynomial division by zero");
        if (a.degree() < b.degree()) return {Polynomial{}, a};
        std::vector<F> r = a.c_;
        std::vector<F> q(a.c_.size() - b.c_.size() + 1, zero_like(b.leading()));
        F inv = one_like(b.leading()) / b.leading();
        for (long k = a.degree() - b.degree(); k >= 0; --k) {
            F t = r[static_cast<std::size_t>(k + b.degree())] * inv;
            q[static_cast<std::size_t>(k)] = t;
            if (detail::scalar_is_zero(t)) continue;
            for (long j = 0; j <= b.degree(); ++j)
                r[static_cast<std::size_t>(k + j)] -= t * b.c_[static_cast<std::size_t>(j)];
        }
        r.resize(static_cast<std::size_t>(b.degree()));
        return {Polynomial(std::move(q)), Polynomial(std::move(r))};
    }
    friend Polynomial operator/(const Polynomial& a, const Polynomial& b) { return divmod(a, b).first; }
    friend Polynomial operator%(const Polynomial& a, const Polynomial& b) { return divmod(a, b).second; }

    std::string to_string(const std::string& var = "x") const;

private:
    void trim() {
        while (!c_.empty() && detail::scalar_is_zero(c_.back())) c_.pop_back();
    }

    std::vector<F> c_;
};

/// Monic gcd.
template <typename F>
Polynomial<F> gcd(Polynomial<F> a, Polynomial<F> b) {
    while (!b.is_zero()) {
        Polynomial<F> r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

/// Returns (g, s, t) with s*a + t*b = g and g monic.
template <typename F>
std::tuple<Polynomial<F>, Polynomial<F>, Polynomial<F>> ext_gcd(const Polynomial<F>& a,
                                                                const Polynomial<F>& b) {
    Polynomial<F> r0 = a, r1 = b, s0(F(1)), s1, t0, t1(F(1));
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        Polynomial<F> s2 = s0 - q * s1, t2 = t0 - q * t1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.is_zero()) return {r0, s0, t0};
    F inv = one_like(r0.leading()) / r0.leading();
    return {r0 * inv, s0 * inv, t0 * inv};
}

/// Inverse of a modulo m; requires gcd(a, m) = 1.
template <typename F>
Polynomial<F> inverse_mod(const Polynomial<F>& a, const Polynomial<F>& m) {
    auto [g, s, t] = ext_gcd(a % m, m);
    if (g.degree() != 0) fail("not_invertible", "polynomial not invertible modulo " + m.to_string());
    return s % m;
}

template <typename F>
std::string Polynomial<F>::to_string(const std::string& var) const {
    if (c_.empty()) return "0";
    std::string out;
    for (std::size_t i = c_.size(); i-- > 0;) {
        if (detail::scalar_is_zero(c_[i])) continue;
        std::string coeff = detail::scalar_to_string(c_[i]);
        bool negative = !coeff.empty() && coeff[0] == '-';
        bool compound = coeff.find_first_of("+*", 1) != std::string::npos ||
                        coeff.find('-', 1) != std::string::npos;
        if (compound) {
            negative = false;
            coeff = "(" + coeff + ")";
        }
        if (negative) coeff.erase(0, 1);
        if (!out.empty()) out += negative ? " - " : " + ";
        else if (negative) out += "-";
        std::string mono;
        if (i >= 1) mono = var + (i > 1 ? "^" + std::to_string(i) : "");
        if (mono.empty()) out += coeff;
        else if (coeff == "1") out += mono;
        else out += coeff + "*" + mono;
    }
    return out;
}

template <typename F>
std::string to_string(const Polynomial<F>& p) {
    return p.to_string();
}

}  // namespace finpot
