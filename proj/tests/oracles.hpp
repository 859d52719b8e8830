#pragma once

// Independent reference computations. None of these call the library's own
// elimination, Faddeev-LeVerrier, series or residue code paths.

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include "finpot/finpot.hpp"

namespace oracle {

using finpot::Integer;
using finpot::Matrix;
using finpot::Rational;

// Leibniz expansion over all permutations.
template <typename F>
F permutation_det(const Matrix<F>& m) {
    const std::size_t n = m.rows();
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    F total = F(0);
    do {
        int sign = 1;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (p[i] > p[j]) sign = -sign;
        F term = F(sign);
        for (std::size_t i = 0; i < n; ++i) term = term * m(i, p[i]);
        total = total + term;
    } while (std::next_permutation(p.begin(), p.end()));
    return total;
}

// Textbook elimination with rational pivots, for sizes where Leibniz is hopeless.
inline Rational gauss_det(Matrix<Rational> m) {
    const std::size_t n = m.rows();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m(p, c) == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
            det = -det;
        }
        det *= m(c, c);
        for (std::size_t r = c + 1; r < n; ++r) {
            if (m(r, c) == 0) continue;
            Rational f = m(r, c) / m(c, c);
            for (std::size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
        }
    }
    return det;
}

// Sum of the r×r principal minors.
inline Rational principal_minor_sum(const Matrix<Rational>& m, std::size_t r) {
    const std::size_t n = m.rows();
    if (r > n) return 0;
    Rational total = 0;
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<long>(r), true);
    do {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i)
            if (pick[i]) idx.push_back(i);
        total += permutation_det(m.submatrix(idx, idx));
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return total;
}

// Dense matrix of phi on the index window [lo, hi).
inline Matrix<Rational> window(const finpot::FinitePotentOperator<Rational>& phi, long lo, long hi) {
    const std::size_t n = static_cast<std::size_t>(hi - lo);
    Matrix<Rational> m(n, n);
    for (long j = lo; j < hi; ++j)
        for (const auto& [r, v] : phi.apply_basis(j))
            if (r >= lo && r < hi) m(static_cast<std::size_t>(r - lo), static_cast<std::size_t>(j - lo)) = v;
    return m;
}

// Truncated power series as a dense vector: sum_k c[k] x^k, k < n.
using Dense = std::vector<Rational>;

inline Dense dense_mul(const Dense& a, const Dense& b) {
    Dense c(a.size(), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; i + j < a.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

// exp(a) by summing a^k/k! until the powers vanish (a[0] must be 0).
inline Dense dense_exp(const Dense& a) {
    Dense out(a.size(), Rational(0)), power(a.size(), Rational(0));
    out[0] = 1;
    power[0] = 1;
    for (std::size_t k = 1; k < a.size(); ++k) {
        power = dense_mul(power, a);
        for (std::size_t i = 0; i < a.size(); ++i) out[i] += power[i] / finpot::factorial(static_cast<unsigned>(k));
    }
    return out;
}

inline Dense dense_from(const finpot::LaurentSeries<Rational>& s, std::size_t n) {
    Dense d(n, Rational(0));
    for (const auto& [k, c] : s.coeffs())
        if (k >= 0 && static_cast<std::size_t>(k) < n) d[static_cast<std::size_t>(k)] = c;
    return d;
}

// exp(c z^2) truncated to n terms.
inline Dense exp_z2(const Rational& c, std::size_t n) {
    Dense a(n, Rational(0));
    if (n > 2) a[2] = c;
    return dense_exp(a);
}

// res_{t=a} h dt via (1/(k-1)!) d^{k-1}/dt^{k-1} [(t-a)^k h] at a.
inline Rational residue_at_point(const finpot::RationalFunction& h, const Rational& a) {
    using finpot::RationalFunction;
    if (h.is_zero()) return 0;
    long k = 0;
    finpot::RatPoly den = h.denominator();
    while (den.eval(a) == 0) {
        den = divmod(den, finpot::RatPoly(std::vector<Rational>{Rational(-a), Rational(1)})).first;
        ++k;
    }
    if (k == 0) return 0;
    RationalFunction g(h.numerator(), den);
    for (long i = 1; i < k; ++i) g = g.derivative();
    return g.numerator().eval(a) / g.denominator().eval(a) / finpot::factorial(static_cast<unsigned>(k - 1));
}

// res_inf h dt = -(coefficient of 1/t in the expansion at infinity).
inline Rational residue_at_infinity(const finpot::RationalFunction& h) {
    if (h.is_zero()) return 0;
    auto [q, r] = divmod(h.numerator(), h.denominator());
    if (r.is_zero() || r.degree() != h.denominator().degree() - 1) return 0;
    return -r.leading() / h.denominator().leading();
}

// Residue at a place p with only simple poles there: Tr(N(theta)/D'(theta)).
inline Rational residue_simple_place(const finpot::RationalFunction& h, const finpot::RatPoly& p) {
    auto mod = finpot::make_modulus(p.monic());
    finpot::NumberFieldElement theta = finpot::NumberFieldElement::generator(mod);
    auto [q, r] = divmod(h.denominator(), p.monic());
    if (!r.is_zero()) return 0;
    finpot::NumberFieldElement num = h.numerator().eval(theta);
    finpot::NumberFieldElement dd = h.denominator().derivative().eval(theta);
    return finpot::field_trace(num / dd);
}

}  // namespace oracle
