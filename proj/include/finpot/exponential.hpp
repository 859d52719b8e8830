#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "finpot/determinant.hpp"
#include "finpot/errors.hpp"
#include "finpot/laurent_series.hpp"
#include "finpot/operator.hpp"

namespace finpot {

/// 1 + sum_{d >= 1} z^d term_d, known below `prec`, with a finite index set
/// `core` that every term preserves and outside of which the series is
/// unipotent block-triangular.
template <typename F>
struct OperatorSeries {
    std::string var = "z";
    long prec = 10;
    std::map<long, FinitePotentOperator<F>> terms;
    std::vector<long> core;

    FinitePotentOperator<F> term(long d) const {
        auto it = terms.find(d);
        return it == terms.end() ? FinitePotentOperator<F>{} : it->second;
    }
};

namespace detail {

template <typename F>
bool op_is_zero(const FinitePotentOperator<F>& a) {
    return a.finite.empty() && a.tail.is_zero();
}

// Rows of the finite part, widened to whole tail blocks.
template <typename F>
void add_row_core(const FinitePotentOperator<F>& a, std::set<long>& w) {
    for (long r : a.finite.row_indices()) {
        if (a.tail.is_zero() || r < a.tail.start) {
            w.insert(r);
            continue;
        }
        long b = a.tail.block_begin(r);
        for (long k = 0; k < a.tail.block_size; ++k) w.insert(b + k);
    }
}

template <typename F>
void refresh_core(OperatorSeries<F>& s, std::set<long> w) {
    for (const auto& [d, t] : s.terms) add_row_core(t, w);
    s.core.assign(w.begin(), w.end());
}

}  // namespace detail

/// exp_{z^k}(phi) = sum_{j k < prec} z^{j k} phi^j / j!
template <typename F>
OperatorSeries<F> exp_op(const FinitePotentOperator<F>& phi, long k, long prec) {
    if (k < 1) fail("precondition", "exponential weight must be >= 1");
    Certificate<F> c = certify_finite_potent(phi);
    OperatorSeries<F> s;
    s.prec = prec;
    FinitePotentOperator<F> power = phi;
    Rational inv_fact = 1;
    for (long j = 1; j * k < prec; ++j) {
        inv_fact /= j;
        if (detail::op_is_zero(power)) break;
        s.terms.emplace(j * k, power * F(inv_fact));
        power = power * phi;
    }
    detail::refresh_core(s, std::set<long>(c.W.begin(), c.W.end()));
    return s;
}

template <typename F>
OperatorSeries<F> operator*(const OperatorSeries<F>& a, const OperatorSeries<F>& b) {
    if (a.var != b.var) fail("variable_mismatch", "operator series in different variables");
    OperatorSeries<F> r;
    r.var = a.var;
    r.prec = std::min(a.prec, b.prec);
    auto add = [&](long d, const FinitePotentOperator<F>& x) {
        if (d >= r.prec || detail::op_is_zero(x)) return;
        auto it = r.terms.find(d);
        if (it == r.terms.end()) r.terms.emplace(d, x);
        else it->second = it->second + x;
    };
    for (const auto& [d, x] : a.terms) add(d, x);
    for (const auto& [d, x] : b.terms) add(d, x);
    for (const auto& [i, x] : a.terms)
        for (const auto& [j, y] : b.terms)
            if (i + j < r.prec) add(i + j, x * y);
    for (auto it = r.terms.begin(); it != r.terms.end();) {
        if (detail::op_is_zero(it->second)) it = r.terms.erase(it);
        else ++it;
    }
    std::set<long> w(a.core.begin(), a.core.end());
    w.insert(b.core.begin(), b.core.end());
    detail::refresh_core(r, std::move(w));
    return r;
}

/// Term-by-term operator equality below degree `upto`.
template <typename F>
bool series_equal(const OperatorSeries<F>& a, const OperatorSeries<F>& b, long upto) {
    for (long d = 1; d < upto; ++d)
        if (!op_equal(a.term(d), b.term(d))) return false;
    return true;
}

/// Det over k((z)): determinant of 1 + sum z^d term_d restricted to the core.
template <typename F>
LaurentSeries<F> det_series(const OperatorSeries<F>& s) {
    const std::vector<long>& w = s.core;
    const std::size_t n = w.size();
    std::map<long, std::size_t> where;
    for (std::size_t i = 0; i < n; ++i) where[w[i]] = i;
    std::vector<std::map<long, F>> entries(n * n);
    for (std::size_t i = 0; i < n; ++i) entries[i * n + i].emplace(0, F(1));
    for (const auto& [d, t] : s.terms)
        for (std::size_t j = 0; j < n; ++j)
            for (const auto& [r, v] : t.apply_basis(w[j])) {
                auto it = where.find(r);
                if (it == where.end()) fail("no_common_core", "a term leaves the common core");
                auto& e = entries[it->second * n + j];
                auto jt = e.find(d);
                if (jt == e.end()) e.emplace(d, v);
                else jt->second += v;
            }
    Matrix<LaurentSeries<F>> m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = LaurentSeries<F>(entries[i * n + j], s.prec, s.var);
    if (n == 0) return LaurentSeries<F>(F(1), s.prec, s.var);
    return series_determinant(m);
}

/// [a, b] for operators whose tails commute.
template <typename F>
FinitePotentOperator<F> bracket(const FinitePotentOperator<F>& a, const FinitePotentOperator<F>& b) {
    return FinitePotentOperator<F>(op_commutator(a, b));
}

template <typename F>
struct ZassenhausTerms {
    FinitePotentOperator<F> c1, c2, c3;
};

/// C1 = [f,g], C2 = 2[[f,g],g] - [f,[f,g]],
/// C3 = 3[[[f,g],g],g] - 3[[f,[f,g]],g] + [f,[f,[f,g]]].
template <typename F>
ZassenhausTerms<F> zassenhaus_terms(const FinitePotentOperator<F>& f, const FinitePotentOperator<F>& g) {
    require_compatible_tails(f.tail, g.tail);
    ZassenhausTerms<F> z;
    FinitePotentOperator<F> fg = bracket(f, g);
    FinitePotentOperator<F> f_fg = bracket(f, fg);
    z.c1 = fg;
    z.c2 = bracket(fg, g) * F(2) - f_fg;
    z.c3 = bracket(bracket(fg, g), g) * F(3) - bracket(f_fg, g) * F(3) + bracket(f, f_fg);
    return z;
}

/// exp(f+g) = exp f · exp g · exp_{z^2}(-C1/2) · exp_{z^3}(-C2/6) · exp_{z^4}(-C3/24)
/// as operator series below degree prec (at most 5).
template <typename F>
bool zassenhaus_check(const FinitePotentOperator<F>& f, const FinitePotentOperator<F>& g, long prec = 5) {
    if (prec < 1 || prec > 5) fail("precondition", "the identity with C1..C3 only holds through z^4");
    ZassenhausTerms<F> c = zassenhaus_terms(f, g);
    OperatorSeries<F> lhs = exp_op(f + g, 1, prec);
    OperatorSeries<F> rhs = exp_op(f, 1, prec) * exp_op(g, 1, prec);
    rhs = rhs * exp_op(c.c1 * F(Rational(-1, 2)), 2, prec);
    rhs = rhs * exp_op(c.c2 * F(Rational(-1, 6)), 3, prec);
    rhs = rhs * exp_op(c.c3 * F(Rational(-1, 24)), 4, prec);
    return series_equal(lhs, rhs, prec);
}

/// Det of prod_i exp_{z^{w_i}}(phi_i) for a family compatible with Det from
/// index compat_m on (1-based): traces vanish there, so the product of the
/// first compat_m - 1 factors is the value. Stationarity is re-verified by
/// extending the product two more factors, and the product of determinants
/// is checked against the determinant of the operator product.
template <typename F>
LaurentSeries<F> infinite_product_det(const std::vector<std::pair<long, FinitePotentOperator<F>>>& family,
                                      long compat_m, long prec, HalfSpaceSpec h = {}) {
    if (compat_m < 1) fail("precondition", "compat_m must be >= 1");
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (!classify(family[i].second, h).in_E0)
            fail("precondition", "family member " + std::to_string(i + 1) + " is not in E0");
        if (static_cast<long>(i + 1) >= compat_m && !detail::scalar_is_zero(tate_trace(family[i].second)))
            fail("compatibility_violated", "nonzero trace at index " + std::to_string(i + 1) + " >= compat_m");
    }
    auto product_up_to = [&](long m) {
        LaurentSeries<F> acc(F(1), prec, "z");
        for (long i = 1; i < m && i <= static_cast<long>(family.size()); ++i)
            acc = acc * det_series(exp_op(family[static_cast<std::size_t>(i - 1)].second,
                                          family[static_cast<std::size_t>(i - 1)].first, prec));
        return acc;
    };
    LaurentSeries<F> value = product_up_to(compat_m);
    if (product_up_to(compat_m + 2) != value)
        fail("compatibility_violated", "product not stationary beyond compat_m");
    OperatorSeries<F> op;
    op.prec = prec;
    for (long i = 1; i < compat_m && i <= static_cast<long>(family.size()); ++i)
        op = op * exp_op(family[static_cast<std::size_t>(i - 1)].second, family[static_cast<std::size_t>(i - 1)].first, prec);
    if (det_series(op) != value) fail("structural_failure", "Det of the operator product differs from the product of Dets");
    return value;
}

}  // namespace finpot
