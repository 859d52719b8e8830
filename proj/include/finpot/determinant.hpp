#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "finpot/ast.hpp"
#include "finpot/errors.hpp"
#include "finpot/laurent_series.hpp"
#include "finpot/matrix.hpp"
#include "finpot/number_field.hpp"
#include "finpot/operator.hpp"
#include "finpot/polynomial.hpp"

namespace finpot {

enum class DetRoute { ast, exterior, charpoly, plemelj_smithies, logdet };

inline std::string to_string(DetRoute r) {
    switch (r) {
        case DetRoute::ast: return "ast";
        case DetRoute::exterior: return "exterior";
        case DetRoute::charpoly: return "charpoly";
        case DetRoute::plemelj_smithies: return "plemelj_smithies";
        case DetRoute::logdet: return "logdet";
    }
    return "?";
}

template <typename F>
struct DetResult {
    F value;
    DetRoute route;
};

/// Trace of phi on its invertible core W_phi.
template <typename F>
F tate_trace(const FinitePotentOperator<F>& phi) {
    return lift_ast(phi).core_matrix.trace();
}

template <typename F>
F tate_trace(const SparseOperator<F>& s) {
    return tate_trace(FinitePotentOperator<F>(s));
}

/// Characteristic polynomial det(x - M) by Faddeev-LeVerrier.
template <typename F>
Polynomial<F> char_poly(const Matrix<F>& m) {
    if (!m.square()) fail("precondition", "char_poly needs a square matrix");
    const std::size_t n = m.rows();
    std::vector<F> c(n + 1, F(0));
    c[n] = F(1);
    Matrix<F> mk(n, n);  // M_0 = 0
    for (std::size_t k = 1; k <= n; ++k) {
        mk = m * mk + Matrix<F>::identity(n) * c[n - k + 1];
        c[n - k] = -(m * mk).trace() / F(static_cast<long>(k));
    }
    return Polynomial<F>(std::move(c));
}

/// Elementary symmetric values e_0..e_n of the eigenvalues of M.
template <typename F>
std::vector<F> elementary_symmetric(const Matrix<F>& m) {
    Polynomial<F> cp = char_poly(m);
    const std::size_t n = m.rows();
    std::vector<F> e(n + 1);
    for (std::size_t r = 0; r <= n; ++r) {
        F c = cp.coeff(static_cast<long>(n - r));
        e[r] = r % 2 ? F(-c) : c;
    }
    return e;
}

template <typename F>
F det_one_plus(const FinitePotentOperator<F>& phi) {
    ASTDecomposition<F> a = lift_ast(phi);
    return determinant(Matrix<F>::identity(a.core_dim()) + a.core_matrix);
}

/// det(1 + mu*core) as a polynomial in mu.
template <typename F>
Polynomial<F> det_poly(const FinitePotentOperator<F>& phi) {
    return Polynomial<F>(elementary_symmetric(lift_ast(phi).core_matrix));
}

/// Trace of the r-th exterior power, zero beyond the core dimension.
template <typename F>
F exterior_trace(const FinitePotentOperator<F>& phi, long r) {
    if (r < 1) fail("precondition", "exterior_trace needs r >= 1");
    std::vector<F> e = elementary_symmetric(lift_ast(phi).core_matrix);
    return static_cast<std::size_t>(r) < e.size() ? e[static_cast<std::size_t>(r)] : F(0);
}

/// p_j = tr(phi^j) for j = 1..count, by composing the operator itself.
template <typename F>
std::vector<F> power_traces(const FinitePotentOperator<F>& phi, long count) {
    std::vector<F> p(static_cast<std::size_t>(count) + 1, F(0));
    if (count < 1) return p;
    FinitePotentOperator<F> q = phi;
    for (long j = 1; j <= count; ++j) {
        p[static_cast<std::size_t>(j)] = tate_trace(q);
        if (j < count) q = q * phi;
    }
    return p;
}

/// alpha_m: determinant of the m×m matrix with p_{i-j+1} on and below the
/// diagonal and m-1, m-2, ..., 1 on the superdiagonal.
template <typename F>
F plemelj_smithies_alpha(const std::vector<F>& p, long m) {
    if (m == 0) return F(1);
    const std::size_t n = static_cast<std::size_t>(m);
    Matrix<F> a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) a(i, j) = p[i - j + 1];
        if (i + 1 < n) a(i, i + 1) = F(static_cast<long>(n - 1 - i));
    }
    return determinant(a);
}

/// sum_{m <= order} mu^m alpha_m / m!
template <typename F>
Polynomial<F> plemelj_smithies_series(const FinitePotentOperator<F>& phi, long order) {
    std::vector<F> p = power_traces(phi, order);
    std::vector<F> c;
    for (long m = 0; m <= order; ++m)
        c.push_back(plemelj_smithies_alpha(p, m) / F(factorial(static_cast<unsigned>(m))));
    return Polynomial<F>(std::move(c));
}

/// exp(-sum_{r<prec} mu^r/r tr((-phi)^r)) in the variable mu.
template <typename F>
LaurentSeries<F> log_det_series(const FinitePotentOperator<F>& phi, long prec) {
    std::vector<F> p = power_traces(phi, prec - 1);
    std::map<long, F> c;
    for (long r = 1; r < prec; ++r) {
        // tr((-phi)^r) = (-1)^r p_r
        F v = p[static_cast<std::size_t>(r)] / F(r);
        if (r % 2 == 0) v = -v;
        if (!detail::scalar_is_zero(v)) c.emplace(r, v);
    }
    return series_exp(LaurentSeries<F>(std::move(c), prec, "mu"));
}

/// det(1 - mu*phi) * exp(sum_{j<m} mu^j tr(phi^j)/j), truncated.
template <typename F>
LaurentSeries<F> regularized_det_series(const FinitePotentOperator<F>& phi, long m, long prec) {
    if (m < 2) fail("precondition", "regularized determinant needs m >= 2");
    Polynomial<F> d = det_poly(phi);
    std::map<long, F> dc, ec;
    for (long r = 0; r <= d.degree(); ++r) {
        F v = d.coeff(r);
        if (r % 2) v = -v;
        if (!detail::scalar_is_zero(v)) dc.emplace(r, v);
    }
    std::vector<F> p = power_traces(phi, m - 1);
    for (long j = 1; j < m; ++j) {
        F v = p[static_cast<std::size_t>(j)] / F(j);
        if (!detail::scalar_is_zero(v)) ec.emplace(j, v);
    }
    LaurentSeries<F> poly(std::move(dc), prec, "mu");
    return poly * series_exp(LaurentSeries<F>(std::move(ec), prec, "mu"));
}

namespace detail {

// Index set closed under phi that also splits off the rest of the space:
// every row and column of the finite part, with tail-region indices widened
// to their whole block.
template <typename F>
std::vector<long> support_block(const FinitePotentOperator<F>& phi) {
    std::set<long> s;
    auto add = [&](long i) {
        if (phi.tail.is_zero() || i < phi.tail.start) {
            s.insert(i);
            return;
        }
        long b = phi.tail.block_begin(i);
        for (long k = 0; k < phi.tail.block_size; ++k) s.insert(b + k);
    };
    for (long i : phi.finite.row_indices()) add(i);
    for (long i : phi.finite.col_indices()) add(i);
    return {s.begin(), s.end()};
}

template <typename F>
Matrix<F> operator_block(const FinitePotentOperator<F>& phi, const std::vector<long>& idx) {
    Matrix<F> m(idx.size(), idx.size());
    std::map<long, std::size_t> where;
    for (std::size_t i = 0; i < idx.size(); ++i) where[idx[i]] = i;
    for (std::size_t j = 0; j < idx.size(); ++j)
        for (const auto& [r, v] : phi.apply_basis(idx[j])) {
            auto it = where.find(r);
            if (it == where.end()) fail("structural_failure", "support block is not invariant");
            m(it->second, j) = v;
        }
    return m;
}

}  // namespace detail

/// psi with (1 + phi)(1 + psi) = 1.
///
/// On the support block S the inverse of 1 + phi|_S is assembled from the
/// Fitting splitting: (1 + core)^{-1} on W and the terminating Neumann series
/// on the nilpotent part. Off S only the tail acts and (1 + T)^{-1} - 1 is
/// again a polynomial tail.
template <typename F>
FinitePotentOperator<F> invert_one_plus(const FinitePotentOperator<F>& phi) {
    certify_finite_potent(phi);
    std::vector<long> s = detail::support_block(phi);
    Matrix<F> m = detail::operator_block(phi, s);
    ASTDecomposition<F> a = fitting(m);
    Matrix<F> one_core = Matrix<F>::identity(a.core_dim()) + a.core_matrix;
    if (detail::scalar_is_zero(determinant(one_core))) fail("not_invertible", "Det(1 + phi) = 0");
    Matrix<F> core_inv = inverse(one_core);
    const std::size_t k = a.nil_matrix.rows();
    Matrix<F> neumann = Matrix<F>::identity(k), term = Matrix<F>::identity(k);
    for (long i = 1; i < a.nil_degree; ++i) {
        term = term * (a.nil_matrix * F(-1));
        neumann = neumann + term;
    }
    const std::size_t n = s.size(), r = a.core_dim();
    Matrix<F> blockdiag(n, n);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) blockdiag(i, j) = core_inv(i, j);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) blockdiag(r + i, r + j) = neumann(i, j);
    Matrix<F> b = hstack(a.core_basis, a.nil_basis);
    Matrix<F> x = n ? Matrix<F>(b * blockdiag * inverse(b) - Matrix<F>::identity(n)) : Matrix<F>();

    TailDescriptor<F> q;
    if (!phi.tail.is_zero()) {
        // (1 + T)^{-1} - 1 = sum_{k >= 1} (-T)^k, finite since T is nilpotent
        q = phi.tail;
        const std::size_t sz = q.poly.size();
        std::vector<F> minus_t(sz), power(sz, F(0)), acc(sz, F(0));
        for (std::size_t i = 0; i < sz; ++i) minus_t[i] = -phi.tail.poly[i];
        power[0] = F(1);
        for (long step = 1; step <= phi.tail.nilpotency(); ++step) {
            std::vector<F> next(sz, F(0));
            for (std::size_t i = 0; i < sz; ++i)
                for (std::size_t j = 0; i + j < sz; ++j) next[i + j] += power[i] * minus_t[j];
            power = std::move(next);
            for (std::size_t i = 0; i < sz; ++i) acc[i] += power[i];
        }
        q.poly = std::move(acc);
    }
    FinitePotentOperator<F> qop(SparseOperator<F>{}, q);
    SparseOperator<F> f;
    for (std::size_t j = 0; j < n; ++j) {
        SparseVector<F> qcol = qop.apply_basis(s[j]);
        for (std::size_t i = 0; i < n; ++i) {
            F v = x(i, j);
            auto it = qcol.find(s[i]);
            if (it != qcol.end()) v -= it->second;
            f.add(s[i], s[j], v);
        }
    }
    return {std::move(f), q};
}

/// Regular representation of phi over K = Q[x]/(p) as an operator over Q.
/// K-index i < start goes to d*i + a; inside the tail region the d copies of
/// each K-block become d consecutive Q-blocks of the same size.
inline FinitePotentOperator<Rational> restrict_scalars(const FinitePotentOperator<NumberFieldElement>& phi,
                                                       long field_degree) {
    const long d = field_degree;
    if (is_zero(det_one_plus(phi))) fail("not_invertible", "1 + phi is not invertible over the field");
    const TailDescriptor<NumberFieldElement>& t = phi.tail;
    auto map = [&](long i, long a) {
        if (t.is_zero() || i < t.start) return d * i + a;
        long b = (i - t.start) / t.block_size, off = (i - t.start) % t.block_size;
        return d * t.start + b * t.block_size * d + a * t.block_size + off;
    };
    SparseOperator<Rational> f;
    for (const auto& [r, c, v] : phi.finite.entries()) {
        if (v.has_modulus() && v.field_degree() != d) fail("precondition", "entry from a different field");
        Matrix<Rational> m = v.has_modulus() ? v.multiplication_matrix()
                                             : Matrix<Rational>::identity(static_cast<std::size_t>(d)) * v.rational_value();
        for (long a = 0; a < d; ++a)
            for (long b = 0; b < d; ++b) f.add(map(r, b), map(c, a), m(static_cast<std::size_t>(b), static_cast<std::size_t>(a)));
    }
    TailDescriptor<Rational> q;
    if (!t.is_zero()) {
        std::vector<Rational> poly;
        for (const auto& c : t.poly) {
            if (!c.is_rational()) fail("precondition", "restriction of scalars needs a tail with rational coefficients");
            poly.push_back(c.rational_value());
        }
        q = TailDescriptor<Rational>::polynomial(t.block_size, d * t.start, poly);
    }
    return {std::move(f), q};
}

/// Det of 1 + phi on the span of the first M vectors of the basis
/// (certificate core, then the untouched tail blocks in order).
template <typename F>
F wedge_scaling_check(const FinitePotentOperator<F>& phi, long m) {
    Certificate<F> c = certify_finite_potent(phi);
    const long w = static_cast<long>(c.W.size());
    const long s = phi.tail.is_zero() ? 1 : phi.tail.block_size;
    if (m < w || (m - w) % s != 0)
        fail("not_block_aligned", "M = " + std::to_string(m) + " must be " + std::to_string(w) + " + k*" + std::to_string(s));
    std::vector<long> basis = c.W;
    std::set<long> used(c.W.begin(), c.W.end());
    if (phi.tail.is_zero()) {
        // without a tail the remaining vectors are mapped into the core
        for (long i = 0; static_cast<long>(basis.size()) < m; ++i) {
            for (long cand : {i, -i - 1})
                if (!used.count(cand) && static_cast<long>(basis.size()) < m) {
                    basis.push_back(cand);
                    used.insert(cand);
                }
        }
    } else {
        for (long b = phi.tail.start; static_cast<long>(basis.size()) < m; b += s) {
            if (used.count(b)) continue;
            for (long k = 0; k < s; ++k) basis.push_back(b + k);
        }
    }
    Matrix<F> a = Matrix<F>::identity(basis.size());
    std::map<long, std::size_t> where;
    for (std::size_t i = 0; i < basis.size(); ++i) where[basis[i]] = i;
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (const auto& [r, v] : phi.apply_basis(basis[j])) {
            auto it = where.find(r);
            if (it != where.end()) a(it->second, j) += v;
        }
    return determinant(a);
}

}  // namespace finpot
