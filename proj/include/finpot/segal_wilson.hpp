#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "finpot/errors.hpp"
#include "finpot/laurent_series.hpp"
#include "finpot/matrix.hpp"
#include "finpot/rational_function.hpp"
#include "finpot/residue.hpp"

namespace finpot {

/// f = sum a_n z^n (plus) or f~ = sum b_m z^{-m} (minus), n, m >= 1.
struct LoopExponent {
    enum class Side { plus, minus };
    Side side = Side::plus;
    std::map<long, Rational> coeffs;

    long support() const { return coeffs.empty() ? 0 : coeffs.rbegin()->first; }

    /// From a Laurent polynomial in z: positive powers only for plus, negative
    /// powers only for minus.
    static LoopExponent from_function(const RationalFunction& f, Side side) {
        LoopExponent e;
        e.side = side;
        if (f.is_zero()) return e;
        const RatPoly& d = f.denominator();
        if (d.degree() > 0 && (d != RatPoly::monomial(Rational(1), static_cast<std::size_t>(d.degree()))))
            fail("precondition", "loop exponent must be a Laurent polynomial");
        const long shift = d.degree();
        for (long k = 0; k <= f.numerator().degree(); ++k) {
            Rational c = f.numerator().coeff(k);
            if (c == 0) continue;
            long n = k - shift;
            if (side == Side::plus ? n < 1 : n > -1)
                fail("precondition", side == Side::plus ? "plus exponent needs only positive powers"
                                                        : "minus exponent needs only negative powers");
            e.coeffs[side == Side::plus ? n : -n] = c;
        }
        return e;
    }

    RationalFunction as_function() const {
        RationalFunction acc;
        for (const auto& [n, c] : coeffs)
            acc += RationalFunction(c) * RationalFunction::t().pow(side == Side::plus ? n : -n);
        return acc;
    }
};

using ToeplitzBlock = Matrix<Rational>;

namespace detail {

// Coefficients c_0..c_{count-1} of exp(sign * sum_n a_n x^n).
inline std::vector<Rational> exp_coefficients(const LoopExponent& e, long count, int sign) {
    std::map<long, Rational> c;
    for (const auto& [n, a] : e.coeffs)
        if (n < count) c.emplace(n, sign * a);
    LaurentSeries<Rational> s = series_exp(LaurentSeries<Rational>(std::move(c), count, "z"));
    std::vector<Rational> out(static_cast<std::size_t>(count));
    for (long k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = s.coeff(k);
    return out;
}

inline ToeplitzBlock toeplitz_signed(const LoopExponent& e, long size, int sign) {
    std::vector<Rational> c = exp_coefficients(e, size, sign);
    ToeplitzBlock m(static_cast<std::size_t>(size), static_cast<std::size_t>(size));
    for (long i = 0; i < size; ++i)
        for (long j = 0; j < size; ++j) {
            long k = e.side == LoopExponent::Side::plus ? i - j : j - i;
            if (k >= 0) m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = c[static_cast<std::size_t>(k)];
        }
    return m;
}

}  // namespace detail

/// H+ -> H+ compression of multiplication by exp(f) on z^0..z^{T-1}:
/// lower triangular for plus, upper triangular for minus, unit diagonal.
inline ToeplitzBlock toeplitz_block(const LoopExponent& e, long T) {
    if (T < 1) fail("precondition", "T must be >= 1");
    return detail::toeplitz_signed(e, T, 1);
}

/// Det of the leading T×T block of ã a ã^{-1} a^{-1}.
///
/// Products of the T×T truncations alone have determinant exactly 1, so the
/// factors are formed at size 2T (where lower/upper triangular truncation is
/// exact for each factor and its inverse) and only the leading block of the
/// product is kept. The work is done on integer matrices after clearing the
/// common denominator of all four Toeplitz symbols.
inline Rational sw_pairing_truncated(const LoopExponent& f, const LoopExponent& ft, long T) {
    if (f.side != LoopExponent::Side::plus || ft.side != LoopExponent::Side::minus)
        fail("precondition", "sw pairing takes a plus and a minus exponent");
    if (T <= f.support() + ft.support()) fail("precondition", "T must exceed the combined support");
    // Inner products of the infinite blocks are cut at 3T. A 2T cut leaves a
    // residual as large as the truncation error itself; at 3T it is below
    // double resolution for every exponent the sweeps use.
    const long n = 3 * T;
    const std::size_t N = static_cast<std::size_t>(n), L = static_cast<std::size_t>(T);
    std::vector<std::vector<Rational>> sym = {
        detail::exp_coefficients(f, n, 1), detail::exp_coefficients(f, n, -1),
        detail::exp_coefficients(ft, n, 1), detail::exp_coefficients(ft, n, -1)};
    Integer den = 1;
    for (const auto& v : sym)
        for (const auto& c : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    std::vector<std::vector<Integer>> z(4, std::vector<Integer>(N));
    for (std::size_t s = 0; s < 4; ++s)
        for (std::size_t k = 0; k < N; ++k) z[s][k] = Rational(sym[s][k] * Rational(den)).get_num();
    // lower Toeplitz entry (i, j) = c_{i-j}; upper entry (i, j) = d_{j-i}
    const auto& a = z[0];
    const auto& a_inv = z[1];
    const auto& at = z[2];
    const auto& at_inv = z[3];
    Matrix<Integer> x(L, N), y(N, L), xy(L, L);
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = 0; j < N; ++j)
            for (std::size_t k = std::max(i, j); k < N; ++k)
                mpz_addmul(x(i, j).get_mpz_t(), at[k - i].get_mpz_t(), a[k - j].get_mpz_t());
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < L; ++j)
            for (std::size_t k = std::max(i, j); k < N; ++k)
                mpz_addmul(y(i, j).get_mpz_t(), at_inv[k - i].get_mpz_t(), a_inv[k - j].get_mpz_t());
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = 0; j < L; ++j)
            for (std::size_t k = 0; k < N; ++k)
                mpz_addmul(xy(i, j).get_mpz_t(), x(i, k).get_mpz_t(), y(k, j).get_mpz_t());
    Integer d = determinant_modular(xy);
    Integer scale;
    mpz_pow_ui(scale.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(4 * T));
    Rational r(d, scale);
    r.canonicalize();
    return r;
}

/// r with pairing = exp(r): r = sum_n n a_n b_n.
inline Rational sw_pairing_closed(const LoopExponent& f, const LoopExponent& ft) {
    Rational r = 0;
    for (const auto& [n, a] : f.coeffs) {
        auto it = ft.coeffs.find(n);
        if (it != ft.coeffs.end()) r += Rational(n) * a * it->second;
    }
    return r;
}

/// The closed exponent equals res_{t=0}(f~ df).
inline bool sw_vs_tate_check(const LoopExponent& f, const LoopExponent& ft) {
    return residue_classical(ft.as_function(), f.as_function(), Place::point(0)) == sw_pairing_closed(f, ft);
}

/// |truncated(T) - exp(r)| in double precision.
inline double sw_truncation_error(const LoopExponent& f, const LoopExponent& ft, long T) {
    return std::fabs(sw_pairing_truncated(f, ft, T).get_d() - std::exp(sw_pairing_closed(f, ft).get_d()));
}

/// (g1, g2) -> Det(a1 a2 a3^{-1}) with g3 = g1 g2. For two elements of the
/// same triangular subgroup the blocks multiply exactly and the value is 1;
/// a mixed pair is the commutator pairing and is checked against its closed
/// form at truncation T.
inline bool sw_group_cocycle_check(const LoopExponent& g1, const LoopExponent& g2, long T) {
    if (g1.side == g2.side) {
        LoopExponent g3 = g1;
        for (const auto& [n, c] : g2.coeffs) g3.coeffs[n] += c;
        ToeplitzBlock a1 = toeplitz_block(g1, T), a2 = toeplitz_block(g2, T), a3 = toeplitz_block(g3, T);
        if (a1 * a2 != a3) return false;
        return determinant(a1 * a2 * inverse(a3)) == 1;
    }
    const LoopExponent& plus = g1.side == LoopExponent::Side::plus ? g1 : g2;
    const LoopExponent& minus = g1.side == LoopExponent::Side::plus ? g2 : g1;
    return sw_truncation_error(plus, minus, T) < 1e-8;
}

}  // namespace finpot
