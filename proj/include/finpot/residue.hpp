#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "finpot/determinant.hpp"
#include "finpot/errors.hpp"
#include "finpot/factor.hpp"
#include "finpot/laurent_series.hpp"
#include "finpot/number_field.hpp"
#include "finpot/operator.hpp"
#include "finpot/rational_function.hpp"

namespace finpot {

/// Closed point of P^1 over Q: a monic irreducible polynomial or infinity.
struct Place {
    bool infinite = false;
    RatPoly poly;  // monic irreducible; unused at infinity

    static Place infinity() { return {true, RatPoly{}}; }
    static Place finite(const RatPoly& p, bool check = true) {
        RatPoly m = p.monic();
        if (m.degree() < 1) fail("precondition", "a place needs a polynomial of positive degree");
        if (check && !is_irreducible(m)) fail("precondition", "'" + m.to_string("t") + "' is not irreducible");
        return {false, m};
    }
    /// t = a
    static Place point(const Rational& a) {
        return {false, RatPoly(std::vector<Rational>{Rational(-a), Rational(1)})};
    }
    /// "inf", "t", "t-1", "t^2+1", ...
    static Place parse(const std::string& s) {
        if (s == "inf" || s == "infinity" || s == "oo") return infinity();
        return finite(parse_polynomial(s, "t"));
    }

    long degree() const { return infinite ? 1 : poly.degree(); }
    /// The rational point a of a degree-one finite place t - a.
    Rational root() const {
        if (infinite || poly.degree() != 1) fail("precondition", "place is not a rational point");
        return -poly.coeff(0);
    }
    std::string to_string() const { return infinite ? "inf" : poly.to_string("t"); }

    friend bool operator==(const Place& a, const Place& b) {
        return a.infinite == b.infinite && (a.infinite || a.poly == b.poly);
    }
};

inline std::string to_string(const Place& p) { return p.to_string(); }

/// Expansion sum_i r_i(theta) pi^i of a function at a place, pi the local
/// parameter (the minimal polynomial itself, or 1/t at infinity).
struct LocalExpansion {
    Place place;
    LaurentSeries<NumberFieldElement> series;
};

using SymbolValue = LaurentSeries<Rational>;

namespace detail {

// p-adic digits of N/D (D coprime to p) for indices 0..count-1.
inline std::vector<RatPoly> digits(const RatPoly& num, const RatPoly& den, const RatPoly& p, long count) {
    std::vector<RatPoly> out;
    if (count <= 0) return out;
    RatPoly pm = p.pow(static_cast<unsigned>(count));
    RatPoly h = (num * inverse_mod(den % pm, pm)) % pm;
    for (long i = 0; i < count; ++i) {
        auto [q, r] = divmod(h, p);
        out.push_back(r);
        h = q;
    }
    return out;
}

// Same expansion at a finite place for functions already in the local variable.
inline LocalExpansion expand_finite(const RationalFunction& f, const Place& p, long prec, const std::string& var) {
    LocalExpansion e{p, LaurentSeries<NumberFieldElement>::zero(prec, var)};
    if (f.is_zero()) fail("domain_error", "expansion of the zero function");
    long kn = multiplicity(f.numerator(), p.poly), kd = multiplicity(f.denominator(), p.poly);
    long v = kn - kd;
    RatPoly n = f.numerator() / p.poly.pow(static_cast<unsigned>(kn));
    RatPoly d = f.denominator() / p.poly.pow(static_cast<unsigned>(kd));
    std::shared_ptr<const RatPoly> mod = p.poly.degree() > 1 ? make_modulus(p.poly) : nullptr;
    std::map<long, NumberFieldElement> c;
    std::vector<RatPoly> r = digits(n, d, p.poly, prec - v);
    for (std::size_t i = 0; i < r.size(); ++i) {
        NumberFieldElement x = mod ? NumberFieldElement(r[i], mod) : NumberFieldElement(r[i].coeff(0));
        if (!is_zero(x)) c.emplace(v + static_cast<long>(i), x);
    }
    e.series = LaurentSeries<NumberFieldElement>(std::move(c), prec, var);
    return e;
}

inline Rational residue_at_finite(const RationalFunction& h, const RatPoly& p) {
    if (h.is_zero()) return 0;
    long e = multiplicity(h.denominator(), p);
    if (e == 0) return 0;
    RatPoly d = h.denominator() / p.pow(static_cast<unsigned>(e));
    RatPoly r = digits(h.numerator(), d, p, e).back();
    if (p.degree() == 1) return r.coeff(0);
    // sum over the conjugate roots of r(theta)/p'(theta); higher polar digits
    // r_{-k}/p^k with k >= 2 have vanishing total residue
    auto mod = make_modulus(p);
    return field_trace(NumberFieldElement(r, mod) / NumberFieldElement(p.derivative(), mod));
}

inline RatPoly t_poly() { return RatPoly::x(); }

}  // namespace detail

/// Laurent expansion at a place, coefficients in the residue field Q[theta]/(p).
inline LocalExpansion local_expand(const RationalFunction& f, const Place& p, long prec) {
    if (f.is_zero()) fail("domain_error", "expansion of the zero function");
    if (p.infinite) {
        LocalExpansion e = detail::expand_finite(f.at_infinity(), Place::point(0), prec, "w");
        e.place = p;
        return e;
    }
    return detail::expand_finite(f, p, prec, "u");
}

/// res_p(f dg): trace over the residue field of the coefficient of pi^{-1}
/// in f g' dt, rewritten in the local parameter.
inline Rational residue_classical(const RationalFunction& f, const RationalFunction& g, const Place& p) {
    if (f.is_zero() || g.is_zero()) return 0;
    if (p.infinite) {
        RationalFunction F = f.at_infinity(), G = g.at_infinity();
        return detail::residue_at_finite(F * G.derivative(), detail::t_poly());
    }
    return detail::residue_at_finite(f * g.derivative(), p.poly);
}

namespace detail {

// Laurent polynomial sum_k c_k u^k as a sparse map.
using LaurentPoly = std::map<long, Rational>;

// f(u + a) expanded at u = 0 below degree `upto`.
inline LaurentPoly laurent_part(const RationalFunction& f, const Rational& a, long upto) {
    LaurentPoly out;
    if (f.is_zero()) return out;
    RationalFunction shifted = f.compose(RatPoly(std::vector<Rational>{a, Rational(1)}));
    LocalExpansion e = expand_finite(shifted, Place::point(0), upto, "u");
    for (const auto& [d, c] : e.series.coeffs()) out.emplace(d, c.rational_value());
    return out;
}

inline long pole_order(const LaurentPoly& p) { return p.empty() ? 0 : std::max(0L, -p.begin()->first); }
inline long top_degree(const LaurentPoly& p) { return p.empty() ? 0 : std::max(0L, p.rbegin()->first); }

// Multiplication by a Laurent polynomial on the basis e_i <-> u^i.
inline SparseVector<Rational> multiply(const LaurentPoly& f, const SparseVector<Rational>& v) {
    SparseVector<Rational> out;
    for (const auto& [j, x] : v)
        for (const auto& [k, c] : f) accumulate(out, j + k, Rational(c * x));
    return out;
}

// pi_c f pi_c with pi_c the projection onto indices >= cut.
inline SparseVector<Rational> multiply_projected(const LaurentPoly& f, const SparseVector<Rational>& v, long cut) {
    SparseVector<Rational> in;
    for (const auto& [j, x] : v)
        if (j >= cut) in.emplace(j, x);
    SparseVector<Rational> out = multiply(f, in);
    for (auto it = out.begin(); it != out.end();) {
        if (it->first < cut) it = out.erase(it);
        else ++it;
    }
    return out;
}

// Columns j in [-w, w] of [pi f pi, g]; boundary columns must vanish.
inline SparseOperator<Rational> tate_commutator(const LaurentPoly& f, const LaurentPoly& g, long cut, long window) {
    for (int attempt = 0; attempt <= 3; ++attempt) {
        SparseOperator<Rational> c;
        bool touches = false;
        for (long j = cut - window; j <= cut + window; ++j) {
            SparseVector<Rational> ej{{j, Rational(1)}};
            SparseVector<Rational> col = multiply_projected(f, multiply(g, ej), cut);
            for (const auto& [i, x] : multiply(g, multiply_projected(f, ej, cut))) accumulate(col, i, Rational(-x));
            if (!col.empty() && (j == cut - window || j == cut + window)) touches = true;
            for (const auto& [i, x] : col) c.add(i, j, x);
        }
        if (!touches) return c;
        window *= 2;
    }
    fail("window_exhausted", "commutator support reaches the window boundary after 3 doublings");
}

}  // namespace detail

/// Tate's residue tr[f1, g1] with f1 = pi+ f pi+ and g1 = g on the window
/// model of Q((u)), u = t - a. Only the Laurent coefficients that can meet in
/// the residue are kept, so the operators have finite bandwidth and are
/// applied exactly.
inline Rational residue_tate(const RationalFunction& f, const RationalFunction& g, const Rational& a = 0,
                             long window = 0) {
    if (f.is_zero() || g.is_zero()) return 0;
    long pf = std::max(0L, -valuation(f, RatPoly(std::vector<Rational>{Rational(-a), Rational(1)})));
    long pg = std::max(0L, -valuation(g, RatPoly(std::vector<Rational>{Rational(-a), Rational(1)})));
    detail::LaurentPoly fl = detail::laurent_part(f, a, pg + 1);
    detail::LaurentPoly gl = detail::laurent_part(g, a, pf + 1);
    if (window <= 0) window = 2 * (pf + pg + detail::top_degree(fl) + detail::top_degree(gl)) + 2;
    return tate_trace(detail::tate_commutator(fl, gl, 0, window));
}

/// c(f, g) = exp_{z^2}(res(f dg) / 2)
inline SymbolValue cocycle(const RationalFunction& f, const RationalFunction& g, const Place& p, long prec_z = 8) {
    Rational r = residue_classical(f, g, p) / 2;
    return series_exp(SymbolValue::monomial(r, 2, prec_z, "z"));
}

/// {f, g} = exp_{z^2}(res(f dg))
inline SymbolValue pairing(const RationalFunction& f, const RationalFunction& g, const Place& p, long prec_z = 8) {
    return series_exp(SymbolValue::monomial(residue_classical(f, g, p), 2, prec_z, "z"));
}

namespace detail {

using SeriesVector = std::vector<SparseVector<Rational>>;  // indexed by z-degree

template <typename Apply>
SeriesVector exp_apply(const SeriesVector& v, long prec, Apply&& a, const Rational& sign) {
    SeriesVector out = v, term = v;
    for (long k = 1; k < prec; ++k) {
        SeriesVector next(static_cast<std::size_t>(prec));
        for (long d = 1; d < prec; ++d) {
            const auto& src = term[static_cast<std::size_t>(d - 1)];
            if (src.empty()) continue;
            SparseVector<Rational> img = a(src);
            for (auto& [i, x] : img) x *= sign / k;
            next[static_cast<std::size_t>(d)] = std::move(img);
        }
        term = std::move(next);
        bool any = false;
        for (long d = 0; d < prec; ++d)
            for (const auto& [i, x] : term[static_cast<std::size_t>(d)]) {
                accumulate(out[static_cast<std::size_t>(d)], i, x);
                any = true;
            }
        if (!any) break;
    }
    return out;
}

}  // namespace detail

/// Operator route: Det(exp_z(f1) exp_z(g1) exp_z(-(f1 + g1))) with f1 = pi f pi
/// (pi onto indices >= cut) and g1 = g, as a series in z. The product is 1 plus
/// a finite-rank operator; its determinant is taken on the union of its rows
/// and columns.
inline SymbolValue cocycle_operator_route(const RationalFunction& f, const RationalFunction& g, const Rational& a,
                                          long prec_z = 8, long cut = 0) {
    if (f.is_zero() || g.is_zero()) return SymbolValue(Rational(1), prec_z, "z");
    RatPoly lin(std::vector<Rational>{Rational(-a), Rational(1)});
    long pf = std::max(0L, -valuation(f, lin)), pg = std::max(0L, -valuation(g, lin));
    detail::LaurentPoly fl = detail::laurent_part(f, a, pg + 1);
    detail::LaurentPoly gl = detail::laurent_part(g, a, pf + 1);
    const long spread = pf + pg + detail::top_degree(fl) + detail::top_degree(gl) + 1;
    long window = (prec_z + 1) * spread + 2;
    auto f1 = [&](const SparseVector<Rational>& v) { return detail::multiply_projected(fl, v, cut); };
    auto g1 = [&](const SparseVector<Rational>& v) { return detail::multiply(gl, v); };
    auto sum = [&](const SparseVector<Rational>& v) { return f1(v) + g1(v); };
    for (int attempt = 0; attempt <= 3; ++attempt, window *= 2) {
        std::map<long, detail::SeriesVector> cols;
        bool touches = false;
        for (long j = cut - window; j <= cut + window; ++j) {
            detail::SeriesVector v(static_cast<std::size_t>(prec_z));
            v[0].emplace(j, Rational(1));
            v = detail::exp_apply(v, prec_z, sum, Rational(-1));
            v = detail::exp_apply(v, prec_z, g1, Rational(1));
            v = detail::exp_apply(v, prec_z, f1, Rational(1));
            detail::accumulate(v[0], j, Rational(-1));
            bool nonzero = false;
            for (const auto& comp : v) nonzero = nonzero || !comp.empty();
            if (!nonzero) continue;
            if (j == cut - window || j == cut + window) touches = true;
            cols.emplace(j, std::move(v));
        }
        if (touches) continue;
        std::set<long> idx;
        for (const auto& [j, v] : cols) {
            idx.insert(j);
            for (const auto& comp : v)
                for (const auto& [i, x] : comp) idx.insert(i);
        }
        std::vector<long> s(idx.begin(), idx.end());
        std::map<long, std::size_t> where;
        for (std::size_t i = 0; i < s.size(); ++i) where[s[i]] = i;
        const std::size_t n = s.size();
        std::vector<std::map<long, Rational>> e(n * n);
        for (std::size_t i = 0; i < n; ++i) e[i * n + i].emplace(0, Rational(1));
        for (const auto& [j, v] : cols)
            for (long d = 0; d < prec_z; ++d)
                for (const auto& [i, x] : v[static_cast<std::size_t>(d)]) {
                    auto& m = e[where[i] * n + where[j]];
                    auto it = m.find(d);
                    if (it == m.end()) m.emplace(d, x);
                    else it->second += x;
                }
        if (n == 0) return SymbolValue(Rational(1), prec_z, "z");
        Matrix<SymbolValue> m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = SymbolValue(e[i * n + j], prec_z, "z");
        return series_determinant(m);
    }
    fail("window_exhausted", "cocycle support reaches the window boundary after 3 doublings");
}

/// c(f,g) c(f+g,h) = c(g,h) c(f,g+h)
inline bool cocycle_identity_check(const RationalFunction& f, const RationalFunction& g, const RationalFunction& h,
                                   const Place& p, long prec_z = 8) {
    if ((f + g).is_zero() || (g + h).is_zero()) fail("precondition", "cocycle identity needs f+g and g+h nonzero");
    return cocycle(f, g, p, prec_z) * cocycle(f + g, h, p, prec_z) ==
           cocycle(g, h, p, prec_z) * cocycle(f, g + h, p, prec_z);
}

struct C4Result {
    bool holds = false;
    Rational trace_a;   // tr of h on A / (A ∩ gA)
    Rational trace_ga;  // tr of h on gA / (A ∩ gA)
    SymbolValue expected;
    SymbolValue actual;
};

/// c(h/g, g) against exp_{z^2}(tr_{A/A∩gA}(h)/2) exp_{z^2}(-tr_{gA/A∩gA}(h)/2) at a
/// rational place, with both quotient traces computed on explicit bases.
inline C4Result c4_check(const RationalFunction& g, const RationalFunction& h, const Place& p, long prec_z = 8) {
    if (g.is_zero()) fail("precondition", "g must be nonzero");
    if (p.infinite || p.degree() != 1) fail("precondition", "quotient traces are implemented at rational places");
    const Rational a = p.root();
    if (!h.is_zero() && valuation(h, p.poly) < 0) fail("precondition", "h must be regular at the place");
    const long v = valuation(g, p.poly);
    const long dim = v < 0 ? -v : v;
    detail::LaurentPoly hl = detail::laurent_part(h, a, dim + 1);
    // multiplication by h on span{u^lo, ..., u^{lo+dim-1}} modulo u^{lo+dim}
    const long lo = v < 0 ? v : 0;
    Matrix<Rational> m(static_cast<std::size_t>(dim), static_cast<std::size_t>(dim));
    for (long j = 0; j < dim; ++j)
        for (const auto& [i, x] : detail::multiply(hl, SparseVector<Rational>{{lo + j, Rational(1)}}))
            if (i - lo < dim) m(static_cast<std::size_t>(i - lo), static_cast<std::size_t>(j)) = x;
    C4Result r;
    Rational tr = dim ? m.trace() : Rational(0);
    (v > 0 ? r.trace_a : r.trace_ga) = tr;
    r.expected = series_exp(SymbolValue::monomial((r.trace_a - r.trace_ga) / 2, 2, prec_z, "z"));
    r.actual = h.is_zero() ? SymbolValue(Rational(1), prec_z, "z") : cocycle(h / g, g, p, prec_z);
    r.holds = r.expected == r.actual;
    return r;
}

struct C5Result {
    bool holds = false;
    SymbolValue sum_side;   // c_{A+B} c_{A∩B}
    SymbolValue cut_side;   // c_A c_B
};

/// c_{A+B} c_{A∩B} = c_A c_B for V+ replaced by half-spaces with cuts cA, cB.
inline C5Result c5_check(const RationalFunction& f, const RationalFunction& g, HalfSpaceSpec A, HalfSpaceSpec B,
                         const Place& p, long prec_z = 8) {
    const Rational a = p.root();
    C5Result r;
    long lo = std::min(A.cut, B.cut), hi = std::max(A.cut, B.cut);
    r.sum_side = cocycle_operator_route(f, g, a, prec_z, lo) * cocycle_operator_route(f, g, a, prec_z, hi);
    r.cut_side = cocycle_operator_route(f, g, a, prec_z, A.cut) * cocycle_operator_route(f, g, a, prec_z, B.cut);
    r.holds = r.sum_side == r.cut_side;
    return r;
}

struct ReciprocityResult {
    Rational sum;
    SymbolValue product;
    std::vector<std::pair<Place, Rational>> residues;
};

/// Places where f or g has a zero or pole, plus infinity.
inline std::vector<Place> relevant_places(const RationalFunction& f, const RationalFunction& g) {
    std::vector<Place> out;
    auto add_factors = [&](const RatPoly& p) {
        if (p.degree() < 1) return;
        for (const auto& [q, m] : factor(p)) {
            Place pl{false, q};
            if (std::find(out.begin(), out.end(), pl) == out.end()) out.push_back(pl);
        }
    };
    for (const RationalFunction* h : {&f, &g}) {
        if (h->is_zero()) continue;
        add_factors(h->numerator());
        add_factors(h->denominator());
    }
    std::sort(out.begin(), out.end(), [](const Place& x, const Place& y) {
        if (x.poly.degree() != y.poly.degree()) return x.poly.degree() < y.poly.degree();
        return x.poly.coeffs() < y.poly.coeffs();
    });
    out.push_back(Place::infinity());
    return out;
}

/// Sum of residues and product of local symbols over all places of P^1.
inline ReciprocityResult reciprocity_check(const RationalFunction& f, const RationalFunction& g, long prec_z = 8) {
    ReciprocityResult r;
    r.sum = 0;
    r.product = SymbolValue(Rational(1), prec_z, "z");
    for (const Place& p : relevant_places(f, g)) {
        Rational res = residue_classical(f, g, p);
        r.residues.emplace_back(p, res);
        r.sum += res;
        r.product = r.product * cocycle(f, g, p, prec_z);
    }
    return r;
}

}  // namespace finpot
