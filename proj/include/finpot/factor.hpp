#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <utility>
#include <vector>

#include "finpot/errors.hpp"
#include "finpot/polynomial.hpp"
#include "finpot/rational.hpp"

namespace finpot {

using RatPoly = Polynomial<Rational>;

namespace detail {

// Integer coefficients with content 1, positive leading coefficient.
inline std::vector<Integer> primitive_part(const RatPoly& p) {
    Integer l = 1;
    for (const auto& c : p.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    std::vector<Integer> z;
    Integer g = 0;
    for (const auto& c : p.coeffs()) {
        Rational s = c * Rational(l);
        z.push_back(s.get_num());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.back().get_mpz_t());
    }
    if (z.back() < 0) g = -g;
    for (auto& c : z) c /= g;
    return z;
}

inline RatPoly from_integers(const std::vector<Integer>& z) {
    std::vector<Rational> c;
    for (const auto& v : z) c.emplace_back(v);
    return RatPoly(std::move(c));
}

inline std::vector<Integer> positive_divisors(Integer n, std::size_t cap) {
    n = abs(n);
    std::vector<Integer> d;
    if (n == 0) return d;
    if (!n.fits_ulong_p() || n.get_ui() > 100000000UL) fail("factorization_limit", "coefficient too large to enumerate divisors");
    unsigned long v = n.get_ui();
    for (unsigned long k = 1; k * k <= v; ++k)
        if (v % k == 0) {
            d.emplace_back(k);
            if (k * k != v) d.emplace_back(v / k);
            if (d.size() > cap) fail("factorization_limit", "too many divisors");
        }
    std::sort(d.begin(), d.end());
    return d;
}

inline Integer eval_integer(const std::vector<Integer>& z, const Integer& x) {
    Integer acc = 0;
    for (std::size_t i = z.size(); i-- > 0;) acc = acc * x + z[i];
    return acc;
}

// Rational roots of a squarefree polynomial by the rational root test.
inline std::vector<Rational> rational_roots(const RatPoly& p) {
    std::vector<Rational> roots;
    if (p.degree() < 1) return roots;
    std::vector<Integer> z = primitive_part(p);
    std::size_t lowest = 0;
    while (z[lowest] == 0) ++lowest;
    if (lowest > 0) roots.emplace_back(0);
    auto ps = positive_divisors(z[lowest], 4096);
    auto qs = positive_divisors(z.back(), 4096);
    for (const auto& a : ps)
        for (const auto& b : qs) {
            for (int sgn : {1, -1}) {
                Rational r(Integer(sgn * a), b);
                r.canonicalize();
                if (r.get_den() != b) continue;  // seen with a smaller denominator
                if (p.eval(r) == 0) roots.push_back(r);
            }
        }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

// Lagrange interpolation through (xs[i], ys[i]).
inline RatPoly interpolate(const std::vector<Integer>& xs, const std::vector<Integer>& ys) {
    RatPoly acc;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        RatPoly basis(Rational(1));
        Rational denom = 1;
        for (std::size_t j = 0; j < xs.size(); ++j) {
            if (j == i) continue;
            basis = basis * RatPoly(std::vector<Rational>{Rational(-xs[j]), Rational(1)});
            denom *= Rational(xs[i] - xs[j]);
        }
        acc = acc + basis * Rational(Rational(ys[i]) / denom);
    }
    return acc;
}

// Kronecker's method: a factor of degree k, or the zero polynomial.
inline RatPoly kronecker_factor(const RatPoly& p, long k) {
    std::vector<Integer> z = primitive_part(p);
    // evaluation points with few divisors make the search cheaper
    std::vector<std::pair<std::size_t, Integer>> candidates;
    for (long x = -12; x <= 12; ++x) {
        Integer v = eval_integer(z, Integer(x));
        if (v == 0 || abs(v) > 100000000) continue;
        candidates.emplace_back(positive_divisors(v, 4096).size(), Integer(x));
    }
    std::sort(candidates.begin(), candidates.end());
    if (candidates.size() < static_cast<std::size_t>(k + 1)) fail("factorization_limit", "not enough evaluation points");
    std::vector<Integer> xs;
    std::vector<std::vector<Integer>> choices;
    double combos = 1;
    for (long i = 0; i <= k; ++i) {
        Integer x = candidates[static_cast<std::size_t>(i)].second;
        xs.push_back(x);
        std::vector<Integer> ds;
        for (const auto& d : positive_divisors(eval_integer(z, x), 4096)) {
            ds.push_back(d);
            if (i > 0) ds.push_back(-d);  // the sign of the first value can be fixed
        }
        combos *= static_cast<double>(ds.size());
        choices.push_back(std::move(ds));
    }
    if (combos > 2e6) fail("factorization_limit", "Kronecker search space too large");
    std::vector<std::size_t> idx(xs.size(), 0);
    std::vector<Integer> ys(xs.size());
    for (;;) {
        for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = choices[i][idx[i]];
        RatPoly q = interpolate(xs, ys);
        if (q.degree() == k) {
            auto [quot, rem] = divmod(p, q);
            if (rem.is_zero()) return q.monic();
        }
        std::size_t i = 0;
        while (i < idx.size() && ++idx[i] == choices[i].size()) idx[i++] = 0;
        if (i == idx.size()) break;
    }
    return {};
}

inline void factor_squarefree(const RatPoly& p, long mult, std::map<std::vector<Rational>, std::pair<RatPoly, long>>& out) {
    auto add = [&](const RatPoly& f) {
        auto key = f.coeffs();
        auto it = out.find(key);
        if (it == out.end()) out.emplace(key, std::make_pair(f, mult));
        else it->second.second += mult;
    };
    RatPoly rest = p.monic();
    for (const auto& r : rational_roots(rest)) {
        RatPoly lin(std::vector<Rational>{Rational(-r), Rational(1)});
        add(lin);
        rest = rest / lin;
    }
    if (rest.degree() <= 0) return;
    if (rest.degree() <= 3) {
        add(rest);
        return;
    }
    if (rest.degree() > 12) fail("factorization_limit", "degree " + std::to_string(rest.degree()) + " beyond Kronecker limit");
    for (long k = 2; k <= rest.degree() / 2; ++k) {
        RatPoly q = kronecker_factor(rest, k);
        if (!q.is_zero()) {
            factor_squarefree(q, mult, out);
            factor_squarefree(rest / q, mult, out);
            return;
        }
    }
    add(rest);
}

}  // namespace detail

/// Yun's squarefree decomposition of a nonzero polynomial: pairs (a_i, i) with
/// p = lc * prod a_i^i, each a_i monic and squarefree.
inline std::vector<std::pair<RatPoly, long>> squarefree_decomposition(const RatPoly& p) {
    if (p.is_zero()) fail("domain_error", "squarefree decomposition of zero");
    std::vector<std::pair<RatPoly, long>> out;
    RatPoly f = p.monic();
    if (f.degree() < 1) return out;
    RatPoly a = gcd(f, f.derivative());
    RatPoly b = f / a, c = f.derivative() / a - b.derivative();
    for (long i = 1; b.degree() > 0; ++i) {
        RatPoly d = gcd(b, c);
        if (d.degree() > 0) out.emplace_back(d, i);
        RatPoly nb = b / d;
        c = c / d - nb.derivative();
        b = std::move(nb);
        if (b.degree() <= 0) break;
    }
    return out;
}

/// Monic irreducible factors over Q with multiplicities, sorted by degree then
/// coefficients. Rational roots are exact; nonlinear factors of degree >= 4
/// are split by Kronecker's method up to a fixed search budget, beyond which
/// factorization_limit is raised.
inline std::vector<std::pair<RatPoly, long>> factor(const RatPoly& p) {
    std::map<std::vector<Rational>, std::pair<RatPoly, long>> acc;
    for (const auto& [part, mult] : squarefree_decomposition(p)) detail::factor_squarefree(part, mult, acc);
    std::vector<std::pair<RatPoly, long>> out;
    for (auto& [key, v] : acc) out.push_back(v);
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (x.first.degree() != y.first.degree()) return x.first.degree() < y.first.degree();
        return x.first.coeffs() < y.first.coeffs();
    });
    return out;
}

/// True when p (degree >= 1) has no proper factor over Q.
inline bool is_irreducible(const RatPoly& p) {
    if (p.degree() < 1) return false;
    auto f = factor(p);
    return f.size() == 1 && f[0].second == 1;
}

}  // namespace finpot
