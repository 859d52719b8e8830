#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>

#include "finpot/errors.hpp"
#include "finpot/matrix.hpp"
#include "finpot/rational.hpp"

namespace finpot {

/// Truncated Laurent series  sum_{d < prec} c_d z^d  in one formal variable.
///
/// Degrees at or above `prec` are unknown, not zero. Only nonzero coefficients
/// are stored. A precision of kExact marks a finite (exactly known) series; an
/// empty variable tag marks a constant that may combine with any variable.
template <typename F>
class LaurentSeries {
public:
    static constexpr long kExact = 1L << 40;

    LaurentSeries() = default;
    LaurentSeries(long constant) : LaurentSeries(F(constant)) {}  // NOLINT
    explicit LaurentSeries(const F& constant, long prec = kExact, std::string var = "")
        : var_(std::move(var)), prec_(prec) {
        if (prec_ > 0 && !detail::scalar_is_zero(constant)) c_.emplace(0, constant);
    }
    LaurentSeries(std::map<long, F> coeffs, long prec, std::string var)
        : var_(std::move(var)), prec_(prec), c_(std::move(coeffs)) {
        normalize();
    }

    static LaurentSeries monomial(const F& c, long degree, long prec, std::string var) {
        return LaurentSeries(std::map<long, F>{{degree, c}}, prec, std::move(var));
    }
    static LaurentSeries zero(long prec, std::string var) { return LaurentSeries(std::map<long, F>{}, prec, std::move(var)); }

    const std::string& var() const { return var_; }
    long prec() const { return prec_; }
    bool exact() const { return prec_ >= kExact; }
    const std::map<long, F>& coeffs() const { return c_; }

    /// Lowest degree with a nonzero coefficient; prec when zero to precision.
    long min_degree() const { return c_.empty() ? prec_ : c_.begin()->first; }
    long valuation() const { return min_degree(); }
    bool is_zero() const { return c_.empty(); }

    F coeff(long d) const {
        if (d >= prec_) fail("domain_error", "coefficient of degree " + std::to_string(d) + " is beyond precision");
        auto it = c_.find(d);
        if (it != c_.end()) return it->second;
        return c_.empty() ? F(0) : zero_like(c_.begin()->second);
    }

    LaurentSeries truncate(long p) const {
        LaurentSeries r = *this;
        r.prec_ = std::min(prec_, p);
        r.normalize();
        return r;
    }

    LaurentSeries with_var(std::string v) const {
        LaurentSeries r = *this;
        r.var_ = std::move(v);
        return r;
    }

    /// z -> z^k for k >= 1.
    LaurentSeries substitute_power(long k) const {
        if (k < 1) fail("precondition", "substitute_power needs k >= 1");
        std::map<long, F> c;
        for (const auto& [d, v] : c_) c.emplace(d * k, v);
        return LaurentSeries(std::move(c), exact() ? kExact : prec_ * k, var_);
    }

    LaurentSeries operator-() const {
        LaurentSeries r = *this;
        for (auto& [d, v] : r.c_) v = -v;
        return r;
    }

    friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
        LaurentSeries r(a.c_, std::min(a.prec_, b.prec_), common_var(a, b));
        for (const auto& [d, v] : b.c_) {
            if (d >= r.prec_) break;
            auto it = r.c_.find(d);
            if (it == r.c_.end()) r.c_.emplace(d, v);
            else it->second += v;
        }
        r.normalize();
        return r;
    }
    friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return a + (-b); }

    friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
        long p = product_prec(a, b);
        std::map<long, F> c;
        for (const auto& [da, va] : a.c_)
            for (const auto& [db, vb] : b.c_) {
                if (da + db >= p) break;
                auto it = c.find(da + db);
                if (it == c.end()) c.emplace(da + db, va * vb);
                else it->second += va * vb;
            }
        return LaurentSeries(std::move(c), p, common_var(a, b));
    }
    friend LaurentSeries operator*(const LaurentSeries& a, const F& s) {
        LaurentSeries r = a;
        for (auto& [d, v] : r.c_) v *= s;
        r.normalize();
        return r;
    }
    friend LaurentSeries operator/(const LaurentSeries& a, const LaurentSeries& b) {
        return a * b.inverse(a.exact() ? kExact : a.prec_ - b.valuation() + 0);
    }

    LaurentSeries& operator+=(const LaurentSeries& o) { return *this = *this + o; }
    LaurentSeries& operator-=(const LaurentSeries& o) { return *this = *this - o; }
    LaurentSeries& operator*=(const LaurentSeries& o) { return *this = *this * o; }
    LaurentSeries& operator/=(const LaurentSeries& o) { return *this = *this / o; }

    /// Multiplicative inverse; the result is known to prec - 2*valuation, capped
    /// at `target_prec`. Inverting an exact non-monomial needs a finite target.
    LaurentSeries inverse(long target_prec = kExact) const {
        if (c_.empty()) fail("domain_error", "inverse of a series that is zero to precision");
        const long v = valuation();
        const F& u0 = c_.begin()->second;
        if (c_.size() == 1 && exact())
            return monomial(one_like(u0) / u0, -v, kExact, var_);
        long p = std::min(exact() ? kExact : prec_ - 2 * v, target_prec);
        if (p >= kExact) fail("domain_error", "inverse of an exact series needs a finite precision");
        std::map<long, F> out;
        std::vector<F> d;
        const long terms = p + v;  // coefficients d_0 .. d_{terms-1} at degrees -v + k
        F inv0 = one_like(u0) / u0;
        for (long k = 0; k < terms; ++k) {
            F acc = k == 0 ? one_like(u0) : zero_like(u0);
            for (long j = 1; j <= k; ++j) {
                auto it = c_.find(v + j);
                if (it != c_.end()) acc -= it->second * d[static_cast<std::size_t>(k - j)];
            }
            d.push_back(acc * inv0);
            if (!detail::scalar_is_zero(d.back())) out.emplace(k - v, d.back());
        }
        return LaurentSeries(std::move(out), p, var_);
    }

    friend bool operator==(const LaurentSeries& a, const LaurentSeries& b) {
        return a.prec_ == b.prec_ && a.c_ == b.c_ && (a.var_ == b.var_ || a.var_.empty() || b.var_.empty());
    }
    friend bool operator!=(const LaurentSeries& a, const LaurentSeries& b) { return !(a == b); }

    std::string to_string() const;

private:
    static std::string common_var(const LaurentSeries& a, const LaurentSeries& b) {
        if (a.var_.empty()) return b.var_;
        if (b.var_.empty() || a.var_ == b.var_) return a.var_;
        fail("variable_mismatch", "series in '" + a.var_ + "' combined with series in '" + b.var_ + "'");
    }

    static long product_prec(const LaurentSeries& a, const LaurentSeries& b) {
        long p = std::min(sat_add(a.prec_, b.valuation()), sat_add(b.prec_, a.valuation()));
        return std::min(p, kExact);
    }
    static long sat_add(long x, long y) {
        if (x >= kExact || y >= kExact) return kExact;
        return x + y;
    }

    void normalize() {
        if (prec_ > kExact) prec_ = kExact;
        for (auto it = c_.begin(); it != c_.end();) {
            if (it->first >= prec_ || detail::scalar_is_zero(it->second)) it = c_.erase(it);
            else ++it;
        }
    }

    std::string var_;
    long prec_ = kExact;
    std::map<long, F> c_;
};

template <typename F>
bool is_zero(const LaurentSeries<F>& s) {
    return s.is_zero();
}
template <typename F>
LaurentSeries<F> one_like(const LaurentSeries<F>& s) {
    return LaurentSeries<F>(F(1), LaurentSeries<F>::kExact, s.var());
}
template <typename F>
LaurentSeries<F> zero_like(const LaurentSeries<F>& s) {
    return LaurentSeries<F>::zero(LaurentSeries<F>::kExact, s.var());
}

template <typename F>
std::string LaurentSeries<F>::to_string() const {
    const std::string v = var_.empty() ? "z" : var_;
    std::string out;
    for (const auto& [d, c] : c_) {
        std::string coeff = detail::scalar_to_string(c);
        bool compound = coeff.find_first_of("+*x", 1) != std::string::npos || coeff.find('-', 1) != std::string::npos;
        bool negative = !compound && coeff[0] == '-';
        if (compound) coeff = "(" + coeff + ")";
        if (negative) coeff.erase(0, 1);
        if (!out.empty()) out += negative ? " - " : " + ";
        else if (negative) out += "-";
        std::string mono = d == 0 ? "" : (d == 1 ? v : v + "^" + std::to_string(d));
        if (mono.empty()) out += coeff;
        else if (coeff == "1") out += mono;
        else out += coeff + "*" + mono;
    }
    if (!exact()) out += (out.empty() ? "" : " + ") + std::string("O(") + v + "^" + std::to_string(prec_) + ")";
    return out.empty() ? "0" : out;
}

template <typename F>
std::string to_string(const LaurentSeries<F>& s) {
    return s.to_string();
}

/// Coefficientwise equality on the degrees both operands know.
template <typename F>
bool equal_to_precision(const LaurentSeries<F>& a, const LaurentSeries<F>& b) {
    long p = std::min(a.prec(), b.prec());
    return a.truncate(p).coeffs() == b.truncate(p).coeffs();
}

/// exp(a) for a with no constant or polar part.
template <typename F>
LaurentSeries<F> series_exp(const LaurentSeries<F>& a, long target_prec = LaurentSeries<F>::kExact) {
    if (!a.is_zero() && a.min_degree() < 1)
        fail("domain_error", "series_exp needs a series without constant or polar part");
    if (a.is_zero() && a.exact()) return LaurentSeries<F>(F(1), LaurentSeries<F>::kExact, a.var());
    long p = std::min(a.prec(), target_prec);
    if (p >= LaurentSeries<F>::kExact) fail("domain_error", "series_exp of an exact series needs a finite precision");
    std::vector<F> e(static_cast<std::size_t>(std::max(p, 1L)));
    e[0] = F(1);
    std::map<long, F> out;
    if (p > 0) out.emplace(0, e[0]);
    for (long n = 1; n < p; ++n) {
        F acc = F(0);
        for (const auto& [k, ak] : a.coeffs()) {
            if (k > n) break;
            acc += ak * F(k) * e[static_cast<std::size_t>(n - k)];
        }
        e[static_cast<std::size_t>(n)] = acc / F(n);
        if (!detail::scalar_is_zero(e[static_cast<std::size_t>(n)])) out.emplace(n, e[static_cast<std::size_t>(n)]);
    }
    return LaurentSeries<F>(std::move(out), p, a.var());
}

/// log(a) for a with constant term 1 and no polar part.
template <typename F>
LaurentSeries<F> series_log(const LaurentSeries<F>& a, long target_prec = LaurentSeries<F>::kExact) {
    if ((!a.is_zero() && a.min_degree() < 0) || a.prec() <= 0 || a.coeff(0) != F(1))
        fail("domain_error", "series_log needs constant term 1 and no polar part");
    LaurentSeries<F> b = a - LaurentSeries<F>(F(1));
    if (b.is_zero() && b.exact()) return LaurentSeries<F>::zero(LaurentSeries<F>::kExact, a.var());
    long p = std::min(a.prec(), target_prec);
    if (p >= LaurentSeries<F>::kExact) fail("domain_error", "series_log of an exact series needs a finite precision");
    std::vector<F> l(static_cast<std::size_t>(std::max(p, 1L)));
    std::map<long, F> out;
    for (long n = 1; n < p; ++n) {
        F acc = F(n) * (b.coeffs().count(n) ? b.coeffs().at(n) : F(0));
        for (long k = 1; k < n; ++k) {
            auto it = b.coeffs().find(n - k);
            if (it != b.coeffs().end()) acc -= F(k) * l[static_cast<std::size_t>(k)] * it->second;
        }
        l[static_cast<std::size_t>(n)] = acc / F(n);
        if (!detail::scalar_is_zero(l[static_cast<std::size_t>(n)])) out.emplace(n, l[static_cast<std::size_t>(n)]);
    }
    return LaurentSeries<F>(std::move(out), p, a.var());
}

/// Determinant of a square matrix of series by Gaussian elimination, pivoting
/// on the entry of least valuation in each column.
template <typename F>
LaurentSeries<F> series_determinant(Matrix<LaurentSeries<F>> m) {
    if (!m.square()) fail("precondition", "determinant of non-square matrix");
    const std::size_t n = m.rows();
    LaurentSeries<F> det(F(1));
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = n;
        for (std::size_t i = c; i < n; ++i) {
            if (m(i, c).is_zero()) continue;
            if (p == n || m(i, c).valuation() < m(p, c).valuation()) p = i;
        }
        if (p == n) {
            long prec = LaurentSeries<F>::kExact;
            for (std::size_t i = c; i < n; ++i) prec = std::min(prec, m(i, c).prec());
            return LaurentSeries<F>::zero(std::min(prec, det.prec()), m(c, c).var()) * det;
        }
        if (p != c) {
            m.swap_rows(p, c);
            det = -det;
        }
        det = det * m(c, c);
        LaurentSeries<F> inv = m(c, c).inverse(m(c, c).exact() ? LaurentSeries<F>::kExact : m(c, c).prec());
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m(i, c).is_zero()) continue;
            LaurentSeries<F> f = m(i, c) * inv;
            for (std::size_t j = c + 1; j < n; ++j) m(i, j) = m(i, j) - f * m(c, j);
        }
    }
    return det;
}

}  // namespace finpot
