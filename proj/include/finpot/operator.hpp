#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "finpot/errors.hpp"
#include "finpot/matrix.hpp"
#include "finpot/rational.hpp"

namespace finpot {

/// Finitely supported vector on the basis {e_i : i in Z}.
template <typename F>
using SparseVector = std::map<long, F>;

namespace detail {

template <typename F>
void accumulate(SparseVector<F>& v, long i, const F& x) {
    if (scalar_is_zero(x)) return;
    auto it = v.find(i);
    if (it == v.end()) {
        v.emplace(i, x);
        return;
    }
    it->second += x;
    if (scalar_is_zero(it->second)) v.erase(it);
}

template <typename F>
void axpy(SparseVector<F>& y, const F& a, const SparseVector<F>& x) {
    for (const auto& [i, v] : x) accumulate(y, i, F(a * v));
}

}  // namespace detail

template <typename F>
SparseVector<F> operator+(SparseVector<F> a, const SparseVector<F>& b) {
    for (const auto& [i, v] : b) detail::accumulate(a, i, v);
    return a;
}

/// Finite-support matrix. Stored by column since application is column-driven.
template <typename F>
class SparseOperator {
public:
    SparseOperator() = default;

    void add(long row, long col, const F& v) {
        if (detail::scalar_is_zero(v)) return;
        auto& c = cols_[col];
        detail::accumulate(c, row, v);
        if (c.empty()) cols_.erase(col);
    }
    void set(long row, long col, const F& v) {
        auto it = cols_.find(col);
        if (it != cols_.end()) {
            it->second.erase(row);
            if (it->second.empty()) cols_.erase(it);
        }
        add(row, col, v);
    }

    F get(long row, long col) const {
        auto it = cols_.find(col);
        if (it == cols_.end()) return F(0);
        auto jt = it->second.find(row);
        return jt == it->second.end() ? F(0) : jt->second;
    }

    bool empty() const { return cols_.empty(); }
    const std::map<long, SparseVector<F>>& columns() const { return cols_; }

    std::size_t nnz() const {
        std::size_t n = 0;
        for (const auto& [c, col] : cols_) n += col.size();
        return n;
    }

    /// (row, col, value) sorted by row then column.
    std::vector<std::tuple<long, long, F>> entries() const {
        std::vector<std::tuple<long, long, F>> out;
        for (const auto& [c, col] : cols_)
            for (const auto& [r, v] : col) out.emplace_back(r, c, v);
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
            return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
        });
        return out;
    }

    std::set<long> row_indices() const {
        std::set<long> r;
        for (const auto& [c, col] : cols_)
            for (const auto& [i, v] : col) r.insert(i);
        return r;
    }
    std::set<long> col_indices() const {
        std::set<long> r;
        for (const auto& [c, col] : cols_) r.insert(c);
        return r;
    }

    SparseVector<F> apply(const SparseVector<F>& v) const {
        SparseVector<F> out;
        for (const auto& [j, x] : v) {
            auto it = cols_.find(j);
            if (it != cols_.end()) detail::axpy(out, x, it->second);
        }
        return out;
    }

    SparseOperator operator-() const { return *this * F(-1); }
    friend SparseOperator operator+(SparseOperator a, const SparseOperator& b) {
        for (const auto& [c, col] : b.cols_)
            for (const auto& [r, v] : col) a.add(r, c, v);
        return a;
    }
    friend SparseOperator operator-(const SparseOperator& a, const SparseOperator& b) { return a + (-b); }
    friend SparseOperator operator*(const SparseOperator& a, const F& s) {
        SparseOperator out;
        for (const auto& [c, col] : a.cols_)
            for (const auto& [r, v] : col) out.add(r, c, v * s);
        return out;
    }
    /// Composition a∘b.
    friend SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) {
        SparseOperator out;
        for (const auto& [c, col] : b.cols_) {
            SparseVector<F> img = a.apply(col);
            if (!img.empty()) out.cols_.emplace(c, std::move(img));
        }
        return out;
    }
    friend bool operator==(const SparseOperator& a, const SparseOperator& b) { return a.cols_ == b.cols_; }

    /// Dense block on the given row and column indices.
    Matrix<F> block(const std::vector<long>& rows, const std::vector<long>& cols) const {
        Matrix<F> m(rows.size(), cols.size());
        std::map<long, std::size_t> where;
        for (std::size_t i = 0; i < rows.size(); ++i) where[rows[i]] = i;
        for (std::size_t j = 0; j < cols.size(); ++j) {
            auto it = cols_.find(cols[j]);
            if (it == cols_.end()) continue;
            for (const auto& [r, v] : it->second) {
                auto w = where.find(r);
                if (w != where.end()) m(w->second, j) = v;
            }
        }
        return m;
    }

private:
    std::map<long, SparseVector<F>> cols_;
};

/// Structured nilpotent tail: for i >= start the basis splits into consecutive
/// blocks of block_size vectors and, with N the shift e_i -> e_{i+1} inside a
/// block (last vector -> 0), the tail acts as sum_k poly[k] N^k. The plain
/// Jordan tail is poly = N. Below start the tail is zero.
template <typename F>
struct TailDescriptor {
    enum class Kind { none, jordan_blocks };

    Kind kind = Kind::none;
    long block_size = 0;
    long start = 0;
    std::vector<F> poly;  // size block_size; poly[k] multiplies N^k

    static TailDescriptor none() { return {}; }
    static TailDescriptor jordan(long block_size, long start) {
        if (block_size < 1) fail("precondition", "block_size must be positive");
        TailDescriptor t{Kind::jordan_blocks, block_size, start, std::vector<F>(static_cast<std::size_t>(block_size), F(0))};
        if (block_size > 1) t.poly[1] = F(1);
        return t;
    }
    static TailDescriptor polynomial(long block_size, long start, std::vector<F> poly) {
        TailDescriptor t = jordan(block_size, start);
        poly.resize(static_cast<std::size_t>(block_size), F(0));
        t.poly = std::move(poly);
        return t;
    }

    bool is_none() const { return kind == Kind::none; }
    bool is_zero() const {
        if (is_none()) return true;
        for (const auto& c : poly)
            if (!detail::scalar_is_zero(c)) return false;
        return true;
    }
    /// The plain shift N (what "jordan_blocks" without coefficients means).
    bool is_plain_jordan() const {
        if (is_none()) return false;
        for (std::size_t k = 0; k < poly.size(); ++k)
            if (poly[k] != F(k == 1 ? 1 : 0)) return false;
        return true;
    }

    bool same_geometry(const TailDescriptor& o) const {
        return kind == o.kind && (is_none() || (block_size == o.block_size && start == o.start));
    }

    long block_begin(long i) const { return start + ((i - start) / block_size) * block_size; }

    /// Smallest n with tail^n = 0 (1 for a zero tail).
    long nilpotency() const {
        if (is_zero()) return 1;
        long v = 0;
        while (detail::scalar_is_zero(poly[static_cast<std::size_t>(v)])) ++v;
        if (v == 0) return 0;  // not nilpotent
        return (block_size + v - 1) / v;
    }

    SparseVector<F> apply_basis(long i) const {
        SparseVector<F> out;
        if (is_none() || i < start) return out;
        long off = (i - start) % block_size;
        for (long k = 0; k + off < block_size; ++k) detail::accumulate(out, i + k, poly[static_cast<std::size_t>(k)]);
        return out;
    }
    SparseVector<F> apply(const SparseVector<F>& v) const {
        SparseVector<F> out;
        if (is_none()) return out;
        for (const auto& [i, x] : v) detail::axpy(out, x, apply_basis(i));
        return out;
    }

    /// Normal form: a tail with all coefficients zero becomes none.
    TailDescriptor normalized() const { return is_zero() ? none() : *this; }

    friend bool operator==(const TailDescriptor& a, const TailDescriptor& b) {
        TailDescriptor x = a.normalized(), y = b.normalized();
        if (x.is_none() || y.is_none()) return x.is_none() && y.is_none();
        return x.block_size == y.block_size && x.start == y.start && x.poly == y.poly;
    }
};

/// A finite-support matrix plus an optional structured nilpotent tail. The
/// finite part may overlap the tail region; the operator is their sum.
template <typename F>
struct FinitePotentOperator {
    SparseOperator<F> finite;
    TailDescriptor<F> tail;

    FinitePotentOperator() = default;
    FinitePotentOperator(SparseOperator<F> f, TailDescriptor<F> t = {})  // NOLINT
        : finite(std::move(f)), tail(t.normalized()) {}

    static FinitePotentOperator from_entries(const std::vector<std::tuple<long, long, F>>& e,
                                             TailDescriptor<F> t = {}) {
        SparseOperator<F> s;
        for (const auto& [r, c, v] : e) s.add(r, c, v);
        return {std::move(s), std::move(t)};
    }

    SparseVector<F> apply(const SparseVector<F>& v) const { return finite.apply(v) + tail.apply(v); }
    SparseVector<F> apply_basis(long i) const { return apply(SparseVector<F>{{i, F(1)}}); }

    bool is_finite_rank() const { return tail.is_zero(); }
};

/// Checks that two tails can be combined: either one is absent or both have
/// the same block geometry, in which case they are polynomials in one shift
/// and commute. Anything else would need an unverifiable finite-rank
/// commutator, so it is refused.
template <typename F>
void require_compatible_tails(const TailDescriptor<F>& a, const TailDescriptor<F>& b) {
    if (a.is_none() || b.is_none()) return;
    if (a.block_size != b.block_size || a.start != b.start)
        fail("noncommuting_tails", "tails with different block geometry; commutator not certifiably finite rank");
}

template <typename F>
FinitePotentOperator<F> operator-(const FinitePotentOperator<F>& a) {
    return a * F(-1);
}

template <typename F>
FinitePotentOperator<F> operator*(const FinitePotentOperator<F>& a, const F& s) {
    TailDescriptor<F> t = a.tail;
    for (auto& c : t.poly) c *= s;
    return {a.finite * s, t};
}

template <typename F>
FinitePotentOperator<F> operator+(const FinitePotentOperator<F>& a, const FinitePotentOperator<F>& b) {
    require_compatible_tails(a.tail, b.tail);
    TailDescriptor<F> t = a.tail.is_none() ? b.tail : a.tail;
    if (!a.tail.is_none() && !b.tail.is_none())
        for (std::size_t k = 0; k < t.poly.size(); ++k) t.poly[k] += b.tail.poly[k];
    return {a.finite + b.finite, t};
}

template <typename F>
FinitePotentOperator<F> operator-(const FinitePotentOperator<F>& a, const FinitePotentOperator<F>& b) {
    return a + (-b);
}

/// Composition a∘b.
template <typename F>
FinitePotentOperator<F> operator*(const FinitePotentOperator<F>& a, const FinitePotentOperator<F>& b) {
    require_compatible_tails(a.tail, b.tail);
    SparseOperator<F> f = a.finite * b.finite;
    // a.tail ∘ b.finite
    if (!a.tail.is_none())
        for (const auto& [c, col] : b.finite.columns())
            for (const auto& [r, v] : a.tail.apply(col)) f.add(r, c, v);
    // a.finite ∘ b.tail: only columns in tail blocks that reach a column of a.finite
    if (!b.tail.is_none()) {
        std::set<long> cols;
        for (long c : a.finite.col_indices())
            if (c >= b.tail.start)
                for (long j = b.tail.block_begin(c); j <= c; ++j) cols.insert(j);
        for (long j : cols)
            for (const auto& [r, v] : a.finite.apply(b.tail.apply_basis(j))) f.add(r, j, v);
    }
    TailDescriptor<F> t;
    if (!a.tail.is_none() && !b.tail.is_none()) {
        t = a.tail;
        const std::size_t s = t.poly.size();
        std::vector<F> p(s, F(0));
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = 0; i + j < s; ++j) p[i + j] += a.tail.poly[i] * b.tail.poly[j];
        t.poly = std::move(p);
    }
    return {std::move(f), t};
}

template <typename F>
FinitePotentOperator<F> op_compose(const FinitePotentOperator<F>& a, const FinitePotentOperator<F>& b) {
    return a * b;
}

template <typename F>
FinitePotentOperator<F> op_add(const FinitePotentOperator<F>& a, const FinitePotentOperator<F>& b) {
    return a + b;
}

template <typename F>
FinitePotentOperator<F> op_pow(const FinitePotentOperator<F>& a, unsigned e) {
    FinitePotentOperator<F> r;
    // identity is not representable; e = 0 is the caller's business
    if (e == 0) fail("precondition", "op_pow needs a positive exponent");
    r = a;
    for (unsigned k = 1; k < e; ++k) r = r * a;
    return r;
}

/// [a, b] = ab - ba. Compatible tails commute, so the result has finite support.
template <typename F>
SparseOperator<F> op_commutator(const FinitePotentOperator<F>& a, const FinitePotentOperator<F>& b) {
    FinitePotentOperator<F> c = a * b - b * a;
    if (!c.tail.is_zero()) fail("structural_failure", "commutator with a nonzero tail");
    return c.finite;
}

/// Exact operator equality, independent of how entries are split between the
/// finite part and the tail.
template <typename F>
bool op_equal(const FinitePotentOperator<F>& a, const FinitePotentOperator<F>& b) {
    if (!a.tail.is_none() && !b.tail.is_none() && !a.tail.same_geometry(b.tail)) {
        // different geometry can only agree if both tails vanish
        return false;
    }
    FinitePotentOperator<F> d = a - b;
    return d.tail.is_zero() && d.finite.empty();
}

/// Witness of finite potency: phi^n V ⊂ span(W), phi(W) ⊂ span(W), M = phi|_W.
template <typename F>
struct Certificate {
    long n = 1;
    std::vector<long> W;
    Matrix<F> M;
};

/// W consists of the rows of the finite part, with each row inside the tail
/// region widened to its whole tail block. Vectors outside W are moved by the
/// tail inside their own block and pushed into W by the finite part, so after
/// n = nilpotency(tail) steps everything lies in span(W).
template <typename F>
Certificate<F> certify_finite_potent(const FinitePotentOperator<F>& phi, long bound = 64) {
    Certificate<F> c;
    const TailDescriptor<F>& t = phi.tail;
    if (!t.is_zero()) {
        c.n = t.nilpotency();
        if (c.n == 0) fail("certificate_failure", "tail has a nonzero diagonal; not finite potent as represented");
        if (c.n > bound) fail("certificate_failure", "tail nilpotency exceeds structural bound");
    }
    std::set<long> w;
    for (long r : phi.finite.row_indices()) {
        if (t.is_zero() || r < t.start) {
            w.insert(r);
        } else {
            long b = t.block_begin(r);
            for (long k = 0; k < t.block_size; ++k) w.insert(b + k);
        }
    }
    c.W.assign(w.begin(), w.end());
    c.M = Matrix<F>(c.W.size(), c.W.size());
    std::map<long, std::size_t> where;
    for (std::size_t i = 0; i < c.W.size(); ++i) where[c.W[i]] = i;
    for (std::size_t j = 0; j < c.W.size(); ++j)
        for (const auto& [r, v] : phi.apply_basis(c.W[j])) {
            auto it = where.find(r);
            if (it == where.end()) fail("certificate_failure", "core is not invariant");
            c.M(it->second, j) = v;
        }
    return c;
}

/// V+ = span{e_i : i >= cut}.
struct HalfSpaceSpec {
    long cut = 0;
};

struct OperatorClass {
    bool in_E = false, in_E1 = false, in_E2 = false, in_E0 = false;
};

/// Membership in E, E1, E2, E0 relative to V+, all up to commensurability.
/// A finite-rank part never changes membership; a tail that starts at or
/// above the cut keeps V+ inside V+ and has image in V+, but kills V+ only if
/// it is zero. Tails starting below the cut are refused.
template <typename F>
OperatorClass classify(const FinitePotentOperator<F>& phi, HalfSpaceSpec h) {
    OperatorClass k;
    if (!phi.tail.is_zero() && phi.tail.start < h.cut)
        fail("undecidable_placement", "tail starts at " + std::to_string(phi.tail.start) +
                                          " below the cut " + std::to_string(h.cut));
    k.in_E = true;
    k.in_E1 = true;
    k.in_E2 = phi.tail.is_zero();
    k.in_E0 = k.in_E1 && k.in_E2;
    return k;
}

}  // namespace finpot
