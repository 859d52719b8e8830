#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <string>
#include <utility>
#include <type_traits>
#include <vector>

#include "finpot/errors.hpp"
#include "finpot/rational.hpp"

namespace finpot {

/// Dense row-major matrix over an exact scalar type.
template <typename F>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const F& fill = F(0))
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<F>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        a_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) fail("precondition", "ragged matrix initializer");
            for (const auto& v : row) a_.push_back(v);
        }
    }

    static Matrix identity(std::size_t n, const F& one = F(1)) {
        Matrix m(n, n, zero_like(one));
        for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    F& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const F& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    void swap_rows(std::size_t i, std::size_t k) {
        if (i == k) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(i, j), (*this)(k, j));
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const {
        Matrix s(rows.size(), cols.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = (*this)(rows[i], cols[j]);
        return s;
    }

    F trace() const {
        if (!square()) fail("precondition", "trace of non-square matrix");
        F t = a_.empty() ? F(0) : zero_like(a_[0]);
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    bool is_zero() const {
        for (const auto& v : a_)
            if (!detail::scalar_is_zero(v)) return false;
        return true;
    }

    Matrix pow(unsigned e) const {
        if (!square()) fail("precondition", "power of non-square matrix");
        Matrix result = identity(rows_), base = *this;
        while (e) {
            if (e & 1u) result = result * base;
            base = base * base;
            e >>= 1u;
        }
        return result;
    }

    std::vector<F> column(std::size_t j) const {
        std::vector<F> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        check_same_shape(a, b);
        Matrix c = a;
        for (std::size_t k = 0; k < c.a_.size(); ++k) c.a_[k] += b.a_[k];
        return c;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        check_same_shape(a, b);
        Matrix c = a;
        for (std::size_t k = 0; k < c.a_.size(); ++k) c.a_[k] -= b.a_[k];
        return c;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) fail("precondition", "matrix product shape mismatch");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const F& aik = a(i, k);
                if (detail::scalar_is_zero(aik)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }
    friend Matrix operator*(const Matrix& a, const F& s) {
        Matrix c = a;
        for (auto& v : c.a_) v *= s;
        return c;
    }
    friend std::vector<F> operator*(const Matrix& a, const std::vector<F>& v) {
        if (a.cols_ != v.size()) fail("precondition", "matrix-vector shape mismatch");
        std::vector<F> out(a.rows_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < a.cols_; ++j) out[i] += a(i, j) * v[j];
        return out;
    }
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

private:
    static void check_same_shape(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) fail("precondition", "matrix shape mismatch");
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<F> a_;
};

namespace detail {

// Row scaling that makes a rational row integral; Bareiss then never leaves Z.
inline Rational integralize_row(Matrix<Rational>& m, std::size_t i) {
    Integer l = 1;
    for (std::size_t j = 0; j < m.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
    Rational s(l);
    if (l != 1)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) *= s;
    return s;
}

template <typename F>
F integralize_row(Matrix<F>&, std::size_t) {
    return F(1);
}

}  // namespace detail

/// Fraction-free row echelon form (Bareiss elimination with column skipping).
template <typename F>
struct Echelon {
    Matrix<F> form;                     ///< echelon form of the row-scaled input
    std::vector<std::size_t> pivots;    ///< pivot column of each nonzero row
    F row_scale = F(1);                 ///< product of the row scalings applied up front
    int sign = 1;                       ///< parity of the row swaps
};

namespace detail {

// Bareiss on a row-major integer array in place; divisions are exact.
inline void bareiss_integer(std::vector<Integer>& a, std::size_t rows, std::size_t cols,
                            std::vector<std::size_t>& pivots, int& sign) {
    auto at = [&](std::size_t i, std::size_t j) -> Integer& { return a[i * cols + j]; };
    Integer prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && sgn(at(p, c)) == 0) ++p;
        if (p == rows) continue;
        if (p != r) {
            for (std::size_t j = 0; j < cols; ++j) std::swap(at(p, j), at(r, j));
            sign = -sign;
        }
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) {
                mpz_ptr x = at(i, j).get_mpz_t();
                mpz_mul(x, x, at(r, c).get_mpz_t());
                mpz_submul(x, at(i, c).get_mpz_t(), at(r, j).get_mpz_t());
                mpz_divexact(x, x, prev.get_mpz_t());
            }
            at(i, c) = 0;
        }
        prev = at(r, c);
        pivots.push_back(c);
        ++r;
    }
}

}  // namespace detail

template <typename F>
Echelon<F> bareiss_echelon(const Matrix<F>& m) {
    Echelon<F> e;
    e.form = m;
    Matrix<F>& a = e.form;
    for (std::size_t i = 0; i < a.rows(); ++i) e.row_scale *= detail::integralize_row(a, i);
    if constexpr (std::is_same_v<F, Rational> || std::is_same_v<F, Integer>) {
        std::vector<Integer> z(a.rows() * a.cols());
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j) {
                if constexpr (std::is_same_v<F, Rational>) z[i * a.cols() + j] = a(i, j).get_num();
                else z[i * a.cols() + j] = a(i, j);
            }
        detail::bareiss_integer(z, a.rows(), a.cols(), e.pivots, e.sign);
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = F(z[i * a.cols() + j]);
        return e;
    }
    F prev = F(1);
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        std::size_t p = r;
        while (p < a.rows() && detail::scalar_is_zero(a(p, c))) ++p;
        if (p == a.rows()) continue;
        if (p != r) {
            a.swap_rows(p, r);
            e.sign = -e.sign;
        }
        for (std::size_t i = r + 1; i < a.rows(); ++i) {
            for (std::size_t j = c + 1; j < a.cols(); ++j) {
                F t = a(r, c) * a(i, j) - a(i, c) * a(r, j);
                a(i, j) = t / prev;
            }
            a(i, c) = F(0);
        }
        prev = a(r, c);
        e.pivots.push_back(c);
        ++r;
    }
    return e;
}

template <typename F>
std::size_t rank(const Matrix<F>& m) {
    return bareiss_echelon(m).pivots.size();
}

/// Determinant by fraction-free elimination.
template <typename F>
F determinant(const Matrix<F>& m) {
    if (!m.square()) fail("precondition", "determinant of non-square matrix");
    if (m.rows() == 0) return F(1);
    Echelon<F> e = bareiss_echelon(m);
    if (e.pivots.size() < m.rows()) return F(0);
    F d = e.form(m.rows() - 1, m.cols() - 1) / e.row_scale;
    return e.sign < 0 ? F(-d) : d;
}

namespace detail {

using u64 = std::uint64_t;

inline u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<unsigned __int128>(a) * b % p); }

inline u64 powmod(u64 a, u64 e, u64 p) {
    u64 r = 1;
    for (a %= p; e; e >>= 1, a = mulmod(a, a, p))
        if (e & 1) r = mulmod(r, a, p);
    return r;
}

// Deterministic Miller-Rabin for 64-bit n.
inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37})
        if (n % q == 0) return n == q;
    u64 d = n - 1;
    int s = 0;
    while (!(d & 1)) d >>= 1, ++s;
    for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s && composite; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) composite = false;
        }
        if (composite) return false;
    }
    return true;
}

// Primes just below 2^62, generated on demand and shared.
inline u64 modular_prime(std::size_t i) {
    static std::mutex lock;
    static std::vector<u64> primes;
    std::lock_guard<std::mutex> guard(lock);
    u64 c = primes.empty() ? (u64(1) << 62) - 1 : primes.back() - 2;
    while (primes.size() <= i) {
        while (!is_prime_u64(c)) c -= 2;
        primes.push_back(c);
        c -= 2;
    }
    return primes[i];
}

inline u64 det_mod_p(std::vector<u64> a, std::size_t n, u64 p) {
    u64 det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t r = c;
        while (r < n && a[r * n + c] == 0) ++r;
        if (r == n) return 0;
        if (r != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[r * n + j], a[c * n + j]);
            det = p - det;
        }
        det = mulmod(det, a[c * n + c], p);
        u64 inv = powmod(a[c * n + c], p - 2, p);
        for (std::size_t i = c + 1; i < n; ++i) {
            u64 f = mulmod(a[i * n + c], inv, p);
            if (!f) continue;
            for (std::size_t j = c; j < n; ++j) a[i * n + j] = (a[i * n + j] + p - mulmod(f, a[c * n + j], p)) % p;
        }
    }
    return det % p;
}

}  // namespace detail

/// Integer determinant by residues modulo 62-bit primes and CRT, with enough
/// primes to cover the Hadamard bound. Much faster than fraction-free
/// elimination when the entries are thousands of bits long.
inline Integer determinant_modular(const Matrix<Integer>& m) {
    if (!m.square()) fail("precondition", "determinant of non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    // log2 |det| <= sum over rows of log2 of the row's Euclidean norm
    double bound = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t bits = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (m(i, j) != 0) bits = std::max(bits, mpz_sizeinbase(m(i, j).get_mpz_t(), 2));
        if (bits == 0) return 0;
        bound += static_cast<double>(bits) + 0.5 * std::log2(static_cast<double>(n));
    }
    Integer x = 0, modulus = 1;
    std::vector<detail::u64> a(n * n);
    for (std::size_t k = 0; mpz_sizeinbase(modulus.get_mpz_t(), 2) < bound + 2; ++k) {
        const detail::u64 p = detail::modular_prime(k);
        for (std::size_t i = 0; i < n * n; ++i) a[i] = mpz_fdiv_ui(m(i / n, i % n).get_mpz_t(), p);
        detail::u64 r = detail::det_mod_p(a, n, p);
        // Garner step: x += modulus * ((r - x) / modulus mod p)
        detail::u64 xm = mpz_fdiv_ui(x.get_mpz_t(), p), mm = mpz_fdiv_ui(modulus.get_mpz_t(), p);
        detail::u64 t = detail::mulmod((r + p - xm) % p, detail::powmod(mm, p - 2, p), p);
        mpz_addmul_ui(x.get_mpz_t(), modulus.get_mpz_t(), t);
        mpz_mul_ui(modulus.get_mpz_t(), modulus.get_mpz_t(), p);
    }
    Integer half = modulus / 2;
    if (x > half) x -= modulus;
    return x;
}

/// Basis of the right kernel, one vector per column.
template <typename F>
Matrix<F> kernel_basis(const Matrix<F>& m) {
    Echelon<F> e = bareiss_echelon(m);
    const Matrix<F>& a = e.form;
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : e.pivots) is_pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (!is_pivot[j]) free_cols.push_back(j);
    Matrix<F> basis(m.cols(), free_cols.size());
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
        std::vector<F> x(m.cols());
        x[free_cols[k]] = F(1);
        for (std::size_t row = e.pivots.size(); row-- > 0;) {
            std::size_t pc = e.pivots[row];
            F s = F(0);
            for (std::size_t j = pc + 1; j < m.cols(); ++j) s += a(row, j) * x[j];
            x[pc] = -s / a(row, pc);
        }
        for (std::size_t i = 0; i < m.cols(); ++i) basis(i, k) = x[i];
    }
    return basis;
}

/// Basis of the column space: the pivot columns of the input.
template <typename F>
Matrix<F> column_space_basis(const Matrix<F>& m) {
    Echelon<F> e = bareiss_echelon(m);
    std::vector<std::size_t> all(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) all[i] = i;
    return m.submatrix(all, e.pivots);
}

/// Horizontal concatenation [a | b].
template <typename F>
Matrix<F> hstack(const Matrix<F>& a, const Matrix<F>& b) {
    if (a.rows() != b.rows() && a.cols() && b.cols()) fail("precondition", "hstack row mismatch");
    std::size_t rows = a.cols() ? a.rows() : b.rows();
    Matrix<F> c(rows, a.cols() + b.cols());
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) c(i, a.cols() + j) = b(i, j);
    }
    return c;
}

/// Gauss-Jordan inverse over a field.
template <typename F>
Matrix<F> inverse(const Matrix<F>& m) {
    if (!m.square()) fail("precondition", "inverse of non-square matrix");
    const std::size_t n = m.rows();
    Matrix<F> a = m, inv = Matrix<F>::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && detail::scalar_is_zero(a(p, c))) ++p;
        if (p == n) fail("not_invertible", "singular matrix");
        a.swap_rows(p, c);
        inv.swap_rows(p, c);
        F piv_inv = F(1) / a(c, c);
        for (std::size_t j = 0; j < n; ++j) {
            a(c, j) *= piv_inv;
            inv(c, j) *= piv_inv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || detail::scalar_is_zero(a(i, c))) continue;
            F f = a(i, c);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(c, j);
                inv(i, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

template <typename F>
std::string to_string(const Matrix<F>& m) {
    std::string s = "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        s += i ? ", [" : "[";
        for (std::size_t j = 0; j < m.cols(); ++j) s += (j ? ", " : "") + detail::scalar_to_string(m(i, j));
        s += "]";
    }
    return s + "]";
}

}  // namespace finpot
