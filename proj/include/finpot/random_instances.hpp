#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "finpot/ast.hpp"
#include "finpot/operator.hpp"
#include "finpot/rational_function.hpp"
#include "finpot/segal_wilson.hpp"

namespace finpot {

/// Small random instances for property checks and selftest. Deterministic for
/// a given seed.
class RandomInstances {
public:
    explicit RandomInstances(unsigned long seed) : rng_(seed) {}

    long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
    Rational small_rational(long num = 3, long den = 2) {
        Rational q(Integer(integer(-num, num)), Integer(integer(1, den)));
        q.canonicalize();
        return q;
    }
    std::mt19937_64& engine() { return rng_; }

    /// Finite block on `dim` random indices in [-4, 10], optionally with a
    /// Jordan or polynomial nilpotent tail. Some finite entries may sit inside
    /// the first tail block. Rejects until the invertible core has dimension at
    /// most max_core.
    FinitePotentOperator<Rational> finite_potent(long max_dim = 5, long max_core = 6, bool allow_tail = true) {
        for (;;) {
            long dim = integer(1, max_dim);
            std::set<long> picked;
            while (static_cast<long>(picked.size()) < dim) picked.insert(integer(-4, 10));
            std::vector<long> idx(picked.begin(), picked.end());
            TailDescriptor<Rational> tail;
            if (allow_tail && coin(0.4)) {
                long s = integer(1, 3);
                long start = idx.back() + integer(1, 3);
                if (coin(0.3)) {
                    std::vector<Rational> poly(static_cast<std::size_t>(s), Rational(0));
                    for (long k = 1; k < s; ++k) poly[static_cast<std::size_t>(k)] = Rational(integer(-2, 2));
                    tail = TailDescriptor<Rational>::polynomial(s, start, poly);
                } else {
                    tail = TailDescriptor<Rational>::jordan(s, start);
                }
                if (coin(0.25)) idx.push_back(start);
            }
            std::vector<std::tuple<long, long, Rational>> e;
            for (long r : idx)
                for (long c : idx)
                    if (coin(0.55)) e.emplace_back(r, c, Rational(integer(-3, 3)));
            FinitePotentOperator<Rational> phi = FinitePotentOperator<Rational>::from_entries(e, tail);
            if (static_cast<long>(lift_ast(phi).core_dim()) <= max_core) return phi;
        }
    }

    /// Strictly upper triangular block on consecutive indices, conjugated by a
    /// random unipotent matrix, plus an optional Jordan tail.
    FinitePotentOperator<Rational> nilpotent(long max_dim = 5) {
        long n = integer(1, max_dim);
        long base = integer(-3, 3);
        Matrix<Rational> u = Matrix<Rational>::identity(static_cast<std::size_t>(n));
        Matrix<Rational> s(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
        for (long i = 0; i < n; ++i)
            for (long j = i + 1; j < n; ++j) {
                u(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = Rational(integer(-2, 2));
                s(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = Rational(integer(-3, 3));
            }
        Matrix<Rational> p = u.transpose() * s * inverse(u.transpose());
        TailDescriptor<Rational> tail;
        if (coin(0.4)) tail = TailDescriptor<Rational>::jordan(integer(1, 3), base + n + integer(0, 2));
        return from_matrix(p, base, tail);
    }

    /// Dense operator supported on [base, base + n).
    static FinitePotentOperator<Rational> from_matrix(const Matrix<Rational>& m, long base,
                                                      TailDescriptor<Rational> tail = {}) {
        std::vector<std::tuple<long, long, Rational>> e;
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                if (m(i, j) != 0) e.emplace_back(base + static_cast<long>(i), base + static_cast<long>(j), m(i, j));
        return FinitePotentOperator<Rational>::from_entries(e, std::move(tail));
    }

    Matrix<Rational> matrix(long n, long bound = 3) {
        Matrix<Rational> m(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = Rational(integer(-bound, bound));
        return m;
    }

    Matrix<Rational> invertible_matrix(long n, long bound = 2) {
        for (;;) {
            Matrix<Rational> m = matrix(n, bound);
            if (determinant(m) != 0) return m;
        }
    }

    /// c * prod (t - a_i)^{±1} with a_i in [-3, 3]. Only degree-one places.
    RationalFunction rational_function(long max_factors = 3) {
        Rational c = small_rational(4, 2);
        RationalFunction f(c == 0 ? Rational(1) : c);
        long k = integer(1, max_factors);
        for (long i = 0; i < k; ++i) {
            RationalFunction lin = RationalFunction::t() - RationalFunction(Rational(integer(-3, 3)));
            f = coin() ? f * lin : f / lin;
        }
        return f;
    }

    /// As rational_function, sometimes with a factor (t^2 + c)^{±1}, c in {1, 2, 3}.
    RationalFunction rational_function_with_quadratic(long max_factors = 3) {
        RationalFunction f = rational_function(max_factors);
        if (coin(0.5)) {
            RationalFunction q = RationalFunction::t() * RationalFunction::t() + RationalFunction(Rational(integer(1, 3)));
            f = coin() ? f * q : f / q;
        }
        return f;
    }

    /// Coefficients in [-1, 1] on degrees 1..support.
    LoopExponent loop_exponent(LoopExponent::Side side, long support = 3) {
        LoopExponent e;
        e.side = side;
        for (long n = 1; n <= support; ++n) {
            Rational c(Integer(integer(-4, 4)), Integer(4));
            c.canonicalize();
            if (c != 0 || n == support) e.coeffs[n] = c == 0 ? Rational(1) : c;
        }
        return e;
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace finpot
