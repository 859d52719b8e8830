#pragma once

#include <memory>
#include <string>
#include <utility>

#include "finpot/errors.hpp"
#include "finpot/matrix.hpp"
#include "finpot/polynomial.hpp"
#include "finpot/rational.hpp"

namespace finpot {

using RatPoly = Polynomial<Rational>;

/// Element of Q[x]/(modulus) for a single monic modulus.
///
/// An element without a modulus is a plain rational; it adopts the modulus of
/// whatever it is combined with, so F(0) and F(1) work inside generic code.
/// Moduli are compared by value.
class NumberFieldElement {
public:
    NumberFieldElement() = default;
    NumberFieldElement(long v) : rep_(Rational(v)) {}                 // NOLINT
    NumberFieldElement(const Rational& v) : rep_(v) {}                // NOLINT
    NumberFieldElement(RatPoly rep, std::shared_ptr<const RatPoly> modulus)
        : rep_(std::move(rep)), mod_(std::move(modulus)) {
        if (mod_) {
            if (mod_->degree() < 1 || mod_->leading() != 1)
                fail("precondition", "number field modulus must be monic of positive degree");
            rep_ = rep_ % *mod_;
        }
    }

    /// The generator x of Q[x]/(modulus).
    static NumberFieldElement generator(std::shared_ptr<const RatPoly> modulus) {
        return {RatPoly::x(), std::move(modulus)};
    }

    const RatPoly& representative() const { return rep_; }
    const std::shared_ptr<const RatPoly>& modulus() const { return mod_; }
    bool has_modulus() const { return static_cast<bool>(mod_); }
    long field_degree() const { return mod_ ? mod_->degree() : 1; }
    bool is_rational() const { return rep_.degree() <= 0; }
    Rational rational_value() const {
        if (!is_rational()) fail("precondition", "element is not rational");
        return rep_.coeff(0);
    }

    NumberFieldElement operator-() const { return {-rep_, mod_}; }

    friend NumberFieldElement operator+(const NumberFieldElement& a, const NumberFieldElement& b) {
        return {a.rep_ + b.rep_, common_modulus(a, b)};
    }
    friend NumberFieldElement operator-(const NumberFieldElement& a, const NumberFieldElement& b) {
        return {a.rep_ - b.rep_, common_modulus(a, b)};
    }
    friend NumberFieldElement operator*(const NumberFieldElement& a, const NumberFieldElement& b) {
        return {a.rep_ * b.rep_, common_modulus(a, b)};
    }
    friend NumberFieldElement operator/(const NumberFieldElement& a, const NumberFieldElement& b) {
        return a * b.inverse();
    }
    NumberFieldElement& operator+=(const NumberFieldElement& o) { return *this = *this + o; }
    NumberFieldElement& operator-=(const NumberFieldElement& o) { return *this = *this - o; }
    NumberFieldElement& operator*=(const NumberFieldElement& o) { return *this = *this * o; }
    NumberFieldElement& operator/=(const NumberFieldElement& o) { return *this = *this / o; }

    NumberFieldElement inverse() const {
        if (rep_.is_zero()) fail("domain_error", "division by zero in number field");
        if (!mod_ || rep_.degree() == 0) return {RatPoly(Rational(1) / rep_.leading()), mod_};
        return {inverse_mod(rep_, *mod_), mod_};
    }

    friend bool operator==(const NumberFieldElement& a, const NumberFieldElement& b) {
        if (a.mod_ && b.mod_ && *a.mod_ != *b.mod_) return false;
        return a.rep_ == b.rep_;
    }
    friend bool operator!=(const NumberFieldElement& a, const NumberFieldElement& b) { return !(a == b); }

    /// Matrix of multiplication by this element on the basis 1, x, ..., x^{d-1}.
    Matrix<Rational> multiplication_matrix() const {
        const long d = field_degree();
        Matrix<Rational> m(static_cast<std::size_t>(d), static_cast<std::size_t>(d));
        if (!mod_) {
            m(0, 0) = rep_.coeff(0);
            return m;
        }
        for (long j = 0; j < d; ++j) {
            RatPoly col = (rep_ * RatPoly::monomial(Rational(1), static_cast<std::size_t>(j))) % *mod_;
            for (long i = 0; i < d; ++i)
                m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = col.coeff(i);
        }
        return m;
    }

private:
    static std::shared_ptr<const RatPoly> common_modulus(const NumberFieldElement& a,
                                                         const NumberFieldElement& b) {
        if (!a.mod_) return b.mod_;
        if (!b.mod_ || a.mod_ == b.mod_ || *a.mod_ == *b.mod_) return a.mod_;
        fail("precondition", "number field elements from different fields");
    }

    RatPoly rep_;
    std::shared_ptr<const RatPoly> mod_;
};

inline bool is_zero(const NumberFieldElement& x) { return x.representative().is_zero(); }
inline NumberFieldElement one_like(const NumberFieldElement& x) { return {RatPoly(Rational(1)), x.modulus()}; }
inline NumberFieldElement zero_like(const NumberFieldElement& x) { return {RatPoly{}, x.modulus()}; }
inline std::string to_string(const NumberFieldElement& x) { return x.representative().to_string("x"); }

/// N_{K/Q}(e): determinant of multiplication by e.
inline Rational field_norm(const NumberFieldElement& e) { return determinant(e.multiplication_matrix()); }

/// Tr_{K/Q}(e): trace of multiplication by e.
inline Rational field_trace(const NumberFieldElement& e) { return e.multiplication_matrix().trace(); }

inline std::shared_ptr<const RatPoly> make_modulus(RatPoly p) {
    return std::make_shared<const RatPoly>(std::move(p));
}

}  // namespace finpot
