#pragma once

#include <vector>

#include "finpot/matrix.hpp"
#include "finpot/operator.hpp"

namespace finpot {

/// Fitting splitting of a finite matrix M = core ⊕ nil. Bases are stored as
/// columns in the coordinates of the ambient finite space; `indices` records
/// which basis vectors e_i that space is spanned by when it comes from an
/// operator certificate.
template <typename F>
struct ASTDecomposition {
    std::vector<long> indices;
    Matrix<F> core_basis;
    Matrix<F> nil_basis;
    Matrix<F> core_matrix;
    Matrix<F> nil_matrix;
    long nil_degree = 0;

    std::size_t core_dim() const { return core_matrix.rows(); }
    std::size_t dim() const { return core_matrix.rows() + nil_matrix.rows(); }
};

/// W = im M^d, U = ker M^d with d the dimension. In the basis [W | U] the
/// matrix is block diagonal, invertible on W and nilpotent on U.
template <typename F>
ASTDecomposition<F> fitting(const Matrix<F>& m) {
    if (!m.square()) fail("precondition", "fitting needs a square matrix");
    ASTDecomposition<F> a;
    const std::size_t n = m.rows();
    if (n == 0) return a;
    Matrix<F> p = m.pow(static_cast<unsigned>(n));
    a.core_basis = column_space_basis(p);
    a.nil_basis = kernel_basis(p);
    const std::size_t r = a.core_basis.cols();
    Matrix<F> b = hstack(a.core_basis, a.nil_basis);
    Matrix<F> d = inverse(b) * m * b;
    std::vector<std::size_t> core_idx, nil_idx;
    for (std::size_t i = 0; i < n; ++i) (i < r ? core_idx : nil_idx).push_back(i);
    a.core_matrix = d.submatrix(core_idx, core_idx);
    a.nil_matrix = d.submatrix(nil_idx, nil_idx);
    // off-diagonal blocks vanish because both subspaces are invariant
    if (!d.submatrix(core_idx, nil_idx).is_zero() || !d.submatrix(nil_idx, core_idx).is_zero())
        fail("structural_failure", "Fitting blocks are not invariant");
    if (!nil_idx.empty()) {
        Matrix<F> q = a.nil_matrix;
        a.nil_degree = 1;
        while (!q.is_zero()) {
            q = q * a.nil_matrix;
            ++a.nil_degree;
        }
    }
    return a;
}

/// Fitting splitting of the certified core; the tail only adds to the
/// nilpotent side, so the invertible part is the global one.
template <typename F>
ASTDecomposition<F> lift_ast(const FinitePotentOperator<F>& phi) {
    Certificate<F> c = certify_finite_potent(phi);
    ASTDecomposition<F> a = fitting(c.M);
    a.indices = c.W;
    return a;
}

}  // namespace finpot
