#pragma once

// Transform laws for basis pairs: left multiplication by an invertible X,
// right multiplication by a nonzero diagonal, and column permutations.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>

#include "schauder/basis_pair.hpp"
#include "schauder/matrix_kernel.hpp"

namespace schauder {

/// (X F, G* X^{-1}); constants grow by at most kappa(X).
inline BasisPair transform_left(const DenseMatrix& x, const BasisPair& pair) {
    detail::require_square(x, "transform_left");
    if (x.rows() != pair.size()) {
        throw InvalidInput("transform matrix is " + x.shape() + " but the pair has size " +
                           std::to_string(pair.size()));
    }
    const DenseMatrix x_inv = invert(x);
    return BasisPair(x * pair.f(), pair.gstar() * x_inv);
}

/// (F D, D^{-1} G*); every natural projection is unchanged.
inline BasisPair transform_right_diagonal(const BasisPair& pair, std::span<const double> d) {
    if (d.size() != pair.size()) {
        throw InvalidInput("diagonal has " + std::to_string(d.size()) + " entries, pair has size " +
                           std::to_string(pair.size()));
    }
    Eigen::VectorXd diag(static_cast<Eigen::Index>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] == 0.0 || !std::isfinite(d[i])) {
            throw InvalidParameter("diagonal entry " + std::to_string(i + 1) + " must be finite and nonzero");
        }
        diag(static_cast<Eigen::Index>(i)) = d[i];
    }
    MatrixStorage f = pair.f().eigen() * diag.asDiagonal();
    MatrixStorage g = diag.cwiseInverse().asDiagonal() * pair.gstar().eigen();
    return BasisPair(DenseMatrix(std::move(f)), DenseMatrix(std::move(g)));
}

/// (F U_pi, U_pi^T G*): reorders the basis. The unconditional constant is
/// invariant, the basis constant in general is not.
inline BasisPair transform_right_permutation(const BasisPair& pair, std::span<const std::size_t> perm) {
    if (perm.size() != pair.size()) {
        throw InvalidPermutation("permutation of " + std::to_string(perm.size()) + " elements, pair has size " +
                                 std::to_string(pair.size()));
    }
    const DenseMatrix u = permutation_matrix(perm);
    return BasisPair(pair.f() * u, u.transpose() * pair.gstar());
}

} // namespace schauder
