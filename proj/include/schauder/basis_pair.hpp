#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "schauder/dense_matrix.hpp"
#include "schauder/error.hpp"
#include "schauder/matrix_kernel.hpp"

namespace schauder {

/// Max-entry tolerance on F G* = G* F = I.
inline constexpr double kBiorthogonalityTolerance = 1e-9;

/// Sorted set of 0-based basis indices.
using IndexSubset = std::vector<std::size_t>;

/// A square section F (columns are basis vectors f_n) with its inverse
/// section G* (rows are the coefficient functionals g*_k).
class BasisPair {
public:
    BasisPair(DenseMatrix f, DenseMatrix gstar) : f_(std::move(f)), gstar_(std::move(gstar)) {
        if (!f_.is_square() || !gstar_.is_square() || f_.rows() != gstar_.rows()) {
            throw InvalidInput("basis pair needs square sections of equal size, got " + f_.shape() +
                               " and " + gstar_.shape());
        }
        const double left = identity_deviation(gstar_ * f_);
        const double right = identity_deviation(f_ * gstar_);
        if (!(left < kBiorthogonalityTolerance) || !(right < kBiorthogonalityTolerance)) {
            throw InvalidInput("sections are not biorthogonal: ||G*F - I|| = " + std::to_string(left) +
                               ", ||FG* - I|| = " + std::to_string(right));
        }
    }

    const DenseMatrix& f() const noexcept { return f_; }
    const DenseMatrix& gstar() const noexcept { return gstar_; }
    std::size_t size() const noexcept { return f_.rows(); }

private:
    DenseMatrix f_;
    DenseMatrix gstar_;
};

/// Pairs F with its two-sided inverse; singular F cannot span a basis section.
inline BasisPair biorthogonal_inverse(const DenseMatrix& f) {
    detail::require_square(f, "biorthogonal_inverse");
    return BasisPair(f, invert(f));
}

/// Sorts, deduplicates and range-checks a subset of {0..n-1}.
inline IndexSubset normalize_subset(std::span<const std::size_t> subset, std::size_t n) {
    IndexSubset out(subset.begin(), subset.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (!out.empty() && out.back() >= n) {
        throw InvalidIndex("index " + std::to_string(out.back() + 1) + " outside {1.." + std::to_string(n) + "}");
    }
    return out;
}

inline IndexSubset prefix_subset(std::size_t n) {
    IndexSubset out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = i;
    }
    return out;
}

/// Q_Delta = F P_Delta G*, the projection keeping the Delta-indexed terms.
inline DenseMatrix natural_projection(const BasisPair& pair, std::span<const std::size_t> subset) {
    const auto idx = normalize_subset(subset, pair.size());
    Eigen::VectorXd mask = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pair.size()));
    for (auto i : idx) {
        mask(static_cast<Eigen::Index>(i)) = 1.0;
    }
    return DenseMatrix(MatrixStorage(pair.f().eigen() * mask.asDiagonal() * pair.gstar().eigen()));
}

struct ColumnNormBounds {
    double min = 0.0;
    double max = 0.0;

    /// max/min; infinity when a column vanishes.
    double ratio() const { return min > 0.0 ? max / min : std::numeric_limits<double>::infinity(); }
};

/// Smallest and largest Euclidean column norm (quasinormality of the columns).
inline ColumnNormBounds quasinormality_bounds(const DenseMatrix& f) {
    const Eigen::RowVectorXd norms = f.eigen().colwise().norm();
    return {norms.minCoeff(), norms.maxCoeff()};
}

/// Finite section of the bidiagonal matrix whose inverse has non-l2 rows.
///
/// F has F(1,1) = 1, F(i,i+1) = 1 and F(i,i) = -1 for i >= 2; G* has a row of
/// ones on top and -1 on and above the diagonal below it. F G* = G* F = I
/// holds exactly in integer arithmetic while ||F P_1 G*|| = sqrt(N).
inline BasisPair summing_counterexample(std::size_t n) {
    if (n == 0) {
        throw InvalidParameter("summing counterexample needs N >= 1");
    }
    const auto size = static_cast<Eigen::Index>(n);
    MatrixStorage f = MatrixStorage::Zero(size, size);
    MatrixStorage g = MatrixStorage::Zero(size, size);
    f(0, 0) = 1.0;
    for (Eigen::Index i = 0; i + 1 < size; ++i) {
        f(i, i + 1) = 1.0;
        f(i + 1, i + 1) = -1.0;
    }
    g.row(0).setOnes();
    for (Eigen::Index i = 1; i < size; ++i) {
        g.row(i).tail(size - i).setConstant(-1.0);
    }
    return BasisPair(DenseMatrix(std::move(f)), DenseMatrix(std::move(g)));
}

} // namespace schauder
