#pragma once

// Dense linear-algebra substrate: norms, inversion, singular values,
// permutations, direct sums and the polar decomposition.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "schauder/dense_matrix.hpp"
#include "schauder/error.hpp"

namespace schauder {

/// Relative threshold sigma_min / sigma_max below which a matrix is singular.
inline constexpr double kSingularityThreshold = 1e-12;
/// Relative threshold below which condition_number reports infinity.
inline constexpr double kConditionInfinityThreshold = 1e-14;
/// Largest dimension handled by a full SVD in spectral_norm.
inline constexpr std::size_t kDenseSvdLimit = 512;

namespace detail {

template <typename Derived>
bool is_diagonal(const Eigen::MatrixBase<Derived>& m) {
    if (m.rows() != m.cols()) {
        return false;
    }
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (i != j && m(i, j) != 0.0) {
                return false;
            }
        }
    }
    return true;
}

// Singular values in descending order. Exactly diagonal input takes |diag|.
template <typename Derived>
std::vector<double> singular_values(const Eigen::MatrixBase<Derived>& m) {
    std::vector<double> out;
    if (is_diagonal(m)) {
        out.reserve(static_cast<std::size_t>(m.rows()));
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            out.push_back(std::abs(m(i, i)));
        }
        std::sort(out.begin(), out.end(), std::greater<>());
        return out;
    }
    const Eigen::MatrixXd dense = m;
    const Eigen::Index r = dense.rows();
    const Eigen::Index c = dense.cols();
    const Eigen::Index p = std::min(r, c);
    if (p <= 64) {
        const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(dense).singularValues();
        out.assign(sv.data(), sv.data() + sv.size());
        return out;
    }
    // Eigen 3.4.0 BDCSVD loses digits on some structured inputs, so larger
    // matrices use the eigenvalues +-sigma of [[0, M], [M^T, 0]] instead.
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(r + c, r + c);
    h.topRightCorner(r, c) = dense;
    h.bottomLeftCorner(c, r) = dense.transpose();
    const Eigen::VectorXd ev =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h, Eigen::EigenvaluesOnly).eigenvalues();
    out.reserve(static_cast<std::size_t>(p));
    for (Eigen::Index i = 0; i < p; ++i) {
        out.push_back(std::max(0.0, ev(r + c - 1 - i)));
    }
    return out;
}

inline void require_square(const DenseMatrix& m, const char* what) {
    if (!m.is_square()) {
        throw InvalidInput(std::string(what) + " needs a square matrix, got " + m.shape());
    }
}

} // namespace detail

/// Singular values of M, largest first.
inline std::vector<double> singular_values(const DenseMatrix& m) {
    return detail::singular_values(m.eigen());
}

struct PowerIterationOptions {
    double tolerance = 1e-12;
    int max_iterations = 10000;
};

struct PowerIterationResult {
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Largest singular value by power iteration on M^T M.
///
/// Starts from the normalized all-ones vector and stops once the relative
/// change of the estimate drops below the tolerance.
inline PowerIterationResult spectral_norm_power(const DenseMatrix& m, PowerIterationOptions options = {}) {
    const auto& a = m.eigen();
    Eigen::VectorXd v = Eigen::VectorXd::Ones(a.cols()) / std::sqrt(static_cast<double>(a.cols()));
    if ((a * v).norm() == 0.0) {
        // all-ones lies in the kernel; restart on the heaviest column
        Eigen::Index best = 0;
        a.colwise().norm().maxCoeff(&best);
        v.setZero();
        v(best) = 1.0;
    }
    PowerIterationResult result;
    double previous = 0.0;
    for (int it = 1; it <= options.max_iterations; ++it) {
        const Eigen::VectorXd u = a * v;
        const double sigma = u.norm();
        result.value = sigma;
        result.iterations = it;
        if (sigma == 0.0) {
            result.converged = true;
            return result;
        }
        Eigen::VectorXd w = a.transpose() * u;
        const double wn = w.norm();
        if (wn == 0.0) {
            result.converged = true;
            return result;
        }
        v = w / wn;
        if (it > 1 && std::abs(sigma - previous) <= options.tolerance * sigma) {
            result.converged = true;
            return result;
        }
        previous = sigma;
    }
    return result;
}

/// Operator 2-norm: full SVD up to kDenseSvdLimit, power iteration above.
inline double spectral_norm(const DenseMatrix& m) {
    if (detail::is_diagonal(m.eigen())) {
        return m.eigen().diagonal().cwiseAbs().maxCoeff();
    }
    if (std::max(m.rows(), m.cols()) <= kDenseSvdLimit) {
        return detail::singular_values(m.eigen()).front();
    }
    return spectral_norm_power(m).value;
}

/// Two-sided inverse of a square matrix.
///
/// Throws SingularMatrix when sigma_min < 1e-12 sigma_max. The LU inverse
/// gets one step of residual refinement.
inline DenseMatrix invert(const DenseMatrix& m) {
    detail::require_square(m, "invert");
    const auto& a = m.eigen();
    if (detail::is_diagonal(a)) {
        const Eigen::VectorXd d = a.diagonal();
        const double top = d.cwiseAbs().maxCoeff();
        if (top == 0.0 || d.cwiseAbs().minCoeff() < kSingularityThreshold * top) {
            throw SingularMatrix("diagonal matrix is singular to working precision");
        }
        return DenseMatrix(MatrixStorage(d.cwiseInverse().asDiagonal()));
    }
    const auto sv = detail::singular_values(a);
    if (sv.front() == 0.0 || sv.back() < kSingularityThreshold * sv.front()) {
        throw SingularMatrix("matrix is singular to working precision (sigma_min/sigma_max = " +
                             std::to_string(sv.front() == 0.0 ? 0.0 : sv.back() / sv.front()) + ")");
    }
    MatrixStorage x = a.partialPivLu().inverse();
    const MatrixStorage residual = MatrixStorage::Identity(a.rows(), a.cols()) - a * x;
    x += x * residual;
    return DenseMatrix(std::move(x));
}

/// sigma_max / sigma_min; +infinity when sigma_min < 1e-14 sigma_max.
template <typename Derived>
double condition_number(const Eigen::MatrixBase<Derived>& m) {
    if (m.rows() != m.cols()) {
        throw InvalidInput("condition number needs a square matrix");
    }
    const auto sv = detail::singular_values(m);
    if (sv.front() == 0.0 || sv.back() < kConditionInfinityThreshold * sv.front()) {
        return std::numeric_limits<double>::infinity();
    }
    return sv.front() / sv.back();
}

inline double condition_number(const DenseMatrix& m) {
    detail::require_square(m, "condition_number");
    return condition_number(m.eigen());
}

/// Block-diagonal matrix with the given blocks in order.
inline DenseMatrix direct_sum(std::span<const DenseMatrix> blocks) {
    if (blocks.empty()) {
        throw InvalidInput("direct sum of an empty block list");
    }
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    for (const auto& b : blocks) {
        rows += static_cast<Eigen::Index>(b.rows());
        cols += static_cast<Eigen::Index>(b.cols());
    }
    MatrixStorage out = MatrixStorage::Zero(rows, cols);
    Eigen::Index r = 0;
    Eigen::Index c = 0;
    for (const auto& b : blocks) {
        out.block(r, c, b.eigen().rows(), b.eigen().cols()) = b.eigen();
        r += b.eigen().rows();
        c += b.eigen().cols();
    }
    return DenseMatrix(std::move(out));
}

inline DenseMatrix direct_sum(std::initializer_list<DenseMatrix> blocks) {
    return direct_sum(std::span<const DenseMatrix>(blocks.begin(), blocks.size()));
}

/// A bijection of {0..n-1}; perm[n] is the image pi(n).
using Permutation = std::vector<std::size_t>;

inline bool is_permutation(std::span<const std::size_t> perm) {
    std::vector<char> seen(perm.size(), 0);
    for (auto p : perm) {
        if (p >= perm.size() || seen[p]) {
            return false;
        }
        seen[p] = 1;
    }
    return true;
}

inline Permutation inverse_permutation(std::span<const std::size_t> perm) {
    if (!is_permutation(perm)) {
        throw InvalidPermutation("not a bijection on {1.." + std::to_string(perm.size()) + "}");
    }
    Permutation inv(perm.size());
    for (std::size_t n = 0; n < perm.size(); ++n) {
        inv[perm[n]] = n;
    }
    return inv;
}

/// The orthogonal matrix U_pi mapping e_{pi(n)} to e_n.
inline DenseMatrix permutation_matrix(std::span<const std::size_t> perm) {
    if (perm.empty() || !is_permutation(perm)) {
        throw InvalidPermutation("not a bijection on {1.." + std::to_string(perm.size()) + "}");
    }
    const auto n = static_cast<Eigen::Index>(perm.size());
    MatrixStorage u = MatrixStorage::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        u(i, static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)])) = 1.0;
    }
    return DenseMatrix(std::move(u));
}

struct PolarFactors {
    DenseMatrix unitary;  // U, orthogonal
    DenseMatrix positive; // A = (M^T M)^{1/2}
};

/// M = U A with A symmetric positive definite and U orthogonal.
inline PolarFactors polar_decompose(const DenseMatrix& m) {
    detail::require_square(m, "polar_decompose");
    const Eigen::MatrixXd a = m.eigen();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv(0) == 0.0 || sv(sv.size() - 1) < kSingularityThreshold * sv(0)) {
        throw SingularMatrix("polar decomposition needs a nonsingular matrix");
    }
    const Eigen::MatrixXd& w = svd.matrixU();
    const Eigen::MatrixXd& v = svd.matrixV();
    Eigen::MatrixXd positive = v * sv.asDiagonal() * v.transpose();
    positive = 0.5 * (positive + positive.transpose()).eval();
    const Eigen::MatrixXd unitary = w * v.transpose();
    return {DenseMatrix(MatrixStorage(unitary)), DenseMatrix(MatrixStorage(positive))};
}

} // namespace schauder
