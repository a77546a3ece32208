#pragma once

// Rank-1 conjugation witnesses: a positive operator whose spectrum spreads
// over [lambda1, lambda2] conjugates some rank-1 orthogonal projection P into
// A P A^{-1} with norm at least (1 / (2 sqrt 2)) lambda2 / lambda1.

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "schauder/dense_matrix.hpp"
#include "schauder/error.hpp"
#include "schauder/matrix_kernel.hpp"

namespace schauder {

struct Rank1Witness {
    DenseMatrix section;    // A = diag(lambda1 + delta, lambda2 - delta)
    DenseMatrix projection; // P = e e^T, e = (e1 + e2) / sqrt 2
    double norm = 0.0;      // ||A P A^{-1}||
    double bound = 0.0;     // lambda2 / (2 sqrt 2 lambda1)
    bool satisfied = false; // norm >= bound - epsilon
};

/// Builds the 2-dimensional witness at the worst-case spectral endpoints
/// a1 = lambda1 + delta, a2 = lambda2 - delta.
inline Rank1Witness rank1_conjugation_witness(double lambda1, double lambda2, double delta, double epsilon = 1e-9) {
    if (!(lambda1 > 0.0) || !(lambda2 >= lambda1) || !std::isfinite(lambda2)) {
        throw InvalidParameter("need 0 < lambda1 <= lambda2");
    }
    if (!(delta >= 0.0)) {
        throw InvalidParameter("delta must be nonnegative");
    }
    if (lambda1 == lambda2 ? delta != 0.0 : !(delta < 0.5 * (lambda2 - lambda1))) {
        throw InvalidParameter("delta must be below (lambda2 - lambda1) / 2");
    }
    const double a1 = lambda1 + delta;
    const double a2 = lambda2 - delta;
    const DenseMatrix a = DenseMatrix::from_rows({{a1, 0.0}, {0.0, a2}});
    const DenseMatrix a_inv = DenseMatrix::from_rows({{1.0 / a1, 0.0}, {0.0, 1.0 / a2}});
    const DenseMatrix p = DenseMatrix::from_rows({{0.5, 0.5}, {0.5, 0.5}});
    Rank1Witness w{a, p, spectral_norm(a * p * a_inv), lambda2 / (2.0 * std::sqrt(2.0) * lambda1), false};
    w.satisfied = w.norm >= w.bound - epsilon;
    return w;
}

/// ||A_n P A_n^{-1}|| for each 2-dimensional block diag(lambda_odd, lambda_even).
///
/// When lambda_odd / lambda_even >= 2 sqrt 2 (n + 1) the n-th norm exceeds n,
/// so no uniform bound on natural projections survives: an operator mapping
/// every orthonormal basis to a basis must be invertible.
inline std::vector<double> projection_blowup_witness(std::span<const std::pair<double, double>> pairs) {
    std::vector<double> norms;
    norms.reserve(pairs.size());
    for (const auto& [odd, even] : pairs) {
        if (!(even > 0.0) || !(even <= odd)) {
            throw InvalidParameter("each pair needs 0 < lambda_even <= lambda_odd");
        }
        norms.push_back(rank1_conjugation_witness(even, odd, 0.0).norm);
    }
    return norms;
}

} // namespace schauder
