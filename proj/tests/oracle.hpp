#pragma once

// Slow reference implementations on plain nested vectors. They share no code
// with the library so tests compare against something independent.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "schauder/dense_matrix.hpp"

namespace oracle {

using Mat = std::vector<std::vector<double>>;

inline Mat from(const schauder::DenseMatrix& m) {
    Mat out(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out[i][j] = m(i, j);
        }
    }
    return out;
}

inline Mat mul(const Mat& a, const Mat& b) {
    Mat c(a.size(), std::vector<double>(b[0].size(), 0.0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t k = 0; k < b.size(); ++k) {
            for (std::size_t j = 0; j < b[0].size(); ++j) {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    return c;
}

inline Mat transpose(const Mat& a) {
    Mat t(a[0].size(), std::vector<double>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a[0].size(); ++j) {
            t[j][i] = a[i][j];
        }
    }
    return t;
}

// Cyclic Jacobi eigenvalues of a symmetric matrix.
inline std::vector<double> symmetric_eigenvalues(Mat a) {
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                off += a[p][q] * a[p][q];
            }
        }
        if (off < 1e-30) {
            break;
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) {
                    continue;
                }
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p];
                    const double akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k];
                    const double aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) {
        ev[i] = a[i][i];
    }
    std::sort(ev.begin(), ev.end());
    return ev;
}

inline double spectral_norm(const Mat& m) {
    const auto ev = symmetric_eigenvalues(mul(transpose(m), m));
    return std::sqrt(std::max(0.0, ev.back()));
}

// Gauss-Jordan with partial pivoting.
inline Mat inverse(Mat a) {
    const std::size_t n = a.size();
    Mat inv(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        inv[i][i] = 1.0;
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) {
                piv = r;
            }
        }
        if (std::abs(a[piv][col]) < 1e-14) {
            throw std::runtime_error("oracle: singular");
        }
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        const double d = a[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) {
                continue;
            }
            const double f = a[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

// ||F P_mask G*||, mask bit j keeps column j.
inline double projection_norm(const Mat& f, const Mat& g, std::uint64_t mask) {
    const std::size_t n = f.size();
    Mat q(n, std::vector<double>(n, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        if (!((mask >> j) & 1U)) {
            continue;
        }
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                q[r][c] += f[r][j] * g[j][c];
            }
        }
    }
    return spectral_norm(q);
}

inline double unconditional_constant(const Mat& f, const Mat& g) {
    double best = 0.0;
    const std::uint64_t total = std::uint64_t{1} << f.size();
    for (std::uint64_t mask = 1; mask < total; ++mask) {
        best = std::max(best, projection_norm(f, g, mask));
    }
    return best;
}

inline double basis_constant(const Mat& f, const Mat& g) {
    double best = 0.0;
    for (std::size_t n = 1; n <= f.size(); ++n) {
        best = std::max(best, projection_norm(f, g, (std::uint64_t{1} << n) - 1));
    }
    return best;
}

// I + noise, comfortably invertible.
inline schauder::DenseMatrix random_well_conditioned(std::size_t n, std::mt19937_64& rng, double scale = 0.3) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> entries(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            entries[i * n + j] = (i == j ? 1.0 : 0.0) + scale * normal(rng) / std::sqrt(static_cast<double>(n));
        }
    }
    return schauder::DenseMatrix(n, n, entries);
}

} // namespace oracle
