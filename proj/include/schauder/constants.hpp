#pragma once

// Basis constants via natural projections.
//
//   basis constant          sup_n     ||F P_n G*||   (prefix sets)
//   unconditional constant  sup_Delta ||F P_Delta G*|| (all subsets)
//
// The unconditional search enumerates all 2^N subsets up to a cutoff and
// falls back to seeded sampling plus greedy single-index flips above it.
// Every result carries a witness subset from which its value can be
// recomputed.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <random>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/QR>

#include "schauder/basis_pair.hpp"
#include "schauder/dense_matrix.hpp"
#include "schauder/matrix_kernel.hpp"

namespace schauder {

enum class EstimateMode { Exact, LowerBoundWitness };

inline const char* to_string(EstimateMode mode) {
    return mode == EstimateMode::Exact ? "Exact" : "LowerBoundWitness";
}

struct ConstantEstimate {
    double value = 0.0;
    EstimateMode mode = EstimateMode::Exact;
    IndexSubset witness;           // 0-based
    std::uint64_t evaluations = 0; // subsets or prefixes examined
};

struct SearchConfig {
    std::size_t exact_cutoff = 16;
    std::size_t samples = 20000;
    std::uint64_t seed = 0;
    bool greedy = true;
    /// Split block-diagonal pairs into independent components first.
    bool decompose_blocks = true;
    /// 0 means one worker per hardware thread.
    unsigned workers = 0;
};

namespace detail {

using Indices = std::vector<Eigen::Index>;

// ||A B|| for A = F(:, idx), B = G*(idx, :). When the subset is small the
// norm is taken on the r x r core R_A R_B^T of the two thin QR factors.
inline double subset_norm(const MatrixStorage& f, const MatrixStorage& g, const Indices& idx) {
    const auto r = static_cast<Eigen::Index>(idx.size());
    if (r == 0) {
        return 0.0;
    }
    const Eigen::MatrixXd a = f(Eigen::all, idx);
    const Eigen::MatrixXd bt = g(idx, Eigen::all).transpose();
    if (2 * r > f.rows()) {
        const Eigen::MatrixXd q = a * bt.transpose();
        return singular_values(q).front();
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qa(a);
    Eigen::HouseholderQR<Eigen::MatrixXd> qb(bt);
    const Eigen::MatrixXd ra = qa.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd rb = qb.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd core = ra * rb.transpose();
    return singular_values(core).front();
}

inline unsigned worker_count(unsigned requested) {
    if (requested != 0) {
        return requested;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

struct Best {
    double value = -1.0;
    std::uint64_t index = 0;
};

// Max of eval(i) over i in [0, count); ties resolve to the smallest i, so
// the outcome does not depend on the number of workers.
inline Best parallel_max(std::uint64_t count, unsigned workers,
                         const std::function<double(std::uint64_t)>& eval) {
    Best best;
    if (count == 0) {
        return best;
    }
    const std::uint64_t chunks = std::min<std::uint64_t>(workers, count);
    if (chunks <= 1 || count < 64) {
        for (std::uint64_t i = 0; i < count; ++i) {
            const double v = eval(i);
            if (v > best.value) {
                best = {v, i};
            }
        }
        return best;
    }
    std::vector<Best> partial(chunks);
    std::vector<std::exception_ptr> errors(chunks);
    {
        std::vector<std::jthread> threads;
        for (std::uint64_t c = 0; c < chunks; ++c) {
            threads.emplace_back([&, c] {
                try {
                    const std::uint64_t lo = count * c / chunks;
                    const std::uint64_t hi = count * (c + 1) / chunks;
                    Best local;
                    for (std::uint64_t i = lo; i < hi; ++i) {
                        const double v = eval(i);
                        if (v > local.value) {
                            local = {v, i};
                        }
                    }
                    partial[c] = local;
                } catch (...) {
                    errors[c] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    for (const auto& p : partial) {
        if (p.value > best.value) {
            best = p;
        }
    }
    return best;
}

using Mask = std::vector<char>;

inline Indices mask_indices(const Mask& mask) {
    Indices idx;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i]) {
            idx.push_back(static_cast<Eigen::Index>(i));
        }
    }
    return idx;
}

inline IndexSubset mask_subset(const Mask& mask) {
    IndexSubset out;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i]) {
            out.push_back(i);
        }
    }
    return out;
}

// All 2^n subsets of one block, the empty one included.
inline ConstantEstimate enumerate_subsets(const MatrixStorage& f, const MatrixStorage& g, unsigned workers) {
    const auto n = static_cast<std::size_t>(f.rows());
    const std::uint64_t count = std::uint64_t{1} << n;
    const Best best = parallel_max(count, workers, [&](std::uint64_t m) {
        Indices idx;
        for (std::size_t i = 0; i < n; ++i) {
            if ((m >> i) & 1U) {
                idx.push_back(static_cast<Eigen::Index>(i));
            }
        }
        return subset_norm(f, g, idx);
    });
    ConstantEstimate est;
    est.value = best.value;
    est.mode = EstimateMode::Exact;
    est.evaluations = count;
    for (std::size_t i = 0; i < n; ++i) {
        if ((best.index >> i) & 1U) {
            est.witness.push_back(i);
        }
    }
    return est;
}

// Prefixes, then seeded random subsets, then greedy single flips.
inline ConstantEstimate sample_subsets(const MatrixStorage& f, const MatrixStorage& g, const SearchConfig& config,
                                       std::mt19937_64& rng) {
    const auto n = static_cast<std::size_t>(f.rows());
    const unsigned workers = worker_count(config.workers);
    ConstantEstimate est;
    est.mode = EstimateMode::LowerBoundWitness;
    Mask best_mask(n, 0);
    double best_value = -1.0;

    const Best prefix = parallel_max(n, workers, [&](std::uint64_t p) {
        Indices idx(p + 1);
        for (std::size_t i = 0; i <= p; ++i) {
            idx[i] = static_cast<Eigen::Index>(i);
        }
        return subset_norm(f, g, idx);
    });
    est.evaluations += n;
    best_value = prefix.value;
    std::fill(best_mask.begin(), best_mask.begin() + static_cast<std::ptrdiff_t>(prefix.index + 1), 1);

    // draw every sample from the single stream before evaluating any of them
    std::vector<Mask> drawn(config.samples, Mask(n, 0));
    for (auto& mask : drawn) {
        std::uint64_t word = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i % 64 == 0) {
                word = rng();
            }
            mask[i] = static_cast<char>((word >> (i % 64)) & 1U);
        }
    }
    const Best sampled = parallel_max(drawn.size(), workers,
                                      [&](std::uint64_t s) { return subset_norm(f, g, mask_indices(drawn[s])); });
    est.evaluations += drawn.size();
    if (sampled.value > best_value) {
        best_value = sampled.value;
        best_mask = drawn[sampled.index];
    }

    if (config.greedy) {
        for (;;) {
            const Best flip = parallel_max(n, workers, [&](std::uint64_t i) {
                Mask m = best_mask;
                m[i] = static_cast<char>(!m[i]);
                return subset_norm(f, g, mask_indices(m));
            });
            est.evaluations += n;
            if (!(flip.value > best_value)) {
                break;
            }
            best_value = flip.value;
            best_mask[flip.index] = static_cast<char>(!best_mask[flip.index]);
        }
    }
    est.value = std::max(best_value, 0.0);
    est.witness = mask_subset(best_mask);
    return est;
}

// Connected components of the joint sparsity pattern of F and G*, each
// sorted, ordered by smallest member.
inline std::vector<IndexSubset> block_components(const MatrixStorage& f, const MatrixStorage& g) {
    const auto n = static_cast<std::size_t>(f.rows());
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) {
        parent[i] = i;
    }
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (Eigen::Index i = 0; i < f.rows(); ++i) {
        for (Eigen::Index j = 0; j < f.cols(); ++j) {
            if (i != j && (f(i, j) != 0.0 || g(i, j) != 0.0)) {
                const auto a = find(static_cast<std::size_t>(i));
                const auto b = find(static_cast<std::size_t>(j));
                if (a != b) {
                    parent[std::max(a, b)] = std::min(a, b);
                }
            }
        }
    }
    std::vector<IndexSubset> groups;
    std::vector<std::size_t> slot(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto root = find(i);
        if (slot[root] == n) {
            slot[root] = groups.size();
            groups.emplace_back();
        }
        groups[slot[root]].push_back(i);
    }
    return groups;
}

} // namespace detail

/// Exact maximum of ||F P_n G*|| over the prefixes {1..n}, n = 1..N.
inline ConstantEstimate basis_constant(const BasisPair& pair) {
    const auto& f = pair.f().eigen();
    const auto& g = pair.gstar().eigen();
    const std::size_t n = pair.size();
    const auto best = detail::parallel_max(n, detail::worker_count(0), [&](std::uint64_t p) {
        detail::Indices idx(p + 1);
        for (std::size_t i = 0; i <= p; ++i) {
            idx[i] = static_cast<Eigen::Index>(i);
        }
        return detail::subset_norm(f, g, idx);
    });
    return {best.value, EstimateMode::Exact, prefix_subset(best.index + 1), n};
}

/// Supremum of ||F P_Delta G*|| over subsets Delta.
///
/// Blocks of size <= exact_cutoff are enumerated exhaustively (mode Exact);
/// larger blocks get a reproducible lower bound (mode LowerBoundWitness).
inline ConstantEstimate unconditional_constant(const BasisPair& pair, const SearchConfig& config = {}) {
    const auto& f = pair.f().eigen();
    const auto& g = pair.gstar().eigen();
    std::vector<IndexSubset> blocks;
    if (config.decompose_blocks) {
        blocks = detail::block_components(f, g);
    } else {
        blocks.push_back(prefix_subset(pair.size()));
    }
    std::mt19937_64 rng(config.seed);
    const unsigned workers = detail::worker_count(config.workers);

    ConstantEstimate result;
    result.value = -1.0;
    bool exact = true;
    for (const auto& block : blocks) {
        ConstantEstimate part;
        if (blocks.size() == 1) {
            part = block.size() <= config.exact_cutoff ? detail::enumerate_subsets(f, g, workers)
                                                       : detail::sample_subsets(f, g, config, rng);
        } else {
            detail::Indices idx(block.begin(), block.end());
            const MatrixStorage fb = f(idx, idx);
            const MatrixStorage gb = g(idx, idx);
            part = block.size() <= config.exact_cutoff ? detail::enumerate_subsets(fb, gb, workers)
                                                       : detail::sample_subsets(fb, gb, config, rng);
            for (auto& w : part.witness) {
                w = block[w];
            }
        }
        exact = exact && part.mode == EstimateMode::Exact;
        result.evaluations += part.evaluations;
        if (part.value > result.value) {
            result.value = part.value;
            result.witness = std::move(part.witness);
        }
    }
    result.mode = exact ? EstimateMode::Exact : EstimateMode::LowerBoundWitness;
    return result;
}

/// Basis constant of the dual system: max over prefixes of ||G P_n F*||
/// with G = (G*)^T and F* = F^T.
inline double dual_basis_constant(const BasisPair& pair) {
    const MatrixStorage g = pair.gstar().eigen().transpose();
    const MatrixStorage fstar = pair.f().eigen().transpose();
    const std::size_t n = pair.size();
    double best = 0.0;
    for (std::size_t p = 1; p <= n; ++p) {
        const auto k = static_cast<Eigen::Index>(p);
        const DenseMatrix q(MatrixStorage(g.leftCols(k) * fstar.topRows(k)));
        best = std::max(best, spectral_norm(q));
    }
    return best;
}

/// ||F P_Delta G*|| for an explicit subset; recomputes a witness value.
inline double projection_norm(const BasisPair& pair, std::span<const std::size_t> subset) {
    return spectral_norm(natural_projection(pair, subset));
}

} // namespace schauder
