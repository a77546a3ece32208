#pragma once

// Olevskii-type conditional-basis blocks and the key-lemma assembly that
// turns a positive diagonal operator into the image of an orthonormal basis
// under a conditional-basis matrix.
//
// Level k works on 2^k coordinates:
//   A_k          Haar-type orthogonal matrix
//   T_(k,alpha)  diag(alpha^k x2, alpha^(k-1) x2, alpha^(k-2) x4, ..., alpha x 2^(k-1))
//   F_k          T_(k,alpha) A_k^T, inverse A_k T_(k,alpha)^{-1}

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "schauder/basis_pair.hpp"
#include "schauder/dense_matrix.hpp"
#include "schauder/error.hpp"
#include "schauder/matrix_kernel.hpp"
#include "schauder/spectrum.hpp"

namespace schauder {

inline constexpr int kMaxHaarLevel = 12;
inline constexpr double kDefaultAlpha = 0.8;

inline void check_alpha(double alpha) {
    if (!(alpha > 1.0 / std::sqrt(2.0) && alpha < 1.0)) {
        throw InvalidParameter("alpha = " + format_double(alpha) + " must lie in (1/sqrt(2), 1)");
    }
}

inline void check_level(int k) {
    if (k < 1 || k > kMaxHaarLevel) {
        throw InvalidParameter("level k = " + std::to_string(k) + " must lie in 1.." + std::to_string(kMaxHaarLevel));
    }
}

/// The 2^k x 2^k Haar-type orthogonal matrix A_k.
///
/// Column 1 is constant 2^{-k/2}. Column j = 2^s + v (1 <= v <= 2^s) holds
/// +2^{(s-k)/2} on rows (v-1)2^{k-s} < i <= (2v-1)2^{k-s-1} and -2^{(s-k)/2}
/// on rows (2v-1)2^{k-s-1} < i <= v 2^{k-s} (1-based).
inline DenseMatrix haar_matrix(int k) {
    check_level(k);
    const long n = 1L << k;
    MatrixStorage a = MatrixStorage::Zero(n, n);
    a.col(0).setConstant(std::pow(2.0, -0.5 * k));
    for (int s = 0; s < k; ++s) {
        const double h = std::pow(2.0, 0.5 * (s - k));
        const long width = 1L << (k - s); // support length of the column
        for (long v = 1; v <= (1L << s); ++v) {
            const long j = (1L << s) + v;
            const long lo = (v - 1) * width;
            const long mid = (2 * v - 1) * (width / 2);
            const long hi = v * width;
            for (long i = lo + 1; i <= mid; ++i) {
                a(i - 1, j - 1) = h;
            }
            for (long i = mid + 1; i <= hi; ++i) {
                a(i - 1, j - 1) = -h;
            }
        }
    }
    return DenseMatrix(std::move(a));
}

/// Exponents of the diagonal of T_(k,alpha) in display order:
/// k twice, then j repeated 2^{k-j} times for j = k-1 down to 1.
inline std::vector<int> weight_exponents(int k) {
    check_level(k);
    std::vector<int> e{k, k};
    for (int j = k - 1; j >= 1; --j) {
        e.insert(e.end(), std::size_t{1} << (k - j), j);
    }
    return e;
}

inline DenseMatrix weight_matrix(int k, double alpha) {
    check_alpha(alpha);
    const auto exps = weight_exponents(k);
    std::vector<double> d(exps.size());
    for (std::size_t p = 0; p < exps.size(); ++p) {
        d[p] = std::pow(alpha, exps[p]);
    }
    return DenseMatrix::diagonal(d);
}

/// (T_(k,alpha) A_k^T, A_k T_(k,alpha)^{-1}).
inline BasisPair olevskii_block(int k, double alpha) {
    const DenseMatrix a = haar_matrix(k);
    const DenseMatrix t = weight_matrix(k, alpha);
    const DenseMatrix t_inv = DenseMatrix(MatrixStorage(t.eigen().diagonal().cwiseInverse().asDiagonal()));
    return BasisPair(t * a.transpose(), a * t_inv);
}

/// Exponent w paired with list position i (0-based) of Delta_k in the
/// inequality c_k <= alpha^w / lambda <= d_k.
///
/// Positions 2^k-2 and 2^k-1 take w = k. Otherwise w = j on the 1-based
/// range 2^k(1 - 2^{1-j}) + 1 <= i <= 2^k(1 - 2^{-j}). Listed in reverse,
/// these are exactly weight_exponents(k), which is what lets the scaling
/// X_k reproduce the reversed diagonal block.
inline int position_exponent(int k, std::size_t i) {
    const std::size_t n = std::size_t{1} << k;
    if (i + 2 >= n) {
        return k;
    }
    int j = 1;
    while (i + 1 > n - (n >> j)) {
        ++j;
    }
    return j;
}

struct LevelBounds {
    double c = 0.0; // lower bound c_k
    double d = 0.0; // upper bound d_k
};

/// Parameters of the key-lemma assembly. All indices are 0-based positions
/// in a SpectrumSequence.
struct OlevskiiPlan {
    double alpha = kDefaultAlpha;
    /// Delta_k for k = 1..K, listed as n^k_1 .. n^k_{2^k}; size 2^k each.
    std::vector<std::vector<std::size_t>> subsets;
    std::vector<LevelBounds> bounds;
    /// S_k per level (may be empty, or the whole list may be omitted).
    std::vector<std::vector<std::size_t>> leftovers;
    /// Leading k = 0 block, passed through unchanged.
    std::vector<std::size_t> passthrough;

    std::size_t levels() const noexcept { return subsets.size(); }
};

struct PlanViolation {
    char condition = 's'; // 'a', 'b', 'c', or 's' for structure
    std::size_t level = 0; // 1-based, 0 when not tied to a level
    std::optional<std::size_t> index; // spectrum index (0-based)
    std::string message;
};

struct ValidationReport {
    std::vector<PlanViolation> violations;

    bool valid() const noexcept { return violations.empty(); }
};

struct PlanValidationOptions {
    /// Bound on max_k d_k / c_k (condition a).
    double ratio_bound = 100.0;
    /// Relative slack on the pairing inequalities (condition b).
    double relative_slack = 1e-12;
};

/// Checks the three key-lemma conditions on a plan.
///
/// (a) max_k d_k / c_k <= ratio_bound.
/// (b) c_k <= alpha^w / lambda_{n^k_i} <= d_k with w = position_exponent(k, i).
/// (c) the Delta_k are disjoint and max Delta_k < min Delta_{k+1}.
///
/// Violations are reported as data, never thrown.
inline ValidationReport validate_plan(const SpectrumSequence& spectrum, const OlevskiiPlan& plan,
                                      const PlanValidationOptions& options = {}) {
    ValidationReport report;
    auto add = [&](char cond, std::size_t level, std::optional<std::size_t> index, std::string msg) {
        report.violations.push_back({cond, level, index, std::move(msg)});
    };
    const std::size_t levels = plan.levels();
    const std::size_t n = spectrum.size();
    if (!(plan.alpha > 1.0 / std::sqrt(2.0) && plan.alpha < 1.0)) {
        add('s', 0, std::nullopt, "alpha = " + format_double(plan.alpha) + " outside (1/sqrt(2), 1)");
    }
    if (levels == 0) {
        add('s', 0, std::nullopt, "plan has no levels");
    }
    if (levels > static_cast<std::size_t>(kMaxHaarLevel)) {
        add('s', 0, std::nullopt, "plan has more than " + std::to_string(kMaxHaarLevel) + " levels");
        return report;
    }
    if (plan.bounds.size() != levels) {
        add('s', 0, std::nullopt, "expected " + std::to_string(levels) + " (c_k, d_k) pairs, got " +
                                      std::to_string(plan.bounds.size()));
    }
    if (!plan.leftovers.empty() && plan.leftovers.size() != levels) {
        add('s', 0, std::nullopt, "expected " + std::to_string(levels) + " leftover lists, got " +
                                      std::to_string(plan.leftovers.size()));
    }
    if (!report.valid()) {
        return report;
    }

    std::vector<bool> level_ok(levels, true);
    for (std::size_t lv = 0; lv < levels; ++lv) {
        const std::size_t k = lv + 1;
        const auto& delta = plan.subsets[lv];
        if (delta.size() != (std::size_t{1} << k)) {
            add('s', k, std::nullopt, "|Delta_" + std::to_string(k) + "| = " + std::to_string(delta.size()) +
                                          ", expected " + std::to_string(std::size_t{1} << k));
            level_ok[lv] = false;
        }
        std::set<std::size_t> seen;
        for (auto idx : delta) {
            if (idx >= n) {
                add('s', k, idx, "index " + std::to_string(idx + 1) + " beyond spectrum length " + std::to_string(n));
                level_ok[lv] = false;
            } else if (!seen.insert(idx).second) {
                add('s', k, idx, "index " + std::to_string(idx + 1) + " repeated in Delta_" + std::to_string(k));
                level_ok[lv] = false;
            }
        }
        const auto [c, d] = plan.bounds[lv];
        if (!(c > 0.0 && c <= d && std::isfinite(d))) {
            add('s', k, std::nullopt, "need 0 < c_k <= d_k, got c = " + format_double(c) + ", d = " + format_double(d));
            level_ok[lv] = false;
        }
    }

    // (a)
    for (std::size_t lv = 0; lv < levels; ++lv) {
        const auto [c, d] = plan.bounds[lv];
        if (c > 0.0 && d / c > options.ratio_bound) {
            add('a', lv + 1, std::nullopt, "d_k / c_k = " + format_double(d / c) + " exceeds bound " +
                                               format_double(options.ratio_bound));
        }
    }

    // (b)
    for (std::size_t lv = 0; lv < levels; ++lv) {
        if (!level_ok[lv]) {
            continue;
        }
        const int k = static_cast<int>(lv + 1);
        const auto [c, d] = plan.bounds[lv];
        const auto& delta = plan.subsets[lv];
        for (std::size_t i = 0; i < delta.size(); ++i) {
            const int w = position_exponent(k, i);
            const double ratio = std::pow(plan.alpha, w) / spectrum[delta[i]];
            if (ratio < c * (1.0 - options.relative_slack) || ratio > d * (1.0 + options.relative_slack)) {
                add('b', lv + 1, delta[i],
                    "alpha^" + std::to_string(w) + " / lambda_" + std::to_string(delta[i] + 1) + " = " +
                        format_double(ratio) + " outside [" + format_double(c) + ", " + format_double(d) + "]");
            }
        }
    }

    // (c)
    std::set<std::size_t> all_delta;
    for (std::size_t lv = 0; lv < levels; ++lv) {
        for (auto idx : plan.subsets[lv]) {
            if (!all_delta.insert(idx).second && level_ok[lv]) {
                add('c', lv + 1, idx, "index " + std::to_string(idx + 1) + " shared with an earlier level");
            }
        }
        if (lv > 0 && !plan.subsets[lv - 1].empty() && !plan.subsets[lv].empty()) {
            const auto prev_max = *std::max_element(plan.subsets[lv - 1].begin(), plan.subsets[lv - 1].end());
            const auto cur_min = *std::min_element(plan.subsets[lv].begin(), plan.subsets[lv].end());
            if (!(prev_max < cur_min)) {
                add('c', lv + 1, cur_min, "max Delta_" + std::to_string(lv) + " = " + std::to_string(prev_max + 1) +
                                              " is not below min Delta_" + std::to_string(lv + 1) + " = " +
                                              std::to_string(cur_min + 1));
            }
        }
    }

    // leftovers and passthrough must sit inside their own subspaces
    std::set<std::size_t> extra;
    auto level_min = [&](std::size_t lv) {
        return *std::min_element(plan.subsets[lv].begin(), plan.subsets[lv].end());
    };
    const bool ranges_known = std::all_of(plan.subsets.begin(), plan.subsets.end(),
                                          [](const auto& s) { return !s.empty(); });
    for (auto idx : plan.passthrough) {
        if (idx >= n || all_delta.count(idx) || !extra.insert(idx).second) {
            add('s', 0, idx, "passthrough index " + std::to_string(idx + 1) + " is out of range or reused");
        } else if (ranges_known && idx >= level_min(0)) {
            add('s', 0, idx, "passthrough index " + std::to_string(idx + 1) + " is not below min Delta_1");
        }
    }
    for (std::size_t lv = 0; lv < plan.leftovers.size(); ++lv) {
        for (auto idx : plan.leftovers[lv]) {
            if (idx >= n || all_delta.count(idx) || !extra.insert(idx).second) {
                add('s', lv + 1, idx, "leftover index " + std::to_string(idx + 1) + " is out of range or reused");
                continue;
            }
            if (!ranges_known) {
                continue;
            }
            const bool above = idx > level_min(lv);
            const bool below = lv + 1 == levels || idx < level_min(lv + 1);
            if (!above || !below) {
                add('s', lv + 1, idx, "leftover index " + std::to_string(idx + 1) + " lies outside the level-" +
                                          std::to_string(lv + 1) + " subspace");
            }
        }
    }
    return report;
}

/// Thrown by keylemma_assemble when the plan fails validation.
class PlanRejected : public Error {
public:
    explicit PlanRejected(ValidationReport report)
        : Error(describe(report)), report_(std::move(report)) {}

    const ValidationReport& report() const noexcept { return report_; }

private:
    static std::string describe(const ValidationReport& r) {
        std::string msg = "plan rejected with " + std::to_string(r.violations.size()) + " violation(s)";
        if (!r.violations.empty()) {
            msg += ": (" + std::string(1, r.violations.front().condition) + ") " + r.violations.front().message;
        }
        return msg;
    }

    ValidationReport report_;
};

/// Extent of one level inside the assembled section. Level 0 is the
/// passthrough block.
struct LevelBlock {
    std::size_t level = 0;
    std::size_t offset = 0;
    std::size_t core = 0; // 2^k Haar coordinates (0 for the passthrough)
    std::size_t size = 0; // core plus leftovers
};

/// Output of the key-lemma assembly.
///
/// With T the diagonal section, Ut = permutation_matrix(rearrangement) and
/// D = diag(1/c_k on cores, 1 elsewhere):
///   rearranged = Ut^T T Ut,  rearranged * U = X * F * D,  C = T * Ut * U.
struct ConditionalModel {
    DenseMatrix f;
    DenseMatrix gstar;
    DenseMatrix x;
    DenseMatrix u;
    Permutation rearrangement;
    DenseMatrix c;
    DenseMatrix diagonal;
    DenseMatrix rearranged;
    DenseMatrix scale;
    std::vector<std::size_t> section_indices; // spectrum index of each row of `diagonal`
    std::vector<std::size_t> block_order;     // spectrum index at each block position
    std::vector<LevelBlock> blocks;

    BasisPair pair() const { return BasisPair(f, gstar); }
};

/// Builds the conditional model of a diagonal operator from a valid plan.
inline ConditionalModel keylemma_assemble(const SpectrumSequence& spectrum, const OlevskiiPlan& plan,
                                          const PlanValidationOptions& options = {}) {
    auto report = validate_plan(spectrum, plan, options);
    if (!report.valid()) {
        throw PlanRejected(std::move(report));
    }
    std::vector<DenseMatrix> f_blocks, g_blocks, x_blocks, u_blocks, tt_blocks, d_blocks;
    std::vector<std::size_t> order;
    std::vector<LevelBlock> blocks;
    auto diag_of = [&](const std::vector<std::size_t>& idx, bool inverse) {
        std::vector<double> v(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            v[i] = inverse ? 1.0 / spectrum[idx[i]] : spectrum[idx[i]];
        }
        return v;
    };
    auto push_diag = [](std::vector<double>& out, const std::vector<double>& v) {
        out.insert(out.end(), v.begin(), v.end());
    };

    std::size_t offset = 0;
    if (!plan.passthrough.empty()) {
        auto idx = plan.passthrough;
        std::sort(idx.begin(), idx.end());
        const auto lam = diag_of(idx, false);
        f_blocks.push_back(DenseMatrix::diagonal(lam));
        g_blocks.push_back(DenseMatrix::diagonal(diag_of(idx, true)));
        x_blocks.push_back(DenseMatrix::identity(idx.size()));
        u_blocks.push_back(DenseMatrix::identity(idx.size()));
        tt_blocks.push_back(DenseMatrix::diagonal(lam));
        d_blocks.push_back(DenseMatrix::identity(idx.size()));
        order.insert(order.end(), idx.begin(), idx.end());
        blocks.push_back({0, offset, 0, idx.size()});
        offset += idx.size();
    }

    for (std::size_t lv = 0; lv < plan.levels(); ++lv) {
        const int k = static_cast<int>(lv + 1);
        const auto& delta = plan.subsets[lv];
        const std::size_t core = delta.size();
        std::vector<std::size_t> left = plan.leftovers.empty() ? std::vector<std::size_t>{} : plan.leftovers[lv];
        std::sort(left.begin(), left.end());

        // core positions hold Delta_k in reverse list order
        std::vector<std::size_t> core_idx(delta.rbegin(), delta.rend());
        const auto exps = weight_exponents(k);
        const double c_k = plan.bounds[lv].c;

        const DenseMatrix a = haar_matrix(k);
        const DenseMatrix t = weight_matrix(k, plan.alpha);
        const DenseMatrix t_inv(MatrixStorage(t.eigen().diagonal().cwiseInverse().asDiagonal()));
        const DenseMatrix core_f = t * a.transpose();
        const DenseMatrix core_g = a * t_inv;

        std::vector<double> x_diag(core + left.size(), 1.0);
        std::vector<double> d_diag(core + left.size(), 1.0);
        for (std::size_t p = 0; p < core; ++p) {
            x_diag[p] = c_k * spectrum[core_idx[p]] / std::pow(plan.alpha, exps[p]);
            d_diag[p] = 1.0 / c_k;
        }
        std::vector<double> tt_diag = diag_of(core_idx, false);
        push_diag(tt_diag, diag_of(left, false));

        if (left.empty()) {
            f_blocks.push_back(core_f);
            g_blocks.push_back(core_g);
            u_blocks.push_back(a.transpose());
        } else {
            f_blocks.push_back(direct_sum({core_f, DenseMatrix::diagonal(diag_of(left, false))}));
            g_blocks.push_back(direct_sum({core_g, DenseMatrix::diagonal(diag_of(left, true))}));
            u_blocks.push_back(direct_sum({a.transpose(), DenseMatrix::identity(left.size())}));
        }
        x_blocks.push_back(DenseMatrix::diagonal(x_diag));
        d_blocks.push_back(DenseMatrix::diagonal(d_diag));
        tt_blocks.push_back(DenseMatrix::diagonal(tt_diag));
        order.insert(order.end(), core_idx.begin(), core_idx.end());
        order.insert(order.end(), left.begin(), left.end());
        blocks.push_back({lv + 1, offset, core, core + left.size()});
        offset += core + left.size();
    }

    std::vector<std::size_t> section = order;
    std::sort(section.begin(), section.end());
    // rearrangement maps the row of T holding lambda_m to the block position of m
    Permutation rearrangement(order.size());
    for (std::size_t q = 0; q < order.size(); ++q) {
        const auto r = static_cast<std::size_t>(std::lower_bound(section.begin(), section.end(), order[q]) -
                                                section.begin());
        rearrangement[r] = q;
    }
    const DenseMatrix diagonal = DenseMatrix::diagonal(diag_of(section, false));
    const DenseMatrix u = direct_sum(u_blocks);
    const DenseMatrix c = diagonal * permutation_matrix(rearrangement) * u;

    return ConditionalModel{
        direct_sum(f_blocks),
        direct_sum(g_blocks),
        direct_sum(x_blocks),
        u,
        std::move(rearrangement),
        c,
        diagonal,
        direct_sum(tt_blocks),
        direct_sum(d_blocks),
        std::move(section),
        std::move(order),
        std::move(blocks),
    };
}

/// Restricts a model to its blocks of level <= max_level (passthrough
/// included) and returns the corresponding basis pair.
inline BasisPair level_prefix_pair(const ConditionalModel& model, std::size_t max_level) {
    std::size_t end = 0;
    for (const auto& b : model.blocks) {
        if (b.level <= max_level) {
            end = b.offset + b.size;
        }
    }
    if (end == 0) {
        throw InvalidParameter("model has no blocks up to level " + std::to_string(max_level));
    }
    const auto n = static_cast<Eigen::Index>(end);
    return BasisPair(DenseMatrix(MatrixStorage(model.f.eigen().topLeftCorner(n, n))),
                     DenseMatrix(MatrixStorage(model.gstar.eigen().topLeftCorner(n, n))));
}

} // namespace schauder
