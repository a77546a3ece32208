#pragma once

// Spectral selection: window cardinalities, the inductive choice of the
// subsets Delta_k feeding the key-lemma assembly, segment refinement, and
// the ratio-limit criterion lambda_n / lambda_{n+1} -> 1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "schauder/error.hpp"
#include "schauder/olevskii.hpp"
#include "schauder/spectrum.hpp"

namespace schauder {

namespace detail {

inline void check_delta(double delta) {
    if (!(delta > 1.0) || !std::isfinite(delta)) {
        throw InvalidParameter("delta = " + format_double(delta) + " must be a finite number > 1");
    }
}

// Positions [first, last) of spectrum values inside [lo, hi].
inline std::pair<std::size_t, std::size_t> window_range(std::span<const double> values, double lo, double hi) {
    // values are strictly decreasing
    const auto first = std::lower_bound(values.begin(), values.end(), hi, std::greater<>()) - values.begin();
    const auto last = std::upper_bound(values.begin(), values.end(), lo, std::greater<>()) - values.begin();
    return {static_cast<std::size_t>(first), static_cast<std::size_t>(std::max(first, last))};
}

} // namespace detail

/// Number of spectrum values in [t / delta, t] for each t, endpoints included.
inline std::vector<std::size_t> cardinality_profile(const SpectrumSequence& spectrum, double delta,
                                                    std::span<const double> ts) {
    detail::check_delta(delta);
    std::vector<std::size_t> counts;
    counts.reserve(ts.size());
    for (double t : ts) {
        if (!(t > 0.0)) {
            throw InvalidParameter("window tops must be positive");
        }
        const auto [first, last] = detail::window_range(spectrum.values(), t / delta, t);
        counts.push_back(last - first);
    }
    return counts;
}

struct SelectionResult {
    OlevskiiPlan plan;
    std::vector<double> t0_per_level;
    /// window_counts[k-1][j-1]: values in [t0 alpha^j / delta, t0 alpha^j] at the chosen t0.
    std::vector<std::vector<std::size_t>> window_counts;
};

struct SelectionOptions {
    /// Fill passthrough and leftovers so the plan covers the leading section
    /// of the spectrum up to max Delta_K.
    bool cover_section = true;
};

/// Inductive choice of Delta_1 .. Delta_K.
///
/// For level k, t0 descends through the spectrum values below everything
/// already used until each window [t0 alpha^j / delta, t0 alpha^j], j = 1..k,
/// holds at least 2^k values. Then 2 values are drawn from window k and
/// 2^{k-j} from window j for j = k-1 down to 1, each time the largest values
/// not yet taken. c_k = 1 / t0 and d_k = delta / t0.
inline SelectionResult select_subsets(const SpectrumSequence& spectrum, double alpha, double delta, int levels,
                                      const SelectionOptions& options = {}) {
    check_alpha(alpha);
    detail::check_delta(delta);
    if (levels < 1 || levels > kMaxHaarLevel) {
        throw InvalidParameter("levels K = " + std::to_string(levels) + " must lie in 1.." +
                               std::to_string(kMaxHaarLevel));
    }
    const auto values = spectrum.values();
    const std::size_t n = values.size();

    SelectionResult result;
    result.plan.alpha = alpha;
    std::size_t next_free = 0; // every index below this is used or skipped
    for (int k = 1; k <= levels; ++k) {
        const std::size_t need = std::size_t{1} << k;
        auto window = [&](double t0, int j) {
            const double top = t0 * std::pow(alpha, j);
            return detail::window_range(values, top / delta, top);
        };

        std::size_t chosen = n;
        std::vector<std::size_t> counts;
        int first_fail_j = 0;
        std::size_t first_fail_count = 0;
        for (std::size_t cand = next_free; cand < n; ++cand) {
            counts.clear();
            int fail_j = 0;
            for (int j = 1; j <= k; ++j) {
                const auto [lo, hi] = window(values[cand], j);
                counts.push_back(hi - lo);
                if (hi - lo < need && fail_j == 0) {
                    fail_j = j;
                }
            }
            if (fail_j == 0) {
                chosen = cand;
                break;
            }
            if (first_fail_j == 0) {
                first_fail_j = fail_j;
                first_fail_count = counts[static_cast<std::size_t>(fail_j - 1)];
            }
        }
        if (chosen == n) {
            std::string msg = "insufficient cardinality at level " + std::to_string(k) + ": ";
            if (first_fail_j == 0) {
                msg += "no spectrum value left below the previous levels";
            } else {
                msg += "window for alpha^" + std::to_string(first_fail_j) + " holds " +
                       std::to_string(first_fail_count) + " values, needs " + std::to_string(need) +
                       ", and no smaller t0 in the sample does better";
            }
            throw InsufficientCardinality(msg, static_cast<std::size_t>(k),
                                          static_cast<std::size_t>(std::max(first_fail_j, 1)));
        }

        const double t0 = values[chosen];
        std::vector<char> taken(n, 0);
        std::vector<std::vector<std::size_t>> by_exponent(static_cast<std::size_t>(k) + 1);
        for (int j = k; j >= 1; --j) {
            const std::size_t want = j == k ? 2 : std::size_t{1} << (k - j);
            const auto [lo, hi] = window(t0, j);
            for (std::size_t i = lo; i < hi && by_exponent[static_cast<std::size_t>(j)].size() < want; ++i) {
                if (!taken[i]) {
                    taken[i] = 1;
                    by_exponent[static_cast<std::size_t>(j)].push_back(i);
                }
            }
            if (by_exponent[static_cast<std::size_t>(j)].size() < want) {
                // unreachable when every window holds 2^k values
                throw InsufficientCardinality("window for alpha^" + std::to_string(j) + " at level " +
                                                  std::to_string(k) + " ran out of unused values",
                                              static_cast<std::size_t>(k), static_cast<std::size_t>(j));
            }
        }
        // list order n^k_1..n^k_{2^k}: exponent 1 first, exponent k last
        std::vector<std::size_t> delta_k;
        for (int j = 1; j <= k; ++j) {
            delta_k.insert(delta_k.end(), by_exponent[static_cast<std::size_t>(j)].begin(),
                           by_exponent[static_cast<std::size_t>(j)].end());
        }
        next_free = *std::max_element(delta_k.begin(), delta_k.end()) + 1;
        result.plan.subsets.push_back(std::move(delta_k));
        result.plan.bounds.push_back({1.0 / t0, delta / t0});
        result.t0_per_level.push_back(t0);
        result.window_counts.push_back(counts);
    }

    if (options.cover_section) {
        auto& plan = result.plan;
        const std::size_t levels_u = plan.levels();
        std::vector<char> in_delta(n, 0);
        for (const auto& s : plan.subsets) {
            for (auto i : s) {
                in_delta[i] = 1;
            }
        }
        auto min_of = [&](std::size_t lv) { return *std::min_element(plan.subsets[lv].begin(), plan.subsets[lv].end()); };
        for (std::size_t i = 0; i < min_of(0); ++i) {
            plan.passthrough.push_back(i);
        }
        plan.leftovers.assign(levels_u, {});
        for (std::size_t lv = 0; lv < levels_u; ++lv) {
            const std::size_t end = lv + 1 < levels_u
                                        ? min_of(lv + 1)
                                        : *std::max_element(plan.subsets[lv].begin(), plan.subsets[lv].end()) + 1;
            for (std::size_t i = min_of(lv); i < end; ++i) {
                if (!in_delta[i]) {
                    plan.leftovers[lv].push_back(i);
                }
            }
        }
    }
    return result;
}

struct RefinedGrid {
    std::vector<double> points;
    std::vector<std::size_t> subsegments; // per input segment
};

/// Default refinement ratio max(2, 1.1 * lambda_max / mu_1).
inline double default_cut_ratio(double lambda_max, double mu_first) {
    return std::max(2.0, 1.1 * lambda_max / mu_first);
}

/// Inserts geometric points into each [mu_{n+1}, mu_n] so that every
/// consecutive ratio is at most M, using ceil(log(mu_n / mu_{n+1}) / log M)
/// subsegments per segment. Input points are kept exactly.
inline RefinedGrid segment_cut(std::span<const double> mu, double max_ratio) {
    if (!(max_ratio > 1.0) || !std::isfinite(max_ratio)) {
        throw InvalidParameter("segment ratio M = " + format_double(max_ratio) + " must be > 1");
    }
    if (mu.empty()) {
        throw InvalidInput("segment_cut needs at least one point");
    }
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (!(mu[i] > 0.0) || !std::isfinite(mu[i]) || (i > 0 && !(mu[i] < mu[i - 1]))) {
            throw InvalidInput("segment endpoints must be positive and strictly decreasing");
        }
    }
    RefinedGrid grid;
    grid.points.push_back(mu[0]);
    for (std::size_t i = 0; i + 1 < mu.size(); ++i) {
        const double a = mu[i];
        const double b = mu[i + 1];
        const double pieces = std::log(a / b) / std::log(max_ratio);
        auto m = static_cast<std::size_t>(std::max(1.0, std::ceil(pieces - 1e-12)));
        // guard against rounding leaving a ratio just above M
        while (std::pow(a / b, 1.0 / static_cast<double>(m)) > max_ratio * (1.0 + 1e-15)) {
            ++m;
        }
        for (std::size_t s = 1; s < m; ++s) {
            grid.points.push_back(a * std::pow(b / a, static_cast<double>(s) / static_cast<double>(m)));
        }
        grid.points.push_back(b);
        grid.subsegments.push_back(m);
    }
    return grid;
}

struct RatioReport {
    bool passes = false;
    std::vector<double> tail_ratios; // lambda_n / lambda_{n+1} over the tail
    double max_ratio = 0.0;
    double first_quarter_mean = 0.0;
    double last_quarter_mean = 0.0;
};

/// Finite-sample check of lambda_n / lambda_{n+1} -> 1 on the last
/// tail_length ratios: passes when every ratio is within 1 + tolerance and
/// the last quarter does not average above the first quarter.
inline RatioReport ratio_limit_check(const SpectrumSequence& spectrum, std::size_t tail_length,
                                     double tolerance = 0.05) {
    if (tail_length == 0 || spectrum.size() <= tail_length) {
        throw InvalidParameter("tail length " + std::to_string(tail_length) + " needs a spectrum longer than it");
    }
    const auto v = spectrum.values();
    RatioReport report;
    const std::size_t start = v.size() - 1 - tail_length;
    for (std::size_t i = start; i + 1 < v.size(); ++i) {
        report.tail_ratios.push_back(v[i] / v[i + 1]);
    }
    const auto& r = report.tail_ratios;
    report.max_ratio = *std::max_element(r.begin(), r.end());
    const std::size_t quarter = std::max<std::size_t>(1, r.size() / 4);
    double first = 0.0;
    double last = 0.0;
    for (std::size_t i = 0; i < quarter; ++i) {
        first += r[i];
        last += r[r.size() - 1 - i];
    }
    report.first_quarter_mean = first / static_cast<double>(quarter);
    report.last_quarter_mean = last / static_cast<double>(quarter);
    report.passes = report.max_ratio <= 1.0 + tolerance && report.last_quarter_mean <= report.first_quarter_mean;
    return report;
}

} // namespace schauder
