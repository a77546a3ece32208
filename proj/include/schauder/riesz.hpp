#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "schauder/dense_matrix.hpp"
#include "schauder/error.hpp"
#include "schauder/matrix_kernel.hpp"

namespace schauder {

enum class RieszVerdict { RieszConsistent, NotRiesz, Inconclusive };

inline const char* to_string(RieszVerdict v) {
    switch (v) {
    case RieszVerdict::RieszConsistent:
        return "RieszConsistent";
    case RieszVerdict::NotRiesz:
        return "NotRiesz";
    case RieszVerdict::Inconclusive:
        break;
    }
    return "Inconclusive";
}

struct RieszThresholds {
    double bound = 1e2;      // every section below this: consistent with Riesz
    double divergence = 1e3; // largest section above this and growing: not Riesz
};

struct RieszReport {
    std::vector<std::size_t> section_sizes;
    std::vector<double> condition_numbers; // +infinity marks a singular section
    RieszVerdict verdict = RieszVerdict::Inconclusive;
};

namespace detail {

// Strict growth over the last three sections (fewer if fewer were given).
inline bool growing_tail(const std::vector<double>& values) {
    if (values.size() < 2) {
        return false;
    }
    const std::size_t start = values.size() >= 3 ? values.size() - 3 : 0;
    for (std::size_t i = start + 1; i < values.size(); ++i) {
        const double prev = values[i - 1];
        const double cur = values[i];
        if (std::isinf(prev) || !(cur > prev * (1.0 + 1e-9))) {
            return false;
        }
    }
    return true;
}

} // namespace detail

/// Condition numbers of the leading principal sections of F, with a verdict
/// on whether they stay bounded (an invertible operator) or diverge.
inline RieszReport riesz_diagnostic(const DenseMatrix& f, std::span<const std::size_t> sections,
                                    RieszThresholds thresholds = {}) {
    if (sections.empty()) {
        throw InvalidInput("riesz diagnostic needs at least one section size");
    }
    const std::size_t limit = std::min(f.rows(), f.cols());
    for (std::size_t i = 0; i < sections.size(); ++i) {
        if (sections[i] == 0 || sections[i] > limit) {
            throw InvalidInput("section size " + std::to_string(sections[i]) + " outside 1.." +
                               std::to_string(limit));
        }
        if (i > 0 && sections[i] <= sections[i - 1]) {
            throw InvalidInput("section sizes must be strictly increasing");
        }
    }
    RieszReport report;
    report.section_sizes.assign(sections.begin(), sections.end());
    for (auto n : sections) {
        const auto k = static_cast<Eigen::Index>(n);
        report.condition_numbers.push_back(condition_number(f.eigen().topLeftCorner(k, k)));
    }
    const auto& kappa = report.condition_numbers;
    const bool growing = detail::growing_tail(kappa);
    bool bounded = true;
    for (double c : kappa) {
        bounded = bounded && c <= thresholds.bound;
    }
    if (kappa.back() > thresholds.divergence && growing) {
        report.verdict = RieszVerdict::NotRiesz;
    } else if (bounded && !growing) {
        report.verdict = RieszVerdict::RieszConsistent;
    } else {
        report.verdict = RieszVerdict::Inconclusive;
    }
    return report;
}

} // namespace schauder
