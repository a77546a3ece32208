#pragma once

// End-to-end run on lambda_n = 1/n: select the subsets, assemble the
// conditional model, and measure how its constants grow level by level.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

#include "schauder/basis_pair.hpp"
#include "schauder/constants.hpp"
#include "schauder/olevskii.hpp"
#include "schauder/riesz.hpp"
#include "schauder/selection.hpp"
#include "schauder/spectrum.hpp"

namespace schauder {

struct HarmonicDemoOptions {
    std::size_t spectrum_length = 10000;
    std::vector<std::size_t> riesz_sections{64, 1024, 4096};
    SearchConfig search{};
    PlanValidationOptions validation{};
};

struct HarmonicDemoReport {
    SelectionResult selection;
    ValidationReport validation;
    std::size_t section_size = 0;
    std::vector<double> basis_by_level;
    std::vector<ConstantEstimate> unconditional_by_level;
    bool strictly_increasing = false;
    ColumnNormBounds quasinormality; // columns of the Haar cores only
    double unitary_deviation = 0.0;      // ||U^T U - I||_max
    double factorization_residual = 0.0; // ||Tt U - X F D||_max
    double scaling_condition = 0.0;      // kappa(X)
    RieszReport riesz;
};

/// Margin by which consecutive per-level constants must increase.
inline constexpr double kStrictIncreaseMargin = 1e-6;

inline HarmonicDemoReport harmonic_demo(int levels, double alpha, double delta, const HarmonicDemoOptions& options = {}) {
    const auto spectrum = SpectrumSequence::harmonic(options.spectrum_length);
    HarmonicDemoReport report;
    report.selection = select_subsets(spectrum, alpha, delta, levels);
    report.validation = validate_plan(spectrum, report.selection.plan, options.validation);
    const ConditionalModel model = keylemma_assemble(spectrum, report.selection.plan, options.validation);
    report.section_size = model.f.rows();

    for (int k = 1; k <= levels; ++k) {
        const BasisPair pair = level_prefix_pair(model, static_cast<std::size_t>(k));
        report.basis_by_level.push_back(basis_constant(pair).value);
        report.unconditional_by_level.push_back(unconditional_constant(pair, options.search));
    }
    report.strictly_increasing = true;
    for (std::size_t i = 1; i < report.unconditional_by_level.size(); ++i) {
        report.strictly_increasing = report.strictly_increasing &&
                                     report.unconditional_by_level[i].value >
                                         report.unconditional_by_level[i - 1].value + kStrictIncreaseMargin;
    }

    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& b : model.blocks) {
        for (std::size_t j = b.offset; j < b.offset + b.core; ++j) {
            lo = std::min(lo, model.f.column_norm(j));
            hi = std::max(hi, model.f.column_norm(j));
        }
    }
    report.quasinormality = {lo, hi};

    report.unitary_deviation = identity_deviation(model.u.transpose() * model.u);
    report.factorization_residual = max_abs_diff(model.rearranged * model.u, model.x * model.f * model.scale);
    report.scaling_condition = condition_number(model.x);

    const std::size_t largest = options.riesz_sections.empty() ? 1 : options.riesz_sections.back();
    std::vector<double> diag(largest);
    for (std::size_t n = 1; n <= largest; ++n) {
        diag[n - 1] = 1.0 / static_cast<double>(n);
    }
    report.riesz = riesz_diagnostic(DenseMatrix::diagonal(diag), options.riesz_sections);
    return report;
}

} // namespace schauder
