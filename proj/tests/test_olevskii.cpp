#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "schauder/schauder.hpp"

using namespace schauder;

namespace {

const double kS = std::sqrt(0.5);

OlevskiiPlan single_level_plan(double d) {
    OlevskiiPlan plan;
    plan.alpha = 0.8;
    plan.subsets = {{0, 1}};
    plan.bounds = {{0.5, d}};
    return plan;
}

bool has_violation(const ValidationReport& r, char condition) {
    return std::any_of(r.violations.begin(), r.violations.end(),
                       [&](const PlanViolation& v) { return v.condition == condition; });
}

} // namespace

TEST(Haar, HandEvaluated) {
    EXPECT_EQ(haar_matrix(1), DenseMatrix::from_rows({{kS, kS}, {kS, -kS}}));
    EXPECT_EQ(haar_matrix(2), DenseMatrix::from_rows({{0.5, 0.5, kS, 0},
                                                      {0.5, 0.5, -kS, 0},
                                                      {0.5, -0.5, 0, kS},
                                                      {0.5, -0.5, 0, -kS}}));
}

TEST(Haar, Orthogonal) {
    for (int k = 1; k <= 8; ++k) {
        const auto a = haar_matrix(k);
        EXPECT_LT(identity_deviation(a.transpose() * a), 1e-12) << "k = " << k;
    }
}

TEST(Haar, LevelRange) {
    EXPECT_THROW(haar_matrix(0), InvalidParameter);
    EXPECT_THROW(haar_matrix(kMaxHaarLevel + 1), InvalidParameter);
}

TEST(Weight, Examples) {
    EXPECT_EQ(weight_matrix(1, 0.9), DenseMatrix::from_rows({{0.9, 0}, {0, 0.9}}));
    const auto w2 = weight_matrix(2, 0.8);
    const std::vector<double> e2{0.64, 0.64, 0.8, 0.8};
    EXPECT_LT(max_abs_diff(w2, DenseMatrix::diagonal(e2)), 1e-15);
    const std::vector<double> e3{0.512, 0.512, 0.64, 0.64, 0.8, 0.8, 0.8, 0.8};
    EXPECT_LT(max_abs_diff(weight_matrix(3, 0.8), DenseMatrix::diagonal(e3)), 1e-15);
    EXPECT_THROW(weight_matrix(2, 0.7), InvalidParameter);
    EXPECT_THROW(weight_matrix(2, 1.0), InvalidParameter);
}

TEST(Block, Examples) {
    const auto b1 = olevskii_block(1, 0.9);
    EXPECT_LT(max_abs_diff(b1.f(), 0.9 * haar_matrix(1)), 1e-15);
    const auto q = quasinormality_bounds(olevskii_block(2, 0.8).f());
    EXPECT_LE(q.ratio(), 2.0);
}

TEST(Block, FrozenConstants) {
    const std::vector<double> uncond{1.0, 1.025, 1.10125, 1.2325625};
    const std::vector<double> basis{1.0, 1.025, 1.0697404036727791, 1.124661490029142};
    for (int k = 1; k <= 4; ++k) {
        const auto pair = olevskii_block(k, 0.8);
        const auto u = unconditional_constant(pair);
        EXPECT_EQ(u.mode, EstimateMode::Exact);
        EXPECT_NEAR(u.value, uncond[k - 1], 1e-12) << "k = " << k;
        EXPECT_NEAR(basis_constant(pair).value, basis[k - 1], 1e-12) << "k = " << k;
    }
}

TEST(Block, ColumnNormsUniform) {
    const std::vector<double> norms{0.8, 0.72443, 0.69852, 0.69003};
    for (int k = 1; k <= 4; ++k) {
        const auto q = quasinormality_bounds(olevskii_block(k, 0.8).f());
        EXPECT_NEAR(q.min, norms[k - 1], 1e-5);
        EXPECT_NEAR(q.ratio(), 1.0, 1e-12);
    }
}

TEST(PositionExponent, ReversedWeights) {
    for (int k = 1; k <= 6; ++k) {
        const auto exps = weight_exponents(k);
        const std::size_t n = exps.size();
        for (std::size_t i = 0; i < n; ++i) {
            EXPECT_EQ(position_exponent(k, i), exps[n - 1 - i]) << "k = " << k << " i = " << i;
        }
    }
}

TEST(ValidatePlan, Examples) {
    const SpectrumSequence s({1.0, 0.9});
    EXPECT_TRUE(validate_plan(s, single_level_plan(1.0)).valid());

    const auto bad = validate_plan(s, single_level_plan(0.85));
    ASSERT_EQ(bad.violations.size(), 1U);
    EXPECT_EQ(bad.violations[0].condition, 'b');
    EXPECT_EQ(bad.violations[0].index, std::optional<std::size_t>{1});
}

TEST(ValidatePlan, OverlapAndRatio) {
    const auto s = SpectrumSequence::harmonic(100);
    auto plan = select_subsets(s, 0.8, 2.0, 2).plan;
    ASSERT_TRUE(validate_plan(s, plan).valid());

    auto overlap = plan;
    overlap.subsets[1][0] = overlap.subsets[0][0];
    EXPECT_TRUE(has_violation(validate_plan(s, overlap), 'c'));

    PlanValidationOptions tight;
    tight.ratio_bound = 1.5;
    EXPECT_TRUE(has_violation(validate_plan(s, plan, tight), 'a'));
}

TEST(KeyLemma, RejectsInvalidPlan) {
    const SpectrumSequence s({1.0, 0.9});
    EXPECT_THROW(keylemma_assemble(s, single_level_plan(0.85)), PlanRejected);
}

TEST(KeyLemma, SingleLevel) {
    const SpectrumSequence s({1.0, 0.9});
    const auto model = keylemma_assemble(s, single_level_plan(1.0));
    EXPECT_LT(max_abs_diff(model.f, olevskii_block(1, 0.8).f()), 1e-15);
    // C = T Ut U: rows keep the lambda norms and the singular values are the lambdas.
    for (std::size_t r = 0; r < 2; ++r) {
        EXPECT_NEAR(model.c.transpose().column_norm(r), s[r], 1e-14);
    }
    const auto sv = singular_values(model.c);
    EXPECT_NEAR(sv[0], 1.0, 1e-14);
    EXPECT_NEAR(sv[1], 0.9, 1e-14);
}

TEST(KeyLemma, PureDirectSumWithoutLeftovers) {
    const auto s = SpectrumSequence::harmonic(200);
    SelectionOptions bare;
    bare.cover_section = false;
    const auto plan = select_subsets(s, 0.8, 2.0, 3, bare).plan;
    const auto model = keylemma_assemble(s, plan);
    const auto expected = direct_sum({olevskii_block(1, 0.8).f(), olevskii_block(2, 0.8).f(),
                                      olevskii_block(3, 0.8).f()});
    EXPECT_EQ(model.f, expected);
}

class KeyLemmaInvariants : public ::testing::TestWithParam<int> {};

TEST_P(KeyLemmaInvariants, Hold) {
    const int levels = GetParam();
    const auto s = SpectrumSequence::harmonic(10000);
    const auto plan = select_subsets(s, 0.8, 2.0, levels).plan;
    const auto model = keylemma_assemble(s, plan);

    EXPECT_LT(identity_deviation(model.u.transpose() * model.u), 1e-12);
    EXPECT_LT(identity_deviation(model.f * model.gstar), 1e-9);
    EXPECT_LT(identity_deviation(model.gstar * model.f), 1e-9);

    const auto ut = permutation_matrix(model.rearrangement);
    EXPECT_LT(max_abs_diff(ut.transpose() * model.diagonal * ut, model.rearranged), 1e-15);
    EXPECT_LT(max_abs_diff(model.diagonal * ut * model.u, model.c), 1e-15);
    EXPECT_LT(max_abs_diff(model.rearranged * model.u, model.x * model.f * model.scale), 1e-12);

    double ratio = 1.0;
    for (const auto& b : plan.bounds) {
        ratio = std::max(ratio, b.d / b.c);
    }
    EXPECT_LE(condition_number(model.x), ratio * ratio + 1e-6);

    const auto sv = singular_values(model.c);
    for (std::size_t i = 0; i < sv.size(); ++i) {
        EXPECT_NEAR(sv[i], s[model.section_indices[i]], 1e-12);
        EXPECT_NEAR(model.c.transpose().column_norm(i), s[model.section_indices[i]], 1e-12);
    }
}

INSTANTIATE_TEST_SUITE_P(Levels, KeyLemmaInvariants, ::testing::Values(1, 2, 3, 4));

TEST(KeyLemma, ConstantsGrowWithLevels) {
    const auto s = SpectrumSequence::harmonic(10000);
    const auto model = keylemma_assemble(s, select_subsets(s, 0.8, 2.0, 3).plan);
    const double two = unconditional_constant(level_prefix_pair(model, 2)).value;
    const double three = unconditional_constant(level_prefix_pair(model, 3)).value;
    EXPECT_GT(three, two + 1e-6);
}

TEST(Witness, RankOneExamples) {
    const auto same = rank1_conjugation_witness(1.0, 1.0, 0.0);
    EXPECT_NEAR(same.norm, 1.0, 1e-14);
    EXPECT_TRUE(same.satisfied);

    const auto w = rank1_conjugation_witness(0.1, 1.0, 0.0);
    EXPECT_NEAR(w.norm, 5.05, 1e-12);
    EXPECT_NEAR(w.bound, 3.5355339059327373, 1e-12);

    EXPECT_NEAR(rank1_conjugation_witness(1.0, 2.0, 0.0).norm, 1.25, 1e-14);

    const auto& p = w.projection;
    EXPECT_LT(max_abs_diff(p * p, p), 1e-15);
    EXPECT_NEAR(p(0, 0) + p(1, 1), 1.0, 1e-12);

    EXPECT_THROW(rank1_conjugation_witness(2.0, 1.0, 0.0), InvalidParameter);
    EXPECT_THROW(rank1_conjugation_witness(0.0, 1.0, 0.0), InvalidParameter);
}

TEST(Witness, ClosedFormGrid) {
    for (double l1 : {0.1, 0.5, 1.0}) {
        for (double l2 : {1.0, 2.0, 10.0}) {
            if (l2 < l1) {
                continue;
            }
            const auto w = rank1_conjugation_witness(l1, l2, 0.0);
            const double r = l2 / l1;
            EXPECT_NEAR(w.norm, 0.5 * (r + 1.0 / r), 1e-12);
            EXPECT_GE(w.norm, w.bound - 1e-9);
        }
    }
}

TEST(Witness, Blowup) {
    const std::vector<std::pair<double, double>> one{{1.0, 1.0}};
    EXPECT_NEAR(projection_blowup_witness(one)[0], 1.0, 1e-14);

    std::vector<std::pair<double, double>> pairs;
    for (int n = 1; n <= 5; ++n) {
        pairs.emplace_back(1.0, 1.0 / (2.0 * std::sqrt(2.0) * (n + 1)));
    }
    const auto norms = projection_blowup_witness(pairs);
    for (int n = 1; n <= 5; ++n) {
        EXPECT_GE(norms[n - 1], n);
    }

    std::vector<std::pair<double, double>> harmonic;
    for (int n = 1; n <= 20; ++n) {
        harmonic.emplace_back(1.0 / (2 * n - 1), 1.0 / (2 * n));
    }
    for (double v : projection_blowup_witness(harmonic)) {
        EXPECT_LT(v, 2.0);
    }
    const std::vector<std::pair<double, double>> bad{{1.0, 2.0}};
    EXPECT_THROW(projection_blowup_witness(bad), InvalidParameter);
}
