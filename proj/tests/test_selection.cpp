#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "schauder/schauder.hpp"

using namespace schauder;

TEST(Spectrum, Validation) {
    EXPECT_THROW(SpectrumSequence({1.0, 1.0}), InvalidInput);
    EXPECT_THROW(SpectrumSequence({1.0, -0.5}), InvalidInput);
    EXPECT_THROW(SpectrumSequence(std::vector<double>{}), InvalidInput);
    EXPECT_EQ(SpectrumSequence::from_tag("harmonic:5").size(), 5U);
    EXPECT_DOUBLE_EQ(SpectrumSequence::from_tag("geometric:0.5:4")[3], 0.0625);
    EXPECT_THROW(SpectrumSequence::from_tag("geometric:2:4"), InvalidParameter);
    EXPECT_THROW(SpectrumSequence::from_tag("cubic:4"), InvalidParameter);

    std::istringstream in("# sample\n1\n0.5\n\n0.25\n");
    EXPECT_EQ(read_spectrum(in).size(), 3U);
}

TEST(Profile, Harmonic) {
    const auto s = SpectrumSequence::harmonic(1000);
    std::vector<double> ts;
    for (int m = 1; m <= 500; ++m) {
        ts.push_back(1.0 / m);
    }
    const auto counts = cardinality_profile(s, 2.0, ts);
    for (int m = 1; m <= 500; ++m) {
        EXPECT_EQ(counts[m - 1], static_cast<std::size_t>(m + 1)) << "m = " << m;
    }
}

TEST(Profile, Geometric) {
    const auto s = SpectrumSequence::geometric(0.5, 40);
    std::vector<double> ts;
    for (int j = 1; j <= 30; ++j) {
        ts.push_back(std::ldexp(1.0, -j));
    }
    for (auto c : cardinality_profile(s, 2.0, ts)) {
        EXPECT_EQ(c, 2U);
    }
    for (auto c : cardinality_profile(s, 1.5, ts)) {
        EXPECT_EQ(c, 1U);
    }
    EXPECT_THROW(cardinality_profile(s, 1.0, ts), InvalidParameter);
}

TEST(Profile, MonotoneInDelta) {
    const auto s = SpectrumSequence::harmonic(2000);
    const std::vector<double> ts{0.5, 0.1, 0.01, 0.003};
    auto previous = cardinality_profile(s, 1.1, ts);
    for (double delta : {1.5, 2.0, 3.0, 10.0}) {
        const auto counts = cardinality_profile(s, delta, ts);
        for (std::size_t i = 0; i < ts.size(); ++i) {
            EXPECT_GE(counts[i], previous[i]);
        }
        previous = counts;
    }
}

TEST(Select, HarmonicTwoLevels) {
    const auto s = SpectrumSequence::harmonic(10000);
    const auto r = select_subsets(s, 0.8, 2.0, 2);
    ASSERT_EQ(r.plan.levels(), 2U);
    EXPECT_EQ(r.plan.subsets[0].size(), 2U);
    EXPECT_EQ(r.plan.subsets[1].size(), 4U);
    EXPECT_EQ(r.plan.subsets[0], (std::vector<std::size_t>{2, 3}));
    EXPECT_DOUBLE_EQ(r.plan.bounds[0].c, 2.0);
    EXPECT_DOUBLE_EQ(r.plan.bounds[0].d, 4.0);
    EXPECT_DOUBLE_EQ(r.t0_per_level[1], 0.2);
    EXPECT_TRUE(validate_plan(s, r.plan).valid());
}

TEST(Select, HarmonicUpToFourLevels) {
    const auto s = SpectrumSequence::harmonic(10000);
    for (int k = 1; k <= 4; ++k) {
        const auto r = select_subsets(s, 0.8, 2.0, k);
        EXPECT_TRUE(validate_plan(s, r.plan).valid()) << "K = " << k;
        for (int j = 1; j <= k; ++j) {
            EXPECT_EQ(r.plan.subsets[j - 1].size(), std::size_t{1} << j);
        }
    }
}

TEST(Select, GeometricRunsOutOfValues) {
    const auto s = SpectrumSequence::geometric(0.5, 60);
    for (int k = 3; k <= 5; ++k) {
        try {
            select_subsets(s, 0.8, 2.0, k);
            FAIL() << "expected insufficient cardinality at K = " << k;
        } catch (const InsufficientCardinality& e) {
            EXPECT_GE(e.level(), 1);
            EXPECT_GE(e.exponent(), 1);
        }
    }
}

TEST(Select, SingleLevelTakesLargest) {
    const SpectrumSequence s({1.0, 0.7, 0.6, 0.5, 0.1});
    const auto r = select_subsets(s, 0.8, 2.0, 1);
    EXPECT_EQ(r.plan.subsets[0], (std::vector<std::size_t>{1, 2}));
    EXPECT_TRUE(validate_plan(s, r.plan).valid());
}

TEST(Select, ParameterErrors) {
    const auto s = SpectrumSequence::harmonic(100);
    EXPECT_THROW(select_subsets(s, 0.5, 2.0, 1), InvalidParameter);
    EXPECT_THROW(select_subsets(s, 0.8, 1.0, 1), InvalidParameter);
    EXPECT_THROW(select_subsets(s, 0.8, 2.0, 0), InvalidParameter);
}

TEST(SegmentCut, Examples) {
    const std::vector<double> a{1.0, 0.5};
    EXPECT_EQ(segment_cut(a, 2.0).points, a);

    const std::vector<double> b{1.0, 0.1};
    const auto g = segment_cut(b, 2.0);
    ASSERT_EQ(g.points.size(), 5U);
    EXPECT_EQ(g.subsegments, std::vector<std::size_t>{4});
    const double q = std::pow(10.0, -0.25);
    for (int i = 0; i <= 4; ++i) {
        EXPECT_NEAR(g.points[i], std::pow(q, i), 1e-15);
    }

    const std::vector<double> c{1.0, 0.9, 0.8};
    EXPECT_EQ(segment_cut(c, 10.0).points, c);

    EXPECT_THROW(segment_cut(a, 1.0), InvalidParameter);
}

TEST(SegmentCut, RatiosBounded) {
    const std::vector<double> mu{5.0, 1.0, 1e-3, 9e-4, 1e-9};
    for (double m : {1.1, 2.0, 7.5}) {
        const auto g = segment_cut(mu, m);
        for (std::size_t i = 0; i + 1 < g.points.size(); ++i) {
            EXPECT_LE(g.points[i] / g.points[i + 1], m * (1 + 1e-12));
        }
    }
}

TEST(RatioCheck, Dichotomy) {
    const auto h = ratio_limit_check(SpectrumSequence::harmonic(1000), 100);
    EXPECT_TRUE(h.passes);
    EXPECT_GT(h.max_ratio, 1.001);
    EXPECT_LT(h.max_ratio, 1.01);

    const auto g = ratio_limit_check(SpectrumSequence::geometric(0.5, 60), 20);
    EXPECT_FALSE(g.passes);
    for (double r : g.tail_ratios) {
        EXPECT_DOUBLE_EQ(r, 2.0);
    }

    std::vector<double> v;
    for (int n = 1; n <= 5000; ++n) {
        v.push_back(1.0 / std::log(n + 1.0));
    }
    EXPECT_TRUE(ratio_limit_check(SpectrumSequence(v), 1000).passes);

    EXPECT_THROW(ratio_limit_check(SpectrumSequence::harmonic(10), 10), InvalidParameter);
}

TEST(HarmonicDemo, LevelsGrow) {
    HarmonicDemoOptions small;
    small.spectrum_length = 2000;
    small.riesz_sections = {16, 64, 256};
    const auto one = harmonic_demo(1, 0.8, 2.0, small);
    EXPECT_GE(one.unconditional_by_level[0].value, 1.0 - 1e-12);

    const auto two = harmonic_demo(2, 0.8, 2.0, small);
    EXPECT_GT(two.unconditional_by_level[1].value, two.unconditional_by_level[0].value);

    const auto three = harmonic_demo(3, 0.8, 2.0, small);
    EXPECT_TRUE(three.strictly_increasing);
    EXPECT_TRUE(three.validation.valid());
    for (const auto& u : three.unconditional_by_level) {
        EXPECT_EQ(u.mode, EstimateMode::Exact);
    }
    EXPECT_LT(three.unitary_deviation, 1e-9);
    EXPECT_LT(three.factorization_residual, 1e-12);
}
