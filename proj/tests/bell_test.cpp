#include "fockbell/bell.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "oracle.hpp"

using namespace fockbell;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(ChValue, CanonicalViolation) {
    EXPECT_NEAR(ch_value(one_particle_singlet(), canonical_ch_settings()), -0.125, 1e-12);
}

TEST(ChValue, DegenerateSettingsReachUpperBound) {
    // a' = a and b' = b, all presence tests: reduces to <P_a> + <P_b> - 2<P_a P_b> = 1
    const MeasurementSetting m = presence_setting();
    EXPECT_NEAR(ch_value(one_particle_singlet(), ChSettings{m, m, m, m}), 1.0, 1e-12);
}

TEST(ChValue, VacuumMatchesOracleAndStaysClassical) {
    const TwoModeState vac = make_state({}, {}, Complex{1.0, 0.0});
    const double v = ch_value(vac, canonical_ch_settings());
    const oracle::Vec4 psi{oracle::cplx{1.0, 0.0}, {}, {}, {}};
    const double ref = oracle::ch_value(psi, {kPi / 2.0, 0.0, kPi / 6.0, 0.0,
                                              kPi / 2.0, 0.0, kPi / 6.0, kPi});
    EXPECT_NEAR(v, ref, 1e-12);
    EXPECT_GE(v, -1e-10);
    EXPECT_LE(v, 1.0 + 1e-10);
}

TEST(DeterministicChValue, DirectArithmetic) {
    EXPECT_DOUBLE_EQ(deterministic_ch_value(DeterministicStrategy{0, 0, 0, 0}), 0.0);
    EXPECT_DOUBLE_EQ(deterministic_ch_value(DeterministicStrategy{0, 1, 0, 1}), 1.0);
    EXPECT_DOUBLE_EQ(deterministic_ch_value(DeterministicStrategy{1, 1, 1, 1}), 0.0);
}

TEST(LhvBoundsTest, ExactBoundsFromEnumeration) {
    const LhvBounds b = lhv_bounds();
    EXPECT_EQ(b.min, 0.0);
    EXPECT_EQ(b.max, 1.0);
}

TEST(LhvBoundsTest, EnumerationIsCompleteAndDistinct) {
    const auto strategies = all_deterministic_strategies();
    ASSERT_EQ(strategies.size(), 16u);
    std::set<int> seen;
    for (const DeterministicStrategy& d : strategies) {
        seen.insert(d.out_a * 8 + d.out_a_prime * 4 + d.out_b * 2 + d.out_b_prime);
        const double v = deterministic_ch_value(d);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
    }
    EXPECT_EQ(seen.size(), 16u);
}

TEST(LhvBoundsTest, BoundsAreAttained) {
    EXPECT_DOUBLE_EQ(deterministic_ch_value(DeterministicStrategy{0, 0, 0, 0}), lhv_bounds().min);
    EXPECT_DOUBLE_EQ(deterministic_ch_value(DeterministicStrategy{0, 1, 0, 1}), lhv_bounds().max);
}

TEST(Classify, AgainstBounds) {
    EXPECT_EQ(classify(-0.125).classification, Classification::BELOW_LOWER);
    EXPECT_EQ(classify(0.5).classification, Classification::WITHIN_CLASSICAL);
    EXPECT_EQ(classify(1.2).classification, Classification::ABOVE_UPPER);
    EXPECT_DOUBLE_EQ(classify(-0.125).value, -0.125);
}

TEST(Classify, RoundoffNearBoundsCountsAsClassical) {
    EXPECT_EQ(classify(-1e-13).classification, Classification::WITHIN_CLASSICAL);
    EXPECT_EQ(classify(1.0 + 1e-13).classification, Classification::WITHIN_CLASSICAL);
    EXPECT_EQ(classify(-1e-11).classification, Classification::BELOW_LOWER);
    EXPECT_EQ(classify(1.0 + 1e-11).classification, Classification::ABOVE_UPPER);
}

TEST(Classify, ToStringNames) {
    EXPECT_STREQ(to_string(Classification::WITHIN_CLASSICAL), "WITHIN_CLASSICAL");
    EXPECT_STREQ(to_string(Classification::BELOW_LOWER), "BELOW_LOWER");
    EXPECT_STREQ(to_string(Classification::ABOVE_UPPER), "ABOVE_UPPER");
}

TEST(ChValue, AssembledFromJointDistributionsAgrees) {
    const TwoModeState states[] = {
        one_particle_singlet(),
        make_raw_state({Complex{0.2, 0.6}, Complex{-0.3, 0.1}, Complex{0.5, 0.0}, Complex{0.4, -0.2}}),
    };
    const ChSettings settings[] = {
        canonical_ch_settings(),
        ChSettings{MeasurementSetting(0.3, 1.0), MeasurementSetting(1.1, 2.5),
                   MeasurementSetting(0.8, 4.2), MeasurementSetting(1.4, 0.6)},
    };
    for (const TwoModeState& s : states) {
        for (const ChSettings& c : settings) {
            const ProbTable t_apbp = joint_distribution(s, c.a_prime, c.b_prime);
            const ProbTable t_apb = joint_distribution(s, c.a_prime, c.b);
            const ProbTable t_abp = joint_distribution(s, c.a, c.b_prime);
            const ProbTable t_ab = joint_distribution(s, c.a, c.b);
            const double assembled = t_apbp.marginal_a(1) + t_apbp.marginal_b(1) - t_apbp(1, 1) -
                                     t_apb(1, 1) - t_abp(1, 1) + t_ab(1, 1);
            EXPECT_NEAR(assembled, ch_value(s, c), 1e-12);
        }
    }
}

TEST(ChValue, MirroredSettingsLeaveSingletValueInvariant) {
    // the one-particle singlet is antisymmetric under mode exchange, so
    // handing Alice's settings to Bob and vice versa changes nothing
    const TwoModeState s = one_particle_singlet();
    const ChSettings originals[] = {
        canonical_ch_settings(),
        ChSettings{MeasurementSetting(0.9, 0.0), MeasurementSetting(0.2, 3.0),
                   MeasurementSetting(1.5, 1.2), MeasurementSetting(0.7, 5.9)},
    };
    for (const ChSettings& c : originals) {
        const ChSettings mirrored{c.b, c.b_prime, c.a, c.a_prime};
        EXPECT_NEAR(ch_value(s, c), ch_value(s, mirrored), 1e-12);
    }
}

TEST(ChValue, CanonicalSettingsFixture) {
    const ChSettings cs = canonical_ch_settings();
    EXPECT_DOUBLE_EQ(cs.a.theta(), kPi / 2.0);
    EXPECT_DOUBLE_EQ(cs.a_prime.theta(), kPi / 6.0);
    EXPECT_DOUBLE_EQ(cs.a_prime.phi(), 0.0);
    EXPECT_DOUBLE_EQ(cs.b.theta(), kPi / 2.0);
    EXPECT_DOUBLE_EQ(cs.b_prime.theta(), kPi / 6.0);
    EXPECT_DOUBLE_EQ(cs.b_prime.phi(), kPi);
}
