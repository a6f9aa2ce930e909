#include "zxdb/phase.hpp"

#include <gtest/gtest.h>
#include <numbers>
#include <random>
#include <vector>

namespace zxdb {

    TEST(Phase, NormalisesIntoHalfOpenRange) {
        EXPECT_EQ(Phase::fraction(5, 2), Phase::fraction(1, 2));
        EXPECT_EQ(Phase::fraction(-1, 2), Phase::fraction(3, 2));
        EXPECT_EQ(Phase::fraction(2, 4), Phase::fraction(1, 2));
        EXPECT_EQ(Phase::fraction(1, -2), Phase::fraction(3, 2));
        EXPECT_EQ(Phase::fraction(4, 2), Phase::zero());
        EXPECT_EQ(Phase::fraction(4, 2).denominator(), 1);
        EXPECT_EQ(Phase::fraction(3, 1), Phase::pi());
    }

    TEST(Phase, ZeroDenominatorThrows) { EXPECT_THROW((void)Phase::fraction(1, 0), std::invalid_argument); }

    TEST(Phase, Predicates) {
        EXPECT_TRUE(Phase::zero().is_zero());
        EXPECT_TRUE(Phase::zero().is_pi_multiple());
        EXPECT_TRUE(Phase::pi().is_pi_multiple());
        EXPECT_FALSE(Phase::pi().is_zero());
        EXPECT_TRUE(Phase::fraction(1, 2).is_half_pi());
        EXPECT_TRUE(Phase::fraction(3, 2).is_half_pi());
        EXPECT_FALSE(Phase::fraction(1, 4).is_half_pi());
        EXPECT_FALSE(Phase::fraction(1, 4).is_pi_multiple());
    }

    TEST(Phase, InexactNeverSatisfiesExactPredicates) {
        const Phase z = Phase::radians(0.0);
        EXPECT_FALSE(z.is_exact());
        EXPECT_FALSE(z.is_zero());
        EXPECT_FALSE(Phase::radians(std::numbers::pi).is_pi_multiple());
        EXPECT_FALSE(Phase::radians(std::numbers::pi / 2).is_half_pi());
    }

    TEST(Phase, ExactArithmetic) {
        EXPECT_EQ(Phase::fraction(1, 4) + Phase::fraction(1, 4), Phase::fraction(1, 2));
        EXPECT_EQ(Phase::fraction(3, 2) + Phase::fraction(1, 2), Phase::zero());
        EXPECT_EQ(Phase::fraction(1, 3) + Phase::fraction(1, 6), Phase::fraction(1, 2));
        EXPECT_EQ(-Phase::fraction(1, 2), Phase::fraction(3, 2));
        EXPECT_EQ(Phase::pi() - Phase::fraction(1, 2), Phase::fraction(1, 2));
        EXPECT_EQ(Phase::pi() + Phase::pi(), Phase::zero());
    }

    TEST(Phase, InexactIsContagious) {
        const Phase p = Phase::fraction(1, 2) + Phase::radians(0.25);
        EXPECT_FALSE(p.is_exact());
        EXPECT_NEAR(p.to_radians(), std::numbers::pi / 2 + 0.25, 1e-15);
        const Phase q = Phase::radians(-0.5);
        EXPECT_NEAR(q.to_radians(), 2 * std::numbers::pi - 0.5, 1e-15);
    }

    TEST(Phase, ToRadians) {
        EXPECT_DOUBLE_EQ(Phase::fraction(1, 4).to_radians(), std::numbers::pi / 4);
        EXPECT_DOUBLE_EQ(Phase::fraction(7, 4).to_radians(), 7 * std::numbers::pi / 4);
        EXPECT_DOUBLE_EQ(Phase::zero().to_radians(), 0.0);
    }

    TEST(Phase, CircularDistance) {
        EXPECT_NEAR(Phase::fraction(1, 8).distance(Phase::fraction(15, 8)), std::numbers::pi / 4, 1e-15);
        EXPECT_NEAR(Phase::radians(0.1).distance(Phase::radians(-0.1)), 0.2, 1e-12);
    }

    TEST(Phase, ExactAndInexactNeverCompareEqual) {
        EXPECT_NE(Phase::zero(), Phase::radians(0.0));
        EXPECT_NE(Phase::pi(), Phase::radians(std::numbers::pi));
    }

    TEST(Phase, ToString) {
        EXPECT_EQ(Phase::fraction(3, 4).to_string(), "3/4");
        EXPECT_EQ(Phase::zero().to_string(), "0/1");
    }

    TEST(PhaseProperty, ExhaustiveSmallDenominators) {
        std::vector<Phase> all;
        for (std::int64_t den = 1; den <= 8; ++den) {
            for (std::int64_t num = 0; num < 2 * den; ++num) all.push_back(Phase::fraction(num, den));
        }
        EXPECT_EQ(Phase::fraction(1, 1) + Phase::fraction(1, 1), Phase::fraction(0, 1));
        for (const auto& a: all) {
            for (const auto& b: all) {
                ASSERT_EQ(a + b, b + a);
                for (const auto& c: all) {
                    ASSERT_EQ((a + b) + c, a + (b + c));
                }
            }
        }
    }

    TEST(PhaseProperty, GroupLawsOnRandomFractions) {
        std::mt19937_64                             rng(11);
        std::uniform_int_distribution<std::int64_t> num(-50, 50);
        std::uniform_int_distribution<std::int64_t> den(1, 12);
        for (int i = 0; i < 2000; ++i) {
            const Phase a = Phase::fraction(num(rng), den(rng));
            const Phase b = Phase::fraction(num(rng), den(rng));
            const Phase c = Phase::fraction(num(rng), den(rng));
            EXPECT_EQ(a + b, b + a);
            EXPECT_EQ((a + b) + c, a + (b + c));
            EXPECT_EQ(a + (-a), Phase::zero());
            EXPECT_EQ(a - b + b, a);
            EXPECT_GE(a.numerator(), 0);
            EXPECT_LT(a.numerator(), 2 * a.denominator());
            EXPECT_NEAR(std::remainder((a + b).to_radians() - a.to_radians() - b.to_radians(), 2 * std::numbers::pi),
                        0.0, 1e-12);
        }
    }

} // namespace zxdb
