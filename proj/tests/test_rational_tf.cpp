#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "distvrft/errors.hpp"
#include "distvrft/rational_tf.hpp"
#include "generators.hpp"

using distvrft::ArithOp;
using distvrft::Polynomial;
using distvrft::RationalTF;

namespace {

const RationalTF kT{Polynomial{0.4}, Polynomial{1.0, -0.6}};

}  // namespace

TEST(RationalTF, DenominatorIsNormalizedMonic) {
    const RationalTF a{Polynomial{2.0, 1.0}, Polynomial{4.0, -2.0}};
    EXPECT_DOUBLE_EQ(a.den().leading(), 1.0);
    EXPECT_TRUE(approx_equal(a.num(), Polynomial{0.5, 0.25}, 1e-15));
}

TEST(RationalTF, ZeroDenominatorThrows) {
    EXPECT_THROW(RationalTF(Polynomial{1.0}, Polynomial{}), distvrft::DivisionByZeroError);
}

TEST(RationalTF, MultiplicationCancelsExactly) {
    const RationalTF a{Polynomial{1.0}, Polynomial{1.0, -0.5}};
    const RationalTF b{Polynomial{1.0, -0.5}, Polynomial{1.0}};
    EXPECT_TRUE(approx_equal(a * b, RationalTF::one(), 1e-15));
}

TEST(RationalTF, AdditionWithLikeDenominators) {
    const RationalTF a{Polynomial{1.0}, Polynomial{1.0, -0.5}};
    EXPECT_TRUE(approx_equal(a + a, RationalTF(Polynomial{2.0}, Polynomial{1.0, -0.5}), 1e-15));
}

TEST(RationalTF, ReferenceLoopGainIsIntegrator) {
    const auto k = kT / (RationalTF::one() - kT);
    EXPECT_TRUE(approx_equal(k, RationalTF(Polynomial{0.4}, Polynomial{1.0, -1.0}), 1e-14));
    for (double q : {2.0, 3.0}) {
        const double lhs = (0.4 / (q - 0.6)) / (1.0 - 0.4 / (q - 0.6));
        EXPECT_NEAR(k(std::complex<double>(q, 0.0)).real(), lhs, 1e-14);
    }
}

TEST(RationalTF, DivisionByZeroTransferThrows) {
    EXPECT_THROW(kT / RationalTF::zero(), distvrft::DivisionByZeroError);
}

TEST(RationalTF, SimplifyCancelsCommonRoot) {
    const RationalTF a{Polynomial{1.0, -0.3} * Polynomial{1.0, -0.7}, Polynomial{1.0, -0.3}};
    EXPECT_TRUE(approx_equal(distvrft::tf_simplify(a), RationalTF(Polynomial{1.0, -0.7}, Polynomial{1.0}), 1e-12));
}

TEST(RationalTF, SimplifyCancelsWithinTolerance) {
    const RationalTF a{Polynomial{1.0, -0.3 + 1e-12} * Polynomial{1.0, -0.7}, Polynomial{1.0, -0.3}};
    const auto s = distvrft::tf_simplify(a, 1e-9);
    EXPECT_EQ(s.den().degree(), 0);
    EXPECT_TRUE(approx_equal(s.num(), Polynomial{1.0, -0.7}, 1e-11));
}

TEST(RationalTF, SimplifyKeepsCoprimeFactors) {
    const RationalTF a{Polynomial{1.0, -0.3} * Polynomial{1.0, -0.7}, Polynomial{1.0, -0.5}};
    const auto s = distvrft::tf_simplify(a);
    EXPECT_EQ(s.num().degree(), 2);
    EXPECT_EQ(s.den().degree(), 1);
    EXPECT_TRUE(approx_equal(s, a, 1e-15));
}

TEST(RationalTF, SimplifyHandlesRepeatedRoots) {
    const Polynomial twice = Polynomial{1.0, -0.4} * Polynomial{1.0, -0.4};
    const RationalTF a{twice * Polynomial{1.0, 0.2}, twice * Polynomial{1.0, -0.9}};
    EXPECT_TRUE(approx_equal(distvrft::tf_simplify(a), RationalTF(Polynomial{1.0, 0.2}, Polynomial{1.0, -0.9}), 1e-7));
}

TEST(RationalTF, RelativeDegree) {
    EXPECT_EQ(distvrft::tf_relative_degree(kT), 1);
    EXPECT_EQ(distvrft::tf_relative_degree(RationalTF(Polynomial{1.0, -0.2}, Polynomial{1.0, -0.6})), 0);
    EXPECT_EQ(distvrft::tf_relative_degree(RationalTF(Polynomial{1.0, 0.0, 0.0}, Polynomial{1.0, -0.6})), -1);
    EXPECT_EQ(distvrft::tf_relative_degree(RationalTF::zero()), distvrft::kInfiniteRelativeDegree);
}

TEST(RationalTF, FrequencyResponse) {
    EXPECT_NEAR(std::abs(distvrft::freq_response(kT, 0.0) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(distvrft::freq_response(RationalTF::one(), 1.3) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(distvrft::freq_response(RationalTF::delay(1), std::numbers::pi) + 1.0), 0.0, 1e-15);
}

TEST(RationalTF, FrequencyResponseAtPoleThrows) {
    const RationalTF integrator{Polynomial{1.0}, Polynomial{1.0, -1.0}};
    EXPECT_THROW(distvrft::freq_response(integrator, 0.0), distvrft::PoleOnGridError);
}

TEST(RationalTF, ArithmeticIsHomomorphicOnTheUnitCircle) {
    gen::Rng rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        const auto a = gen::stable_tf(rng, rng.integer(1, 4), rng.integer(0, 1));
        const auto b = gen::stable_tf(rng, rng.integer(1, 4), rng.integer(0, 1));
        const double w = rng.uniform(-std::numbers::pi, std::numbers::pi);
        const auto fa = distvrft::freq_response(a, w);
        const auto fb = distvrft::freq_response(b, w);
        const double scale = std::max({1.0, std::abs(fa), std::abs(fb)});
        EXPECT_LT(std::abs(distvrft::freq_response(a * b, w) - fa * fb), 1e-10 * scale * scale);
        EXPECT_LT(std::abs(distvrft::freq_response(a + b, w) - (fa + fb)), 1e-10 * scale);
        EXPECT_LT(std::abs(distvrft::freq_response(a - b, w) - (fa - fb)), 1e-10 * scale);
        if (std::abs(fb) > 1e-3) {
            EXPECT_LT(std::abs(distvrft::freq_response(a / b, w) - fa / fb), 1e-9 * scale / std::abs(fb));
        }
    }
}

TEST(RationalTF, ToStringIsReadable) {
    EXPECT_EQ(distvrft::to_string(kT), "(0.4)/(q - 0.6)");
}
