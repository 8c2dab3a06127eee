#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "distvrft/errors.hpp"
#include "distvrft/state_space.hpp"
#include "generators.hpp"

using distvrft::Polynomial;
using distvrft::RationalTF;

TEST(Realize, FirstOrderCanonicalForm) {
    const auto ss = distvrft::realize(RationalTF(Polynomial{0.4}, Polynomial{1.0, -0.6}));
    ASSERT_EQ(ss.states(), 1);
    EXPECT_DOUBLE_EQ(ss.A(0, 0), 0.6);
    EXPECT_DOUBLE_EQ(ss.B(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(ss.C(0, 0), 0.4);
    EXPECT_DOUBLE_EQ(ss.D(0, 0), 0.0);
}

TEST(Realize, ConstantHasNoStates) {
    const auto ss = distvrft::realize(RationalTF(2.5));
    EXPECT_EQ(ss.states(), 0);
    EXPECT_DOUBLE_EQ(ss.D(0, 0), 2.5);
}

TEST(Realize, BiproperHasFeedthrough) {
    const auto ss = distvrft::realize(RationalTF(Polynomial{1.0, -0.2}, Polynomial{1.0, -0.6}));
    EXPECT_EQ(ss.states(), 1);
    EXPECT_DOUBLE_EQ(ss.D(0, 0), 1.0);
    EXPECT_NEAR(ss.C(0, 0), 0.4, 1e-15);
}

TEST(Realize, ImproperRejected) {
    EXPECT_THROW(distvrft::realize(RationalTF(Polynomial{1.0, 0.0, 0.0}, Polynomial{1.0, -0.5})),
                 distvrft::ImproperTransferError);
}

TEST(Realize, FrequencyResponseMatches) {
    gen::Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = gen::stable_tf(rng, rng.integer(1, 5), rng.integer(0, 2));
        const auto ss = distvrft::realize(a);
        for (int k = 0; k < 16; ++k) {
            const double w = std::numbers::pi * (k + 0.5) / 16.0;
            const auto h = distvrft::freq_response(ss, w);
            EXPECT_LT(std::abs(h(0, 0) - distvrft::freq_response(a, w)), 1e-10);
        }
    }
}

TEST(Realize, SimulationMatchesFilter) {
    gen::Rng rng(32);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = gen::stable_tf(rng, rng.integer(0, 5), 0);
        const auto x = gen::white(rng, 150);
        const auto ss = distvrft::realize(a);
        const Eigen::MatrixXd out = distvrft::simulate(ss, distvrft::to_matrix({x}));
        const auto y = distvrft::filter(a, x);
        for (std::size_t t = 0; t < 150; ++t) EXPECT_NEAR(out(0, static_cast<Eigen::Index>(t)), y[t], 1e-9);
    }
}

TEST(FrequencyEvaluator, MatchesDirectSolve) {
    gen::Rng rng(33);
    const Eigen::Index n = 12;
    distvrft::StateSpace sys{Eigen::MatrixXd::Random(n, n) * 0.2, Eigen::MatrixXd::Random(n, 3),
                             Eigen::MatrixXd::Random(2, n), Eigen::MatrixXd::Random(2, 3)};
    const distvrft::FrequencyEvaluator eval(sys);
    for (int k = 0; k < 16; ++k) {
        const double w = rng.uniform(0.0, std::numbers::pi);
        const std::complex<double> z = std::polar(1.0, w);
        const Eigen::MatrixXcd direct =
            sys.C.cast<std::complex<double>>() *
                (z * Eigen::MatrixXcd::Identity(n, n) - sys.A.cast<std::complex<double>>()).lu().solve(sys.B.cast<std::complex<double>>()) +
            sys.D.cast<std::complex<double>>();
        const auto h = eval(w);
        ASSERT_TRUE(h.has_value());
        EXPECT_LT((*h - direct).norm(), 1e-10);
    }
}

TEST(FrequencyEvaluator, ReportsPoleOnGrid) {
    const auto ss = distvrft::realize(RationalTF(Polynomial{1.0}, Polynomial{1.0, -1.0}));
    EXPECT_FALSE(distvrft::FrequencyEvaluator(ss)(0.0).has_value());
    EXPECT_THROW(distvrft::freq_response(ss, 0.0), distvrft::PoleOnGridError);
}

TEST(StateSpace, MatrixSignalRoundTrip) {
    gen::Rng rng(34);
    const auto ms = gen::white_channels(rng, 3, 10);
    const auto back = distvrft::to_signals(distvrft::to_matrix(ms));
    EXPECT_EQ(distvrft::max_abs_difference(ms, back), 0.0);
}
