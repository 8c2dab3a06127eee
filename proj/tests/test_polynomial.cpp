#include <gtest/gtest.h>

#include <algorithm>
#include <complex>

#include "distvrft/errors.hpp"
#include "distvrft/polynomial.hpp"
#include "generators.hpp"

using distvrft::Polynomial;

namespace {

std::vector<std::complex<double>> sorted(std::vector<std::complex<double>> r) {
    std::sort(r.begin(), r.end(), [](auto a, auto b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
    return r;
}

}  // namespace

TEST(Polynomial, ZeroPolynomialHasDegreeMinusOne) {
    const Polynomial z;
    EXPECT_TRUE(z.is_zero());
    EXPECT_EQ(z.degree(), -1);
    EXPECT_EQ(Polynomial({0.0, 0.0}).degree(), -1);
}

TEST(Polynomial, LeadingZerosAreStripped) {
    const Polynomial p({0.0, 0.0, 2.0, 1.0});
    EXPECT_EQ(p.degree(), 1);
    EXPECT_DOUBLE_EQ(p.leading(), 2.0);
    EXPECT_DOUBLE_EQ(p.coeff_of_power(0), 1.0);
    EXPECT_DOUBLE_EQ(p.coeff_of_power(5), 0.0);
}

TEST(Polynomial, Evaluation) {
    const Polynomial p{1.0, -3.0, 2.0};
    EXPECT_DOUBLE_EQ(p(1.0), 0.0);
    EXPECT_DOUBLE_EQ(p(3.0), 2.0);
    const auto v = p(std::complex<double>(0.0, 1.0));
    EXPECT_NEAR(v.real(), 1.0, 1e-15);
    EXPECT_NEAR(v.imag(), -3.0, 1e-15);
}

TEST(Polynomial, ArithmeticCancelsLeadingTerms) {
    const Polynomial a{1.0, 2.0, 3.0};
    const Polynomial b{1.0, 0.0, 1.0};
    const auto d = a - b;
    EXPECT_EQ(d.degree(), 1);
    EXPECT_TRUE(approx_equal(d, Polynomial{2.0, 2.0}, 0.0));
    EXPECT_TRUE((a - a).is_zero());
}

TEST(Polynomial, ProductOfLinearFactors) {
    const auto p = Polynomial{1.0, -0.3} * Polynomial{1.0, -0.7};
    EXPECT_TRUE(approx_equal(p, Polynomial{1.0, -1.0, 0.21}, 1e-15));
}

TEST(Polynomial, FromRootsRoundTrip) {
    const std::vector<std::complex<double>> roots{{0.5, 0.2}, {0.5, -0.2}, {-0.3, 0.0}};
    const auto p = Polynomial::from_roots(roots, 2.0);
    EXPECT_EQ(p.degree(), 3);
    EXPECT_DOUBLE_EQ(p.leading(), 2.0);
    const auto found = sorted(p.roots());
    const auto expected = sorted(roots);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_LT(std::abs(found[k] - expected[k]), 1e-12);
}

TEST(Polynomial, RootsAtOriginAreExact) {
    const auto r = Polynomial{1.0, -0.5, 0.0, 0.0}.roots();
    ASSERT_EQ(r.size(), 3U);
    EXPECT_EQ(std::count(r.begin(), r.end(), std::complex<double>(0.0, 0.0)), 2);
}

TEST(Polynomial, DivisionIdentity) {
    gen::Rng rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const auto a = gen::stable_poly(rng, rng.integer(0, 6), 1.5) * rng.uniform(0.5, 3.0);
        const auto b = gen::stable_poly(rng, rng.integer(0, 3), 1.5);
        const auto [q, r] = distvrft::divide(a, b);
        EXPECT_LT(r.degree(), b.degree() == 0 ? 0 : b.degree());
        EXPECT_TRUE(approx_equal(q * b + r, a, 1e-12));
    }
}

TEST(Polynomial, DivisionByZeroThrows) {
    EXPECT_THROW(distvrft::divide(Polynomial{1.0}, Polynomial{}), distvrft::DivisionByZeroError);
}

TEST(Polynomial, MultiplicationMatchesEvaluation) {
    gen::Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = gen::stable_poly(rng, rng.integer(0, 5), 1.2);
        const auto b = gen::stable_poly(rng, rng.integer(0, 5), 1.2);
        const std::complex<double> z = std::polar(rng.uniform(0.2, 2.0), rng.uniform(-3.0, 3.0));
        EXPECT_LT(std::abs((a * b)(z) - a(z) * b(z)), 1e-12 * std::max(1.0, std::abs(a(z) * b(z))));
    }
}
