#pragma once

#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "distvrft/polynomial.hpp"

namespace distvrft {

inline constexpr double kDefaultCancellationTol = 1e-9;
inline constexpr int kInfiniteRelativeDegree = std::numeric_limits<int>::max();

// Scalar rational function of the forward shift q. The denominator is always monic;
// the numerator may have higher degree than the denominator (improper).
class RationalTF {
public:
    RationalTF() : den_{1.0} {}
    RationalTF(double gain) : num_{gain}, den_{1.0} {}  // NOLINT(google-explicit-constructor)
    // Throws DivisionByZeroError when den is the zero polynomial.
    RationalTF(Polynomial num, Polynomial den);

    static RationalTF zero() { return {}; }
    static RationalTF one() { return {1.0}; }
    // q^-k
    static RationalTF delay(int k);

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    // deg(den) - deg(num); kInfiniteRelativeDegree for the zero function.
    int relative_degree() const;
    bool is_proper() const { return relative_degree() >= 0; }

    std::complex<double> operator()(std::complex<double> z) const;

    std::vector<std::complex<double>> poles() const { return den_.roots(); }
    std::vector<std::complex<double>> zeros() const { return num_.roots(); }

    RationalTF operator-() const { return {-num_, den_}; }

    friend bool operator==(const RationalTF&, const RationalTF&) = default;

private:
    Polynomial num_;
    Polynomial den_;
};

enum class ArithOp { add, sub, mul, div };

// Exact polynomial arithmetic followed by pole/zero cancellation within `tol`.
RationalTF tf_arith(const RationalTF& a, const RationalTF& b, ArithOp op, double tol = kDefaultCancellationTol);

// Cancels numerator/denominator root pairs closer than tol * max(1, |root|).
RationalTF tf_simplify(const RationalTF& a, double tol = kDefaultCancellationTol);

inline int tf_relative_degree(const RationalTF& a) { return a.relative_degree(); }

// a(e^{jω}); throws PoleOnGridError when e^{jω} is a pole.
std::complex<double> freq_response(const RationalTF& a, double omega);

inline RationalTF operator+(const RationalTF& a, const RationalTF& b) { return tf_arith(a, b, ArithOp::add); }
inline RationalTF operator-(const RationalTF& a, const RationalTF& b) { return tf_arith(a, b, ArithOp::sub); }
inline RationalTF operator*(const RationalTF& a, const RationalTF& b) { return tf_arith(a, b, ArithOp::mul); }
inline RationalTF operator/(const RationalTF& a, const RationalTF& b) { return tf_arith(a, b, ArithOp::div); }

// Coefficient-wise comparison of the normalized representations.
bool approx_equal(const RationalTF& a, const RationalTF& b, double tol);

std::string to_string(const Polynomial& p);
std::string to_string(const RationalTF& a);

}  // namespace distvrft
