#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

namespace distvrft {

// Real polynomial in the forward shift q, coefficients stored in descending powers.
// The zero polynomial has no coefficients and degree -1.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(std::initializer_list<double> coeffs);
    explicit Polynomial(std::vector<double> coeffs);

    static Polynomial constant(double c);
    static Polynomial monomial(int degree, double c = 1.0);
    // Real polynomial with the given roots (conjugate pairs must both be listed).
    static Polynomial from_roots(const std::vector<std::complex<double>>& roots, double leading = 1.0);

    const std::vector<double>& coeffs() const { return coeffs_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    double leading() const { return coeffs_.empty() ? 0.0 : coeffs_.front(); }
    // Coefficient of q^power (0 outside the support).
    double coeff_of_power(int power) const;
    double max_abs_coeff() const;

    std::complex<double> operator()(std::complex<double> z) const;
    double operator()(double x) const;

    // Companion-matrix eigenvalues.
    std::vector<std::complex<double>> roots() const;

    Polynomial& operator+=(const Polynomial& rhs);
    Polynomial& operator-=(const Polynomial& rhs);
    Polynomial& operator*=(double s);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
    friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    Polynomial operator-() const { return *this * -1.0; }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    void trim();

    std::vector<double> coeffs_;
};

struct PolynomialDivision {
    Polynomial quotient;
    Polynomial remainder;
};

// Euclidean division; throws DivisionByZeroError for a zero divisor.
PolynomialDivision divide(const Polynomial& numerator, const Polynomial& divisor);

// Coefficient-wise comparison with absolute tolerance, after aligning degrees.
bool approx_equal(const Polynomial& a, const Polynomial& b, double tol);

}  // namespace distvrft
