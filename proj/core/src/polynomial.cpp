#include "distvrft/polynomial.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "distvrft/errors.hpp"

namespace distvrft {

namespace {

// Leading coefficients below this fraction of the largest one are rounding residue.
constexpr double kLeadingZeroRelTol = 64.0 * std::numeric_limits<double>::epsilon();

}  // namespace

Polynomial::Polynomial(std::initializer_list<double> coeffs) : coeffs_(coeffs) { trim(); }

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::constant(double c) { return Polynomial{c}; }

Polynomial Polynomial::monomial(int degree, double c) {
    std::vector<double> coeffs(static_cast<std::size_t>(degree) + 1, 0.0);
    coeffs.front() = c;
    return Polynomial(std::move(coeffs));
}

Polynomial Polynomial::from_roots(const std::vector<std::complex<double>>& roots, double leading) {
    std::vector<std::complex<double>> acc{1.0};
    for (const auto& r : roots) {
        std::vector<std::complex<double>> next(acc.size() + 1, 0.0);
        for (std::size_t k = 0; k < acc.size(); ++k) {
            next[k] += acc[k];
            next[k + 1] -= acc[k] * r;
        }
        acc = std::move(next);
    }
    std::vector<double> coeffs(acc.size());
    std::transform(acc.begin(), acc.end(), coeffs.begin(), [leading](auto c) { return leading * c.real(); });
    return Polynomial(std::move(coeffs));
}

void Polynomial::trim() {
    const double scale = max_abs_coeff();
    if (scale == 0.0) {
        coeffs_.clear();
        return;
    }
    auto first = std::find_if(coeffs_.begin(), coeffs_.end(),
                              [scale](double c) { return std::abs(c) > kLeadingZeroRelTol * scale; });
    coeffs_.erase(coeffs_.begin(), first);
}

double Polynomial::coeff_of_power(int power) const {
    const int idx = degree() - power;
    if (power < 0 || idx < 0) return 0.0;
    return coeffs_[static_cast<std::size_t>(idx)];
}

double Polynomial::max_abs_coeff() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

std::complex<double> Polynomial::operator()(std::complex<double> z) const {
    std::complex<double> acc = 0.0;
    for (double c : coeffs_) acc = acc * z + c;
    return acc;
}

double Polynomial::operator()(double x) const {
    double acc = 0.0;
    for (double c : coeffs_) acc = acc * x + c;
    return acc;
}

std::vector<std::complex<double>> Polynomial::roots() const {
    const int n = degree();
    if (n <= 0) return {};
    // Strip roots at the origin exactly; they would otherwise perturb the companion eigenvalues.
    int zeros_at_origin = 0;
    while (zeros_at_origin < n && coeffs_[static_cast<std::size_t>(n - zeros_at_origin)] == 0.0) ++zeros_at_origin;
    const int m = n - zeros_at_origin;
    std::vector<std::complex<double>> out(static_cast<std::size_t>(zeros_at_origin), 0.0);
    if (m == 0) return out;

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m, m);
    for (int k = 0; k < m; ++k) companion(0, k) = -coeffs_[static_cast<std::size_t>(k + 1)] / coeffs_[0];
    for (int k = 1; k < m; ++k) companion(k, k - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    const auto& ev = solver.eigenvalues();
    for (int k = 0; k < ev.size(); ++k) out.push_back(ev[k]);
    return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
    // Cancellation of leading terms is judged against the operands, not the (possibly tiny) result.
    const double scale = std::max(max_abs_coeff(), rhs.max_abs_coeff());
    if (rhs.coeffs_.size() > coeffs_.size()) {
        coeffs_.insert(coeffs_.begin(), rhs.coeffs_.size() - coeffs_.size(), 0.0);
    }
    const std::size_t offset = coeffs_.size() - rhs.coeffs_.size();
    for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) coeffs_[offset + k] += rhs.coeffs_[k];
    auto first = std::find_if(coeffs_.begin(), coeffs_.end(),
                              [scale](double c) { return std::abs(c) > kLeadingZeroRelTol * scale; });
    coeffs_.erase(coeffs_.begin(), first);
    trim();
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) { return *this += -rhs; }

Polynomial& Polynomial::operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    trim();
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<double> out(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Polynomial(std::move(out));
}

PolynomialDivision divide(const Polynomial& numerator, const Polynomial& divisor) {
    if (divisor.is_zero()) throw DivisionByZeroError("polynomial division by zero");
    if (numerator.degree() < divisor.degree()) return {Polynomial{}, numerator};

    std::vector<double> rem = numerator.coeffs();
    const auto& d = divisor.coeffs();
    const std::size_t qlen = rem.size() - d.size() + 1;
    std::vector<double> quot(qlen, 0.0);
    for (std::size_t k = 0; k < qlen; ++k) {
        const double f = rem[k] / d[0];
        quot[k] = f;
        for (std::size_t j = 0; j < d.size(); ++j) rem[k + j] -= f * d[j];
    }
    std::vector<double> tail(rem.begin() + static_cast<std::ptrdiff_t>(qlen), rem.end());
    return {Polynomial(std::move(quot)), Polynomial(std::move(tail))};
}

bool approx_equal(const Polynomial& a, const Polynomial& b, double tol) {
    const int n = std::max(a.degree(), b.degree());
    for (int p = 0; p <= n; ++p) {
        if (std::abs(a.coeff_of_power(p) - b.coeff_of_power(p)) > tol) return false;
    }
    return true;
}

}  // namespace distvrft
