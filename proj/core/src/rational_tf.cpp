#include "distvrft/rational_tf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "distvrft/errors.hpp"

namespace distvrft {

namespace {

// Roots closer than this (relative) are treated as one multiple root whose
// location is the cluster mean. Multiple roots come out of the companion
// eigenvalue problem split by roughly eps^(1/m).
constexpr double kRootClusterRelTol = 1e-5;

struct RootCluster {
    std::complex<double> center;
    int multiplicity;
};

std::vector<RootCluster> cluster_roots(std::vector<std::complex<double>> roots) {
    std::vector<RootCluster> clusters;
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        std::complex<double> sum = roots[i];
        int count = 1;
        used[i] = true;
        const double radius = kRootClusterRelTol * std::max(1.0, std::abs(roots[i]));
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            if (!used[j] && std::abs(roots[j] - roots[i]) <= radius) {
                used[j] = true;
                sum += roots[j];
                ++count;
            }
        }
        clusters.push_back({sum / static_cast<double>(count), count});
    }
    return clusters;
}

Polynomial quotient_of(const Polynomial& p, const Polynomial& divisor) { return divide(p, divisor).quotient; }

}  // namespace

RationalTF::RationalTF(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw DivisionByZeroError("transfer function with zero denominator");
    const double lead = den_.leading();
    if (lead != 1.0) {
        den_ *= 1.0 / lead;
        num_ *= 1.0 / lead;
    }
    if (num_.is_zero()) den_ = Polynomial{1.0};
}

RationalTF RationalTF::delay(int k) { return {Polynomial{1.0}, Polynomial::monomial(k)}; }

int RationalTF::relative_degree() const {
    if (num_.is_zero()) return kInfiniteRelativeDegree;
    return den_.degree() - num_.degree();
}

std::complex<double> RationalTF::operator()(std::complex<double> z) const { return num_(z) / den_(z); }

RationalTF tf_simplify(const RationalTF& a, double tol) {
    if (a.is_zero() || a.den().degree() == 0 || a.num().degree() == 0) return a;

    auto num_clusters = cluster_roots(a.num().roots());
    auto den_clusters = cluster_roots(a.den().roots());

    std::vector<std::complex<double>> common;
    for (auto& nc : num_clusters) {
        for (auto& dc : den_clusters) {
            if (dc.multiplicity == 0 || nc.multiplicity == 0) continue;
            const double scale = std::max(1.0, std::abs(nc.center));
            if (std::abs(nc.center - dc.center) <= tol * scale) {
                const int k = std::min(nc.multiplicity, dc.multiplicity);
                const auto mid = 0.5 * (nc.center + dc.center);
                for (int m = 0; m < k; ++m) common.push_back(mid);
                nc.multiplicity -= k;
                dc.multiplicity -= k;
            }
        }
    }
    if (common.empty()) return a;

    // Keep the factor real: complex roots are matched together with their conjugates,
    // so snap near-real means onto the real axis and pair the rest explicitly.
    std::vector<std::complex<double>> factor_roots;
    std::vector<std::complex<double>> upper;
    for (const auto& c : common) {
        if (std::abs(c.imag()) <= tol * std::max(1.0, std::abs(c))) {
            factor_roots.emplace_back(c.real(), 0.0);
        } else if (c.imag() > 0) {
            upper.push_back(c);
        }
    }
    for (const auto& c : upper) {
        factor_roots.push_back(c);
        factor_roots.push_back(std::conj(c));
    }
    const Polynomial factor = Polynomial::from_roots(factor_roots);
    return {quotient_of(a.num(), factor), quotient_of(a.den(), factor)};
}

RationalTF tf_arith(const RationalTF& a, const RationalTF& b, ArithOp op, double tol) {
    switch (op) {
        case ArithOp::add:
        case ArithOp::sub: {
            const Polynomial bn = op == ArithOp::add ? b.num() : -b.num();
            if (a.is_zero()) return {bn, b.den()};
            if (b.is_zero()) return a;
            if (a.den() == b.den()) return tf_simplify({a.num() + bn, a.den()}, tol);
            return tf_simplify({a.num() * b.den() + bn * a.den(), a.den() * b.den()}, tol);
        }
        case ArithOp::mul:
            if (a.is_zero() || b.is_zero()) return {};
            return tf_simplify({a.num() * b.num(), a.den() * b.den()}, tol);
        case ArithOp::div:
            if (b.is_zero()) throw DivisionByZeroError("division by the zero transfer function");
            if (a.is_zero()) return {};
            return tf_simplify({a.num() * b.den(), a.den() * b.num()}, tol);
    }
    return {};
}

std::complex<double> freq_response(const RationalTF& a, double omega) {
    const std::complex<double> z = std::polar(1.0, omega);
    const std::complex<double> d = a.den()(z);
    if (std::abs(d) <= 1e-13 * a.den().max_abs_coeff()) {
        throw PoleOnGridError("frequency response evaluated at a pole, omega = " + std::to_string(omega));
    }
    return a.num()(z) / d;
}

bool approx_equal(const RationalTF& a, const RationalTF& b, double tol) {
    if (a.is_zero() || b.is_zero()) return a.num().max_abs_coeff() <= tol && b.num().max_abs_coeff() <= tol;
    return approx_equal(a.num(), b.num(), tol) && approx_equal(a.den(), b.den(), tol);
}

std::string to_string(const Polynomial& p) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    os.precision(12);
    bool first = true;
    for (int k = 0; k <= p.degree(); ++k) {
        const double c = p.coeffs()[static_cast<std::size_t>(k)];
        const int power = p.degree() - k;
        if (c == 0.0) continue;
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        const double mag = std::abs(c);
        if (mag != 1.0 || power == 0) os << mag;
        if (power >= 1) os << (mag != 1.0 ? "*q" : "q");
        if (power >= 2) os << "^" << power;
        first = false;
    }
    return os.str();
}

std::string to_string(const RationalTF& a) {
    if (a.den().degree() == 0) return to_string(a.num());
    return "(" + to_string(a.num()) + ")/(" + to_string(a.den()) + ")";
}

}  // namespace distvrft
