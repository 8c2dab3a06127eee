#include "distvrft/state_space.hpp"

#include <cmath>

#include "distvrft/errors.hpp"

namespace distvrft {

StateSpace realize(const RationalTF& a) {
    if (!a.is_proper()) throw ImproperTransferError("cannot realize an improper transfer function");
    const int n = a.den().degree();
    StateSpace ss;
    ss.A = Eigen::MatrixXd::Zero(n, n);
    ss.B = Eigen::MatrixXd::Zero(n, 1);
    ss.C = Eigen::MatrixXd::Zero(1, n);
    ss.D = Eigen::MatrixXd::Zero(1, 1);
    if (a.is_zero()) return ss;

    // num = D den + rem with deg(rem) < n.
    const auto [quot, rem] = divide(a.num(), a.den());
    ss.D(0, 0) = quot.coeff_of_power(0);
    const auto& den = a.den().coeffs();
    for (int k = 0; k < n; ++k) {
        ss.A(0, k) = -den[static_cast<std::size_t>(k + 1)];
        ss.C(0, k) = rem.coeff_of_power(n - 1 - k);
    }
    for (int k = 1; k < n; ++k) ss.A(k, k - 1) = 1.0;
    if (n > 0) ss.B(0, 0) = 1.0;
    return ss;
}

Eigen::MatrixXd simulate(const StateSpace& sys, const Eigen::MatrixXd& inputs) {
    if (inputs.rows() != sys.inputs()) throw DimensionError("input channel count does not match system");
    const Eigen::Index len = inputs.cols();
    Eigen::MatrixXd out(sys.outputs(), len);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(sys.states());
    for (Eigen::Index t = 0; t < len; ++t) {
        const auto u = inputs.col(t);
        out.col(t).noalias() = sys.C * x + sys.D * u;
        x = sys.A * x + sys.B * u;
    }
    return out;
}

FrequencyEvaluator::FrequencyEvaluator(const StateSpace& sys) : d_(sys.D) {
    if (sys.states() == 0) {
        hessenberg_.resize(0, 0);
        b_.resize(0, sys.inputs());
        c_.resize(sys.outputs(), 0);
        return;
    }
    Eigen::HessenbergDecomposition<Eigen::MatrixXd> hd(sys.A);
    hessenberg_ = hd.matrixH();
    scale_ = std::max(1.0, hessenberg_.cwiseAbs().maxCoeff());
    const Eigen::MatrixXd q = hd.matrixQ();
    b_ = q.transpose() * sys.B;
    c_ = sys.C * q;
}

std::optional<Eigen::MatrixXcd> FrequencyEvaluator::operator()(double omega) const {
    using RowMatrixXcd = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const std::complex<double> z = std::polar(1.0, omega);
    const Eigen::Index n = hessenberg_.rows();
    RowMatrixXcd m = -hessenberg_.cast<std::complex<double>>();
    m.diagonal().array() += z;
    RowMatrixXcd rhs = b_.cast<std::complex<double>>();

    // Gaussian elimination with partial pivoting; only the subdiagonal needs clearing.
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        if (std::abs(m(k + 1, k)) > std::abs(m(k, k))) {
            m.row(k).swap(m.row(k + 1));
            rhs.row(k).swap(rhs.row(k + 1));
        }
        if (m(k, k) == 0.0) continue;
        const std::complex<double> f = m(k + 1, k) / m(k, k);
        m.row(k + 1).tail(n - k) -= f * m.row(k).tail(n - k);
        rhs.row(k + 1) -= f * rhs.row(k);
    }
    for (Eigen::Index k = 0; k < n; ++k) {
        if (std::abs(m(k, k)) <= 1e-13 * scale_) return std::nullopt;
    }
    const Eigen::Index cols = rhs.cols();
    for (Eigen::Index k = n - 1; k >= 0; --k) {
        for (Eigen::Index j = k + 1; j < n; ++j) {
            const std::complex<double> f = m(k, j);
            for (Eigen::Index c = 0; c < cols; ++c) rhs(k, c) -= f * rhs(j, c);
        }
        const std::complex<double> inv = 1.0 / m(k, k);
        for (Eigen::Index c = 0; c < cols; ++c) rhs(k, c) *= inv;
    }
    Eigen::MatrixXcd out = c_.cast<std::complex<double>>() * rhs;
    out += d_.cast<std::complex<double>>();
    return out;
}

Eigen::MatrixXcd freq_response(const StateSpace& sys, double omega) {
    auto h = FrequencyEvaluator(sys)(omega);
    if (!h) throw PoleOnGridError("state-space frequency response evaluated at a pole");
    return *h;
}

Eigen::MatrixXd to_matrix(const MultiSignal& signals) {
    const auto len = static_cast<Eigen::Index>(common_horizon(signals));
    Eigen::MatrixXd m(static_cast<Eigen::Index>(signals.size()), len);
    for (std::size_t i = 0; i < signals.size(); ++i)
        for (Eigen::Index t = 0; t < len; ++t) m(static_cast<Eigen::Index>(i), t) = signals[i][static_cast<std::size_t>(t)];
    return m;
}

MultiSignal to_signals(const Eigen::MatrixXd& m) {
    MultiSignal out;
    out.reserve(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        std::vector<double> row(static_cast<std::size_t>(m.cols()));
        for (Eigen::Index t = 0; t < m.cols(); ++t) row[static_cast<std::size_t>(t)] = m(i, t);
        out.emplace_back(std::move(row));
    }
    return out;
}

}  // namespace distvrft
