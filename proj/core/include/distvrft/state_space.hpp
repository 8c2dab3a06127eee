#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>

#include "distvrft/rational_tf.hpp"
#include "distvrft/signal.hpp"

namespace distvrft {

// x(t+1) = A x(t) + B u(t),  y(t) = C x(t) + D u(t)
struct StateSpace {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    Eigen::MatrixXd C;
    Eigen::MatrixXd D;

    Eigen::Index states() const { return A.rows(); }
    Eigen::Index inputs() const { return B.cols(); }
    Eigen::Index outputs() const { return C.rows(); }
};

// Controllable canonical form of a proper SISO transfer function.
// Throws ImproperTransferError for negative relative degree.
StateSpace realize(const RationalTF& a);

// Zero-initial-state response. `inputs` is (inputs x N); returns (outputs x N).
Eigen::MatrixXd simulate(const StateSpace& sys, const Eigen::MatrixXd& inputs);

// Evaluates C (zI - A)^{-1} B + D on the unit circle. A is reduced to upper Hessenberg
// form once, so each frequency costs O(n^2) per input column.
class FrequencyEvaluator {
public:
    explicit FrequencyEvaluator(const StateSpace& sys);

    // std::nullopt when e^{jω} is (numerically) an eigenvalue of A.
    std::optional<Eigen::MatrixXcd> operator()(double omega) const;

private:
    Eigen::MatrixXd hessenberg_;
    Eigen::MatrixXd b_;
    Eigen::MatrixXd c_;
    Eigen::MatrixXd d_;
    double scale_ = 1.0;
};

Eigen::MatrixXcd freq_response(const StateSpace& sys, double omega);

// Packs per-channel signals into a (channels x N) matrix and back.
Eigen::MatrixXd to_matrix(const MultiSignal& signals);
MultiSignal to_signals(const Eigen::MatrixXd& m);

}  // namespace distvrft
