#include "distvrft/interconnection.hpp"

#include <limits>

#include "distvrft/errors.hpp"

namespace distvrft {

std::size_t Interconnection::add_input(std::string name) {
    input_names_.push_back(std::move(name));
    return input_names_.size() - 1;
}

std::size_t Interconnection::add_signal(std::string name) {
    signal_names_.push_back(std::move(name));
    return signal_names_.size() - 1;
}

void Interconnection::connect(SignalRef source, std::size_t target, const RationalTF& gain) {
    const std::size_t limit = source.kind == SignalRef::Kind::input ? input_count() : signal_count();
    if (source.index >= limit || target >= signal_count()) throw DimensionError("connection refers to unknown signal");
    if (gain.is_zero()) return;
    connections_.push_back({source, target, gain});
}

InterconnectionRealization Interconnection::realize(double max_condition) const {
    const auto ns = static_cast<Eigen::Index>(signal_count());
    const auto nw = static_cast<Eigen::Index>(input_count());

    std::vector<StateSpace> parts;
    parts.reserve(connections_.size());
    Eigen::Index nx = 0;
    for (const auto& c : connections_) {
        parts.push_back(distvrft::realize(c.gain));
        nx += parts.back().states();
    }

    Eigen::MatrixXd a_blk = Eigen::MatrixXd::Zero(nx, nx);
    Eigen::MatrixXd b_sig = Eigen::MatrixXd::Zero(nx, ns);
    Eigen::MatrixXd b_in = Eigen::MatrixXd::Zero(nx, nw);
    Eigen::MatrixXd c_x = Eigen::MatrixXd::Zero(ns, nx);
    Eigen::MatrixXd d_sig = Eigen::MatrixXd::Zero(ns, ns);
    Eigen::MatrixXd d_in = Eigen::MatrixXd::Zero(ns, nw);

    Eigen::Index offset = 0;
    for (std::size_t k = 0; k < connections_.size(); ++k) {
        const auto& c = connections_[k];
        const auto& p = parts[k];
        const Eigen::Index n = p.states();
        const auto tgt = static_cast<Eigen::Index>(c.target);
        const auto src = static_cast<Eigen::Index>(c.source.index);
        a_blk.block(offset, offset, n, n) = p.A;
        c_x.block(tgt, offset, 1, n) += p.C;
        if (c.source.kind == SignalRef::Kind::signal) {
            b_sig.block(offset, src, n, 1) += p.B;
            d_sig(tgt, src) += p.D(0, 0);
        } else {
            b_in.block(offset, src, n, 1) += p.B;
            d_in(tgt, src) += p.D(0, 0);
        }
        offset += n;
    }

    // v = C_x x + D_sig v + D_in w  =>  v = M^{-1} (C_x x + D_in w)
    const Eigen::MatrixXd loop = Eigen::MatrixXd::Identity(ns, ns) - d_sig;
    double cond = 1.0;
    if (ns > 0) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(loop);
        const auto& sv = svd.singularValues();
        const double smin = sv(sv.size() - 1);
        cond = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
    }
    if (!(cond < max_condition)) {
        throw IllPosedLoopError("ill-posed algebraic loop, cond(I - D) = " + std::to_string(cond));
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(loop);
    const Eigen::MatrixXd c_v = ns > 0 ? Eigen::MatrixXd(lu.solve(c_x)) : Eigen::MatrixXd::Zero(0, nx);
    const Eigen::MatrixXd d_v = ns > 0 ? Eigen::MatrixXd(lu.solve(d_in)) : Eigen::MatrixXd::Zero(0, nw);

    InterconnectionRealization out;
    out.system.A = a_blk + b_sig * c_v;
    out.system.B = b_in + b_sig * d_v;
    out.system.C = c_v;
    out.system.D = d_v;
    out.loop_condition = cond;
    return out;
}

Eigen::MatrixXcd Interconnection::transfer(double omega) const {
    const auto ns = static_cast<Eigen::Index>(signal_count());
    const auto nw = static_cast<Eigen::Index>(input_count());
    Eigen::MatrixXcd h_sig = Eigen::MatrixXcd::Zero(ns, ns);
    Eigen::MatrixXcd h_in = Eigen::MatrixXcd::Zero(ns, nw);
    for (const auto& c : connections_) {
        const auto g = freq_response(c.gain, omega);
        const auto tgt = static_cast<Eigen::Index>(c.target);
        const auto src = static_cast<Eigen::Index>(c.source.index);
        if (c.source.kind == SignalRef::Kind::signal) h_sig(tgt, src) += g;
        else h_in(tgt, src) += g;
    }
    const Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(ns, ns) - h_sig;
    const Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
    if (!lu.isInvertible()) throw IllPosedLoopError("interconnection singular at omega = " + std::to_string(omega));
    return lu.solve(h_in);
}

}  // namespace distvrft
