#include "distvrft/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "distvrft/errors.hpp"
#include "distvrft/interconnection.hpp"

namespace distvrft {

namespace {

std::string idx(std::size_t i) { return std::to_string(i + 1); }

// Edges (i, j) whose o^c_ij and p^c_ij are consumed, directly or through other p^c rows.
struct ActiveLinks {
    std::set<DirectedEdge> o;
    std::set<DirectedEdge> p;
};

ActiveLinks active_links(const DistributedController& ctrl) {
    ActiveLinks act;
    const std::size_t n = ctrl.nodes.size();
    for (std::size_t j = 0; j < n; ++j) {
        for (const auto& [i, gain] : ctrl.nodes[j].coupling_w)
            if (!gain.is_zero()) act.o.insert({i, j});
        for (const auto& [i, gain] : ctrl.nodes[j].coupling_q)
            if (!gain.is_zero()) act.p.insert({i, j});
    }
    // A kept row of node i that reads k^c_ih needs p^c_hi.
    bool changed = true;
    while (changed) {
        changed = false;
        auto require = [&](std::size_t i, std::size_t h) {
            if (act.p.insert({h, i}).second) changed = true;
        };
        for (std::size_t i = 0; i < n; ++i) {
            const auto& node = ctrl.nodes[i];
            for (const auto& [key, gain] : node.out_o_k)
                if (!gain.is_zero() && act.o.contains({i, key.first})) require(i, key.second);
            for (const auto& [key, gain] : node.out_p_k)
                if (!gain.is_zero() && act.p.contains({i, key.first})) require(i, key.second);
        }
    }
    return act;
}

}  // namespace

namespace {

// Adds the controller rows: u_i (signal u_first + i) from e_i and the kept o^c/p^c signals.
// Returns the number of interconnection signals created.
std::size_t wire_controller(Interconnection& net, const DistributedController& ctrl, const std::vector<SignalRef>& e,
                            std::size_t u_first) {
    const std::size_t n = ctrl.nodes.size();
    const ActiveLinks act = active_links(ctrl);
    std::map<DirectedEdge, std::size_t> o_sig;
    std::map<DirectedEdge, std::size_t> p_sig;
    for (const auto& edge : act.o) o_sig[edge] = net.add_signal("oc_" + idx(edge.from) + "_" + idx(edge.to));
    for (const auto& edge : act.p) p_sig[edge] = net.add_signal("pc_" + idx(edge.from) + "_" + idx(edge.to));

    for (std::size_t i = 0; i < n; ++i) {
        const auto& node = ctrl.nodes[i];
        net.connect(e[i], u_first + i, node.diagonal);
        for (const auto& [j, gain] : node.coupling_w)
            if (!gain.is_zero()) net.connect(SignalRef::signal(o_sig.at({j, i})), u_first + i, gain);
        for (const auto& [j, gain] : node.coupling_q)
            if (!gain.is_zero()) net.connect(SignalRef::signal(p_sig.at({j, i})), u_first + i, gain);
    }

    auto wire_row = [&](std::size_t i, std::size_t target, std::size_t j, const std::map<std::size_t, RationalTF>& direct,
                        const std::map<std::pair<std::size_t, std::size_t>, RationalTF>& via_k) {
        if (auto it = direct.find(j); it != direct.end()) net.connect(e[i], target, it->second);
        for (const auto& [key, gain] : via_k) {
            if (key.first != j || gain.is_zero()) continue;
            net.connect(SignalRef::signal(p_sig.at({key.second, i})), target, gain);
        }
    };
    for (const auto& [edge, s] : o_sig)
        wire_row(edge.from, s, edge.to, ctrl.nodes[edge.from].out_o, ctrl.nodes[edge.from].out_o_k);
    for (const auto& [edge, s] : p_sig)
        wire_row(edge.from, s, edge.to, ctrl.nodes[edge.from].out_p, ctrl.nodes[edge.from].out_p_k);
    return o_sig.size() + p_sig.size();
}

}  // namespace

Interconnection controller_interconnection(const DistributedController& ctrl) {
    const std::size_t n = ctrl.nodes.size();
    Interconnection net;
    std::vector<SignalRef> e;
    for (std::size_t i = 0; i < n; ++i) e.push_back(SignalRef::input(net.add_input("e_" + idx(i))));
    for (std::size_t i = 0; i < n; ++i) net.add_signal("u_" + idx(i));
    wire_controller(net, ctrl, e, 0);
    return net;
}

ClosedLoopSystem assemble_closed_loop(const NetworkSpec& spec, const DistributedController& ctrl) {
    const std::size_t n = spec.size();
    if (ctrl.nodes.size() != n) throw DimensionError("controller and network differ in node count");

    Interconnection net;
    for (std::size_t i = 0; i < n; ++i) net.add_input("r_" + idx(i));
    for (std::size_t i = 0; i < n; ++i) net.add_input("v_" + idx(i));
    for (std::size_t i = 0; i < n; ++i) net.add_signal("y_" + idx(i));
    for (std::size_t i = 0; i < n; ++i) net.add_signal("u_" + idx(i));
    std::vector<SignalRef> e;
    for (std::size_t i = 0; i < n; ++i) e.push_back(SignalRef::signal(net.add_signal("e_" + idx(i))));

    for (std::size_t i = 0; i < n; ++i) {
        const auto& sub = spec.subsystems[i];
        net.connect(SignalRef::signal(n + i), i, sub.G);
        for (const auto& [j, w] : sub.W) net.connect(SignalRef::signal(j), i, w * spec.subsystems[j].output_filter(i));
        net.connect(SignalRef::input(i), e[i].index, RationalTF::one());
        net.connect(SignalRef::signal(i), e[i].index, -RationalTF::one());
        net.connect(SignalRef::input(n + i), e[i].index, -RationalTF::one());
    }
    const std::size_t links = wire_controller(net, ctrl, e, n);

    const auto real = net.realize();
    ClosedLoopSystem cls;
    cls.nodes = n;
    cls.loop_condition = real.loop_condition;
    cls.active_links = links;
    const auto outs = static_cast<Eigen::Index>(2 * n);
    cls.system.A = real.system.A;
    cls.system.B = real.system.B;
    cls.system.C = real.system.C.topRows(outs);
    cls.system.D = real.system.D.topRows(outs);
    return cls;
}

ClosedLoopResponse simulate_closed_loop(const ClosedLoopSystem& cls, const MultiSignal& r, const MultiSignal& noise) {
    const std::size_t n = cls.nodes;
    if (r.size() != n) throw DimensionError("reference must have one channel per node");
    const std::size_t len = common_horizon(r);
    if (!noise.empty() && (noise.size() != n || common_horizon(noise) != len))
        throw DimensionError("noise must match the reference dimensions");

    const auto nn = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd in = Eigen::MatrixXd::Zero(2 * nn, static_cast<Eigen::Index>(len));
    in.topRows(nn) = to_matrix(r);
    if (!noise.empty()) in.bottomRows(nn) = to_matrix(noise);
    const Eigen::MatrixXd out = simulate(cls.system, in);

    ClosedLoopResponse res;
    res.y = to_signals(out.topRows(nn));
    res.u = to_signals(out.bottomRows(nn));
    const double peak = out.topRows(nn).size() > 0 ? out.topRows(nn).cwiseAbs().maxCoeff() : 0.0;
    res.diverged = !(peak <= kDivergenceBound);
    return res;
}

double estimate_jmr(const MultiSignal& y, const MultiSignal& y_d) {
    if (y.size() != y_d.size()) throw DimensionError("node count mismatch");
    if (y.empty()) return 0.0;
    const std::size_t len = common_horizon(y);
    if (common_horizon(y_d) != len) throw DimensionError("horizon mismatch");
    if (len == 0) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i)
        for (std::size_t t = 0; t < len; ++t) acc += std::pow(y_d[i][t] - y[i][t], 2);
    return acc / static_cast<double>(len);
}

std::optional<Eigen::MatrixXcd> closed_loop_transfer(const ClosedLoopSystem& cls, double omega) {
    const auto nn = static_cast<Eigen::Index>(cls.nodes);
    const StateSpace sub{cls.system.A, cls.system.B.leftCols(nn), cls.system.C.topRows(nn),
                         cls.system.D.topLeftCorner(nn, nn)};
    return FrequencyEvaluator(sub)(omega);
}

PerformanceMetric performance_metric(const NetworkSpec& spec, const ClosedLoopSystem& cls,
                                     const std::vector<double>& grid) {
    const auto nn = static_cast<Eigen::Index>(cls.nodes);
    const StateSpace sub{cls.system.A, cls.system.B.leftCols(nn), cls.system.C.topRows(nn),
                         cls.system.D.topLeftCorner(nn, nn)};
    const FrequencyEvaluator eval(sub);
    PerformanceMetric m;
    for (double w : grid) {
        const auto ti = eval(w);
        if (!ti) {
            ++m.skipped;
            continue;
        }
        Eigen::MatrixXcd td;
        try {
            td = reference_transfer_eval(spec, w);
        } catch (const PoleOnGridError&) {
            ++m.skipped;
            continue;
        }
        const Eigen::MatrixXcd diff = *ti - td;
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff.adjoint() * diff, Eigen::EigenvaluesOnly);
        m.value = std::max(m.value, std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff())));
    }
    return m;
}

PerformanceMetric performance_metric(const NetworkSpec& spec, const DistributedController& ctrl,
                                     const std::vector<double>& grid) {
    return performance_metric(spec, assemble_closed_loop(spec, ctrl), grid);
}

}  // namespace distvrft
