#include "distvrft/network.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "distvrft/errors.hpp"

namespace distvrft {

namespace {

std::string node_label(std::size_t i) { return std::to_string(i + 1); }

bool is_exactly_one(const RationalTF& a) { return a == RationalTF::one(); }

Eigen::MatrixXcd plant_coupling(const NetworkSpec& spec, double omega) {
    const auto n = static_cast<Eigen::Index>(spec.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t i = 0; i < spec.size(); ++i) {
        for (std::size_t j : spec.graph.neighbors(i)) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                freq_response(spec.subsystems[i].coupling(j), omega) *
                freq_response(spec.subsystems[j].output_filter(i), omega);
        }
    }
    return m;
}

Eigen::MatrixXcd reference_coupling(const NetworkSpec& spec, double omega) {
    const auto n = static_cast<Eigen::Index>(spec.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t i = 0; i < spec.size(); ++i) {
        for (std::size_t j : spec.graph.neighbors(i)) {
            const auto& q = spec.reference[i].coupling(j);
            if (q.is_zero()) continue;
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                freq_response(q, omega) * freq_response(spec.reference[j].output_filter(i), omega);
        }
    }
    return m;
}

Eigen::MatrixXcd reference_diagonal(const NetworkSpec& spec, double omega) {
    const auto n = static_cast<Eigen::Index>(spec.size());
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t i = 0; i < spec.size(); ++i)
        t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = freq_response(spec.reference[i].T, omega);
    return t;
}

Eigen::MatrixXcd solve_or_throw(const Eigen::MatrixXcd& lhs, const Eigen::MatrixXcd& rhs, double omega) {
    const Eigen::FullPivLU<Eigen::MatrixXcd> lu(lhs);
    if (!lu.isInvertible()) throw IllPosedLoopError("interconnection singular at omega = " + std::to_string(omega));
    return lu.solve(rhs);
}

}  // namespace

Graph::Graph(std::size_t node_count, const std::vector<std::pair<std::size_t, std::size_t>>& edges)
    : node_count_(node_count), neighbors_(node_count) {
    for (auto [i, j] : edges) {
        if (i >= node_count || j >= node_count) throw SpecError("edge endpoint out of range");
        if (i == j) throw SpecError("self-loop on node " + node_label(i));
        edges_.emplace_back(std::min(i, j), std::max(i, j));
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    for (auto [i, j] : edges_) {
        neighbors_[i].push_back(j);
        neighbors_[j].push_back(i);
    }
    for (auto& n : neighbors_) std::sort(n.begin(), n.end());
}

bool Graph::has_edge(std::size_t i, std::size_t j) const {
    return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(std::min(i, j), std::max(i, j)));
}

std::vector<DirectedEdge> Graph::directed_edges() const {
    std::vector<DirectedEdge> out;
    for (auto [i, j] : edges_) {
        out.push_back({i, j});
        out.push_back({j, i});
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool Graph::connected() const {
    if (node_count_ == 0) return true;
    std::vector<bool> seen(node_count_, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        const auto i = stack.back();
        stack.pop_back();
        for (auto j : neighbors_[i]) {
            if (!seen[j]) {
                seen[j] = true;
                stack.push_back(j);
            }
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

RationalTF SubsystemSpec::coupling(std::size_t j) const {
    auto it = W.find(j);
    return it == W.end() ? RationalTF::zero() : it->second;
}

RationalTF SubsystemSpec::output_filter(std::size_t j) const {
    auto it = F.find(j);
    return it == F.end() ? RationalTF::one() : it->second;
}

RationalTF ReferenceNodeSpec::coupling(std::size_t j) const {
    auto it = Q.find(j);
    return it == Q.end() ? RationalTF::zero() : it->second;
}

RationalTF ReferenceNodeSpec::output_filter(std::size_t j) const {
    auto it = P.find(j);
    return it == P.end() ? RationalTF::zero() : it->second;
}

bool ReferenceNodeSpec::decoupled() const {
    auto all_zero = [](const auto& m) {
        return std::all_of(m.begin(), m.end(), [](const auto& kv) { return kv.second.is_zero(); });
    };
    return all_zero(Q) && all_zero(P);
}

void NetworkSpec::check_structure() const {
    const std::size_t n = size();
    if (subsystems.size() != n || reference.size() != n) throw SpecError("per-node entries do not match node count");
    auto confined = [this](std::size_t i, const std::map<std::size_t, RationalTF>& m, const char* what) {
        for (const auto& [j, tf] : m) {
            if (!graph.has_edge(i, j)) {
                throw SpecError(std::string(what) + " entry for non-neighbour pair (" + node_label(i) + ", " +
                                node_label(j) + ")");
            }
        }
    };
    for (std::size_t i = 0; i < n; ++i) {
        const auto& sub = subsystems[i];
        if (sub.G.is_zero()) throw SpecError("G_" + node_label(i) + " is zero");
        confined(i, sub.W, "W");
        confined(i, sub.F, "F");
        confined(i, reference[i].Q, "Q");
        confined(i, reference[i].P, "P");
        for (std::size_t j : graph.neighbors(i)) {
            if (!sub.W.contains(j)) throw SpecError("missing W_" + node_label(i) + "_" + node_label(j));
        }
        if (reference[i].T.is_zero()) throw SpecError("T_" + node_label(i) + " is zero");
    }
}

bool NetworkSpec::reference_decoupled() const {
    return std::all_of(reference.begin(), reference.end(), [](const auto& r) { return r.decoupled(); });
}

bool NetworkSpec::unit_output_filters() const {
    for (const auto& sub : subsystems)
        for (const auto& [j, f] : sub.F)
            if (!is_exactly_one(f)) return false;
    return true;
}

NetworkSpec NetworkSpec::with_unit_output_filters() const {
    NetworkSpec out = *this;
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j : graph.neighbors(i)) {
            out.subsystems[i].W[j] = subsystems[i].coupling(j) * subsystems[j].output_filter(i);
        }
    }
    for (auto& sub : out.subsystems) sub.F.clear();
    return out;
}

std::vector<double> frequency_grid(std::size_t n) {
    std::vector<double> grid(n);
    for (std::size_t k = 0; k < n; ++k) grid[k] = std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
    return grid;
}

ValidationReport validate_network(const NetworkSpec& spec, const std::vector<double>& grid, double threshold) {
    spec.check_structure();
    ValidationReport rep;
    rep.min_plant_det = std::numeric_limits<double>::infinity();
    rep.min_reference_det = std::numeric_limits<double>::infinity();
    rep.min_matching_det = std::numeric_limits<double>::infinity();
    const auto n = static_cast<Eigen::Index>(spec.size());
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(n, n);

    for (double w : grid) {
        try {
            const Eigen::MatrixXcd plant = eye - plant_coupling(spec, w);
            const Eigen::MatrixXcd ref = eye - reference_coupling(spec, w);
            const double ref_det = std::abs(ref.determinant());
            rep.min_plant_det = std::min(rep.min_plant_det, std::abs(plant.determinant()));
            rep.min_reference_det = std::min(rep.min_reference_det, ref_det);
            if (ref_det > 0.0) {
                const Eigen::MatrixXcd matching = ref.fullPivLu().solve(reference_diagonal(spec, w)) - eye;
                const double md = std::abs(matching.determinant());
                rep.min_matching_det = std::min(rep.min_matching_det, md);
                rep.max_matching_det = std::max(rep.max_matching_det, md);
            }
        } catch (const PoleOnGridError&) {
            ++rep.skipped_points;
        }
    }
    rep.plant_well_posed = rep.min_plant_det >= threshold;
    rep.reference_well_posed = rep.min_reference_det >= threshold;
    rep.reference_differs_from_identity = rep.max_matching_det >= threshold;
    return rep;
}

Interconnection plant_interconnection(const NetworkSpec& spec) {
    spec.check_structure();
    Interconnection net;
    const std::size_t n = spec.size();
    for (std::size_t i = 0; i < n; ++i) net.add_input("u_" + node_label(i));
    for (std::size_t i = 0; i < n; ++i) net.add_signal("y_" + node_label(i));
    for (std::size_t i = 0; i < n; ++i) {
        const auto& sub = spec.subsystems[i];
        net.connect(SignalRef::input(i), i, sub.G);
        for (std::size_t j : spec.graph.neighbors(i)) {
            // s_ij = o_ji = F_ji y_j
            const RationalTF f = spec.subsystems[j].output_filter(i);
            if (is_exactly_one(f)) {
                net.connect(SignalRef::signal(j), i, sub.coupling(j));
            } else {
                const auto s = net.add_signal("s_" + node_label(i) + "_" + node_label(j));
                net.connect(SignalRef::signal(j), s, f);
                net.connect(SignalRef::signal(s), i, sub.coupling(j));
            }
        }
    }
    return net;
}

Interconnection reference_interconnection(const NetworkSpec& spec) {
    spec.check_structure();
    Interconnection net;
    const std::size_t n = spec.size();
    for (std::size_t i = 0; i < n; ++i) net.add_input("r_" + node_label(i));
    for (std::size_t i = 0; i < n; ++i) net.add_signal("yd_" + node_label(i));
    for (std::size_t i = 0; i < n; ++i) {
        const auto& ref = spec.reference[i];
        net.connect(SignalRef::input(i), i, ref.T);
        for (std::size_t j : spec.graph.neighbors(i)) {
            const RationalTF q = ref.coupling(j);
            const RationalTF p = spec.reference[j].output_filter(i);
            if (q.is_zero() || p.is_zero()) continue;
            // k_ij = p_ji = P_ji y^d_j
            const auto k = net.add_signal("k_" + node_label(i) + "_" + node_label(j));
            net.connect(SignalRef::signal(j), k, p);
            net.connect(SignalRef::signal(k), i, q);
        }
    }
    return net;
}

namespace {

MultiSignal simulate_first_outputs(const Interconnection& net, const MultiSignal& inputs, std::size_t count) {
    if (inputs.size() != net.input_count()) throw DimensionError("input channel count does not match network");
    const auto realization = net.realize();
    const Eigen::MatrixXd out = simulate(realization.system, to_matrix(inputs));
    MultiSignal signals = to_signals(out.topRows(static_cast<Eigen::Index>(count)));
    for (auto& s : signals) s = Signal(std::move(s.data()), inputs.front().start_index());
    return signals;
}

}  // namespace

MultiSignal simulate_plant(const NetworkSpec& spec, const MultiSignal& u, const MultiSignal& noise) {
    MultiSignal y = simulate_first_outputs(plant_interconnection(spec), u, spec.size());
    if (!noise.empty()) {
        if (noise.size() != y.size()) throw DimensionError("noise channel count does not match network");
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += noise[i];
    }
    return y;
}

MultiSignal simulate_reference(const NetworkSpec& spec, const MultiSignal& r) {
    return simulate_first_outputs(reference_interconnection(spec), r, spec.size());
}

Eigen::MatrixXcd plant_transfer_eval(const NetworkSpec& spec, double omega) {
    const auto n = static_cast<Eigen::Index>(spec.size());
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t i = 0; i < spec.size(); ++i)
        g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = freq_response(spec.subsystems[i].G, omega);
    return solve_or_throw(Eigen::MatrixXcd::Identity(n, n) - plant_coupling(spec, omega), g, omega);
}

Eigen::MatrixXcd reference_transfer_eval(const NetworkSpec& spec, double omega) {
    const auto n = static_cast<Eigen::Index>(spec.size());
    return solve_or_throw(Eigen::MatrixXcd::Identity(n, n) - reference_coupling(spec, omega),
                          reference_diagonal(spec, omega), omega);
}

}  // namespace distvrft
