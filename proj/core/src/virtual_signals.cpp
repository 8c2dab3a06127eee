#include "distvrft/virtual_signals.hpp"

#include <algorithm>

#include <Eigen/Dense>

#include "distvrft/errors.hpp"
#include "distvrft/state_space.hpp"

namespace distvrft {

namespace {

std::size_t checked_relative_degree(const RationalTF& t) {
    if (t.is_zero()) throw SpecError("reference transfer T_i is zero");
    const int rd = t.relative_degree();
    if (rd < 0) throw ImproperTransferError("reference transfer T_i is improper");
    return static_cast<std::size_t>(rd);
}

}  // namespace

VirtualData virtual_references_distributed(const NetworkSpec& spec, const MultiSignal& y) {
    spec.check_structure();
    if (y.size() != spec.size()) throw DimensionError("output data does not match node count");
    const std::size_t n = common_horizon(y);
    const std::size_t nodes = spec.size();

    VirtualData vd;
    // Pass 1: p_ij = P_ij y_i.
    for (std::size_t i = 0; i < nodes; ++i) {
        for (std::size_t j : spec.graph.neighbors(i)) vd.p_bar[{i, j}] = filter(spec.reference[i].output_filter(j), y[i]);
    }

    // Pass 2: T_i r_i = y_i - sum_j Q_ij p_ji.
    std::size_t horizon = n;
    for (std::size_t i = 0; i < nodes; ++i) {
        const auto& ref = spec.reference[i];
        const std::size_t rd = checked_relative_degree(ref.T);
        if (n <= rd) throw DimensionError("data horizon too short for the reference model inversion");
        Signal rhs = y[i];
        for (std::size_t j : spec.graph.neighbors(i)) {
            const RationalTF q = ref.coupling(j);
            if (!q.is_zero()) rhs -= filter(q, vd.p_bar.at({j, i}));
        }
        vd.r_bar.push_back(inverse_filter(ref.T, rhs));
        if (has_unstable_inverse(ref.T)) vd.unstable_inverse_nodes.push_back(i);
        horizon = std::min(horizon, n - rd);
    }

    vd.horizon = horizon;
    vd.r_bar = truncate(vd.r_bar, horizon);
    for (std::size_t i = 0; i < nodes; ++i) vd.e_bar.push_back(vd.r_bar[i] - y[i].head(horizon));
    for (auto& [edge, s] : vd.p_bar) s = s.head(horizon);
    vd.o_bar = virtual_controller_interconnections(spec, vd.e_bar, vd.p_bar);
    return vd;
}

MultiSignal virtual_references_centralized(const NetworkSpec& spec, const MultiSignal& y) {
    spec.check_structure();
    const std::size_t nodes = spec.size();
    if (y.size() != nodes) throw DimensionError("output data does not match node count");
    const std::size_t n = common_horizon(y);

    std::vector<std::size_t> rd(nodes);
    std::vector<std::size_t> unknown_offset(nodes + 1, 0);
    std::vector<std::size_t> equation_offset(nodes + 1, 0);
    for (std::size_t i = 0; i < nodes; ++i) {
        rd[i] = checked_relative_degree(spec.reference[i].T);
        if (n <= rd[i]) throw DimensionError("data horizon too short for the reference model inversion");
        unknown_offset[i + 1] = unknown_offset[i] + (n - rd[i]);
        equation_offset[i + 1] = equation_offset[i] + (n - rd[i]);
    }

    // Markov parameters of the r -> y^d map: h_0 = D, h_k = C A^{k-1} B.
    const auto realization = reference_interconnection(spec).realize();
    const auto& sys = realization.system;
    const auto l = static_cast<Eigen::Index>(nodes);
    const Eigen::MatrixXd c = sys.C.topRows(l);
    const Eigen::MatrixXd d = sys.D.topRows(l);
    std::vector<Eigen::MatrixXd> markov;
    markov.reserve(n);
    markov.push_back(d);
    Eigen::MatrixXd power_b = sys.B;
    for (std::size_t k = 1; k < n; ++k) {
        markov.push_back(c * power_b);
        power_b = sys.A * power_b;
    }

    const auto rows = static_cast<Eigen::Index>(equation_offset[nodes]);
    const auto cols = static_cast<Eigen::Index>(unknown_offset[nodes]);
    Eigen::MatrixXd toeplitz = Eigen::MatrixXd::Zero(rows, cols);
    Eigen::VectorXd rhs(rows);
    for (std::size_t i = 0; i < nodes; ++i) {
        for (std::size_t t = rd[i]; t < n; ++t) {
            const auto row = static_cast<Eigen::Index>(equation_offset[i] + (t - rd[i]));
            rhs(row) = y[i][t];
            for (std::size_t j = 0; j < nodes; ++j) {
                for (std::size_t s = 0; s < n - rd[j] && s <= t; ++s) {
                    toeplitz(row, static_cast<Eigen::Index>(unknown_offset[j] + s)) =
                        markov[t - s](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                }
            }
        }
    }

    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(toeplitz);
    if (qr.rank() < cols) throw IllPosedLoopError("reference operator is singular on the data horizon");
    const Eigen::VectorXd r = qr.solve(rhs);

    const std::size_t horizon = n - *std::max_element(rd.begin(), rd.end());
    MultiSignal out;
    for (std::size_t i = 0; i < nodes; ++i) {
        std::vector<double> samples(horizon);
        for (std::size_t s = 0; s < horizon; ++s) samples[s] = r(static_cast<Eigen::Index>(unknown_offset[i] + s));
        out.emplace_back(std::move(samples), y[i].start_index());
    }
    return out;
}

EdgeSignals virtual_controller_interconnections(const NetworkSpec& spec, const MultiSignal& e_bar,
                                                const EdgeSignals& p_bar) {
    if (e_bar.size() != spec.size()) throw DimensionError("tracking errors do not match node count");
    const std::size_t horizon = common_horizon(e_bar);
    EdgeSignals out;
    for (std::size_t j = 0; j < spec.size(); ++j) {
        const auto& ref = spec.reference[j];
        const RationalTF one_minus_t = RationalTF::one() - ref.T;
        if (one_minus_t.is_zero()) throw SpecError("T_" + std::to_string(j + 1) + " = 1");
        Signal o = filter(ref.T / one_minus_t, e_bar[j]);
        for (std::size_t h : spec.graph.neighbors(j)) {
            const RationalTF q = ref.coupling(h);
            if (q.is_zero()) continue;
            auto it = p_bar.find({h, j});
            if (it == p_bar.end()) throw DimensionError("missing virtual interconnection p_bar");
            if (it->second.size() != horizon) throw DimensionError("virtual interconnection horizon mismatch");
            o += filter(q / one_minus_t, it->second);
        }
        for (std::size_t i : spec.graph.neighbors(j)) out[{j, i}] = o;
    }
    return out;
}

}  // namespace distvrft
