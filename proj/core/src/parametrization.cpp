#include "distvrft/parametrization.hpp"

#include <algorithm>

#include "distvrft/errors.hpp"

namespace distvrft {

namespace {

RationalTF combine(const std::vector<RationalTF>& basis, const Eigen::VectorXd& rho, std::size_t offset) {
    if (static_cast<std::size_t>(rho.size()) < offset + basis.size()) throw DimensionError("parameter vector too short");
    RationalTF sum;
    for (std::size_t k = 0; k < basis.size(); ++k) {
        const double c = rho(static_cast<Eigen::Index>(offset + k));
        if (c == 0.0) continue;
        sum = sum + RationalTF(basis[k].num() * c, basis[k].den());
    }
    return sum;
}

std::complex<double> combine_response(const std::vector<RationalTF>& basis, const Eigen::VectorXd& rho,
                                      std::size_t offset, double omega) {
    std::complex<double> acc = 0.0;
    for (std::size_t k = 0; k < basis.size(); ++k)
        acc += rho(static_cast<Eigen::Index>(offset + k)) * freq_response(basis[k], omega);
    return acc;
}

const std::vector<RationalTF>& basis_or_empty(const std::map<std::size_t, std::vector<RationalTF>>& m, std::size_t j) {
    static const std::vector<RationalTF> empty;
    auto it = m.find(j);
    return it == m.end() ? empty : it->second;
}

}  // namespace

std::size_t NodeParametrization::parameter_count() const {
    std::size_t n = diagonal.size();
    for (const auto& [j, b] : coupling_w) n += b.size();
    for (const auto& [j, b] : coupling_q) n += b.size();
    return n;
}

std::size_t NodeParametrization::w_offset(std::size_t j) const {
    std::size_t off = diagonal.size();
    for (const auto& [k, b] : coupling_w) {
        if (k == j) return off;
        off += b.size();
    }
    return off;
}

std::size_t NodeParametrization::q_offset(std::size_t j) const {
    std::size_t off = diagonal.size();
    for (const auto& [k, b] : coupling_w) off += b.size();
    for (const auto& [k, b] : coupling_q) {
        if (k == j) return off;
        off += b.size();
    }
    return off;
}

RationalTF NodeParametrization::diagonal_entry(const Eigen::VectorXd& rho) const { return combine(diagonal, rho, 0); }

RationalTF NodeParametrization::w_entry(std::size_t j, const Eigen::VectorXd& rho) const {
    return combine(basis_or_empty(coupling_w, j), rho, w_offset(j));
}

RationalTF NodeParametrization::q_entry(std::size_t j, const Eigen::VectorXd& rho) const {
    return combine(basis_or_empty(coupling_q, j), rho, q_offset(j));
}

std::complex<double> NodeParametrization::diagonal_response(const Eigen::VectorXd& rho, double omega) const {
    return combine_response(diagonal, rho, 0, omega);
}

std::complex<double> NodeParametrization::w_response(std::size_t j, const Eigen::VectorXd& rho, double omega) const {
    return combine_response(basis_or_empty(coupling_w, j), rho, w_offset(j), omega);
}

std::complex<double> NodeParametrization::q_response(std::size_t j, const Eigen::VectorXd& rho, double omega) const {
    return combine_response(basis_or_empty(coupling_q, j), rho, q_offset(j), omega);
}

bool ControllerClass::link_present(std::size_t i, std::size_t j) const {
    if (decentralized) return false;
    return std::none_of(removed_links.begin(), removed_links.end(), [i, j](const auto& e) {
        return (e.first == i && e.second == j) || (e.first == j && e.second == i);
    });
}

std::vector<RationalTF> mirror_basis(const RationalTF& entry) {
    std::vector<RationalTF> basis;
    if (entry.is_zero()) return basis;
    for (int p = entry.num().degree(); p >= 0; --p) basis.emplace_back(Polynomial::monomial(p), entry.den());
    return basis;
}

ControllerParametrization mirror_parametrization(const DistributedController& ideal, const Graph& graph,
                                                 const ControllerClass& cls) {
    if (ideal.nodes.size() != graph.node_count()) throw DimensionError("controller does not match graph");
    ControllerParametrization param;
    for (std::size_t i = 0; i < graph.node_count(); ++i) {
        const auto& node = ideal.nodes[i];
        NodeParametrization np;
        np.diagonal = mirror_basis(node.diagonal);
        for (std::size_t j : graph.neighbors(i)) {
            if (!cls.link_present(i, j)) continue;
            if (auto b = mirror_basis(node.w(j)); !b.empty()) np.coupling_w[j] = std::move(b);
            if (auto b = mirror_basis(node.q(j)); !b.empty()) np.coupling_q[j] = std::move(b);
        }
        param.nodes.push_back(std::move(np));
    }
    return param;
}

DistributedController controller_from_parameters(const DistributedController& reference_rows,
                                                 const ControllerParametrization& param,
                                                 const std::vector<Eigen::VectorXd>& rho) {
    if (param.nodes.size() != reference_rows.nodes.size() || rho.size() != param.nodes.size()) {
        throw DimensionError("parametrization, parameters and controller disagree in node count");
    }
    DistributedController out;
    for (std::size_t i = 0; i < param.nodes.size(); ++i) {
        const auto& np = param.nodes[i];
        if (static_cast<std::size_t>(rho[i].size()) != np.parameter_count()) {
            throw DimensionError("parameter vector of node " + std::to_string(i + 1) + " has wrong length");
        }
        ControllerNode node = reference_rows.nodes[i];
        node.diagonal = np.diagonal_entry(rho[i]);
        node.coupling_w.clear();
        node.coupling_q.clear();
        for (const auto& [j, b] : np.coupling_w) {
            if (auto e = np.w_entry(j, rho[i]); !e.is_zero()) node.coupling_w[j] = e;
        }
        for (const auto& [j, b] : np.coupling_q) {
            if (auto e = np.q_entry(j, rho[i]); !e.is_zero()) node.coupling_q[j] = e;
        }
        out.nodes.push_back(std::move(node));
    }
    return out;
}

}  // namespace distvrft
