#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "distvrft/controller.hpp"
#include "distvrft/network.hpp"
#include "distvrft/rational_tf.hpp"

namespace distvrft {

// Linear-in-parameters basis for the identified entries of one local controller.
// Parameters are ordered: diagonal basis, then coupling_w bases by ascending
// neighbour, then coupling_q bases by ascending neighbour. Neighbours without
// a basis are structural zeros.
struct NodeParametrization {
    std::vector<RationalTF> diagonal;
    std::map<std::size_t, std::vector<RationalTF>> coupling_w;
    std::map<std::size_t, std::vector<RationalTF>> coupling_q;

    std::size_t parameter_count() const;
    // Offsets of each block into the parameter vector.
    std::size_t w_offset(std::size_t j) const;
    std::size_t q_offset(std::size_t j) const;

    RationalTF diagonal_entry(const Eigen::VectorXd& rho) const;
    RationalTF w_entry(std::size_t j, const Eigen::VectorXd& rho) const;
    RationalTF q_entry(std::size_t j, const Eigen::VectorXd& rho) const;

    // Entry values at e^{jω} by direct summation of the basis responses.
    std::complex<double> diagonal_response(const Eigen::VectorXd& rho, double omega) const;
    std::complex<double> w_response(std::size_t j, const Eigen::VectorXd& rho, double omega) const;
    std::complex<double> q_response(std::size_t j, const Eigen::VectorXd& rho, double omega) const;
};

struct ControllerParametrization {
    std::vector<NodeParametrization> nodes;
};

// Controller class: which communication links the controller may use.
struct ControllerClass {
    std::string name = "full";
    bool decentralized = false;
    std::vector<std::pair<std::size_t, std::size_t>> removed_links;

    bool link_present(std::size_t i, std::size_t j) const;

    static ControllerClass full() { return {}; }
    static ControllerClass decentralized_class() { return {"decentralized", true, {}}; }
    static ControllerClass reduced(std::vector<std::pair<std::size_t, std::size_t>> removed) {
        return {"reduced", false, std::move(removed)};
    }
};

// Basis mirroring an ideal entry N/D: {q^m/D, ..., q/D, 1/D} with m = deg N.
// Empty for a zero entry.
std::vector<RationalTF> mirror_basis(const RationalTF& entry);

// Per node: mirrored bases for the diagonal entry and for the coupling entries of
// neighbours linked in `cls`; coupling entries of removed links are structural zeros.
ControllerParametrization mirror_parametrization(const DistributedController& ideal, const Graph& graph,
                                                 const ControllerClass& cls);

// Controller whose u-rows are the parametrized entries at rho and whose o^c/p^c rows are
// taken from `reference_rows` (the ideal controller built from the reference model).
DistributedController controller_from_parameters(const DistributedController& reference_rows,
                                                 const ControllerParametrization& param,
                                                 const std::vector<Eigen::VectorXd>& rho);

}  // namespace distvrft
