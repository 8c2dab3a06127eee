#pragma once

#include <vector>

#include "distvrft/network.hpp"
#include "distvrft/signal.hpp"

namespace distvrft {

// Virtual experiment signals, all truncated to a common horizon.
struct VirtualData {
    MultiSignal r_bar;
    MultiSignal e_bar;  // r_bar - y
    EdgeSignals p_bar;  // key (i, j): P_ij y_i, sent from node i to j
    EdgeSignals o_bar;  // key (j, i): virtual controller output o^c_ji, sent from node j to i
    std::size_t horizon = 0;
    // Nodes whose T_i has a zero on or outside the unit circle.
    std::vector<std::size_t> unstable_inverse_nodes;
};

// Two passes over the nodes: every node filters its output through P_ij, then each node
// subtracts the neighbour contributions Q_ij p_ji and inverts T_i. The data-driven path
// assumes F = 1 (apply NetworkSpec::with_unit_output_filters first).
VirtualData virtual_references_distributed(const NetworkSpec& spec, const MultiSignal& y);

// Solves y = (I - Q Δ P)^{-1} T r for r over the whole network at once, from the
// block-Toeplitz (Markov parameter) form of the reference model. Equations for node i
// are imposed from t = relative_degree(T_i) on, matching the distributed solve.
// Throws IllPosedLoopError when the stacked operator is singular.
MultiSignal virtual_references_centralized(const NetworkSpec& spec, const MultiSignal& y);

// o^c_ji = T_j/(1-T_j) e_j + sum_h Q_jh/(1-T_j) p_hj for every directed edge (j, i).
// Throws SpecError when some T_j = 1.
EdgeSignals virtual_controller_interconnections(const NetworkSpec& spec, const MultiSignal& e_bar,
                                                const EdgeSignals& p_bar);

}  // namespace distvrft
