#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "distvrft/rational_tf.hpp"

namespace distvrft {

// Local controller of node i, inputs (e_i, s^c_ij, k^c_ij) and outputs (u_i, o^c_ij, p^c_ij).
// Interconnection with neighbour j: s^c_ij = o^c_ji and k^c_ij = p^c_ji.
// Missing map entries are structural zeros.
struct ControllerNode {
    RationalTF diagonal;                                      // e_i -> u_i
    std::map<std::size_t, RationalTF> coupling_w;             // s^c_ij -> u_i
    std::map<std::size_t, RationalTF> coupling_q;             // k^c_ij -> u_i
    std::map<std::size_t, RationalTF> out_o;                  // e_i -> o^c_ij
    std::map<std::pair<std::size_t, std::size_t>, RationalTF> out_o_k;  // (j, h): k^c_ih -> o^c_ij
    std::map<std::size_t, RationalTF> out_p;                  // e_i -> p^c_ij
    std::map<std::pair<std::size_t, std::size_t>, RationalTF> out_p_k;  // (j, h): k^c_ih -> p^c_ij

    RationalTF w(std::size_t j) const;
    RationalTF q(std::size_t j) const;
};

struct DistributedController {
    std::vector<ControllerNode> nodes;
};

}  // namespace distvrft
