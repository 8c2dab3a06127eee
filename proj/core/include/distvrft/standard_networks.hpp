#pragma once

#include <array>
#include <utility>
#include <vector>

#include "distvrft/network.hpp"

namespace distvrft {

// rows x cols lattice, node r*cols + c linked to its horizontal and vertical neighbours.
Graph grid_graph(std::size_t rows, std::size_t cols);

// Two first-order processes coupled through their outputs, decoupled first-order
// reference model: G_i = c_i/(q - a_i), W_ij = d_i/(q - a_i), T_i = (1 - γ_i)/(q - γ_i).
struct TwoNodeParams {
    std::array<double, 2> c{1.0, 1.0};
    std::array<double, 2> d{0.1, 0.1};
    std::array<double, 2> a{0.5, 0.7};
    std::array<double, 2> gamma{0.6, 0.6};
};
NetworkSpec two_node_network(const TwoNodeParams& p = {});

// Same plant with a coupled reference model: Q_ij = q_gain/(q - γ_i) and constant P_ij = p_gain.
NetworkSpec two_node_coupled_network(const TwoNodeParams& p = {}, double q_gain = 0.2, double p_gain = 0.5);

// Pole locations a_i = 0.05 + 0.1 (i - 1) used by nine_node_network().
std::vector<double> default_nine_node_poles();

// 3x3 grid with G_i = 1/(q - a_i), W_ij = 0.1/(q - a_i), T_i = 0.4/(q - 0.6).
NetworkSpec nine_node_network(const std::vector<double>& poles = default_nine_node_poles());

// Four controller links removed from the 3x3 grid (0-based): 0-1, 2-5, 7-8, 3-6.
// The remaining eight links form a spanning tree.
std::vector<std::pair<std::size_t, std::size_t>> nine_node_reduced_links();

}  // namespace distvrft
