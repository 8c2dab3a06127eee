#include "distvrft/standard_networks.hpp"

namespace distvrft {

namespace {

RationalTF first_order(double gain, double pole) { return {Polynomial{gain}, Polynomial{1.0, -pole}}; }

}  // namespace

Graph grid_graph(std::size_t rows, std::size_t cols) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const std::size_t i = r * cols + c;
            if (c + 1 < cols) edges.emplace_back(i, i + 1);
            if (r + 1 < rows) edges.emplace_back(i, i + cols);
        }
    }
    return Graph(rows * cols, edges);
}

NetworkSpec two_node_network(const TwoNodeParams& p) {
    NetworkSpec spec;
    spec.graph = Graph(2, {{0, 1}});
    for (std::size_t i = 0; i < 2; ++i) {
        const std::size_t j = 1 - i;
        SubsystemSpec sub;
        sub.G = first_order(p.c[i], p.a[i]);
        sub.W[j] = first_order(p.d[i], p.a[i]);
        spec.subsystems.push_back(sub);
        ReferenceNodeSpec ref;
        ref.T = first_order(1.0 - p.gamma[i], p.gamma[i]);
        spec.reference.push_back(ref);
    }
    return spec;
}

NetworkSpec two_node_coupled_network(const TwoNodeParams& p, double q_gain, double p_gain) {
    NetworkSpec spec = two_node_network(p);
    for (std::size_t i = 0; i < 2; ++i) {
        const std::size_t j = 1 - i;
        spec.reference[i].Q[j] = first_order(q_gain, p.gamma[i]);
        spec.reference[i].P[j] = RationalTF(p_gain);
    }
    return spec;
}

std::vector<double> default_nine_node_poles() {
    std::vector<double> a(9);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = (0.5 + static_cast<double>(i)) / 10.0;
    return a;
}

NetworkSpec nine_node_network(const std::vector<double>& poles) {
    NetworkSpec spec;
    spec.graph = grid_graph(3, 3);
    for (std::size_t i = 0; i < 9; ++i) {
        SubsystemSpec sub;
        sub.G = first_order(1.0, poles.at(i));
        for (std::size_t j : spec.graph.neighbors(i)) sub.W[j] = first_order(0.1, poles[i]);
        spec.subsystems.push_back(sub);
        spec.reference.push_back({first_order(0.4, 0.6), {}, {}});
    }
    return spec;
}

std::vector<std::pair<std::size_t, std::size_t>> nine_node_reduced_links() {
    return {{0, 1}, {2, 5}, {7, 8}, {3, 6}};
}

}  // namespace distvrft
