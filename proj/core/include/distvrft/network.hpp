#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "distvrft/interconnection.hpp"
#include "distvrft/rational_tf.hpp"
#include "distvrft/signal.hpp"

namespace distvrft {

// Undirected graph without self-loops; nodes are 0..node_count-1.
class Graph {
public:
    Graph() = default;
    // Throws SpecError on self-loops or out-of-range endpoints; duplicate edges are merged.
    Graph(std::size_t node_count, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

    std::size_t node_count() const { return node_count_; }
    // Each edge once, as (min, max), sorted.
    const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }
    // Sorted neighbour set N_i.
    const std::vector<std::size_t>& neighbors(std::size_t i) const { return neighbors_.at(i); }
    bool has_edge(std::size_t i, std::size_t j) const;
    // Both orientations of every edge, sorted.
    std::vector<DirectedEdge> directed_edges() const;
    bool connected() const;

private:
    std::size_t node_count_ = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges_;
    std::vector<std::vector<std::size_t>> neighbors_;
};

// y_i = G_i u_i + sum_j W_ij s_ij,  o_ij = F_ij y_i
struct SubsystemSpec {
    RationalTF G;
    std::map<std::size_t, RationalTF> W;
    std::map<std::size_t, RationalTF> F;  // missing entries mean F_ij = 1

    RationalTF coupling(std::size_t j) const;
    RationalTF output_filter(std::size_t j) const;
};

// y^d_i = T_i r_i + sum_j Q_ij k_ij,  p_ij = P_ij y^d_i
struct ReferenceNodeSpec {
    RationalTF T;
    std::map<std::size_t, RationalTF> Q;  // missing entries mean 0
    std::map<std::size_t, RationalTF> P;  // missing entries mean 0

    RationalTF coupling(std::size_t j) const;
    RationalTF output_filter(std::size_t j) const;
    bool decoupled() const;
};

struct NetworkSpec {
    Graph graph;
    std::vector<SubsystemSpec> subsystems;
    std::vector<ReferenceNodeSpec> reference;

    std::size_t size() const { return graph.node_count(); }
    // Throws SpecError if per-node entries are not confined to (or, for W, do not cover) N_i.
    void check_structure() const;
    bool reference_decoupled() const;
    bool unit_output_filters() const;
    // Equivalent spec with W_ij replaced by W_ij F_ji and F = 1 (same u -> y transfer).
    NetworkSpec with_unit_output_filters() const;
};

struct ValidationReport {
    double min_plant_det = 0.0;      // min |det(I - W Δ F)|
    double min_reference_det = 0.0;  // min |det(I - Q Δ P)|
    double min_matching_det = 0.0;   // min |det((I - Q Δ P)^{-1} T - I)|
    double max_matching_det = 0.0;
    std::size_t skipped_points = 0;  // grid points on a pole
    bool plant_well_posed = false;
    bool reference_well_posed = false;
    bool reference_differs_from_identity = false;

    bool valid() const { return plant_well_posed && reference_well_posed && reference_differs_from_identity; }
};

inline constexpr double kAssumptionThreshold = 1e-8;

// Uniform grid of n midpoints covering [0, π]: ω_k = π (k + 1/2) / n.
std::vector<double> frequency_grid(std::size_t n);

// Well-posedness of plant and reference interconnections is checked pointwise over the
// grid; the reference model must differ from the identity at some grid point.
ValidationReport validate_network(const NetworkSpec& spec, const std::vector<double>& grid,
                                  double threshold = kAssumptionThreshold);

// Interconnection with inputs u_1..u_L and the first L signals y_1..y_L.
Interconnection plant_interconnection(const NetworkSpec& spec);
// Interconnection with inputs r_1..r_L and the first L signals y^d_1..y^d_L.
Interconnection reference_interconnection(const NetworkSpec& spec);

// Zero-initial-condition plant response; `noise`, when non-empty, is added to the outputs.
MultiSignal simulate_plant(const NetworkSpec& spec, const MultiSignal& u, const MultiSignal& noise = {});
MultiSignal simulate_reference(const NetworkSpec& spec, const MultiSignal& r);

// (I - W Δ F)^{-1} G at e^{jω}
Eigen::MatrixXcd plant_transfer_eval(const NetworkSpec& spec, double omega);
// (I - Q Δ P)^{-1} T at e^{jω}
Eigen::MatrixXcd reference_transfer_eval(const NetworkSpec& spec, double omega);

}  // namespace distvrft
