#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "distvrft/network.hpp"
#include "distvrft/parametrization.hpp"
#include "distvrft/signal.hpp"
#include "distvrft/virtual_signals.hpp"

namespace distvrft {

inline constexpr double kGramConditionThreshold = 1e10;
inline constexpr double kCovarianceEigThreshold = 1e-6;
inline constexpr double kRankRelTol = 1e-10;
inline constexpr double kEquivalenceTol = 1e-7;

// Linear predictor u_i ≈ Φ_i ρ_i for one node. Columns follow the parameter ordering of
// NodeParametrization; each is a basis transfer function applied to e_bar_i, o_bar_ji
// or p_bar_ji.
struct NodeRegressors {
    std::size_t node = 0;
    Eigen::MatrixXd phi;
    Eigen::VectorXd target;
};

struct RegressorSet {
    std::vector<NodeRegressors> nodes;
    std::size_t trim = 0;
};

// Drops the first `trim` rows. Throws DimensionError on inconsistent horizons or
// trim >= horizon.
NodeRegressors build_node_regressors(const NodeParametrization& param, const VirtualData& vd, const MultiSignal& u,
                                     std::size_t node, std::size_t trim);
RegressorSet build_regressors(const ControllerParametrization& param, const VirtualData& vd, const MultiSignal& u,
                              std::size_t trim);

// Largest denominator degree among all basis functions (at least 1 when any basis exists).
std::size_t default_trim(const ControllerParametrization& param);

struct IdentificationResult {
    Eigen::VectorXd rho;
    double criterion = 0.0;       // sum of squared prediction errors
    double gram_condition = 0.0;  // cond(Φᵀ Φ)
    double residual_norm = 0.0;
};

// Least-squares fit by column-pivoted Householder QR. Throws ExcitationError when Φ is
// rank deficient (pivot below kRankRelTol of the largest).
IdentificationResult identify_node(const NodeRegressors& reg);

// Nodes are independent; solved concurrently when threads > 1.
std::vector<IdentificationResult> identify_all(const RegressorSet& regs, unsigned threads = 1);

// Evaluates the finite-sample criterion at an arbitrary parameter vector.
double criterion_at(const NodeRegressors& reg, const Eigen::VectorXd& rho);

struct ExcitationDiagnostics {
    double min_input_covariance_eig = 0.0;  // NaN when not computed
    std::vector<double> gram_conditions;
    std::vector<std::string> warnings;

    bool ok() const { return warnings.empty(); }
};

// Smallest eigenvalue of the sample covariance of (u(t), u(t-1), ..., u(t-lags)).
ExcitationDiagnostics excitation_check(const MultiSignal& u, std::size_t lags = 2,
                                       double eig_threshold = kCovarianceEigThreshold);
ExcitationDiagnostics excitation_check(const RegressorSet& regs, double cond_threshold = kGramConditionThreshold);

struct EquivalenceReport {
    bool equivalent = false;
    double max_deviation = 0.0;
};

// Whether rho_star reproduces the diagonal entry of rho_d and, for every neighbour j,
// (C^W_ij(ρ*) - C^W_ij(ρd)) + (C^Q_ij(ρ*) - C^Q_ij(ρd)) P_ji vanishes on the grid.
EquivalenceReport check_minimum_equivalence(const Eigen::VectorXd& rho_star, const Eigen::VectorXd& rho_d,
                                            const NodeParametrization& param, const NetworkSpec& spec,
                                            std::size_t node, const std::vector<double>& grid,
                                            double tol = kEquivalenceTol);

// Orthonormal basis (columns) of parameter perturbations that leave the diagonal entry and
// every combined coupling channel unchanged on the grid.
Eigen::MatrixXd equivalence_directions(const NodeParametrization& param, const NetworkSpec& spec, std::size_t node,
                                       const std::vector<double>& grid);

}  // namespace distvrft
