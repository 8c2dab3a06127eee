#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "distvrft/controller.hpp"
#include "distvrft/network.hpp"
#include "distvrft/parametrization.hpp"

namespace distvrft {

using IdealControllerNode = ControllerNode;

inline constexpr double kRootMatchTol = 1e-7;
inline constexpr double kRepresentationTol = 1e-8;

// Local controller that makes node i behave like its reference node:
//   u      = T/(G(1-T)) e - (W/G) s^c + Q/(G(1-T)) k^c
//   o^c_ij = F_ij T/(1-T) e + F_ij Q/(1-T) k^c
//   p^c_ij = P_ij T/(1-T) e + P_ij Q/(1-T) k^c
// Throws SpecError if G_i = 0 or T_i = 1.
IdealControllerNode build_ideal_node(const SubsystemSpec& sub, const ReferenceNodeSpec& ref,
                                     const std::vector<std::size_t>& neighbors, double tol = kDefaultCancellationTol);

DistributedController build_ideal_controller(const NetworkSpec& spec, double tol = kDefaultCancellationTol);

struct RootViolation {
    std::size_t node;
    std::string entry;  // entry lacking the required root, e.g. "T_2" or "W_2_3"
    std::complex<double> root;
};

struct CausalityViolation {
    std::size_t node;
    std::string entry;
    int relative_degree;
    int required;
};

struct RealizabilityReport {
    std::vector<RootViolation> nmp_zero_violations;
    std::vector<RootViolation> unstable_w_pole_violations;
    std::vector<RootViolation> unstable_f_pole_violations;
    std::vector<CausalityViolation> causality_violations;

    bool ok() const {
        return nmp_zero_violations.empty() && unstable_w_pole_violations.empty() &&
               unstable_f_pole_violations.empty() && causality_violations.empty();
    }
};

// Stability conditions on non-minimum-phase zeros of G_i and unstable poles of W_ij and
// F_ij (roots with |root| >= 1 - root_tol count as unstable), plus the causality
// condition relative_degree(T_i, Q_ij, W_ij) >= relative_degree(G_i).
RealizabilityReport check_realizability(const NetworkSpec& spec, double root_tol = kRootMatchTol);

// Parameters reproducing the ideal u-row entries (diagonal, coupling_w, coupling_q)
// exactly, by matching numerator coefficients over a common denominator.
// Throws NotRepresentableError if the scaled residual exceeds tol.
Eigen::VectorXd map_to_parameters(const IdealControllerNode& ideal, const NodeParametrization& param,
                                  double tol = kRepresentationTol);

std::vector<Eigen::VectorXd> map_to_parameters(const DistributedController& ideal,
                                               const ControllerParametrization& param,
                                               double tol = kRepresentationTol);

}  // namespace distvrft
