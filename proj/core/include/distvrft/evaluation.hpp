#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "distvrft/controller.hpp"
#include "distvrft/interconnection.hpp"
#include "distvrft/network.hpp"
#include "distvrft/signal.hpp"
#include "distvrft/state_space.hpp"

namespace distvrft {

inline constexpr double kDivergenceBound = 1e9;

// Plant and distributed controller in feedback, e_i = r_i - y_i, with s^c_ij = o^c_ji and
// k^c_ij = p^c_ji. Inputs are r_1..r_L then the output noise v_1..v_L; outputs are
// y_1..y_L then u_1..u_L.
struct ClosedLoopSystem {
    StateSpace system;
    double loop_condition = 1.0;
    std::size_t nodes = 0;
    // Controller interconnection signals that were kept (the rest feed no u-row).
    std::size_t active_links = 0;
};

// Controller alone: inputs e_1..e_L, first L signals u_1..u_L.
Interconnection controller_interconnection(const DistributedController& ctrl);

// Throws IllPosedLoopError when the static feedthrough loop is singular.
ClosedLoopSystem assemble_closed_loop(const NetworkSpec& spec, const DistributedController& ctrl);

struct ClosedLoopResponse {
    MultiSignal y;
    MultiSignal u;
    bool diverged = false;  // some |y| exceeded kDivergenceBound
};

// `noise` is measurement noise: it corrupts e_i = r_i - (y_i + v_i) but not the plant output.
ClosedLoopResponse simulate_closed_loop(const ClosedLoopSystem& cls, const MultiSignal& r,
                                        const MultiSignal& noise = {});

// (1/N) sum_t sum_i (y^d_i(t) - y_i(t))^2. Throws DimensionError on mismatched horizons.
double estimate_jmr(const MultiSignal& y, const MultiSignal& y_d);

// r -> y transfer of the closed loop at e^{jω}; std::nullopt on a closed-loop pole.
std::optional<Eigen::MatrixXcd> closed_loop_transfer(const ClosedLoopSystem& cls, double omega);

struct PerformanceMetric {
    double value = 0.0;
    std::size_t skipped = 0;  // grid points on a pole of either system
};

// max over the grid of the spectral norm of T_I - T_d.
PerformanceMetric performance_metric(const NetworkSpec& spec, const ClosedLoopSystem& cls,
                                     const std::vector<double>& grid);
PerformanceMetric performance_metric(const NetworkSpec& spec, const DistributedController& ctrl,
                                     const std::vector<double>& grid);

}  // namespace distvrft
