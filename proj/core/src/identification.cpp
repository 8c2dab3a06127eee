#include "distvrft/identification.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "distvrft/errors.hpp"

namespace distvrft {

namespace {

void append_columns(std::vector<Signal>& cols, const std::vector<RationalTF>& basis, const Signal& input) {
    for (const auto& b : basis) cols.push_back(filter(b, input));
}

// Linear map from a parameter perturbation to the entry responses it changes:
// the diagonal entry and C^W_ij + C^Q_ij P_ji for each neighbour, at every grid point.
Eigen::MatrixXcd channel_map(const NodeParametrization& param, const NetworkSpec& spec, std::size_t node,
                             const std::vector<double>& grid) {
    const auto& nbrs = spec.graph.neighbors(node);
    const auto n = static_cast<Eigen::Index>(param.parameter_count());
    const auto rows = static_cast<Eigen::Index>(grid.size() * (1 + nbrs.size()));
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rows, n);
    Eigen::Index r = 0;
    for (double w : grid) {
        for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(param.diagonal.size()); ++k)
            m(r, k) = freq_response(param.diagonal[static_cast<std::size_t>(k)], w);
        ++r;
        for (std::size_t j : nbrs) {
            if (auto it = param.coupling_w.find(j); it != param.coupling_w.end()) {
                const auto off = static_cast<Eigen::Index>(param.w_offset(j));
                for (std::size_t k = 0; k < it->second.size(); ++k)
                    m(r, off + static_cast<Eigen::Index>(k)) = freq_response(it->second[k], w);
            }
            if (auto it = param.coupling_q.find(j); it != param.coupling_q.end()) {
                const auto p = freq_response(spec.reference[j].output_filter(node), w);
                const auto off = static_cast<Eigen::Index>(param.q_offset(j));
                for (std::size_t k = 0; k < it->second.size(); ++k)
                    m(r, off + static_cast<Eigen::Index>(k)) = freq_response(it->second[k], w) * p;
            }
            ++r;
        }
    }
    return m;
}

}  // namespace

NodeRegressors build_node_regressors(const NodeParametrization& param, const VirtualData& vd, const MultiSignal& u,
                                     std::size_t node, std::size_t trim) {
    if (node >= vd.e_bar.size() || node >= u.size()) throw DimensionError("node index out of range");
    const std::size_t horizon = vd.horizon;
    if (vd.e_bar[node].size() != horizon) throw DimensionError("virtual data horizon inconsistent");
    if (u[node].size() < horizon) throw DimensionError("input data shorter than virtual horizon");
    if (trim >= horizon) throw DimensionError("trim must be shorter than the horizon");

    std::vector<Signal> cols;
    append_columns(cols, param.diagonal, vd.e_bar[node]);
    for (const auto& [j, basis] : param.coupling_w) {
        auto it = vd.o_bar.find({j, node});
        if (it == vd.o_bar.end()) throw DimensionError("missing o_bar for neighbour " + std::to_string(j + 1));
        append_columns(cols, basis, it->second);
    }
    for (const auto& [j, basis] : param.coupling_q) {
        auto it = vd.p_bar.find({j, node});
        if (it == vd.p_bar.end()) throw DimensionError("missing p_bar for neighbour " + std::to_string(j + 1));
        append_columns(cols, basis, it->second);
    }

    NodeRegressors reg;
    reg.node = node;
    const auto rows = static_cast<Eigen::Index>(horizon - trim);
    reg.phi.resize(rows, static_cast<Eigen::Index>(cols.size()));
    reg.target.resize(rows);
    for (Eigen::Index t = 0; t < rows; ++t) {
        const std::size_t src = trim + static_cast<std::size_t>(t);
        reg.target(t) = u[node][src];
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (cols[c].size() != horizon) throw DimensionError("regressor column horizon mismatch");
            reg.phi(t, static_cast<Eigen::Index>(c)) = cols[c][src];
        }
    }
    return reg;
}

RegressorSet build_regressors(const ControllerParametrization& param, const VirtualData& vd, const MultiSignal& u,
                              std::size_t trim) {
    if (param.nodes.size() != vd.e_bar.size()) throw DimensionError("parametrization does not match virtual data");
    RegressorSet set;
    set.trim = trim;
    for (std::size_t i = 0; i < param.nodes.size(); ++i) set.nodes.push_back(build_node_regressors(param.nodes[i], vd, u, i, trim));
    return set;
}

std::size_t default_trim(const ControllerParametrization& param) {
    int deg = 0;
    auto scan = [&deg](const std::vector<RationalTF>& basis) {
        for (const auto& b : basis) deg = std::max(deg, b.den().degree());
    };
    for (const auto& np : param.nodes) {
        scan(np.diagonal);
        for (const auto& [j, b] : np.coupling_w) scan(b);
        for (const auto& [j, b] : np.coupling_q) scan(b);
    }
    return static_cast<std::size_t>(std::max(deg, 1));
}

IdentificationResult identify_node(const NodeRegressors& reg) {
    IdentificationResult res;
    const Eigen::Index cols = reg.phi.cols();
    if (cols == 0) {
        res.rho = Eigen::VectorXd::Zero(0);
        res.criterion = reg.target.squaredNorm();
        res.residual_norm = std::sqrt(res.criterion);
        res.gram_condition = 1.0;
        return res;
    }
    if (reg.phi.rows() < cols) throw ExcitationError("fewer samples than parameters at node " + std::to_string(reg.node + 1));

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(reg.phi);
    qr.setThreshold(kRankRelTol);
    if (qr.rank() < cols) {
        throw ExcitationError("regressor matrix of node " + std::to_string(reg.node + 1) + " is rank deficient (rank " +
                              std::to_string(qr.rank()) + " of " + std::to_string(cols) + ")");
    }
    res.rho = qr.solve(reg.target);
    const Eigen::VectorXd residual = reg.target - reg.phi * res.rho;
    res.criterion = residual.squaredNorm();
    res.residual_norm = std::sqrt(res.criterion);

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(reg.phi);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    res.gram_condition = smin > 0.0 ? std::pow(sv(0) / smin, 2) : std::numeric_limits<double>::infinity();
    return res;
}

std::vector<IdentificationResult> identify_all(const RegressorSet& regs, unsigned threads) {
    std::vector<IdentificationResult> out(regs.nodes.size());
    if (threads <= 1 || regs.nodes.size() <= 1) {
        for (std::size_t i = 0; i < regs.nodes.size(); ++i) out[i] = identify_node(regs.nodes[i]);
        return out;
    }
    std::vector<std::exception_ptr> errors(regs.nodes.size());
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < std::min<std::size_t>(threads, regs.nodes.size()); ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < regs.nodes.size(); i = next++) {
                    try {
                        out[i] = identify_node(regs.nodes[i]);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

double criterion_at(const NodeRegressors& reg, const Eigen::VectorXd& rho) {
    return (reg.target - reg.phi * rho).squaredNorm();
}

ExcitationDiagnostics excitation_check(const MultiSignal& u, std::size_t lags, double eig_threshold) {
    ExcitationDiagnostics diag;
    const std::size_t n = common_horizon(u);
    const std::size_t channels = u.size();
    const std::size_t dim = channels * (lags + 1);
    if (n <= lags + 1 || channels == 0) {
        diag.min_input_covariance_eig = 0.0;
        diag.warnings.emplace_back("not enough input samples for a covariance estimate");
        return diag;
    }
    const auto rows = static_cast<Eigen::Index>(n - lags);
    Eigen::MatrixXd stacked(rows, static_cast<Eigen::Index>(dim));
    for (Eigen::Index r = 0; r < rows; ++r) {
        const std::size_t t = lags + static_cast<std::size_t>(r);
        for (std::size_t l = 0; l <= lags; ++l)
            for (std::size_t c = 0; c < channels; ++c)
                stacked(r, static_cast<Eigen::Index>(l * channels + c)) = u[c][t - l];
    }
    const Eigen::MatrixXd cov = stacked.transpose() * stacked / static_cast<double>(rows);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
    diag.min_input_covariance_eig = es.eigenvalues()(0);
    if (diag.min_input_covariance_eig < eig_threshold) {
        diag.warnings.push_back("input covariance nearly singular (smallest eigenvalue " +
                                std::to_string(diag.min_input_covariance_eig) + ")");
    }
    return diag;
}

ExcitationDiagnostics excitation_check(const RegressorSet& regs, double cond_threshold) {
    ExcitationDiagnostics diag;
    diag.min_input_covariance_eig = std::numeric_limits<double>::quiet_NaN();
    for (const auto& reg : regs.nodes) {
        double cond = 1.0;
        if (reg.phi.cols() > 0) {
            const Eigen::JacobiSVD<Eigen::MatrixXd> svd(reg.phi);
            const auto& sv = svd.singularValues();
            const double smin = sv(sv.size() - 1);
            cond = smin > 0.0 ? std::pow(sv(0) / smin, 2) : std::numeric_limits<double>::infinity();
        }
        diag.gram_conditions.push_back(cond);
        if (!(cond < cond_threshold)) {
            diag.warnings.push_back("Gram matrix of node " + std::to_string(reg.node + 1) + " ill-conditioned (cond " +
                                    std::to_string(cond) + ")");
        }
    }
    return diag;
}

EquivalenceReport check_minimum_equivalence(const Eigen::VectorXd& rho_star, const Eigen::VectorXd& rho_d,
                                            const NodeParametrization& param, const NetworkSpec& spec,
                                            std::size_t node, const std::vector<double>& grid, double tol) {
    const auto n = static_cast<Eigen::Index>(param.parameter_count());
    if (rho_star.size() != n || rho_d.size() != n) throw DimensionError("parameter vectors do not match parametrization");
    const Eigen::VectorXcd deviation = channel_map(param, spec, node, grid) * (rho_star - rho_d).cast<std::complex<double>>();
    EquivalenceReport rep;
    rep.max_deviation = deviation.size() > 0 ? deviation.cwiseAbs().maxCoeff() : 0.0;
    rep.equivalent = rep.max_deviation <= tol;
    return rep;
}

Eigen::MatrixXd equivalence_directions(const NodeParametrization& param, const NetworkSpec& spec, std::size_t node,
                                       const std::vector<double>& grid) {
    const Eigen::MatrixXcd m = channel_map(param, spec, node, grid);
    Eigen::MatrixXd real_map(2 * m.rows(), m.cols());
    real_map << m.real(), m.imag();
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(real_map, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = 1e-10 * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;
    return svd.matrixV().rightCols(m.cols() - rank);
}

}  // namespace distvrft
