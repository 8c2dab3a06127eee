#include "distvrft/ideal_controller.hpp"

#include <algorithm>
#include <cmath>

#include "distvrft/errors.hpp"

namespace distvrft {

namespace {

std::string label(std::size_t i) { return std::to_string(i + 1); }

bool contains_root(const std::vector<std::complex<double>>& roots, std::complex<double> r, double tol) {
    return std::any_of(roots.begin(), roots.end(), [&](auto x) { return std::abs(x - r) <= tol * std::max(1.0, std::abs(r)); });
}

bool unstable(std::complex<double> r, double tol) { return std::abs(r) >= 1.0 - tol; }

// Rows of coefficient-matching equations for one controller entry.
struct EntryEquations {
    Eigen::MatrixXd lhs;  // columns = full parameter vector
    Eigen::VectorXd rhs;
};

EntryEquations entry_equations(const RationalTF& target, const std::vector<RationalTF>& basis, std::size_t offset,
                               std::size_t total_params) {
    // Common denominator: target den times each distinct basis den.
    std::vector<Polynomial> factors{target.den()};
    for (const auto& b : basis) {
        const bool known = std::any_of(factors.begin(), factors.end(), [&](const Polynomial& f) { return approx_equal(f, b.den(), 1e-12); });
        if (!known) factors.push_back(b.den());
    }
    auto product_except = [&](const Polynomial& skip) {
        Polynomial prod{1.0};
        bool skipped = false;
        for (const auto& f : factors) {
            if (!skipped && approx_equal(f, skip, 1e-12)) {
                skipped = true;
                continue;
            }
            prod = prod * f;
        }
        return prod;
    };

    const Polynomial rhs_poly = target.num() * product_except(target.den());
    std::vector<Polynomial> cols;
    int degree = rhs_poly.degree();
    for (const auto& b : basis) {
        cols.push_back(b.num() * product_except(b.den()));
        degree = std::max(degree, cols.back().degree());
    }
    const Eigen::Index rows = std::max(degree + 1, 1);
    EntryEquations eq{Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(total_params)), Eigen::VectorXd::Zero(rows)};
    for (Eigen::Index p = 0; p < rows; ++p) {
        eq.rhs(p) = rhs_poly.coeff_of_power(static_cast<int>(p));
        for (std::size_t k = 0; k < cols.size(); ++k)
            eq.lhs(p, static_cast<Eigen::Index>(offset + k)) = cols[k].coeff_of_power(static_cast<int>(p));
    }
    double scale = std::max(eq.rhs.cwiseAbs().maxCoeff(), eq.lhs.cwiseAbs().maxCoeff());
    if (scale > 0.0) {
        eq.lhs /= scale;
        eq.rhs /= scale;
    }
    return eq;
}

}  // namespace

IdealControllerNode build_ideal_node(const SubsystemSpec& sub, const ReferenceNodeSpec& ref,
                                     const std::vector<std::size_t>& neighbors, double tol) {
    if (sub.G.is_zero()) throw SpecError("ideal controller undefined for G_i = 0");
    const RationalTF one_minus_t = tf_arith(RationalTF::one(), ref.T, ArithOp::sub, tol);
    if (one_minus_t.is_zero()) throw SpecError("ideal controller undefined for T_i = 1");

    auto mul = [tol](const RationalTF& a, const RationalTF& b) { return tf_arith(a, b, ArithOp::mul, tol); };
    auto div = [tol](const RationalTF& a, const RationalTF& b) { return tf_arith(a, b, ArithOp::div, tol); };

    const RationalTF t_ratio = div(ref.T, one_minus_t);            // T/(1-T)
    const RationalTF inv_one_minus_t = div(RationalTF::one(), one_minus_t);

    IdealControllerNode node;
    node.diagonal = div(t_ratio, sub.G);
    for (std::size_t j : neighbors) {
        if (auto w = sub.coupling(j); !w.is_zero()) node.coupling_w[j] = -div(w, sub.G);
        const RationalTF q_scaled = mul(inv_one_minus_t, ref.coupling(j));  // Q_ij/(1-T)
        if (!q_scaled.is_zero()) node.coupling_q[j] = div(q_scaled, sub.G);

        const RationalTF f = sub.output_filter(j);
        const RationalTF p = ref.output_filter(j);
        if (auto e = mul(t_ratio, f); !e.is_zero()) node.out_o[j] = e;
        if (auto e = mul(t_ratio, p); !e.is_zero()) node.out_p[j] = e;
        for (std::size_t h : neighbors) {
            const RationalTF qh = mul(inv_one_minus_t, ref.coupling(h));
            if (qh.is_zero()) continue;
            if (auto e = mul(f, qh); !e.is_zero()) node.out_o_k[{j, h}] = e;
            if (auto e = mul(p, qh); !e.is_zero()) node.out_p_k[{j, h}] = e;
        }
    }
    return node;
}

DistributedController build_ideal_controller(const NetworkSpec& spec, double tol) {
    spec.check_structure();
    DistributedController ctrl;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        ctrl.nodes.push_back(build_ideal_node(spec.subsystems[i], spec.reference[i], spec.graph.neighbors(i), tol));
    }
    return ctrl;
}

RealizabilityReport check_realizability(const NetworkSpec& spec, double root_tol) {
    spec.check_structure();
    RealizabilityReport rep;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const auto& sub = spec.subsystems[i];
        const auto& ref = spec.reference[i];
        const auto& nbrs = spec.graph.neighbors(i);

        // Entries that must share the non-minimum-phase zeros of G_i.
        std::vector<std::pair<std::string, RationalTF>> zero_carriers{{"T_" + label(i), ref.T}};
        for (std::size_t j : nbrs) {
            zero_carriers.emplace_back("W_" + label(i) + "_" + label(j), sub.coupling(j));
            zero_carriers.emplace_back("Q_" + label(i) + "_" + label(j), ref.coupling(j));
        }
        const auto g_zeros = sub.G.zeros();
        const auto g_poles = sub.G.poles();
        const auto t_zeros = ref.T.zeros();
        for (auto z : g_zeros) {
            if (!unstable(z, root_tol)) continue;
            for (const auto& [name, tf] : zero_carriers) {
                if (tf.is_zero()) continue;
                if (!contains_root(tf.zeros(), z, root_tol)) rep.nmp_zero_violations.push_back({i, name, z});
            }
        }
        for (std::size_t j : nbrs) {
            const auto w = sub.coupling(j);
            for (auto p : w.poles()) {
                if (unstable(p, root_tol) && !contains_root(g_poles, p, root_tol)) {
                    rep.unstable_w_pole_violations.push_back({i, "W_" + label(i) + "_" + label(j), p});
                }
            }
            for (auto p : sub.output_filter(j).poles()) {
                if (unstable(p, root_tol) && !contains_root(t_zeros, p, root_tol)) {
                    rep.unstable_f_pole_violations.push_back({i, "F_" + label(i) + "_" + label(j), p});
                }
            }
        }

        const int required = sub.G.relative_degree();
        auto check_causal = [&](const std::string& name, const RationalTF& tf) {
            if (tf.is_zero()) return;
            if (tf.relative_degree() < required) rep.causality_violations.push_back({i, name, tf.relative_degree(), required});
        };
        check_causal("T_" + label(i), ref.T);
        for (std::size_t j : nbrs) {
            check_causal("Q_" + label(i) + "_" + label(j), ref.coupling(j));
            check_causal("W_" + label(i) + "_" + label(j), sub.coupling(j));
        }
    }
    return rep;
}

Eigen::VectorXd map_to_parameters(const IdealControllerNode& ideal, const NodeParametrization& param, double tol) {
    const std::size_t n = param.parameter_count();
    std::vector<EntryEquations> blocks;
    blocks.push_back(entry_equations(ideal.diagonal, param.diagonal, 0, n));

    std::set<std::size_t> neighbours;
    for (const auto& [j, tf] : ideal.coupling_w) neighbours.insert(j);
    for (const auto& [j, tf] : ideal.coupling_q) neighbours.insert(j);
    for (const auto& [j, b] : param.coupling_w) neighbours.insert(j);
    for (const auto& [j, b] : param.coupling_q) neighbours.insert(j);
    static const std::vector<RationalTF> none;
    for (std::size_t j : neighbours) {
        auto w_it = param.coupling_w.find(j);
        auto q_it = param.coupling_q.find(j);
        blocks.push_back(entry_equations(ideal.w(j), w_it == param.coupling_w.end() ? none : w_it->second, param.w_offset(j), n));
        blocks.push_back(entry_equations(ideal.q(j), q_it == param.coupling_q.end() ? none : q_it->second, param.q_offset(j), n));
    }

    Eigen::Index rows = 0;
    for (const auto& b : blocks) rows += b.lhs.rows();
    Eigen::MatrixXd lhs(rows, static_cast<Eigen::Index>(n));
    Eigen::VectorXd rhs(rows);
    Eigen::Index r = 0;
    for (const auto& b : blocks) {
        lhs.middleRows(r, b.lhs.rows()) = b.lhs;
        rhs.segment(r, b.rhs.size()) = b.rhs;
        r += b.lhs.rows();
    }

    Eigen::VectorXd rho = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    if (n > 0) rho = lhs.completeOrthogonalDecomposition().solve(rhs);
    const double residual = rows > 0 ? (lhs * rho - rhs).cwiseAbs().maxCoeff() : 0.0;
    if (residual > tol) {
        throw NotRepresentableError("ideal controller not in the parametrized class (residual " + std::to_string(residual) + ")");
    }
    return rho;
}

std::vector<Eigen::VectorXd> map_to_parameters(const DistributedController& ideal, const ControllerParametrization& param,
                                               double tol) {
    if (ideal.nodes.size() != param.nodes.size()) throw DimensionError("controller and parametrization disagree in node count");
    std::vector<Eigen::VectorXd> out;
    for (std::size_t i = 0; i < ideal.nodes.size(); ++i) out.push_back(map_to_parameters(ideal.nodes[i], param.nodes[i], tol));
    return out;
}

}  // namespace distvrft
