#include "distvrft/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "distvrft/errors.hpp"
#include "distvrft/evaluation.hpp"
#include "distvrft/standard_networks.hpp"

namespace distvrft {

void ExperimentConfig::validate() const {
    if (samples < 10) throw ConfigError("N must be at least 10");
    if (runs < 1) throw ConfigError("runs must be at least 1");
    if (!(sigma_u > 0.0)) throw ConfigError("sigma_u must be positive");
    if (!(sigma_v >= 0.0)) throw ConfigError("sigma_v must be non-negative");
    if (grid_size < 1) throw ConfigError("grid must have at least one point");
    if (eval_horizon < 1) throw ConfigError("evaluation horizon must be positive");
    if (trim >= samples) throw ConfigError("trim must be smaller than N");
}

std::vector<ControllerClass> default_classes(const Graph& graph) {
    std::vector<std::pair<std::size_t, std::size_t>> removed;
    const Graph grid = grid_graph(3, 3);
    if (graph.node_count() == grid.node_count() && graph.edges() == grid.edges()) removed = nine_node_reduced_links();
    return {ControllerClass::full(), ControllerClass::reduced(std::move(removed)), ControllerClass::decentralized_class()};
}

std::vector<ControllerClass> resolve_classes(const std::vector<ControllerClass>& classes, const Graph& graph) {
    if (classes.empty()) return default_classes(graph);
    std::vector<ControllerClass> out = classes;
    for (auto& cls : out)
        if (cls.name == "reduced" && !cls.decentralized && cls.removed_links.empty())
            cls.removed_links = default_classes(graph)[1].removed_links;
    return out;
}

ExperimentData generate_data(const NetworkSpec& spec, std::size_t samples, double sigma_u, double sigma_v,
                             std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t n = spec.size();
    auto draw = [&](double sigma) {
        MultiSignal out;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> x(samples);
            for (double& v : x) v = sigma * gauss(rng);
            out.emplace_back(std::move(x));
        }
        return out;
    };
    ExperimentData data;
    data.u = draw(sigma_u);
    const MultiSignal v = draw(sigma_v);
    data.y_clean = simulate_plant(spec, data.u);
    data.y = data.y_clean;
    if (sigma_v > 0.0)
        for (std::size_t i = 0; i < n; ++i) data.y[i] += v[i];
    return data;
}

SynthesisResult synthesize_controller(const NetworkSpec& spec, const VirtualData& vd, const MultiSignal& u,
                                      const ControllerClass& cls, std::size_t trim, const Tolerances& tol) {
    const NetworkSpec unit = spec.with_unit_output_filters();
    const DistributedController ideal = build_ideal_controller(unit, tol.cancellation);
    SynthesisResult res;
    res.cls = cls;
    res.param = mirror_parametrization(ideal, unit.graph, cls);
    const RegressorSet regs = build_regressors(res.param, vd, u, trim);
    res.excitation = excitation_check(regs, tol.gram_condition);
    res.fits = identify_all(regs);
    for (const auto& fit : res.fits) res.rho.push_back(fit.rho);
    res.controller = controller_from_parameters(ideal, res.param, res.rho);
    return res;
}

std::vector<SynthesisResult> synthesize_controllers(const NetworkSpec& spec, const MultiSignal& u,
                                                    const MultiSignal& y, const std::vector<ControllerClass>& classes,
                                                    std::size_t trim, const Tolerances& tol) {
    const VirtualData vd = virtual_references_distributed(spec.with_unit_output_filters(), y);
    std::vector<SynthesisResult> out;
    for (const auto& cls : classes) out.push_back(synthesize_controller(spec, vd, u, cls, trim, tol));
    return out;
}

std::vector<double> step_amplitudes(std::size_t nodes, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> a(nodes);
    for (double& v : a) v = 1.0 - unif(rng);
    return a;
}

MultiSignal step_reference(const std::vector<double>& amplitudes, std::size_t horizon) {
    MultiSignal r;
    for (double a : amplitudes) r.push_back(Signal::constant(horizon, a));
    return r;
}

StepTrace step_response(const NetworkSpec& spec, const DistributedController& ctrl,
                        const std::vector<double>& amplitudes, std::size_t horizon) {
    const NetworkSpec unit = spec.with_unit_output_filters();
    StepTrace tr;
    tr.r = step_reference(amplitudes, horizon);
    const auto resp = simulate_closed_loop(assemble_closed_loop(unit, ctrl), tr.r);
    tr.y = resp.y;
    tr.u = resp.u;
    tr.diverged = resp.diverged;
    tr.y_d = simulate_reference(unit, tr.r);
    tr.jmr = estimate_jmr(tr.y, tr.y_d);
    return tr;
}

double quantile(std::vector<double> values, double p) {
    if (values.empty()) throw DimensionError("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * std::clamp(p, 0.0, 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

namespace {

std::vector<ReplicateRecord> run_replicate(const NetworkSpec& spec, const ExperimentConfig& cfg,
                                           const std::vector<ControllerClass>& classes,
                                           const std::vector<double>& amplitudes, const std::vector<double>& grid,
                                           std::uint64_t seed) {
    std::vector<ReplicateRecord> recs;
    for (const auto& cls : classes) recs.push_back({seed, cls.name, 0.0, 0.0, false, {}});
    VirtualData vd;
    MultiSignal u;
    try {
        const auto data = generate_data(spec, cfg.samples, cfg.sigma_u, cfg.sigma_v, seed);
        u = data.u;
        vd = virtual_references_distributed(spec.with_unit_output_filters(), data.y);
    } catch (const std::exception& e) {
        for (auto& r : recs) r.error = e.what();
        return recs;
    }
    const NetworkSpec unit = spec.with_unit_output_filters();
    for (std::size_t c = 0; c < classes.size(); ++c) {
        auto& rec = recs[c];
        try {
            const auto syn = synthesize_controller(spec, vd, u, classes[c], cfg.trim, cfg.tolerances);
            const auto cl = assemble_closed_loop(unit, syn.controller);
            rec.metric = performance_metric(unit, cl, grid).value;
            const auto r = step_reference(amplitudes, cfg.eval_horizon);
            const auto resp = simulate_closed_loop(cl, r);
            rec.jmr = estimate_jmr(resp.y, simulate_reference(unit, r));
            rec.ok = !resp.diverged;
            if (resp.diverged) rec.error = "closed-loop step response diverged";
        } catch (const std::exception& e) {
            rec.error = e.what();
        }
    }
    return recs;
}

}  // namespace

MonteCarloResult monte_carlo(const NetworkSpec& spec, const ExperimentConfig& config) {
    config.validate();
    const auto classes = resolve_classes(config.classes, spec.graph);
    const auto grid = frequency_grid(config.grid_size);
    MonteCarloResult res;
    res.amplitudes = step_amplitudes(spec.size(), config.seed);

    std::vector<std::vector<ReplicateRecord>> per_run(config.runs);
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(config.threads == 0 ? hw : config.threads, config.runs);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < config.runs; k = next++)
            per_run[k] = run_replicate(spec, config, classes, res.amplitudes, grid, config.seed + k);
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    for (auto& run : per_run)
        for (auto& rec : run) res.records.push_back(std::move(rec));

    for (std::size_t c = 0; c < classes.size(); ++c) {
        ClassSummary s;
        s.cls = classes[c].name;
        std::vector<double> jmrs;
        for (std::size_t k = 0; k < config.runs; ++k) {
            const auto& rec = res.records[k * classes.size() + c];
            ++s.count;
            if (!rec.ok) {
                ++s.failures;
                continue;
            }
            s.samples.push_back(rec.metric);
            jmrs.push_back(rec.jmr);
        }
        if (!s.samples.empty()) {
            s.min = quantile(s.samples, 0.0);
            s.q1 = quantile(s.samples, 0.25);
            s.median = quantile(s.samples, 0.5);
            s.q3 = quantile(s.samples, 0.75);
            s.max = quantile(s.samples, 1.0);
            s.median_jmr = quantile(jmrs, 0.5);
        } else {
            s.min = s.q1 = s.median = s.q3 = s.max = s.median_jmr = std::nan("");
        }
        res.summaries.push_back(std::move(s));
    }
    return res;
}

}  // namespace distvrft
