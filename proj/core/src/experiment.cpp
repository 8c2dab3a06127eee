#include "distvrft/experiment.hpp"

#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "distvrft/errors.hpp"
#include "distvrft/evaluation.hpp"
#include "distvrft/io.hpp"
#include "distvrft/standard_networks.hpp"
#include "distvrft/virtual_signals.hpp"

namespace distvrft {

using nlohmann::json;

ExitCode exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const SpecError*>(&e)) return ExitCode::config;
    if (dynamic_cast<const NotRepresentableError*>(&e)) return ExitCode::realizability;
    if (dynamic_cast<const ExcitationError*>(&e)) return ExitCode::excitation;
    return ExitCode::failure;
}

int log_level_from_env() {
    const char* v = std::getenv("DISTVRFT_LOG");
    if (!v || !*v) return 1;
    char* end = nullptr;
    const long level = std::strtol(v, &end, 10);
    if (end == v) return 1;
    return static_cast<int>(std::clamp(level, 0L, 2L));
}

ControllerClass controller_class_by_name(const std::string& name, const Graph& graph) {
    if (name == "full") return ControllerClass::full();
    if (name == "decentralized") return ControllerClass::decentralized_class();
    if (name == "reduced") return default_classes(graph)[1];
    throw ConfigError("unknown controller class '" + name + "'");
}

namespace {

template <typename T>
T get_number(const json& doc, const char* key, T fallback) {
    if (!doc.contains(key)) return fallback;
    const auto& v = doc.at(key);
    if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
    } else {
        if (!v.is_number_integer() || v.get<long long>() < 0)
            throw ConfigError(std::string("'") + key + "' must be a non-negative integer");
    }
    return v.get<T>();
}

ControllerClass parse_class(const json& j) {
    if (j.is_string()) {
        const auto name = j.get<std::string>();
        if (name == "full") return ControllerClass::full();
        if (name == "decentralized") return ControllerClass::decentralized_class();
        if (name == "reduced") return {"reduced", false, {}};
        throw ConfigError("unknown controller class '" + name + "'");
    }
    if (!j.is_object() || !j.contains("name") || !j.at("name").is_string())
        throw ConfigError("controller class must be a name or an object with 'name'");
    ControllerClass cls;
    cls.name = j.at("name").get<std::string>();
    cls.decentralized = j.value("decentralized", false);
    if (j.contains("removed_links")) {
        for (const auto& e : j.at("removed_links")) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
                e[0].get<long long>() < 1 || e[1].get<long long>() < 1)
                throw ConfigError("removed_links entries must be [i, j] node ids");
            cls.removed_links.emplace_back(e[0].get<std::size_t>() - 1, e[1].get<std::size_t>() - 1);
        }
    }
    return cls;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    static const std::set<std::string> known{"network", "N", "sigma_u", "sigma_v", "seed", "runs", "classes",
                                             "grid", "trim", "eval_horizon", "threads", "tolerances", "out_dir"};
    for (const auto& [key, val] : doc.items())
        if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");

    ExperimentConfig cfg;
    if (!doc.contains("network") || !doc.at("network").is_string()) throw ConfigError("config needs a 'network' path");
    std::filesystem::path net = doc.at("network").get<std::string>();
    cfg.network_path = (net.is_relative() ? base_dir / net : net).string();
    cfg.samples = get_number<std::size_t>(doc, "N", cfg.samples);
    cfg.sigma_u = get_number<double>(doc, "sigma_u", cfg.sigma_u);
    cfg.sigma_v = get_number<double>(doc, "sigma_v", cfg.sigma_v);
    cfg.seed = get_number<std::uint64_t>(doc, "seed", cfg.seed);
    cfg.runs = get_number<std::size_t>(doc, "runs", cfg.runs);
    cfg.grid_size = get_number<std::size_t>(doc, "grid", cfg.grid_size);
    cfg.trim = get_number<std::size_t>(doc, "trim", cfg.trim);
    cfg.eval_horizon = get_number<std::size_t>(doc, "eval_horizon", cfg.eval_horizon);
    cfg.threads = static_cast<unsigned>(get_number<std::size_t>(doc, "threads", cfg.threads));
    if (doc.contains("out_dir")) {
        if (!doc.at("out_dir").is_string()) throw ConfigError("'out_dir' must be a string");
        cfg.out_dir = doc.at("out_dir").get<std::string>();
    }
    if (doc.contains("classes")) {
        if (!doc.at("classes").is_array()) throw ConfigError("'classes' must be an array");
        for (const auto& c : doc.at("classes")) cfg.classes.push_back(parse_class(c));
    }
    if (doc.contains("tolerances")) {
        const auto& t = doc.at("tolerances");
        if (!t.is_object()) throw ConfigError("'tolerances' must be an object");
        static const std::set<std::string> tol_keys{"assumption", "cancellation", "root_match",
                                                    "representation", "gram_condition", "equivalence"};
        for (const auto& [key, val] : t.items())
            if (!tol_keys.contains(key)) throw ConfigError("unknown tolerance '" + key + "'");
        auto& tol = cfg.tolerances;
        tol.assumption = get_number<double>(t, "assumption", tol.assumption);
        tol.cancellation = get_number<double>(t, "cancellation", tol.cancellation);
        tol.root_match = get_number<double>(t, "root_match", tol.root_match);
        tol.representation = get_number<double>(t, "representation", tol.representation);
        tol.gram_condition = get_number<double>(t, "gram_condition", tol.gram_condition);
        tol.equivalence = get_number<double>(t, "equivalence", tol.equivalence);
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    return parse_experiment_config(read_text_file(path), path.parent_path());
}

std::string format_validation(const ValidationReport& rep) {
    std::ostringstream os;
    os << "plant well-posed        " << (rep.plant_well_posed ? "yes" : "NO") << "  min |det(I - W D F)| = " << fmt(rep.min_plant_det) << '\n'
       << "reference well-posed    " << (rep.reference_well_posed ? "yes" : "NO") << "  min |det(I - Q D P)| = " << fmt(rep.min_reference_det) << '\n'
       << "reference not identity  " << (rep.reference_differs_from_identity ? "yes" : "NO")
       << "  |det(T_d - I)| in [" << fmt(rep.min_matching_det) << ", " << fmt(rep.max_matching_det) << "]\n";
    if (rep.skipped_points > 0) os << "skipped grid points     " << rep.skipped_points << '\n';
    return os.str();
}

std::string format_realizability(const RealizabilityReport& rep) {
    std::ostringstream os;
    auto roots = [&os](const char* what, const std::vector<RootViolation>& v) {
        for (const auto& r : v)
            os << what << ": node " << r.node + 1 << ", " << r.entry << " lacks root " << fmt(r.root.real())
               << (r.root.imag() >= 0 ? "+" : "") << fmt(r.root.imag()) << "i\n";
    };
    roots("non-minimum-phase zero of G", rep.nmp_zero_violations);
    roots("unstable pole of W", rep.unstable_w_pole_violations);
    roots("unstable pole of F", rep.unstable_f_pole_violations);
    for (const auto& c : rep.causality_violations)
        os << "causality: node " << c.node + 1 << ", " << c.entry << " has relative degree " << c.relative_degree
           << " < " << c.required << '\n';
    if (rep.ok()) os << "realizability conditions hold\n";
    return os.str();
}

std::string format_controller(const DistributedController& ctrl) {
    std::ostringstream os;
    for (std::size_t i = 0; i < ctrl.nodes.size(); ++i) {
        const auto& n = ctrl.nodes[i];
        const auto id = std::to_string(i + 1);
        os << "node " << id << '\n';
        os << "  C_" << id << id << " = " << to_string(n.diagonal) << '\n';
        for (const auto& [j, g] : n.coupling_w) os << "  C^W_" << id << '_' << j + 1 << " = " << to_string(g) << '\n';
        for (const auto& [j, g] : n.coupling_q) os << "  C^Q_" << id << '_' << j + 1 << " = " << to_string(g) << '\n';
        for (const auto& [j, g] : n.out_o) os << "  K_" << id << '_' << j + 1 << " = " << to_string(g) << '\n';
        for (const auto& [jh, g] : n.out_o_k)
            os << "  K_" << id << '_' << jh.first + 1 << '_' << jh.second + 1 << " = " << to_string(g) << '\n';
        for (const auto& [j, g] : n.out_p) os << "  K^P_" << id << '_' << j + 1 << " = " << to_string(g) << '\n';
        for (const auto& [jh, g] : n.out_p_k)
            os << "  K^P_" << id << '_' << jh.first + 1 << '_' << jh.second + 1 << " = " << to_string(g) << '\n';
    }
    return os.str();
}

ExperimentOutcome run_experiment(const NetworkSpec& spec, const ExperimentConfig& config, std::ostream& log) {
    ExperimentOutcome outcome;
    const int verbosity = log_level_from_env();
    const std::filesystem::path out = config.out_dir;
    try {
        config.validate();
        const auto grid = frequency_grid(config.grid_size);
        const auto rep = validate_network(spec, grid, config.tolerances.assumption);
        if (verbosity >= 1) log << format_validation(rep);
        if (!rep.valid()) {
            outcome.code = ExitCode::assumption;
            outcome.message = "network violates the well-posedness assumptions";
            return outcome;
        }
        const auto real = check_realizability(spec, config.tolerances.root_match);
        if (verbosity >= 2 || !real.ok()) log << format_realizability(real);
        if (!real.ok()) {
            outcome.code = ExitCode::realizability;
            outcome.message = "ideal controller is not realizable";
            return outcome;
        }
        const NetworkSpec unit = spec.with_unit_output_filters();
        const auto ideal = build_ideal_controller(unit, config.tolerances.cancellation);
        if (verbosity >= 2) log << format_controller(ideal);

        const auto data = generate_data(spec, config.samples, config.sigma_u, config.sigma_v, config.seed);
        write_text_file(out / "data.csv", data_to_csv(data.u, data.y));
        const auto vd = virtual_references_distributed(unit, data.y);
        write_text_file(out / "virtual.csv", virtual_to_csv(vd));
        for (std::size_t i : vd.unstable_inverse_nodes)
            log << "warning: T_" << i + 1 << " has a zero outside the open unit disc\n";

        const auto classes = resolve_classes(config.classes, spec.graph);
        const auto amplitudes = step_amplitudes(spec.size(), config.seed);
        std::vector<std::string> labels{"reference"};
        std::vector<StepTrace> traces{step_response(spec, ideal, amplitudes, config.eval_horizon)};
        for (const auto& cls : classes) {
            const auto syn = synthesize_controller(spec, vd, data.u, cls, config.trim, config.tolerances);
            for (const auto& w : syn.excitation.warnings) log << "warning: " << w << '\n';
            write_text_file(out / ("controller_" + cls.name + ".json"), controller_to_json(syn));

            ClassOutcome co;
            co.cls = cls.name;
            co.metric = performance_metric(unit, syn.controller, grid).value;
            traces.push_back(step_response(spec, syn.controller, amplitudes, config.eval_horizon));
            labels.push_back(cls.name);
            co.jmr = traces.back().jmr;
            co.rho_error = std::nan("");
            try {
                const auto rho_d = map_to_parameters(ideal, syn.param, config.tolerances.representation);
                co.rho_error = 0.0;
                co.equivalent_minimum = true;
                for (std::size_t i = 0; i < rho_d.size(); ++i) {
                    co.rho_error = std::max(co.rho_error, (syn.rho[i] - rho_d[i]).cwiseAbs().maxCoeff());
                    co.equivalent_minimum = co.equivalent_minimum &&
                                            check_minimum_equivalence(syn.rho[i], rho_d[i], syn.param.nodes[i], unit, i,
                                                                      grid, config.tolerances.equivalence)
                                                .equivalent;
                }
            } catch (const NotRepresentableError&) {
            }
            outcome.classes.push_back(co);
        }
        write_text_file(out / "traces.csv", trace_to_csv(labels, traces));

        if (verbosity >= 1) {
            log << "class            metric        J_MR          |rho - rho_d|\n";
            for (const auto& c : outcome.classes) {
                log << std::left << std::setw(17) << c.cls << std::setw(14) << fmt(c.metric) << std::setw(14)
                    << fmt(c.jmr) << (std::isnan(c.rho_error) ? std::string("n/a") : fmt(c.rho_error)) << '\n';
            }
        }

        if (config.runs > 1) {
            ExperimentConfig mc = config;
            mc.classes = classes;
            const auto res = monte_carlo(spec, mc);
            write_text_file(out / "replicates.csv", replicates_to_csv(res.records));
            write_text_file(out / "summary.csv", summary_to_csv(res.summaries));
            if (verbosity >= 1) {
                log << "monte carlo (" << config.runs << " runs)\n";
                log << "class            q1            median        q3            failures\n";
                for (const auto& s : res.summaries) {
                    log << std::left << std::setw(17) << s.cls << std::setw(14) << fmt(s.q1) << std::setw(14)
                        << fmt(s.median) << std::setw(14) << fmt(s.q3) << s.failures << '\n';
                }
            }
        }
    } catch (const std::exception& e) {
        outcome.code = exit_code_for(e);
        outcome.message = e.what();
    }
    return outcome;
}

ExperimentOutcome run_experiment(const std::filesystem::path& config_path, std::ostream& log) {
    try {
        const auto cfg = load_experiment_config(config_path);
        const auto spec = load_network(cfg.network_path);
        return run_experiment(spec, cfg, log);
    } catch (const std::exception& e) {
        ExperimentOutcome outcome;
        outcome.code = exit_code_for(e);
        outcome.message = e.what();
        return outcome;
    }
}

}  // namespace distvrft
