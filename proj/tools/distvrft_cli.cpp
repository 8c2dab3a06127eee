#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "distvrft/errors.hpp"
#include "distvrft/evaluation.hpp"
#include "distvrft/experiment.hpp"
#include "distvrft/ideal_controller.hpp"
#include "distvrft/io.hpp"
#include "distvrft/monte_carlo.hpp"
#include "distvrft/virtual_signals.hpp"

namespace fs = std::filesystem;
using namespace distvrft;

namespace {

struct Options {
    std::string network;
    std::string config;
    std::string data;
    std::string controller;
    std::string out = "out";
    std::string cls = "full";
    std::vector<std::string> removed;
    std::uint64_t seed = 1;
    std::size_t runs = 100;
    std::size_t grid = 512;
    std::size_t samples = 100;
    std::size_t trim = 1;
    std::size_t horizon = 100;
    double sigma_u = 1.0;
    double sigma_v = 0.1;
    bool generate_data = false;
    bool all_classes = false;
};

int code(ExitCode c) { return static_cast<int>(c); }

std::vector<ControllerClass> selected_classes(const Options& opt, const Graph& graph) {
    if (opt.all_classes) return default_classes(graph);
    if (opt.cls != "custom") {
        if (!opt.removed.empty()) throw ConfigError("--remove is only valid with --class custom");
        return {controller_class_by_name(opt.cls, graph)};
    }
    ControllerClass cls{"custom", false, {}};
    for (const auto& link : opt.removed) {
        const auto dash = link.find('-');
        try {
            if (dash == std::string::npos) throw std::invalid_argument(link);
            const auto a = std::stoul(link.substr(0, dash));
            const auto b = std::stoul(link.substr(dash + 1));
            if (a < 1 || b < 1) throw std::invalid_argument(link);
            cls.removed_links.emplace_back(a - 1, b - 1);
        } catch (const std::logic_error&) {
            throw ConfigError("--remove expects links like 1-2, got '" + link + "'");
        }
    }
    return {cls};
}

void print_metrics(std::ostream& os, const std::string& label, double metric, double jmr) {
    os << std::left << std::setw(17) << label << " metric " << std::setw(14) << metric << "J_MR " << jmr << '\n';
}

int cmd_validate(const Options& opt) {
    const auto spec = load_network(opt.network);
    const auto rep = validate_network(spec, frequency_grid(opt.grid));
    std::cout << format_validation(rep);
    return rep.valid() ? 0 : code(ExitCode::assumption);
}

int cmd_ideal(const Options& opt) {
    const auto spec = load_network(opt.network);
    const auto real = check_realizability(spec);
    std::cout << format_realizability(real);
    if (!real.ok()) return code(ExitCode::realizability);
    std::cout << format_controller(build_ideal_controller(spec.with_unit_output_filters()));
    return 0;
}

int cmd_synthesize(const Options& opt) {
    const auto spec = load_network(opt.network);
    const auto data = load_data_csv(opt.data);
    if (data.u.size() != spec.size()) throw ConfigError("data has a different node count than the network");
    const auto results =
        synthesize_controllers(spec, data.u, data.y, selected_classes(opt, spec.graph), opt.trim, Tolerances{});
    for (const auto& syn : results) {
        const fs::path file = fs::path(opt.out) / ("controller_" + syn.cls.name + ".json");
        write_text_file(file, controller_to_json(syn));
        for (const auto& w : syn.excitation.warnings) std::cerr << "warning: " << w << '\n';
        if (log_level_from_env() >= 1) std::cout << "wrote " << file.string() << '\n';
    }
    return 0;
}

int cmd_evaluate(const Options& opt) {
    const auto spec = load_network(opt.network);
    const NetworkSpec unit = spec.with_unit_output_filters();
    const auto ideal = build_ideal_controller(unit);
    if (opt.generate_data) {
        const auto data = generate_data(spec, opt.samples, opt.sigma_u, opt.sigma_v, opt.seed);
        const fs::path file = fs::path(opt.out) / "data.csv";
        write_text_file(file, data_to_csv(data.u, data.y));
        if (log_level_from_env() >= 1) std::cout << "wrote " << file.string() << '\n';
        if (opt.controller.empty()) return 0;
    }
    const auto ctrl = opt.controller.empty() ? ideal : load_controller(opt.controller, ideal);
    const auto label = opt.controller.empty() ? std::string("ideal") : fs::path(opt.controller).stem().string();
    const auto metric = performance_metric(unit, ctrl, frequency_grid(opt.grid));
    const auto trace = step_response(spec, ctrl, step_amplitudes(spec.size(), opt.seed), opt.horizon);
    write_text_file(fs::path(opt.out) / "traces.csv", trace_to_csv({label}, {trace}));
    print_metrics(std::cout, label, metric.value, trace.jmr);
    if (metric.skipped > 0) std::cerr << "warning: " << metric.skipped << " grid points skipped (poles)\n";
    if (trace.diverged) std::cerr << "warning: closed-loop step response diverged\n";
    return 0;
}

int cmd_montecarlo(const Options& opt) {
    const auto spec = load_network(opt.network);
    ExperimentConfig cfg;
    cfg.samples = opt.samples;
    cfg.sigma_u = opt.sigma_u;
    cfg.sigma_v = opt.sigma_v;
    cfg.seed = opt.seed;
    cfg.runs = opt.runs;
    cfg.grid_size = opt.grid;
    cfg.trim = opt.trim;
    cfg.eval_horizon = opt.horizon;
    cfg.out_dir = opt.out;
    cfg.classes = selected_classes(opt, spec.graph);
    const auto res = monte_carlo(spec, cfg);
    write_text_file(fs::path(opt.out) / "replicates.csv", replicates_to_csv(res.records));
    write_text_file(fs::path(opt.out) / "summary.csv", summary_to_csv(res.summaries));
    if (log_level_from_env() >= 1) std::cout << summary_to_csv(res.summaries);
    return 0;
}

int cmd_run(const Options& opt) {
    const auto outcome = run_experiment(opt.config, std::cout);
    if (outcome.code != ExitCode::ok) std::cerr << "error: " << outcome.message << '\n';
    return code(outcome.code);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Data-driven distributed controller synthesis by virtual reference tuning"};
    app.require_subcommand(1);
    Options opt;

    auto add_network = [&opt](CLI::App* sub) { sub->add_option("network", opt.network, "Network JSON file")->required(); };
    auto add_out = [&opt](CLI::App* sub) { sub->add_option("--out", opt.out, "Output directory")->capture_default_str(); };
    auto add_grid = [&opt](CLI::App* sub) {
        sub->add_option("--grid", opt.grid, "Frequency grid size")->capture_default_str()->check(CLI::PositiveNumber);
    };
    auto add_class = [&opt](CLI::App* sub) {
        sub->add_option("--class", opt.cls, "Controller class")
            ->capture_default_str()
            ->check(CLI::IsMember({"full", "reduced", "decentralized", "custom"}));
        sub->add_option("--remove", opt.removed, "Link removed from a custom class, e.g. 1-2");
        sub->add_flag("--all-classes", opt.all_classes, "Full, reduced and decentralized classes");
    };
    auto add_data_gen = [&opt](CLI::App* sub) {
        sub->add_option("--seed", opt.seed, "Seed")->capture_default_str();
        sub->add_option("--samples,-N", opt.samples, "Data length")->capture_default_str()->check(CLI::Range(10, 100000000));
        sub->add_option("--sigma-u", opt.sigma_u, "Input standard deviation")->capture_default_str()->check(CLI::PositiveNumber);
        sub->add_option("--sigma-v", opt.sigma_v, "Output noise standard deviation")->capture_default_str()->check(CLI::NonNegativeNumber);
    };

    auto* validate = app.add_subcommand("validate", "Check the well-posedness assumptions");
    add_network(validate);
    add_grid(validate);

    auto* ideal = app.add_subcommand("ideal", "Check realizability and print the ideal controller");
    add_network(ideal);

    auto* synth = app.add_subcommand("synthesize", "Identify controllers from u/y data");
    add_network(synth);
    synth->add_option("--data", opt.data, "CSV with header t,u_1..u_L,y_1..y_L")->required();
    synth->add_option("--trim", opt.trim, "Initial regressor rows dropped")->capture_default_str();
    add_class(synth);
    add_out(synth);

    auto* eval = app.add_subcommand("evaluate", "Performance of a controller, or generate experiment data");
    add_network(eval);
    eval->add_option("--controller", opt.controller, "Controller JSON (default: ideal controller)");
    eval->add_flag("--generate-data", opt.generate_data, "Write a simulated data.csv");
    eval->add_option("--horizon", opt.horizon, "Step response length")->capture_default_str();
    add_data_gen(eval);
    add_grid(eval);
    add_out(eval);

    auto* mc = app.add_subcommand("montecarlo", "Monte Carlo study over controller classes");
    add_network(mc);
    mc->add_option("--runs", opt.runs, "Replicates")->capture_default_str()->check(CLI::PositiveNumber);
    mc->add_option("--trim", opt.trim, "Initial regressor rows dropped")->capture_default_str();
    mc->add_option("--horizon", opt.horizon, "Step response length")->capture_default_str();
    add_class(mc);
    add_data_gen(mc);
    add_grid(mc);
    add_out(mc);

    auto* run = app.add_subcommand("run", "Run a configured experiment");
    run->add_option("config", opt.config, "Experiment JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : code(ExitCode::config);
    }

    try {
        if (*validate) return cmd_validate(opt);
        if (*ideal) return cmd_ideal(opt);
        if (*synth) return cmd_synthesize(opt);
        if (*eval) return cmd_evaluate(opt);
        if (*mc) {
            if (!mc->count("--class")) opt.all_classes = true;
            return cmd_montecarlo(opt);
        }
        if (*run) return cmd_run(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return code(exit_code_for(e));
    }
    return code(ExitCode::failure);
}
