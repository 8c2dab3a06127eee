#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "distvrft/controller.hpp"
#include "distvrft/ideal_controller.hpp"
#include "distvrft/monte_carlo.hpp"
#include "distvrft/network.hpp"

namespace distvrft {

enum class ExitCode : int {
    ok = 0,
    failure = 1,
    config = 2,
    assumption = 3,
    realizability = 4,
    excitation = 5,
};

// Maps library errors to exit codes: ConfigError/SpecError -> config,
// NotRepresentableError -> realizability, ExcitationError -> excitation.
ExitCode exit_code_for(const std::exception& e);

// DISTVRFT_LOG: 0 quiet, 1 summary (default), 2 detailed.
int log_level_from_env();

// "full", "reduced" (the default removed links for the graph) or "decentralized".
// Throws ConfigError otherwise.
ControllerClass controller_class_by_name(const std::string& name, const Graph& graph);

// JSON experiment config. The network path is resolved relative to `base_dir`, out_dir
// relative to the working directory.
// Unknown keys are rejected. Throws ConfigError.
ExperimentConfig parse_experiment_config(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

std::string format_validation(const ValidationReport& rep);
std::string format_realizability(const RealizabilityReport& rep);
std::string format_controller(const DistributedController& ctrl);

struct ClassOutcome {
    std::string cls;
    double metric = 0.0;
    double jmr = 0.0;
    // max-norm distance to the ideal parameters; NaN when the class cannot represent them
    double rho_error = 0.0;
    bool equivalent_minimum = false;
};

struct ExperimentOutcome {
    ExitCode code = ExitCode::ok;
    std::string message;
    std::vector<ClassOutcome> classes;
};

// validate -> ideal controller and realizability -> data (seed) -> virtual signals ->
// identification per class -> evaluation, then the Monte Carlo study when runs > 1.
// Writes data.csv, virtual.csv, controller_<class>.json, traces.csv and, for the Monte Carlo
// part, replicates.csv and summary.csv into config.out_dir. Never throws.
ExperimentOutcome run_experiment(const NetworkSpec& spec, const ExperimentConfig& config, std::ostream& log);
ExperimentOutcome run_experiment(const std::filesystem::path& config_path, std::ostream& log);

}  // namespace distvrft
