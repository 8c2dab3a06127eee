#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "distvrft/controller.hpp"
#include "distvrft/ideal_controller.hpp"
#include "distvrft/identification.hpp"
#include "distvrft/network.hpp"
#include "distvrft/parametrization.hpp"
#include "distvrft/signal.hpp"
#include "distvrft/virtual_signals.hpp"

namespace distvrft {

struct Tolerances {
    double assumption = kAssumptionThreshold;
    double cancellation = kDefaultCancellationTol;
    double root_match = kRootMatchTol;
    double representation = kRepresentationTol;
    double gram_condition = kGramConditionThreshold;
    double equivalence = kEquivalenceTol;
};

struct ExperimentConfig {
    std::string network_path;
    std::size_t samples = 100;
    double sigma_u = 1.0;
    double sigma_v = 0.1;
    std::uint64_t seed = 1;
    std::size_t runs = 100;
    std::vector<ControllerClass> classes;
    std::size_t grid_size = 512;
    std::size_t trim = 1;
    std::size_t eval_horizon = 100;
    unsigned threads = 0;  // 0: hardware concurrency
    Tolerances tolerances;
    std::string out_dir = "out";

    // Throws ConfigError when N < 10, runs < 1, σ_u <= 0, σ_v < 0 or the grid is empty.
    void validate() const;
};

// Full, reduced-links (from nine_node_reduced_links() when the graph is the 3x3 grid,
// otherwise none) and decentralized.
std::vector<ControllerClass> default_classes(const Graph& graph);
// Empty list -> default_classes; a "reduced" class without removed links gets the default ones.
std::vector<ControllerClass> resolve_classes(const std::vector<ControllerClass>& classes, const Graph& graph);

struct ExperimentData {
    MultiSignal u;
    MultiSignal y;        // measured, noise included
    MultiSignal y_clean;  // plant response without noise
};

// Gaussian u (σ_u) for every node, then Gaussian v (σ_v), from one mt19937_64 stream.
ExperimentData generate_data(const NetworkSpec& spec, std::size_t samples, double sigma_u, double sigma_v,
                             std::uint64_t seed);

struct SynthesisResult {
    ControllerClass cls;
    DistributedController controller;
    ControllerParametrization param;
    std::vector<Eigen::VectorXd> rho;
    std::vector<IdentificationResult> fits;
    ExcitationDiagnostics excitation;
};

// Reference rows and parametrization come from the ideal controller of `spec`
// (with unit output filters); u-rows are identified from the virtual data.
SynthesisResult synthesize_controller(const NetworkSpec& spec, const VirtualData& vd, const MultiSignal& u,
                                      const ControllerClass& cls, std::size_t trim,
                                      const Tolerances& tol = {});
std::vector<SynthesisResult> synthesize_controllers(const NetworkSpec& spec, const MultiSignal& u,
                                                    const MultiSignal& y, const std::vector<ControllerClass>& classes,
                                                    std::size_t trim, const Tolerances& tol = {});

// Per-node step amplitudes, uniform in (0, 1].
std::vector<double> step_amplitudes(std::size_t nodes, std::uint64_t seed);
MultiSignal step_reference(const std::vector<double>& amplitudes, std::size_t horizon);

struct StepTrace {
    MultiSignal r;
    MultiSignal y;
    MultiSignal y_d;
    MultiSignal u;
    double jmr = 0.0;
    bool diverged = false;
};

StepTrace step_response(const NetworkSpec& spec, const DistributedController& ctrl,
                        const std::vector<double>& amplitudes, std::size_t horizon);

struct ReplicateRecord {
    std::uint64_t seed = 0;
    std::string cls;
    double metric = 0.0;
    double jmr = 0.0;
    bool ok = false;
    std::string error;
};

struct ClassSummary {
    std::string cls;
    std::size_t count = 0;
    std::size_t failures = 0;
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    double median_jmr = 0.0;
    std::vector<double> samples;
};

struct MonteCarloResult {
    std::vector<ReplicateRecord> records;  // replicate-major, classes in config order
    std::vector<ClassSummary> summaries;
    std::vector<double> amplitudes;
};

// Linear-interpolation sample quantile (type 7). Throws DimensionError on empty input.
double quantile(std::vector<double> values, double p);

// Replicate k uses seed config.seed + k; replicates run concurrently, results are
// independent of the thread count.
MonteCarloResult monte_carlo(const NetworkSpec& spec, const ExperimentConfig& config);

}  // namespace distvrft
