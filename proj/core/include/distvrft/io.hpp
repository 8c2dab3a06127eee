#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "distvrft/controller.hpp"
#include "distvrft/monte_carlo.hpp"
#include "distvrft/network.hpp"
#include "distvrft/signal.hpp"
#include "distvrft/virtual_signals.hpp"

namespace distvrft {

// Network files: {"nodes": [{"id", "G", "W": {"j": tf}, "F", "T", "Q", "P"}], "edges": [[i, j]]}
// with node ids 1..L and a transfer function written {"num": [...], "den": [...]}
// (descending powers of q) or a plain number. Parse failures throw SpecError.
NetworkSpec parse_network(const std::string& text);
NetworkSpec load_network(const std::filesystem::path& path);
std::string network_to_json(const NetworkSpec& spec);

// Identified u-rows per node plus a diagnostics block.
std::string controller_to_json(const SynthesisResult& result);
// Rebuilds the controller; interconnection rows come from `reference_rows`.
DistributedController parse_controller(const std::string& text, const DistributedController& reference_rows);
DistributedController load_controller(const std::filesystem::path& path, const DistributedController& reference_rows);

struct IoData {
    MultiSignal u;
    MultiSignal y;
};

// Header `t,u_1..u_L,y_1..y_L`, one sample per row.
std::string data_to_csv(const MultiSignal& u, const MultiSignal& y);
IoData parse_data_csv(const std::string& text);
IoData load_data_csv(const std::filesystem::path& path);

std::string virtual_to_csv(const VirtualData& vd);
std::string replicates_to_csv(const std::vector<ReplicateRecord>& records);
std::string summary_to_csv(const std::vector<ClassSummary>& summaries);
std::string trace_to_csv(const std::vector<std::string>& labels, const std::vector<StepTrace>& traces);

// Throws ConfigError on I/O failure.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace distvrft
