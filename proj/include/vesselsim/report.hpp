#pragma once

#include <ostream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "vesselsim/scenario.hpp"

namespace vesselsim {

enum class Command { VesselChsh, LocalityCheck, SampleState, QuantumChsh, Flow };

std::string_view to_string(Command command);
/// Throws ConfigError for unknown names.
Command parse_command(std::string_view name);

struct RunOptions {
  unsigned workers = 1;
};

/// Executes a command and returns the JSON report. Keys: command, scenario,
/// estimates, bell, factorization, version, seed, plus command-specific
/// sections. Domain failures propagate as vesselsim::Error.
nlohmann::json run_command(Command command, const Scenario& scenario,
                           const RunOptions& options = {});

/// Per-run CSV rows for the command. Aggregating them reproduces the JSON
/// report's estimates.
void write_csv(Command command, const Scenario& scenario, std::ostream& out);

/// Canonical serialisation used for byte-level reproducibility.
std::string dump_report(const nlohmann::json& report);

}  // namespace vesselsim
