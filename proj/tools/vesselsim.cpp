// vesselsim <subcommand> --scenario <path> [--out <path>] [--format json|csv]

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "vesselsim/error.hpp"
#include "vesselsim/kernels.hpp"
#include "vesselsim/report.hpp"
#include "vesselsim/scenario.hpp"
#include "vesselsim/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitFailure = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interconnected-vessels Bell experiment simulator"};
  app.set_version_flag("--version", vesselsim::kVersion);
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_path;
  std::string format = "json";
  unsigned workers = 1;
  std::optional<std::uint64_t> seed;

  const std::pair<const char*, const char*> commands[] = {
      {"vessel-chsh", "Estimate the four coincidence expectations and the Bell combination"},
      {"locality-check", "Search for context-free factorizations over sampled hidden variables"},
      {"sample-state", "Born-sample the superposition state and report its Schmidt rank"},
      {"quantum-chsh", "Singlet reference statistic at the configured angles"},
      {"flow", "Integrate a single siphon drainage"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    sub->add_option("--out", out_path, "Write the report here instead of stdout");
    sub->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--workers", workers, "Worker threads (results do not depend on this)")
        ->check(CLI::Range(1u, 1024u));
    sub->add_option("--seed", seed, "Seed; overrides the scenario's seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const auto* chosen = app.get_subcommands().front();
  try {
    const auto command = vesselsim::parse_command(chosen->get_name());
    const auto scenario = vesselsim::parse_scenario(scenario_path, seed);

    // Build the whole output first so an error never leaves a partial report.
    std::ostringstream buffer;
    if (format == "csv") {
      vesselsim::write_csv(command, scenario, buffer);
    } else {
      buffer << vesselsim::dump_report(vesselsim::run_command(command, scenario, {workers}));
    }

    if (out_path.empty()) {
      std::cout << buffer.str();
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out || !(out << buffer.str())) {
        std::cerr << "error: cannot write '" << out_path << "'\n";
        return kExitFailure;
      }
    }
    return kExitOk;
  } catch (const vesselsim::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const vesselsim::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
