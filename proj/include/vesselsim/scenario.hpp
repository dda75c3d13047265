#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vesselsim/bell_statistics.hpp"
#include "vesselsim/vessel_model.hpp"

namespace vesselsim {

enum class SingletMode { MonteCarlo, Analytic };

/// Single flow integration parameters for the `flow` command.
struct FlowScenario {
  double lambda_a = 2.0;
  double lambda_b = 1.0;
  double dt = 1e-4;
};

struct Scenario {
  VesselSystem system{};
  DiameterDistribution sampler{};
  std::uint64_t runs_per_pair = 10000;
  std::uint64_t seed = 0;
  TiePolicy::Kind tie_policy = TiePolicy::Kind::Error;
  std::optional<std::vector<std::complex<double>>> amplitudes;
  std::optional<std::array<double, 4>> singlet_angles;  // a, a', b, b' (degrees)
  SingletMode singlet_mode = SingletMode::MonteCarlo;
  FlowScenario flow{};

  TiePolicy tie() const { return {tie_policy, seed}; }
  HiddenVariableSampler hidden_variable_sampler() const { return HiddenVariableSampler(seed, sampler); }
};

/// Validates a scenario document. Omitted fields take defaults; a missing seed
/// is an error unless seed_override is given. Throws ConfigError.
Scenario parse_scenario_json(const nlohmann::json& doc,
                             std::optional<std::uint64_t> seed_override = std::nullopt);
Scenario parse_scenario_text(std::string_view text,
                             std::optional<std::uint64_t> seed_override = std::nullopt);
Scenario parse_scenario(const std::filesystem::path& path,
                        std::optional<std::uint64_t> seed_override = std::nullopt);

/// Fully resolved scenario, every field explicit. Parsing it yields the same
/// scenario.
nlohmann::json to_json(const Scenario& scenario);

}  // namespace vesselsim
