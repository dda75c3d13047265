#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string_view>
#include <variant>

#include "vesselsim/vessel_model.hpp"

namespace vesselsim {

struct UniformDiameters {
  double a_low = 0.5;
  double a_high = 3.0;
  double b_low = 0.5;
  double b_high = 3.0;
};

/// ln(diameter) ~ N(mu, sigma), independently per siphon.
struct LogNormalDiameters {
  double mu = 0.0;
  double sigma = 0.5;
};

using DiameterDistribution = std::variant<UniformDiameters, LogNormalDiameters>;

/// Measure over the hidden-variable space plus the seed that fixes the draws.
class HiddenVariableSampler {
 public:
  explicit HiddenVariableSampler(std::uint64_t seed, DiameterDistribution distribution = {});

  std::uint64_t seed() const noexcept { return seed_; }
  const DiameterDistribution& distribution() const noexcept { return distribution_; }

  SiphonDiameters draw(std::mt19937_64& engine) const;

 private:
  std::uint64_t seed_;
  DiameterDistribution distribution_;
};

struct ExpectationEstimate {
  CoincidencePair pair = kPairAB;
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
};

/// Mean and standard error of n samples of +1/-1 whose sum is `sum`.
ExpectationEstimate make_sign_estimate(const CoincidencePair& pair, std::int64_t sum,
                                       std::uint64_t n);

enum class BellClass { Local, QuantumAttainable, SuperQuantum };

std::string_view to_string(BellClass c);

inline constexpr double kLocalBound = 2.0;
inline constexpr double kQuantumBound = 2.8284271247461903;  // 2 sqrt 2
inline constexpr double kAlgebraicBound = 4.0;
inline constexpr double kBoundTolerance = 1e-12;

/// |value| <= 2 local, <= 2 sqrt 2 quantum, otherwise super-quantum. Boundary
/// values belong to the lower region.
BellClass classify_bell_value(double value) noexcept;

/// E(A'B') + E(A'B) + E(AB') - E(AB).
double bell_combination(double e_aprime_bprime, double e_aprime_b, double e_a_bprime,
                        double e_ab) noexcept;

struct BellStatistic {
  double value = 0.0;
  double std_error = 0.0;  // propagated from the components
  /// Components in argument order: A'B', A'B, AB', AB.
  std::array<ExpectationEstimate, 4> components{};
  BellClass classification = BellClass::Local;
};

/// Throws MismatchedPairs unless the arguments carry A'B', A'B, AB', AB in
/// that order.
BellStatistic bell_statistic(const ExpectationEstimate& e_aprime_bprime,
                             const ExpectationEstimate& e_aprime_b,
                             const ExpectationEstimate& e_a_bprime,
                             const ExpectationEstimate& e_ab);

struct EstimateOptions {
  TiePolicy tie{};
  unsigned workers = 1;
};

/// Samples per random substream. Substreams are keyed by (pair, block).
inline constexpr std::uint64_t kBlockSize = 8192;

/// Observer for individual runs, called in sample order.
using RunSink =
    std::function<void(std::uint64_t run, const SiphonDiameters&, const CoincidenceRun&)>;

/// Throws InvalidArgument when n == 0.
ExpectationEstimate estimate_expectation(const CoincidencePair& pair,
                                         const HiddenVariableSampler& sampler,
                                         const VesselSystem& system, std::uint64_t n,
                                         const EstimateOptions& options = {},
                                         const RunSink& sink = {});

BellStatistic run_full_experiment(const HiddenVariableSampler& sampler,
                                  const VesselSystem& system, std::uint64_t n_per_pair,
                                  const EstimateOptions& options = {});

/// Runs fn(block, first, count) for every block of n samples over `workers`
/// threads. Blocks are claimed dynamically; callers must merge per-block
/// results in block order.
void for_each_block(std::uint64_t n, unsigned workers,
                    const std::function<void(std::uint64_t block, std::uint64_t first,
                                             std::uint64_t count)>& fn);

}  // namespace vesselsim
