#pragma once

// Two vessels joined by a tube, each drained by a siphon (experiments A, B)
// or probed with a spoon for transparency (experiments A', B').

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>

namespace vesselsim {

/// Siphon diameters in centimetres; these are the hidden variables.
class SiphonDiameters {
 public:
  SiphonDiameters(double lambda_a, double lambda_b);

  double lambda_a() const noexcept { return lambda_a_; }
  double lambda_b() const noexcept { return lambda_b_; }

  friend bool operator==(const SiphonDiameters&, const SiphonDiameters&) = default;

 private:
  double lambda_a_;
  double lambda_b_;
};

/// Pre-measurement configuration. Each vessel holds half of total_volume.
struct VesselSystem {
  double total_volume = 20.0;  // litres
  bool transparent = true;

  double threshold() const noexcept { return total_volume / 2.0; }
};

/// Throws InvalidArgument when total_volume is not strictly positive.
void validate(const VesselSystem& system);

enum class ExperimentKind { A, B, APrime, BPrime };

std::string_view to_string(ExperimentKind kind);
bool is_left(ExperimentKind kind) noexcept;

/// One coincidence context. Construction rejects a right-side experiment on
/// the left and vice versa.
class CoincidencePair {
 public:
  CoincidencePair(ExperimentKind left, ExperimentKind right);

  ExperimentKind left() const noexcept { return left_; }
  ExperimentKind right() const noexcept { return right_; }

  /// "AB", "A'B", "AB'" or "A'B'".
  std::string_view name() const;

  /// Position in the canonical order AB, A'B, AB', A'B'.
  std::size_t index() const noexcept;

  static CoincidencePair from_index(std::size_t index);
  /// Parses the names produced by name(). Throws InvalidArgument.
  static CoincidencePair parse(std::string_view name);

  friend bool operator==(const CoincidencePair&, const CoincidencePair&) = default;

 private:
  ExperimentKind left_;
  ExperimentKind right_;
};

inline const CoincidencePair kPairAB{ExperimentKind::A, ExperimentKind::B};
inline const CoincidencePair kPairAPrimeB{ExperimentKind::APrime, ExperimentKind::B};
inline const CoincidencePair kPairABPrime{ExperimentKind::A, ExperimentKind::BPrime};
inline const CoincidencePair kPairAPrimeBPrime{ExperimentKind::APrime, ExperimentKind::BPrime};

/// What to do when the two siphons are exactly equal (or a split lands exactly
/// on the threshold). SplitCoin derives a reproducible coin from the seed and
/// the diameters, so the result is still a pure function of the inputs.
struct TiePolicy {
  enum class Kind { Error, FavorLeft, FavorRight, SplitCoin };

  Kind kind = Kind::Error;
  std::uint64_t seed = 0;

  static TiePolicy error() { return {}; }
  static TiePolicy favor_left() { return {Kind::FavorLeft, 0}; }
  static TiePolicy favor_right() { return {Kind::FavorRight, 0}; }
  static TiePolicy split_coin(std::uint64_t seed) { return {Kind::SplitCoin, seed}; }
};

std::string_view to_string(TiePolicy::Kind kind);
std::optional<TiePolicy::Kind> parse_tie_policy(std::string_view name);

/// Volumes collected in the reference vessels after an AB run.
struct SplitVolume {
  double x_left = 0.0;
  double x_right = 0.0;
};

struct CoincidenceRun {
  CoincidencePair pair = kPairAB;
  int outcome_left = 0;
  int outcome_right = 0;
  int product = 0;
  std::optional<SplitVolume> split;
};

struct OutcomePair {
  int left = 0;
  int right = 0;

  friend bool operator==(const OutcomePair&, const OutcomePair&) = default;
};

/// Both siphons active: the wider one collects more than half the water.
/// Returns (+1, -1) if lambda_b < lambda_a and (-1, +1) if lambda_a < lambda_b.
OutcomePair joint_outcome_ab(const SiphonDiameters& lambda, TiePolicy tie = {});

/// A lone siphon drains the whole system into its reference vessel.
int outcome_solo_siphon() noexcept;

int spoon_outcome(const VesselSystem& system) noexcept;

/// Drainage law for the flow model. Each siphon delivers
/// rate_coefficient * diameter^2 * sqrt(level / initial_level) litres per
/// second; the tube keeps both levels equal at every step.
struct FlowParameters {
  double rate_coefficient = 1.0;  // L / (s cm^2) at the initial level
  std::uint64_t max_steps = 2'000'000'000;
};

/// Explicit time stepping of the AB drainage. Throws InvalidStep if dt <= 0.
SplitVolume simulate_flow(const SiphonDiameters& lambda, const VesselSystem& system,
                          double dt, const FlowParameters& params = {});

/// Limit of simulate_flow as dt -> 0.
double closed_form_left_volume(const SiphonDiameters& lambda, const VesselSystem& system);

/// Outcomes read off a measured split, strict "more than half" threshold.
OutcomePair outcomes_from_split(const SplitVolume& split, const VesselSystem& system,
                                const SiphonDiameters& lambda, TiePolicy tie = {});

/// Executes one coincidence experiment. The split is filled in only for AB,
/// from the closed-form flow limit.
CoincidenceRun run_coincidence(const CoincidencePair& pair, const SiphonDiameters& lambda,
                               const VesselSystem& system, TiePolicy tie = {});

}  // namespace vesselsim
