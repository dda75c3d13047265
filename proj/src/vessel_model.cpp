#include "vesselsim/vessel_model.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <string>

#include "vesselsim/error.hpp"
#include "vesselsim/kernels.hpp"
#include "vesselsim/rng.hpp"

namespace vesselsim {

SiphonDiameters::SiphonDiameters(double lambda_a, double lambda_b)
    : lambda_a_(lambda_a), lambda_b_(lambda_b) {
  if (!(lambda_a > 0.0) || !(lambda_b > 0.0) || !std::isfinite(lambda_a) ||
      !std::isfinite(lambda_b)) {
    throw InvalidArgument("siphon diameters must be finite and strictly positive, got (" +
                          std::to_string(lambda_a) + ", " + std::to_string(lambda_b) + ")");
  }
}

void validate(const VesselSystem& system) {
  if (!(system.total_volume > 0.0) || !std::isfinite(system.total_volume)) {
    throw InvalidArgument("total_volume must be finite and strictly positive");
  }
}

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::A: return "A";
    case ExperimentKind::B: return "B";
    case ExperimentKind::APrime: return "A'";
    case ExperimentKind::BPrime: return "B'";
  }
  return "?";
}

bool is_left(ExperimentKind kind) noexcept {
  return kind == ExperimentKind::A || kind == ExperimentKind::APrime;
}

CoincidencePair::CoincidencePair(ExperimentKind left, ExperimentKind right)
    : left_(left), right_(right) {
  if (!is_left(left) || is_left(right)) {
    throw InvalidArgument("coincidence pair needs a left experiment (A, A') and a right "
                          "experiment (B, B')");
  }
}

namespace {
constexpr std::array<std::string_view, 4> kPairNames = {"AB", "A'B", "AB'", "A'B'"};
}

std::string_view CoincidencePair::name() const { return kPairNames[index()]; }

std::size_t CoincidencePair::index() const noexcept {
  const bool left_prime = left_ == ExperimentKind::APrime;
  const bool right_prime = right_ == ExperimentKind::BPrime;
  return (left_prime ? 1u : 0u) + (right_prime ? 2u : 0u);
}

CoincidencePair CoincidencePair::from_index(std::size_t index) {
  if (index > 3) throw InvalidArgument("pair index out of range");
  return {(index & 1u) ? ExperimentKind::APrime : ExperimentKind::A,
          (index & 2u) ? ExperimentKind::BPrime : ExperimentKind::B};
}

CoincidencePair CoincidencePair::parse(std::string_view name) {
  for (std::size_t i = 0; i < kPairNames.size(); ++i) {
    if (kPairNames[i] == name) return from_index(i);
  }
  throw InvalidArgument("unknown coincidence pair '" + std::string(name) + "'");
}

std::string_view to_string(TiePolicy::Kind kind) {
  switch (kind) {
    case TiePolicy::Kind::Error: return "error";
    case TiePolicy::Kind::FavorLeft: return "favor_left";
    case TiePolicy::Kind::FavorRight: return "favor_right";
    case TiePolicy::Kind::SplitCoin: return "split_coin";
  }
  return "?";
}

std::optional<TiePolicy::Kind> parse_tie_policy(std::string_view name) {
  for (auto kind : {TiePolicy::Kind::Error, TiePolicy::Kind::FavorLeft,
                    TiePolicy::Kind::FavorRight, TiePolicy::Kind::SplitCoin}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

namespace {

// Winner of a tie: +1 left, -1 right.
int break_tie(const SiphonDiameters& lambda, TiePolicy tie) {
  switch (tie.kind) {
    case TiePolicy::Kind::Error:
      throw DegenerateTie("siphon diameters are equal (" + std::to_string(lambda.lambda_a()) +
                          "); outcome undefined under tie policy 'error'");
    case TiePolicy::Kind::FavorLeft: return +1;
    case TiePolicy::Kind::FavorRight: return -1;
    case TiePolicy::Kind::SplitCoin: {
      const auto key = mix64(tie.seed ^ mix64(std::bit_cast<std::uint64_t>(lambda.lambda_a()) ^
                                              mix64(std::bit_cast<std::uint64_t>(lambda.lambda_b()) +
                                                    static_cast<std::uint64_t>(StreamTag::TieCoin))));
      return (key >> 63) ? +1 : -1;
    }
  }
  return +1;
}

}  // namespace

OutcomePair joint_outcome_ab(const SiphonDiameters& lambda, TiePolicy tie) {
  int left;
  if (lambda.lambda_b() < lambda.lambda_a()) {
    left = +1;
  } else if (lambda.lambda_a() < lambda.lambda_b()) {
    left = -1;
  } else {
    left = break_tie(lambda, tie);
  }
  return {left, -left};
}

int outcome_solo_siphon() noexcept { return +1; }

int spoon_outcome(const VesselSystem& system) noexcept { return system.transparent ? +1 : -1; }

SplitVolume simulate_flow(const SiphonDiameters& lambda, const VesselSystem& system, double dt,
                          const FlowParameters& params) {
  validate(system);
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw InvalidStep("time step must be finite and strictly positive");
  }
  const double la = lambda.lambda_a();
  const double lb = lambda.lambda_b();
  double x_left = 0.0;
  double x_right = 0.0;
  std::uint64_t steps = 0;
  kernels::drain_flow({.lambda_a = {&la, 1},
                       .lambda_b = {&lb, 1},
                       .total_volume = system.total_volume,
                       .rate_coefficient = params.rate_coefficient,
                       .dt = dt,
                       .max_steps = params.max_steps,
                       .x_left = {&x_left, 1},
                       .x_right = {&x_right, 1},
                       .steps = {&steps, 1}});
  if (steps >= params.max_steps) {
    throw Error("flow integration did not drain within " + std::to_string(params.max_steps) +
                " steps");
  }
  return {x_left, x_right};
}

double closed_form_left_volume(const SiphonDiameters& lambda, const VesselSystem& system) {
  const double wa = lambda.lambda_a() * lambda.lambda_a();
  const double wb = lambda.lambda_b() * lambda.lambda_b();
  return system.total_volume * wa / (wa + wb);
}

OutcomePair outcomes_from_split(const SplitVolume& split, const VesselSystem& system,
                                const SiphonDiameters& lambda, TiePolicy tie) {
  const double half = system.threshold();
  int left;
  if (split.x_left > half) {
    left = +1;
  } else if (split.x_left < half) {
    left = -1;
  } else {
    left = break_tie(lambda, tie);
  }
  return {left, -left};
}

CoincidenceRun run_coincidence(const CoincidencePair& pair, const SiphonDiameters& lambda,
                               const VesselSystem& system, TiePolicy tie) {
  CoincidenceRun run;
  run.pair = pair;
  const bool siphon_left = pair.left() == ExperimentKind::A;
  const bool siphon_right = pair.right() == ExperimentKind::B;
  if (siphon_left && siphon_right) {
    const auto outcomes = joint_outcome_ab(lambda, tie);
    run.outcome_left = outcomes.left;
    run.outcome_right = outcomes.right;
    const double x_left = closed_form_left_volume(lambda, system);
    run.split = SplitVolume{x_left, system.total_volume - x_left};
  } else {
    run.outcome_left = siphon_left ? outcome_solo_siphon() : spoon_outcome(system);
    run.outcome_right = siphon_right ? outcome_solo_siphon() : spoon_outcome(system);
  }
  run.product = run.outcome_left * run.outcome_right;
  return run;
}

}  // namespace vesselsim
