#pragma once

// Bell's locality condition applied to deterministic hidden-variable tables:
// does some context-free assignment of single-side outcomes reproduce all four
// joint products for a given lambda?

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vesselsim/vessel_model.hpp"

namespace vesselsim {

/// Joint products for one lambda, indexed in canonical pair order
/// (AB, A'B, AB', A'B').
struct ContextualOutcomeTable {
  std::array<int, 4> products{};

  int operator[](const CoincidencePair& pair) const { return products[pair.index()]; }
  int entry_product() const noexcept;

  friend bool operator==(const ContextualOutcomeTable&, const ContextualOutcomeTable&) = default;
};

/// Throws InvalidArgument unless every entry is +1 or -1.
void validate(const ContextualOutcomeTable& table);

/// Single-side outcomes E(A), E(A'), E(B), E(B') used in a factorization.
struct SideAssignment {
  int a = 1;
  int a_prime = 1;
  int b = 1;
  int b_prime = 1;

  friend bool operator==(const SideAssignment&, const SideAssignment&) = default;
};

/// An experiment whose outcome at fixed lambda changes with its partner.
struct ContextWitness {
  SiphonDiameters lambda{1.0, 1.0};
  ExperimentKind experiment = ExperimentKind::A;
  ExperimentKind context_first = ExperimentKind::B;
  ExperimentKind context_second = ExperimentKind::BPrime;
  int value_first = 0;
  int value_second = 0;
};

struct FactorizationReport {
  bool satisfiable = false;
  std::optional<SideAssignment> assignment;
  int assignments_checked = 0;
  bool exhausted = false;
  std::vector<ContextWitness> witnesses;
};

ContextualOutcomeTable contextual_table(const SiphonDiameters& lambda,
                                        const VesselSystem& system, TiePolicy tie = {});

/// Tries all 16 sign assignments, E(A) and E(A') varying slowest, +1 first.
FactorizationReport search_factorization(const ContextualOutcomeTable& table);

/// E(A, lambda) measured with partner B versus with partner B'.
struct Witness {
  int with_b = 0;
  int with_b_prime = 0;
  bool differs = false;
};

Witness contextuality_witness(const SiphonDiameters& lambda, TiePolicy tie = {});

/// Every (experiment, context pair) whose outcome differs at this lambda,
/// for both sides.
std::vector<ContextWitness> context_witnesses(const SiphonDiameters& lambda,
                                              const VesselSystem& system, TiePolicy tie = {});

/// Four-context outcome oracle: any deterministic hidden-variable model.
class CoincidenceModel {
 public:
  virtual ~CoincidenceModel() = default;
  virtual ContextualOutcomeTable table(const SiphonDiameters& lambda) const = 0;
};

class VesselCoincidenceModel final : public CoincidenceModel {
 public:
  explicit VesselCoincidenceModel(VesselSystem system = {}, TiePolicy tie = {});
  ContextualOutcomeTable table(const SiphonDiameters& lambda) const override;

 private:
  VesselSystem system_;
  TiePolicy tie_;
};

enum class CorrelationKind { FirstKind, SecondKind };

std::string_view to_string(CorrelationKind kind);

/// SecondKind as soon as one sampled lambda admits no factorization.
/// Throws EmptySampleSet on an empty sample.
CorrelationKind classify_correlations(const CoincidenceModel& model,
                                      std::span<const SiphonDiameters> lambda_samples);

/// Aggregate over many lambdas, as reported by the locality-check command.
struct LocalityAnalysis {
  std::size_t samples = 0;
  std::size_t satisfiable_count = 0;
  std::size_t assignments_checked = 0;
  std::size_t witness_count = 0;        // lambdas with E(A|B) != E(A|B')
  std::size_t a_narrower_count = 0;     // lambdas with lambda_a < lambda_b
  std::size_t context_witness_count = 0;  // lambdas with a witness on either side
  CorrelationKind kind = CorrelationKind::SecondKind;
  std::vector<ContextWitness> example_witnesses;
};

LocalityAnalysis analyze_locality(const VesselSystem& system,
                                  std::span<const SiphonDiameters> lambda_samples,
                                  TiePolicy tie = {}, std::size_t max_examples = 8);

}  // namespace vesselsim
