#include "vesselsim/locality.hpp"

#include "vesselsim/error.hpp"

namespace vesselsim {

int ContextualOutcomeTable::entry_product() const noexcept {
  return products[0] * products[1] * products[2] * products[3];
}

void validate(const ContextualOutcomeTable& table) {
  for (int p : table.products) {
    if (p != 1 && p != -1) throw InvalidArgument("outcome table entries must be +1 or -1");
  }
}

ContextualOutcomeTable contextual_table(const SiphonDiameters& lambda, const VesselSystem& system,
                                        TiePolicy tie) {
  ContextualOutcomeTable table;
  for (std::size_t i = 0; i < 4; ++i) {
    table.products[i] = run_coincidence(CoincidencePair::from_index(i), lambda, system, tie).product;
  }
  return table;
}

FactorizationReport search_factorization(const ContextualOutcomeTable& table) {
  validate(table);
  FactorizationReport report;
  // Bits 3..0 carry E(A), E(A'), E(B), E(B'); a clear bit means +1.
  for (unsigned mask = 0; mask < 16; ++mask) {
    const SideAssignment s{(mask & 8u) ? -1 : 1, (mask & 4u) ? -1 : 1, (mask & 2u) ? -1 : 1,
                           (mask & 1u) ? -1 : 1};
    ++report.assignments_checked;
    const bool reproduces = table[kPairAB] == s.a * s.b && table[kPairAPrimeB] == s.a_prime * s.b &&
                            table[kPairABPrime] == s.a * s.b_prime &&
                            table[kPairAPrimeBPrime] == s.a_prime * s.b_prime;
    if (reproduces) {
      report.satisfiable = true;
      report.assignment = s;
      return report;
    }
  }
  report.exhausted = true;
  return report;
}

Witness contextuality_witness(const SiphonDiameters& lambda, TiePolicy tie) {
  // Spoon transparency does not enter either value, so the default system is
  // as good as any.
  const VesselSystem system{};
  Witness w;
  w.with_b = run_coincidence(kPairAB, lambda, system, tie).outcome_left;
  w.with_b_prime = run_coincidence(kPairABPrime, lambda, system, tie).outcome_left;
  w.differs = w.with_b != w.with_b_prime;
  return w;
}

std::vector<ContextWitness> context_witnesses(const SiphonDiameters& lambda,
                                              const VesselSystem& system, TiePolicy tie) {
  std::array<CoincidenceRun, 4> runs{};
  for (std::size_t i = 0; i < 4; ++i) {
    runs[i] = run_coincidence(CoincidencePair::from_index(i), lambda, system, tie);
  }
  std::vector<ContextWitness> out;
  auto left_of = [&](const CoincidencePair& p) { return runs[p.index()].outcome_left; };
  auto right_of = [&](const CoincidencePair& p) { return runs[p.index()].outcome_right; };

  using K = ExperimentKind;
  if (left_of(kPairAB) != left_of(kPairABPrime)) {
    out.push_back({lambda, K::A, K::B, K::BPrime, left_of(kPairAB), left_of(kPairABPrime)});
  }
  if (left_of(kPairAPrimeB) != left_of(kPairAPrimeBPrime)) {
    out.push_back({lambda, K::APrime, K::B, K::BPrime, left_of(kPairAPrimeB),
                   left_of(kPairAPrimeBPrime)});
  }
  if (right_of(kPairAB) != right_of(kPairAPrimeB)) {
    out.push_back({lambda, K::B, K::A, K::APrime, right_of(kPairAB), right_of(kPairAPrimeB)});
  }
  if (right_of(kPairABPrime) != right_of(kPairAPrimeBPrime)) {
    out.push_back({lambda, K::BPrime, K::A, K::APrime, right_of(kPairABPrime),
                   right_of(kPairAPrimeBPrime)});
  }
  return out;
}

VesselCoincidenceModel::VesselCoincidenceModel(VesselSystem system, TiePolicy tie)
    : system_(system), tie_(tie) {
  validate(system_);
}

ContextualOutcomeTable VesselCoincidenceModel::table(const SiphonDiameters& lambda) const {
  return contextual_table(lambda, system_, tie_);
}

std::string_view to_string(CorrelationKind kind) {
  return kind == CorrelationKind::FirstKind ? "first_kind" : "second_kind";
}

CorrelationKind classify_correlations(const CoincidenceModel& model,
                                      std::span<const SiphonDiameters> lambda_samples) {
  if (lambda_samples.empty()) throw EmptySampleSet("classify_correlations needs at least one lambda");
  for (const auto& lambda : lambda_samples) {
    if (!search_factorization(model.table(lambda)).satisfiable) return CorrelationKind::SecondKind;
  }
  return CorrelationKind::FirstKind;
}

LocalityAnalysis analyze_locality(const VesselSystem& system,
                                  std::span<const SiphonDiameters> lambda_samples, TiePolicy tie,
                                  std::size_t max_examples) {
  if (lambda_samples.empty()) throw EmptySampleSet("locality analysis needs at least one lambda");
  validate(system);
  LocalityAnalysis analysis;
  analysis.samples = lambda_samples.size();
  for (const auto& lambda : lambda_samples) {
    const auto report = search_factorization(contextual_table(lambda, system, tie));
    analysis.assignments_checked += static_cast<std::size_t>(report.assignments_checked);
    if (report.satisfiable) ++analysis.satisfiable_count;
    if (lambda.lambda_a() < lambda.lambda_b()) ++analysis.a_narrower_count;
    if (contextuality_witness(lambda, tie).differs) ++analysis.witness_count;
    auto witnesses = context_witnesses(lambda, system, tie);
    if (!witnesses.empty()) ++analysis.context_witness_count;
    for (auto& w : witnesses) {
      if (analysis.example_witnesses.size() >= max_examples) break;
      analysis.example_witnesses.push_back(w);
    }
  }
  analysis.kind = analysis.satisfiable_count == analysis.samples ? CorrelationKind::FirstKind
                                                                 : CorrelationKind::SecondKind;
  return analysis;
}

}  // namespace vesselsim
