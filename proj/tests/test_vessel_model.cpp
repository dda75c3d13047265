#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "vesselsim/error.hpp"
#include "vesselsim/vessel_model.hpp"

using namespace vesselsim;

TEST_CASE("joint_outcome_ab follows the wider siphon") {
  CHECK(joint_outcome_ab({2.0, 1.0}) == OutcomePair{+1, -1});
  CHECK(joint_outcome_ab({1.0, 2.0}) == OutcomePair{-1, +1});
  CHECK_THROWS_AS(joint_outcome_ab({1.0, 1.0}), DegenerateTie);
  CHECK_THROWS_AS(joint_outcome_ab({1.0, 1.0}, TiePolicy::error()), DegenerateTie);
}

TEST_CASE("tie policies") {
  const SiphonDiameters tie{1.5, 1.5};
  CHECK(joint_outcome_ab(tie, TiePolicy::favor_left()) == OutcomePair{+1, -1});
  CHECK(joint_outcome_ab(tie, TiePolicy::favor_right()) == OutcomePair{-1, +1});

  // The coin is reproducible and both faces occur across seeds.
  int heads = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto first = joint_outcome_ab(tie, TiePolicy::split_coin(seed));
    CHECK(first == joint_outcome_ab(tie, TiePolicy::split_coin(seed)));
    CHECK(first.left == -first.right);
    heads += first.left > 0;
  }
  CHECK(heads > 60);
  CHECK(heads < 140);
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_AS(SiphonDiameters(0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(SiphonDiameters(1.0, -2.0), InvalidArgument);
  CHECK_THROWS_AS(SiphonDiameters(std::nan(""), 1.0), InvalidArgument);
  CHECK_THROWS_AS(validate(VesselSystem{0.0, true}), InvalidArgument);
  CHECK_THROWS_AS(CoincidencePair(ExperimentKind::B, ExperimentKind::A), InvalidArgument);
  CHECK_THROWS_AS(CoincidencePair(ExperimentKind::A, ExperimentKind::APrime), InvalidArgument);
}

TEST_CASE("pair naming and indexing") {
  for (std::size_t i = 0; i < 4; ++i) {
    const auto p = CoincidencePair::from_index(i);
    CHECK(p.index() == i);
    CHECK(CoincidencePair::parse(p.name()) == p);
  }
  CHECK(kPairAPrimeB.name() == "A'B");
  CHECK_THROWS_AS(CoincidencePair::parse("BA"), InvalidArgument);
}

TEST_CASE("solo siphon and spoon outcomes") {
  CHECK(outcome_solo_siphon() == +1);
  CHECK(spoon_outcome(VesselSystem{}) == +1);
  CHECK(spoon_outcome(VesselSystem{20.0, true}) == +1);
  CHECK(spoon_outcome(VesselSystem{20.0, false}) == -1);
  // A lone siphon collects the whole system, which always beats half of it.
  const VesselSystem sys{};
  CHECK(sys.total_volume > sys.threshold());
}

TEST_CASE("run_coincidence reproduces the four observed products") {
  const VesselSystem sys{};
  CHECK(run_coincidence(kPairAB, {2.0, 1.0}, sys).product == -1);
  CHECK(run_coincidence(kPairAPrimeBPrime, {2.0, 1.0}, sys).product == +1);
  const auto ab_prime = run_coincidence(kPairABPrime, {1.0, 2.0}, sys);
  CHECK(ab_prime.outcome_left == +1);
  CHECK(ab_prime.outcome_right == +1);
  CHECK(ab_prime.product == +1);
  CHECK(run_coincidence(kPairAPrimeB, {1.0, 2.0}, sys).product == +1);

  CHECK(run_coincidence(kPairAB, {2.0, 1.0}, sys).split.has_value());
  CHECK_FALSE(run_coincidence(kPairABPrime, {2.0, 1.0}, sys).split.has_value());
  CHECK_THROWS_AS(run_coincidence(kPairAB, {1.0, 1.0}, sys), DegenerateTie);
}

TEST_CASE("vessel model properties over random lambdas") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> diam(0.1, 5.0);
  std::uniform_real_distribution<double> vol(1.0, 100.0);
  for (int i = 0; i < 2000; ++i) {
    const SiphonDiameters lambda(diam(rng), diam(rng));
    const VesselSystem sys{vol(rng), (i % 3) != 0};
    for (std::size_t p = 0; p < 4; ++p) {
      const auto pair = CoincidencePair::from_index(p);
      const auto run = run_coincidence(pair, lambda, sys);
      CHECK(run.product == run.outcome_left * run.outcome_right);
      // Determinism.
      const auto again = run_coincidence(pair, lambda, sys);
      CHECK(again.product == run.product);
      if (run.split) {
        CHECK(std::abs(run.split->x_left + run.split->x_right - sys.total_volume) <= 1e-9);
      }
    }
    CHECK(run_coincidence(kPairAB, lambda, sys).product == -1);
    // Spoon tests ignore lambda entirely.
    const SiphonDiameters other(diam(rng), diam(rng));
    CHECK(run_coincidence(kPairAPrimeBPrime, lambda, sys).outcome_left ==
          run_coincidence(kPairAPrimeBPrime, other, sys).outcome_left);
  }
}

TEST_CASE("simulate_flow") {
  const VesselSystem sys{};
  SUBCASE("equal siphons split evenly") {
    const auto split = simulate_flow({1.0, 1.0}, sys, 1e-3);
    CHECK(split.x_left == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(split.x_right == doctest::Approx(10.0).epsilon(1e-12));
  }
  SUBCASE("(2, 1) collects 16 L on the left") {
    const auto split = simulate_flow({2.0, 1.0}, sys, 1e-4);
    CHECK(std::abs(split.x_left - 16.0) <= 0.05);
    CHECK(std::abs(split.x_left + split.x_right - 20.0) <= 1e-9);
    CHECK(outcomes_from_split(split, sys, {2.0, 1.0}) == joint_outcome_ab({2.0, 1.0}));
  }
  SUBCASE("non-positive steps") {
    CHECK_THROWS_AS(simulate_flow({2.0, 1.0}, sys, 0.0), InvalidStep);
    CHECK_THROWS_AS(simulate_flow({2.0, 1.0}, sys, -1e-3), InvalidStep);
  }
  SUBCASE("coarse steps still land on the closed form") {
    for (double dt : {1e-1, 1e-2, 1e-3}) {
      const auto split = simulate_flow({0.7, 2.3}, sys, dt);
      CHECK(std::abs(split.x_left - closed_form_left_volume({0.7, 2.3}, sys)) <= 1e-9);
    }
  }
  SUBCASE("a step budget that is too small is a numerical failure") {
    CHECK_THROWS_AS(simulate_flow({2.0, 1.0}, sys, 1e-4, {1.0, 10}), Error);
  }
  SUBCASE("the split on the threshold routes through the tie policy") {
    const SplitVolume even{10.0, 10.0};
    CHECK_THROWS_AS(outcomes_from_split(even, sys, {1.0, 1.0}), DegenerateTie);
    CHECK(outcomes_from_split(even, sys, {1.0, 1.0}, TiePolicy::favor_right()) == OutcomePair{-1, 1});
  }
}

TEST_CASE("instant levelling is the limit of a finite tube") {
  // Oracle: RK4 on a two-vessel model whose tube has finite conductance.
  const VesselSystem sys{};
  for (auto [a, b] : {std::pair{2.0, 1.0}, {1.0, 2.0}, {0.8, 2.9}, {2.5, 2.4}}) {
    const double reference = oracle::finite_tube_left_volume(a, b, 20.0, 200.0, 1e-3);
    const auto split = simulate_flow({a, b}, sys, 1e-3);
    CHECK(std::abs(split.x_left - reference) <= 0.05);
  }
  // Frozen from the oracle above: 20 * 4 / 5.
  CHECK(oracle::finite_tube_left_volume(2.0, 1.0, 20.0, 200.0, 1e-3) == doctest::Approx(16.0).epsilon(0.003));
}

TEST_CASE("flow sign agrees with the diameter rule on a grid") {
  const VesselSystem sys{};
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const double a = 0.5 + 2.5 * i / 9.0;
      const double b = 0.5 + 2.5 * j / 9.0 + 0.013;
      if (std::abs(a - b) <= 0.01) continue;
      const SiphonDiameters lambda(a, b);
      const auto split = simulate_flow(lambda, sys, 1e-3);
      const int sign = split.x_left > sys.threshold() ? 1 : -1;
      CHECK(sign == joint_outcome_ab(lambda).left);
    }
  }
}
