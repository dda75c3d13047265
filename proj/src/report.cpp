#include "vesselsim/report.hpp"

#include <iomanip>
#include <sstream>
#include <limits>
#include <string>
#include <vector>

#include "vesselsim/error.hpp"
#include "vesselsim/locality.hpp"
#include "vesselsim/quantum_reference.hpp"
#include "vesselsim/rng.hpp"
#include "vesselsim/stats.hpp"
#include "vesselsim/version.hpp"

namespace vesselsim {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 5> kCommandNames{{
    {Command::VesselChsh, "vessel-chsh"},
    {Command::LocalityCheck, "locality-check"},
    {Command::SampleState, "sample-state"},
    {Command::QuantumChsh, "quantum-chsh"},
    {Command::Flow, "flow"},
}};

json estimate_json(const ExpectationEstimate& e) {
  return {{"pair", std::string(e.pair.name())}, {"mean", e.mean}, {"stderr", e.std_error}, {"n", e.n}};
}

json bell_json(double value, double std_error) {
  return {{"value", value},
          {"stderr", std_error},
          {"classification", std::string(to_string(classify_bell_value(value)))},
          {"combination", "E(A'B') + E(A'B) + E(AB') - E(AB)"},
          {"bounds",
           {{"local", kLocalBound},
            {"quantum", kQuantumBound},
            {"algebraic", kAlgebraicBound},
            {"source", "standard CHSH background bounds"}}}};
}

// Estimates listed in canonical pair order AB, A'B, AB', A'B'.
json estimates_json(const BellStatistic& s) {
  json out = json::array();
  for (std::size_t i = 0; i < 4; ++i) {
    const auto pair = CoincidencePair::from_index(i);
    for (const auto& c : s.components) {
      if (c.pair == pair) out.push_back(estimate_json(c));
    }
  }
  return out;
}

std::vector<SiphonDiameters> locality_samples(const Scenario& s) {
  const auto sampler = s.hidden_variable_sampler();
  std::vector<SiphonDiameters> out;
  out.reserve(s.runs_per_pair);
  for (std::uint64_t first = 0, block = 0; first < s.runs_per_pair; first += kBlockSize, ++block) {
    auto engine = make_stream(s.seed, StreamTag::Locality, 0, block);
    const auto count = std::min(kBlockSize, s.runs_per_pair - first);
    for (std::uint64_t i = 0; i < count; ++i) out.push_back(sampler.draw(engine));
  }
  return out;
}

json witness_json(const ContextWitness& w) {
  return {{"lambda_a", w.lambda.lambda_a()},
          {"lambda_b", w.lambda.lambda_b()},
          {"experiment", std::string(to_string(w.experiment))},
          {"contexts", {std::string(to_string(w.context_first)), std::string(to_string(w.context_second))}},
          {"values", {w.value_first, w.value_second}}};
}

json factorization_json(const LocalityAnalysis& a) {
  json examples = json::array();
  for (const auto& w : a.example_witnesses) examples.push_back(witness_json(w));
  return {{"satisfiable", a.satisfiable_count > 0},
          {"witness_count", a.witness_count},
          {"samples", a.samples},
          {"satisfiable_count", a.satisfiable_count},
          {"assignments_checked", a.assignments_checked},
          {"lambda_a_less_than_lambda_b", a.a_narrower_count},
          {"lambdas_with_any_context_witness", a.context_witness_count},
          {"example_witnesses", examples}};
}

SingletSettings settings_of(const Scenario& s) {
  if (!s.singlet_angles) return {};
  const auto& a = *s.singlet_angles;
  return SingletSettings::planar(a[0], a[1], a[2], a[3]);
}

VesselSuperpositionState state_of(const Scenario& s) {
  if (!s.amplitudes) return uniform_state();
  return make_state(*s.amplitudes);
}

json base_report(Command command, const Scenario& s) {
  json r;
  r["command"] = std::string(to_string(command));
  r["version"] = kVersion;
  r["seed"] = s.seed;
  r["scenario"] = to_json(s);
  r["estimates"] = json::array();
  r["bell"] = nullptr;
  r["factorization"] = nullptr;
  return r;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

}  // namespace

std::string_view to_string(Command command) {
  for (const auto& [c, name] : kCommandNames) {
    if (c == command) return name;
  }
  return "?";
}

Command parse_command(std::string_view name) {
  for (const auto& [c, n] : kCommandNames) {
    if (n == name) return c;
  }
  throw ConfigError("subcommand", "unknown subcommand '" + std::string(name) + "'");
}

json run_command(Command command, const Scenario& s, const RunOptions& options) {
  json r = base_report(command, s);
  const EstimateOptions est{s.tie(), options.workers};

  switch (command) {
    case Command::VesselChsh: {
      const auto stat = run_full_experiment(s.hidden_variable_sampler(), s.system, s.runs_per_pair, est);
      r["estimates"] = estimates_json(stat);
      r["bell"] = bell_json(stat.value, stat.std_error);
      const auto samples = locality_samples(s);
      const auto analysis = analyze_locality(s.system, samples, s.tie());
      r["factorization"] = factorization_json(analysis);
      r["correlation_kind"] = std::string(to_string(analysis.kind));
      break;
    }
    case Command::LocalityCheck: {
      const auto samples = locality_samples(s);
      const auto analysis = analyze_locality(s.system, samples, s.tie());
      r["factorization"] = factorization_json(analysis);
      r["correlation_kind"] = std::string(to_string(analysis.kind));
      break;
    }
    case Command::SampleState: {
      const auto state = state_of(s);
      const auto probs = state.probabilities();
      const auto counts = born_histogram(state, s.runs_per_pair, s.seed);
      const auto gof = chi_square_gof(counts, probs);
      const auto rank = schmidt_rank(state);
      json final_states = json::array();
      for (std::size_t x = 0; x < kFinalStateCount; ++x) {
        final_states.push_back({{"x", x},
                                {"left_litres", x},
                                {"right_litres", kSplitLitres - static_cast<int>(x)},
                                {"probability", probs[x]},
                                {"count", counts[x]}});
      }
      r["state"] = {{"final_states", final_states},
                    {"schmidt_rank", rank},
                    {"entangled", rank >= 2},
                    {"samples", s.runs_per_pair},
                    {"chi_square",
                     {{"statistic", gof.statistic},
                      {"degrees_of_freedom", gof.degrees_of_freedom},
                      {"p_value", gof.p_value}}}};
      break;
    }
    case Command::QuantumChsh: {
      const auto settings = settings_of(s);
      const double analytic = singlet_bell_value(settings);
      json corr = json::array();
      for (std::size_t i = 0; i < 4; ++i) {
        const auto pair = CoincidencePair::from_index(i);
        const auto [l, rdir] = settings.directions(pair);
        corr.push_back({{"pair", std::string(pair.name())},
                        {"analytic", aligned_singlet_correlation(l, rdir)}});
      }
      r["singlet"] = {{"mode", s.singlet_mode == SingletMode::Analytic ? "analytic" : "monte_carlo"},
                      {"analytic_value", analytic},
                      {"correlations", corr},
                      {"convention",
                       "angles are (a, a', b, b'); A=a, A'=a', B=b', B'=b; right outcome relabelled"}};
      if (s.singlet_mode == SingletMode::Analytic) {
        r["bell"] = bell_json(analytic, 0.0);
      } else {
        const auto stat = singlet_full_experiment(settings, s.seed, s.runs_per_pair, options.workers);
        r["estimates"] = estimates_json(stat);
        r["bell"] = bell_json(stat.value, stat.std_error);
      }
      break;
    }
    case Command::Flow: {
      const SiphonDiameters lambda(s.flow.lambda_a, s.flow.lambda_b);
      const auto split = simulate_flow(lambda, s.system, s.flow.dt);
      const auto outcome = outcomes_from_split(split, s.system, lambda, s.tie());
      r["flow"] = {{"lambda_a", lambda.lambda_a()},
                   {"lambda_b", lambda.lambda_b()},
                   {"dt", s.flow.dt},
                   {"x_left", split.x_left},
                   {"x_right", split.x_right},
                   {"closed_form_x_left", closed_form_left_volume(lambda, s.system)},
                   {"outcome_left", outcome.left},
                   {"outcome_right", outcome.right}};
      break;
    }
  }
  return r;
}

void write_csv(Command command, const Scenario& s, std::ostream& out) {
  switch (command) {
    case Command::VesselChsh: {
      out << "pair,run,lambda_a,lambda_b,outcome_left,outcome_right,product,x_left,x_right\n";
      const auto sampler = s.hidden_variable_sampler();
      for (std::size_t i = 0; i < 4; ++i) {
        const auto pair = CoincidencePair::from_index(i);
        estimate_expectation(pair, sampler, s.system, s.runs_per_pair, {s.tie(), 1},
                             [&](std::uint64_t run, const SiphonDiameters& lambda, const CoincidenceRun& c) {
                               out << pair.name() << ',' << run << ',' << fmt(lambda.lambda_a()) << ','
                                   << fmt(lambda.lambda_b()) << ',' << c.outcome_left << ','
                                   << c.outcome_right << ',' << c.product << ',';
                               if (c.split) out << fmt(c.split->x_left) << ',' << fmt(c.split->x_right);
                               else out << ',';
                               out << '\n';
                             });
      }
      break;
    }
    case Command::LocalityCheck: {
      out << "sample,lambda_a,lambda_b,AB,A'B,AB',A'B',satisfiable,a_with_b,a_with_b_prime,witness\n";
      const auto samples = locality_samples(s);
      for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& lambda = samples[i];
        const auto table = contextual_table(lambda, s.system, s.tie());
        const auto report = search_factorization(table);
        const auto w = contextuality_witness(lambda, s.tie());
        out << i << ',' << fmt(lambda.lambda_a()) << ',' << fmt(lambda.lambda_b());
        for (int p : table.products) out << ',' << p;
        out << ',' << (report.satisfiable ? 1 : 0) << ',' << w.with_b << ',' << w.with_b_prime << ','
            << (w.differs ? 1 : 0) << '\n';
      }
      break;
    }
    case Command::SampleState: {
      out << "run,x,left_litres,right_litres\n";
      born_histogram(state_of(s), s.runs_per_pair, s.seed, [&](std::uint64_t run, const FinalProductState& f) {
        out << run << ',' << f.x << ',' << f.left_litres() << ',' << f.right_litres() << '\n';
      });
      break;
    }
    case Command::QuantumChsh: {
      const auto settings = settings_of(s);
      if (s.singlet_mode == SingletMode::Analytic) {
        out << "pair,correlation\n";
        for (std::size_t i = 0; i < 4; ++i) {
          const auto pair = CoincidencePair::from_index(i);
          const auto [l, rdir] = settings.directions(pair);
          out << pair.name() << ',' << fmt(aligned_singlet_correlation(l, rdir)) << '\n';
        }
        break;
      }
      out << "pair,run,outcome_left,outcome_right,product\n";
      for (std::size_t i = 0; i < 4; ++i) {
        const auto pair = CoincidencePair::from_index(i);
        estimate_singlet(pair, settings, s.seed, s.runs_per_pair, 1,
                         [&](std::uint64_t run, const OutcomePair& raw) {
                           out << pair.name() << ',' << run << ',' << raw.left << ',' << raw.right << ','
                               << raw.left * -raw.right << '\n';
                         });
      }
      break;
    }
    case Command::Flow: {
      const SiphonDiameters lambda(s.flow.lambda_a, s.flow.lambda_b);
      const auto split = simulate_flow(lambda, s.system, s.flow.dt);
      out << "lambda_a,lambda_b,dt,x_left,x_right\n"
          << fmt(lambda.lambda_a()) << ',' << fmt(lambda.lambda_b()) << ',' << fmt(s.flow.dt) << ','
          << fmt(split.x_left) << ',' << fmt(split.x_right) << '\n';
      break;
    }
  }
}

std::string dump_report(const json& report) { return report.dump(2) + "\n"; }

}  // namespace vesselsim
