#include "vesselsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "vesselsim/error.hpp"
#include "vesselsim/quantum_reference.hpp"

namespace vesselsim {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<std::string_view> allowed) {
  const std::set<std::string_view> keys(allowed);
  for (const auto& [key, _] : obj.items()) {
    if (!keys.contains(key)) {
      throw ConfigError(where.empty() ? key : where + "." + key, "unknown field");
    }
  }
}

const json& require_object(const json& v, const std::string& where) {
  if (!v.is_object()) throw ConfigError(where, "expected an object");
  return v;
}

double get_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(where, "expected a finite number");
  return d;
}

double get_positive(const json& v, const std::string& where) {
  const double d = get_number(v, where);
  if (!(d > 0.0)) throw ConfigError(where, "must be strictly positive");
  return d;
}

std::uint64_t get_count(const json& v, const std::string& where) {
  if (!v.is_number_unsigned()) {
    throw ConfigError(where, "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::array<double, 2> get_range(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) throw ConfigError(where, "expected [low, high]");
  const double lo = get_positive(v[0], where + "[0]");
  const double hi = get_number(v[1], where + "[1]");
  if (!(hi > lo)) throw ConfigError(where, "high must exceed low");
  return {lo, hi};
}

DiameterDistribution parse_sampler(const json& v) {
  require_object(v, "sampler");
  const std::string kind = v.contains("kind") ? (v["kind"].is_string() ? v["kind"].get<std::string>() : "")
                                              : "uniform";
  if (kind == "uniform") {
    reject_unknown(v, "sampler", {"kind", "lambda_a", "lambda_b"});
    UniformDiameters u;
    if (v.contains("lambda_a")) {
      const auto [lo, hi] = get_range(v["lambda_a"], "sampler.lambda_a");
      u.a_low = lo;
      u.a_high = hi;
    }
    if (v.contains("lambda_b")) {
      const auto [lo, hi] = get_range(v["lambda_b"], "sampler.lambda_b");
      u.b_low = lo;
      u.b_high = hi;
    }
    return u;
  }
  if (kind == "lognormal") {
    reject_unknown(v, "sampler", {"kind", "mu", "sigma"});
    LogNormalDiameters l;
    if (v.contains("mu")) l.mu = get_number(v["mu"], "sampler.mu");
    if (v.contains("sigma")) l.sigma = get_positive(v["sigma"], "sampler.sigma");
    return l;
  }
  throw ConfigError("sampler.kind", "expected \"uniform\" or \"lognormal\"");
}

}  // namespace

Scenario parse_scenario_json(const json& doc, std::optional<std::uint64_t> seed_override) {
  require_object(doc, "");
  reject_unknown(doc, "", {"seed", "system", "sampler", "runs_per_pair", "tie_policy", "amplitudes",
                           "singlet_angles", "singlet_mode", "flow"});
  Scenario s;

  if (seed_override) {
    s.seed = *seed_override;
  } else if (doc.contains("seed")) {
    s.seed = get_count(doc["seed"], "seed");
  } else {
    throw ConfigError("seed", "missing; an explicit seed is required for reproducibility "
                              "(add \"seed\" to the scenario or pass --seed)");
  }

  if (doc.contains("system")) {
    const auto& sys = require_object(doc["system"], "system");
    reject_unknown(sys, "system", {"total_volume", "transparent"});
    if (sys.contains("total_volume")) s.system.total_volume = get_positive(sys["total_volume"], "system.total_volume");
    if (sys.contains("transparent")) {
      if (!sys["transparent"].is_boolean()) throw ConfigError("system.transparent", "expected true or false");
      s.system.transparent = sys["transparent"].get<bool>();
    }
  }

  if (doc.contains("sampler")) s.sampler = parse_sampler(doc["sampler"]);

  if (doc.contains("runs_per_pair")) {
    s.runs_per_pair = get_count(doc["runs_per_pair"], "runs_per_pair");
    if (s.runs_per_pair == 0) throw ConfigError("runs_per_pair", "must be at least 1");
  }

  if (doc.contains("tie_policy")) {
    const auto& t = doc["tie_policy"];
    const auto kind = t.is_string() ? parse_tie_policy(t.get<std::string>()) : std::nullopt;
    if (!kind) throw ConfigError("tie_policy", "expected one of error, favor_left, favor_right, split_coin");
    s.tie_policy = *kind;
  }

  if (doc.contains("amplitudes") && !doc["amplitudes"].is_null()) {
    const auto& a = doc["amplitudes"];
    if (!a.is_array()) throw ConfigError("amplitudes", "expected an array of [re, im] pairs");
    if (a.size() != kFinalStateCount) {
      throw ConfigError("amplitudes", "expected exactly 11 entries (x = 0..10), got " + std::to_string(a.size()));
    }
    std::vector<std::complex<double>> amps;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string where = "amplitudes[" + std::to_string(i) + "]";
      if (!a[i].is_array() || a[i].size() != 2) throw ConfigError(where, "expected [re, im]");
      amps.emplace_back(get_number(a[i][0], where + "[0]"), get_number(a[i][1], where + "[1]"));
    }
    try {
      (void)make_state(amps);
    } catch (const Error& e) {
      throw ConfigError("amplitudes", e.what());
    }
    s.amplitudes = std::move(amps);
  }

  if (doc.contains("singlet_angles") && !doc["singlet_angles"].is_null()) {
    const auto& a = doc["singlet_angles"];
    if (!a.is_array() || a.size() != 4) throw ConfigError("singlet_angles", "expected [a, a', b, b'] in degrees");
    std::array<double, 4> angles{};
    for (std::size_t i = 0; i < 4; ++i) angles[i] = get_number(a[i], "singlet_angles[" + std::to_string(i) + "]");
    s.singlet_angles = angles;
  }

  if (doc.contains("singlet_mode")) {
    const auto& m = doc["singlet_mode"];
    if (m == "monte_carlo") s.singlet_mode = SingletMode::MonteCarlo;
    else if (m == "analytic") s.singlet_mode = SingletMode::Analytic;
    else throw ConfigError("singlet_mode", "expected \"monte_carlo\" or \"analytic\"");
  }

  if (doc.contains("flow")) {
    const auto& f = require_object(doc["flow"], "flow");
    reject_unknown(f, "flow", {"lambda_a", "lambda_b", "dt"});
    if (f.contains("lambda_a")) s.flow.lambda_a = get_positive(f["lambda_a"], "flow.lambda_a");
    if (f.contains("lambda_b")) s.flow.lambda_b = get_positive(f["lambda_b"], "flow.lambda_b");
    if (f.contains("dt")) s.flow.dt = get_positive(f["dt"], "flow.dt");
  }

  try {
    (void)s.hidden_variable_sampler();
  } catch (const Error& e) {
    throw ConfigError("sampler", e.what());
  }
  return s;
}

Scenario parse_scenario_text(std::string_view text, std::optional<std::uint64_t> seed_override) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line number for the diagnostic.
    const auto upto = text.substr(0, std::min<std::size_t>(e.byte, text.size()));
    const auto line = 1 + std::count(upto.begin(), upto.end(), '\n');
    throw ConfigError("", "line " + std::to_string(line) + ": invalid JSON (" + e.what() + ")");
  }
  return parse_scenario_json(doc, seed_override);
}

Scenario parse_scenario(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read scenario file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), seed_override);
}

json to_json(const Scenario& s) {
  json doc;
  doc["seed"] = s.seed;
  doc["system"] = {{"total_volume", s.system.total_volume}, {"transparent", s.system.transparent}};
  if (const auto* u = std::get_if<UniformDiameters>(&s.sampler)) {
    doc["sampler"] = {{"kind", "uniform"},
                      {"lambda_a", {u->a_low, u->a_high}},
                      {"lambda_b", {u->b_low, u->b_high}}};
  } else {
    const auto& l = std::get<LogNormalDiameters>(s.sampler);
    doc["sampler"] = {{"kind", "lognormal"}, {"mu", l.mu}, {"sigma", l.sigma}};
  }
  doc["runs_per_pair"] = s.runs_per_pair;
  doc["tie_policy"] = std::string(to_string(s.tie_policy));
  if (s.amplitudes) {
    json a = json::array();
    for (const auto& c : *s.amplitudes) a.push_back({c.real(), c.imag()});
    doc["amplitudes"] = a;
  } else {
    doc["amplitudes"] = nullptr;
  }
  if (s.singlet_angles) {
    doc["singlet_angles"] = *s.singlet_angles;
  } else {
    doc["singlet_angles"] = nullptr;
  }
  doc["singlet_mode"] = s.singlet_mode == SingletMode::Analytic ? "analytic" : "monte_carlo";
  doc["flow"] = {{"lambda_a", s.flow.lambda_a}, {"lambda_b", s.flow.lambda_b}, {"dt", s.flow.dt}};
  return doc;
}

}  // namespace vesselsim
