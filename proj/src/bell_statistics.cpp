#include "vesselsim/bell_statistics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "vesselsim/error.hpp"
#include "vesselsim/kernels.hpp"
#include "vesselsim/rng.hpp"

namespace vesselsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void validate(const DiameterDistribution& d) {
  std::visit(overloaded{[](const UniformDiameters& u) {
                          if (!(u.a_low > 0.0) || !(u.b_low > 0.0) || !(u.a_high > u.a_low) ||
                              !(u.b_high > u.b_low) || !std::isfinite(u.a_high) ||
                              !std::isfinite(u.b_high)) {
                            throw InvalidArgument(
                                "uniform diameter ranges must satisfy 0 < low < high");
                          }
                        },
                        [](const LogNormalDiameters& l) {
                          if (!(l.sigma > 0.0) || !std::isfinite(l.mu) || !std::isfinite(l.sigma)) {
                            throw InvalidArgument("log-normal sigma must be positive and finite");
                          }
                        }},
             d);
}

}  // namespace

HiddenVariableSampler::HiddenVariableSampler(std::uint64_t seed, DiameterDistribution distribution)
    : seed_(seed), distribution_(distribution) {
  validate(distribution_);
}

SiphonDiameters HiddenVariableSampler::draw(std::mt19937_64& engine) const {
  return std::visit(
      overloaded{[&](const UniformDiameters& u) {
                   std::uniform_real_distribution<double> da(u.a_low, u.a_high);
                   std::uniform_real_distribution<double> db(u.b_low, u.b_high);
                   const double a = da(engine);
                   return SiphonDiameters(a, db(engine));
                 },
                 [&](const LogNormalDiameters& l) {
                   std::lognormal_distribution<double> d(l.mu, l.sigma);
                   const double a = d(engine);
                   return SiphonDiameters(a, d(engine));
                 }},
      distribution_);
}

ExpectationEstimate make_sign_estimate(const CoincidencePair& pair, std::int64_t sum,
                                       std::uint64_t n) {
  if (n == 0) throw InvalidArgument("an estimate needs at least one sample");
  ExpectationEstimate e;
  e.pair = pair;
  e.n = n;
  const double dn = static_cast<double>(n);
  e.mean = static_cast<double>(sum) / dn;
  if (n > 1) {
    // Squares of +/-1 products are all 1, so sum of squares == n.
    const double ss = dn - static_cast<double>(sum) * static_cast<double>(sum) / dn;
    e.std_error = std::sqrt(std::max(ss, 0.0) / (dn - 1.0)) / std::sqrt(dn);
  }
  return e;
}

std::string_view to_string(BellClass c) {
  switch (c) {
    case BellClass::Local: return "local";
    case BellClass::QuantumAttainable: return "quantum_attainable";
    case BellClass::SuperQuantum: return "super_quantum";
  }
  return "?";
}

BellClass classify_bell_value(double value) noexcept {
  const double m = std::abs(value);
  if (m <= kLocalBound + kBoundTolerance) return BellClass::Local;
  if (m <= kQuantumBound + kBoundTolerance) return BellClass::QuantumAttainable;
  return BellClass::SuperQuantum;
}

double bell_combination(double e_aprime_bprime, double e_aprime_b, double e_a_bprime,
                        double e_ab) noexcept {
  return ((e_aprime_bprime + e_aprime_b) + e_a_bprime) - e_ab;
}

BellStatistic bell_statistic(const ExpectationEstimate& e_aprime_bprime,
                             const ExpectationEstimate& e_aprime_b,
                             const ExpectationEstimate& e_a_bprime, const ExpectationEstimate& e_ab) {
  if (!(e_aprime_bprime.pair == kPairAPrimeBPrime) || !(e_aprime_b.pair == kPairAPrimeB) ||
      !(e_a_bprime.pair == kPairABPrime) || !(e_ab.pair == kPairAB)) {
    throw MismatchedPairs("bell_statistic expects estimates for A'B', A'B, AB', AB in that order");
  }
  BellStatistic s;
  s.components = {e_aprime_bprime, e_aprime_b, e_a_bprime, e_ab};
  s.value = bell_combination(e_aprime_bprime.mean, e_aprime_b.mean, e_a_bprime.mean, e_ab.mean);
  double var = 0.0;
  for (const auto& c : s.components) var += c.std_error * c.std_error;
  s.std_error = std::sqrt(var);
  s.classification = classify_bell_value(s.value);
  return s;
}

void for_each_block(std::uint64_t n, unsigned workers,
                    const std::function<void(std::uint64_t, std::uint64_t, std::uint64_t)>& fn) {
  const std::uint64_t blocks = (n + kBlockSize - 1) / kBlockSize;
  auto run_block = [&](std::uint64_t b) {
    const std::uint64_t first = b * kBlockSize;
    fn(b, first, std::min(kBlockSize, n - first));
  };
  const unsigned threads =
      static_cast<unsigned>(std::min<std::uint64_t>(std::max(workers, 1u), blocks));
  if (threads <= 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) run_block(b);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::uint64_t b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) {
          try {
            run_block(b);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(blocks);
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

ExpectationEstimate estimate_expectation(const CoincidencePair& pair,
                                         const HiddenVariableSampler& sampler,
                                         const VesselSystem& system, std::uint64_t n,
                                         const EstimateOptions& options, const RunSink& sink) {
  if (n == 0) throw InvalidArgument("estimate_expectation needs n >= 1");
  validate(system);
  const std::uint64_t blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<std::int64_t> block_sums(blocks, 0);
  // A sink observes runs in order, so it forces sequential evaluation.
  const unsigned workers = sink ? 1u : options.workers;
  for_each_block(n, workers, [&](std::uint64_t block, std::uint64_t first, std::uint64_t count) {
    auto engine = make_stream(sampler.seed(), StreamTag::HiddenVariables, pair.index(), block);
    std::vector<std::int8_t> products(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      const auto lambda = sampler.draw(engine);
      const auto run = run_coincidence(pair, lambda, system, options.tie);
      products[i] = static_cast<std::int8_t>(run.product);
      if (sink) sink(first + i, lambda, run);
    }
    block_sums[block] = kernels::sum_signs(products);
  });
  std::int64_t sum = 0;
  for (auto s : block_sums) sum += s;
  return make_sign_estimate(pair, sum, n);
}

BellStatistic run_full_experiment(const HiddenVariableSampler& sampler, const VesselSystem& system,
                                  std::uint64_t n_per_pair, const EstimateOptions& options) {
  if (n_per_pair == 0) throw InvalidArgument("run_full_experiment needs n_per_pair >= 1");
  auto est = [&](const CoincidencePair& p) {
    return estimate_expectation(p, sampler, system, n_per_pair, options);
  };
  return bell_statistic(est(kPairAPrimeBPrime), est(kPairAPrimeB), est(kPairABPrime), est(kPairAB));
}

}  // namespace vesselsim
