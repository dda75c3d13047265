#include "vesselsim/quantum_reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "vesselsim/error.hpp"
#include "vesselsim/kernels.hpp"
#include "vesselsim/rng.hpp"

namespace vesselsim {

std::array<double, kFinalStateCount> VesselSuperpositionState::probabilities() const {
  std::array<double, kFinalStateCount> p{};
  for (std::size_t x = 0; x < kFinalStateCount; ++x) p[x] = std::norm(amplitudes_[x]);
  return p;
}

VesselSuperpositionState make_state(std::span<const std::complex<double>> amplitudes,
                                    bool normalize) {
  if (amplitudes.size() != kFinalStateCount) {
    throw WrongArity("a vessel state needs exactly 11 amplitudes (x = 0..10), got " +
                     std::to_string(amplitudes.size()));
  }
  VesselSuperpositionState::Amplitudes a{};
  double norm2 = 0.0;
  for (std::size_t x = 0; x < kFinalStateCount; ++x) {
    if (!std::isfinite(amplitudes[x].real()) || !std::isfinite(amplitudes[x].imag())) {
      throw InvalidArgument("amplitudes must be finite");
    }
    a[x] = amplitudes[x];
    norm2 += std::norm(a[x]);
  }
  if (normalize) {
    if (!(norm2 > 0.0)) throw NotNormalized("cannot normalise the zero vector");
    const double scale = 1.0 / std::sqrt(norm2);
    for (auto& v : a) v *= scale;
  } else if (std::abs(norm2 - 1.0) > kNormalizationTolerance) {
    throw NotNormalized("sum of |lambda(x)|^2 is " + std::to_string(norm2) + ", expected 1");
  }
  return VesselSuperpositionState(a);
}

VesselSuperpositionState uniform_state() {
  std::array<std::complex<double>, kFinalStateCount> a;
  a.fill(1.0 / std::sqrt(static_cast<double>(kFinalStateCount)));
  return make_state(a);
}

namespace {

FinalProductState draw_final_state(const std::array<double, kFinalStateCount>& cdf,
                                   std::uniform_real_distribution<double>& u,
                                   std::mt19937_64& engine) {
  const double r = u(engine) * cdf.back();
  for (std::size_t x = 0; x < kFinalStateCount; ++x) {
    if (r < cdf[x]) return {static_cast<int>(x)};
  }
  // r rounded up to the total: take the last branch with weight.
  for (std::size_t x = kFinalStateCount; x-- > 0;) {
    if (cdf[x] > (x ? cdf[x - 1] : 0.0)) return {static_cast<int>(x)};
  }
  return {0};
}

std::array<double, kFinalStateCount> cumulative(const VesselSuperpositionState& state) {
  const auto p = state.probabilities();
  std::array<double, kFinalStateCount> cdf{};
  double acc = 0.0;
  for (std::size_t x = 0; x < kFinalStateCount; ++x) {
    acc += p[x];
    cdf[x] = acc;
  }
  return cdf;
}

}  // namespace

FinalProductState born_sample(const VesselSuperpositionState& state, std::mt19937_64& engine) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return draw_final_state(cumulative(state), u, engine);
}

FinalProductState born_sample(const VesselSuperpositionState& state, std::uint64_t seed) {
  auto engine = make_stream(seed, StreamTag::Born, 0);
  return born_sample(state, engine);
}

std::array<std::uint64_t, kFinalStateCount> born_histogram(const VesselSuperpositionState& state,
                                                           std::uint64_t n, std::uint64_t seed,
                                                           const BornSink& sink) {
  const auto cdf = cumulative(state);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::array<std::uint64_t, kFinalStateCount> counts{};
  for (std::uint64_t first = 0, block = 0; first < n; first += kBlockSize, ++block) {
    auto engine = make_stream(seed, StreamTag::Born, 0, block);
    const std::uint64_t count = std::min(kBlockSize, n - first);
    for (std::uint64_t i = 0; i < count; ++i) {
      const auto drawn = draw_final_state(cdf, u, engine);
      ++counts[drawn.x];
      if (sink) sink(first + i, drawn);
    }
  }
  return counts;
}

std::vector<std::complex<double>> coefficient_matrix(const VesselSuperpositionState& state) {
  constexpr std::size_t d = kFinalStateCount;
  std::vector<std::complex<double>> m(d * d);
  for (std::size_t x = 0; x < d; ++x) m[x * d + (kSplitLitres - x)] = state.amplitudes()[x];
  return m;
}

std::vector<double> singular_values(std::span<const std::complex<double>> matrix, std::size_t dim) {
  if (matrix.size() != dim * dim) throw InvalidArgument("singular_values: matrix is not dim x dim");
  // Column-major working copy; one-sided Jacobi orthogonalises the columns.
  std::vector<std::complex<double>> a(dim * dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) a[c * dim + r] = matrix[r * dim + c];
  auto col = [&](std::size_t c) { return a.data() + c * dim; };

  constexpr double eps = 1e-15;
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < dim; ++p) {
      for (std::size_t q = p + 1; q < dim; ++q) {
        double alpha = 0.0, beta = 0.0;
        std::complex<double> gamma{};
        for (std::size_t i = 0; i < dim; ++i) {
          alpha += std::norm(col(p)[i]);
          beta += std::norm(col(q)[i]);
          gamma += std::conj(col(p)[i]) * col(q)[i];
        }
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const std::complex<double> phase = gamma / g;  // rotate a_q onto a real overlap
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < dim; ++i) {
          const auto ap = col(p)[i];
          const auto aq = col(q)[i] * std::conj(phase);
          col(p)[i] = c * ap - s * aq;
          col(q)[i] = s * ap + c * aq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(dim);
  for (std::size_t c = 0; c < dim; ++c) {
    double n2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) n2 += std::norm(col(c)[i]);
    sv[c] = std::sqrt(n2);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

std::size_t schmidt_rank(const VesselSuperpositionState& state, double tol) {
  if (!(tol >= 0.0)) throw InvalidArgument("schmidt_rank tolerance must be >= 0");
  const auto sv = singular_values(coefficient_matrix(state), kFinalStateCount);
  return static_cast<std::size_t>(std::count_if(sv.begin(), sv.end(), [&](double s) { return s > tol; }));
}

MeasurementDirection::MeasurementDirection(double x, double y, double z) : v_{x, y, z} {
  const double norm = std::sqrt(x * x + y * y + z * z);
  if (!(std::abs(norm - 1.0) <= 1e-12)) {
    throw NotUnit("measurement direction must be a unit vector, |v| = " + std::to_string(norm));
  }
}

MeasurementDirection MeasurementDirection::planar(double degrees) {
  const double rad = degrees * std::numbers::pi / 180.0;
  return {std::sin(rad), 0.0, std::cos(rad)};
}

double MeasurementDirection::dot(const MeasurementDirection& o) const noexcept {
  return v_[0] * o.v_[0] + v_[1] * o.v_[1] + v_[2] * o.v_[2];
}

double singlet_expectation(const MeasurementDirection& a, const MeasurementDirection& b) {
  return -a.dot(b);
}

OutcomePair singlet_sample(const MeasurementDirection& a, const MeasurementDirection& b,
                           std::mt19937_64& engine) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int left = u(engine) < 0.5 ? +1 : -1;
  const double p_same = (1.0 - a.dot(b)) / 2.0;
  const int right = u(engine) < p_same ? left : -left;
  return {left, right};
}

OutcomePair singlet_sample(const MeasurementDirection& a, const MeasurementDirection& b,
                           std::uint64_t seed) {
  auto engine = make_stream(seed, StreamTag::Singlet, 0);
  return singlet_sample(a, b, engine);
}

SingletSettings SingletSettings::planar(double a, double a_prime, double b, double b_prime) {
  return {MeasurementDirection::planar(a), MeasurementDirection::planar(a_prime),
          MeasurementDirection::planar(b), MeasurementDirection::planar(b_prime)};
}

std::pair<MeasurementDirection, MeasurementDirection> SingletSettings::directions(
    const CoincidencePair& pair) const {
  const auto& left = pair.left() == ExperimentKind::A ? a : a_prime;
  // Vessel B is the usual b', vessel B' the usual b.
  const auto& right = pair.right() == ExperimentKind::B ? b_prime : b;
  return {left, right};
}

double aligned_singlet_correlation(const MeasurementDirection& left,
                                   const MeasurementDirection& right) {
  return -singlet_expectation(left, right);
}

double singlet_bell_value(const SingletSettings& settings) {
  auto e = [&](const CoincidencePair& p) {
    const auto [l, r] = settings.directions(p);
    return aligned_singlet_correlation(l, r);
  };
  return bell_combination(e(kPairAPrimeBPrime), e(kPairAPrimeB), e(kPairABPrime), e(kPairAB));
}

ExpectationEstimate estimate_singlet(const CoincidencePair& pair, const SingletSettings& settings,
                                     std::uint64_t seed, std::uint64_t n, unsigned workers,
                                     const SingletRunSink& sink) {
  if (n == 0) throw InvalidArgument("estimate_singlet needs n >= 1");
  const auto [left, right] = settings.directions(pair);
  const std::uint64_t blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<std::int64_t> block_sums(blocks, 0);
  for_each_block(n, sink ? 1u : workers,
                 [&](std::uint64_t block, std::uint64_t first, std::uint64_t count) {
                   auto engine = make_stream(seed, StreamTag::Singlet, pair.index(), block);
                   std::vector<std::int8_t> products(count);
                   for (std::uint64_t i = 0; i < count; ++i) {
                     const auto raw = singlet_sample(left, right, engine);
                     products[i] = static_cast<std::int8_t>(raw.left * -raw.right);
                     if (sink) sink(first + i, raw);
                   }
                   block_sums[block] = kernels::sum_signs(products);
                 });
  std::int64_t sum = 0;
  for (auto s : block_sums) sum += s;
  return make_sign_estimate(pair, sum, n);
}

BellStatistic singlet_full_experiment(const SingletSettings& settings, std::uint64_t seed,
                                      std::uint64_t n_per_pair, unsigned workers) {
  auto est = [&](const CoincidencePair& p) {
    return estimate_singlet(p, settings, seed, n_per_pair, workers);
  };
  return bell_statistic(est(kPairAPrimeBPrime), est(kPairAPrimeB), est(kPairABPrime), est(kPairAB));
}

double random_quadruple_max(std::uint64_t count, std::uint64_t seed) {
  constexpr std::uint64_t kChunk = 4096;
  std::vector<double> comp(12 * kChunk);
  std::vector<double> out(kChunk);
  std::normal_distribution<double> normal(0.0, 1.0);
  double best = 0.0;
  for (std::uint64_t first = 0, block = 0; first < count; first += kChunk, ++block) {
    const std::uint64_t m = std::min(kChunk, count - first);
    auto engine = make_stream(seed, StreamTag::Singlet, 16, block);
    for (std::uint64_t i = 0; i < m; ++i) {
      for (int v = 0; v < 4; ++v) {
        double x, y, z, r;
        do {
          x = normal(engine);
          y = normal(engine);
          z = normal(engine);
          r = std::sqrt(x * x + y * y + z * z);
        } while (r == 0.0);
        comp[(3 * v + 0) * kChunk + i] = x / r;
        comp[(3 * v + 1) * kChunk + i] = y / r;
        comp[(3 * v + 2) * kChunk + i] = z / r;
      }
    }
    auto view = [&](int v, int c) { return std::span<const double>(&comp[(3 * v + c) * kChunk], m); };
    kernels::DirectionQuadruples q{{view(0, 0), view(0, 1), view(0, 2)},
                                   {view(1, 0), view(1, 1), view(1, 2)},
                                   {view(2, 0), view(2, 1), view(2, 2)},
                                   {view(3, 0), view(3, 1), view(3, 2)}};
    kernels::bell_dot_combination(q, std::span<double>(out.data(), m));
    for (std::uint64_t i = 0; i < m; ++i) best = std::max(best, std::abs(out[i]));
  }
  return best;
}

}  // namespace vesselsim
