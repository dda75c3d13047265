#pragma once

// The pre-measurement vessel state as a superposition over the 11 possible
// final splits, and the spin-1/2 singlet as a quantum yardstick.

#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "vesselsim/bell_statistics.hpp"
#include "vesselsim/vessel_model.hpp"

namespace vesselsim {

inline constexpr std::size_t kFinalStateCount = 11;  // x = 0, 1, ..., 10 litres
inline constexpr int kSplitLitres = 10;
inline constexpr double kNormalizationTolerance = 1e-9;

/// Amplitude lambda(x) for the final state p_A(x) (x) p_B(10 - x).
class VesselSuperpositionState {
 public:
  using Amplitudes = std::array<std::complex<double>, kFinalStateCount>;

  const Amplitudes& amplitudes() const noexcept { return amplitudes_; }
  std::array<double, kFinalStateCount> probabilities() const;

 private:
  friend VesselSuperpositionState make_state(std::span<const std::complex<double>>, bool);
  explicit VesselSuperpositionState(const Amplitudes& a) : amplitudes_(a) {}

  Amplitudes amplitudes_;
};

/// Throws WrongArity unless 11 amplitudes are given, and NotNormalized when
/// sum |lambda(x)|^2 deviates from 1 by more than 1e-9 and normalize is false.
/// With normalize set the vector is rescaled (an all-zero vector still throws).
VesselSuperpositionState make_state(std::span<const std::complex<double>> amplitudes,
                                    bool normalize = false);

VesselSuperpositionState uniform_state();

struct FinalProductState {
  int x = 0;  // litres collected on the left

  int left_litres() const noexcept { return x; }
  int right_litres() const noexcept { return kSplitLitres - x; }
};

/// Draws x with probability |lambda(x)|^2 from the supplied engine.
FinalProductState born_sample(const VesselSuperpositionState& state, std::mt19937_64& engine);
/// Single draw from a fresh stream for `seed`.
FinalProductState born_sample(const VesselSuperpositionState& state, std::uint64_t seed);

using BornSink = std::function<void(std::uint64_t run, const FinalProductState&)>;

/// Counts for n Born draws, deterministic in seed. The sink, if given, sees
/// every draw in order.
std::array<std::uint64_t, kFinalStateCount> born_histogram(
    const VesselSuperpositionState& state, std::uint64_t n, std::uint64_t seed,
    const BornSink& sink = {});

/// M[x][y] = lambda(x) if y == 10 - x, else 0.
std::vector<std::complex<double>> coefficient_matrix(const VesselSuperpositionState& state);

/// Singular values of a square complex matrix (row-major), descending.
/// One-sided Jacobi rotations.
std::vector<double> singular_values(std::span<const std::complex<double>> matrix,
                                    std::size_t dim);

/// Number of singular values of the coefficient matrix above tol. A rank of
/// two or more means the state is entangled.
std::size_t schmidt_rank(const VesselSuperpositionState& state, double tol = 1e-9);

class MeasurementDirection {
 public:
  /// Throws NotUnit if |v| differs from 1 by more than 1e-12.
  MeasurementDirection(double x, double y, double z);

  /// Unit vector at `degrees` in the x-z plane.
  static MeasurementDirection planar(double degrees);

  const std::array<double, 3>& components() const noexcept { return v_; }
  double dot(const MeasurementDirection& other) const noexcept;

 private:
  std::array<double, 3> v_;
};

/// Quantum prediction -a.b for the singlet.
double singlet_expectation(const MeasurementDirection& a, const MeasurementDirection& b);

OutcomePair singlet_sample(const MeasurementDirection& a, const MeasurementDirection& b,
                           std::mt19937_64& engine);
OutcomePair singlet_sample(const MeasurementDirection& a, const MeasurementDirection& b,
                           std::uint64_t seed);

/// Measurement settings in the usual CHSH order (a, a', b, b').
///
/// The vessel combination E(A'B') + E(A'B) + E(AB') - E(AB) reproduces the
/// usual S = E(a,b) - E(a,b') + E(a',b) + E(a',b') with A = a, A' = a',
/// B = b', B' = b. The right-hand detector's labels are swapped (reported
/// outcome = -spin outcome) so that parallel settings register agreement, the
/// same orientation as the +4 vessel value. With these two conventions the
/// settings (0, 90, 45, 135) degrees give +2 sqrt 2.
struct SingletSettings {
  MeasurementDirection a = MeasurementDirection::planar(0.0);
  MeasurementDirection a_prime = MeasurementDirection::planar(90.0);
  MeasurementDirection b = MeasurementDirection::planar(45.0);
  MeasurementDirection b_prime = MeasurementDirection::planar(135.0);

  static SingletSettings planar(double a, double a_prime, double b, double b_prime);

  /// Directions measured on the left and right for a vessel-labelled pair.
  std::pair<MeasurementDirection, MeasurementDirection> directions(
      const CoincidencePair& pair) const;
};

/// Correlation of left outcome and relabelled right outcome: +a.b.
double aligned_singlet_correlation(const MeasurementDirection& left,
                                   const MeasurementDirection& right);

/// Bell combination of the aligned analytic correlations.
double singlet_bell_value(const SingletSettings& settings);

/// Monte Carlo estimate for one pair; products use the relabelled right
/// outcome. Deterministic in (seed, n) and independent of worker count.
using SingletRunSink = std::function<void(std::uint64_t run, const OutcomePair& raw)>;

ExpectationEstimate estimate_singlet(const CoincidencePair& pair,
                                     const SingletSettings& settings, std::uint64_t seed,
                                     std::uint64_t n, unsigned workers = 1,
                                     const SingletRunSink& sink = {});

BellStatistic singlet_full_experiment(const SingletSettings& settings, std::uint64_t seed,
                                      std::uint64_t n_per_pair, unsigned workers = 1);

/// Largest |Bell combination| over `count` random direction quadruples
/// (isotropic on the sphere), evaluated through the vector kernels.
double random_quadruple_max(std::uint64_t count, std::uint64_t seed);

}  // namespace vesselsim
