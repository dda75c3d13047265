#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference version and an
// AVX2 version; the dispatcher picks one at runtime. Both versions perform the
// same IEEE operations in the same order, so their results are bit-identical.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace vesselsim::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

/// Best instruction set supported by this CPU and this build.
Isa detected_isa() noexcept;

/// Instruction set the dispatching entry points currently use.
Isa active_isa() noexcept;

/// Overrides dispatch (tests, benchmarking). Throws InvalidArgument when the
/// requested set is not available. The VESSELSIM_ISA environment variable
/// ("scalar" or "avx2") sets the initial choice.
void force_isa(Isa isa);

/// Structure-of-arrays batch for the siphon drainage integration. All spans
/// must have the same length.
struct FlowBatch {
  std::span<const double> lambda_a;
  std::span<const double> lambda_b;
  double total_volume = 20.0;
  double rate_coefficient = 1.0;
  double dt = 1e-4;
  std::uint64_t max_steps = 0;

  std::span<double> x_left;
  std::span<double> x_right;
  std::span<std::uint64_t> steps;
};

/// Integrates every lane of the batch until its water is exhausted. Lanes that
/// hit max_steps report steps == max_steps and a partial split.
void drain_flow(const FlowBatch& batch);

/// Sum of a vector of +1/-1 (or 0) bytes.
std::int64_t sum_signs(std::span<const std::int8_t> values);

/// Unit-vector quadruples, one component array per axis per setting.
struct DirectionQuadruples {
  std::span<const double> a[3];
  std::span<const double> a_prime[3];
  std::span<const double> b[3];
  std::span<const double> b_prime[3];
};

/// out[i] = a'.b' + a'.b + a.b' - a.b for each quadruple.
void bell_dot_combination(const DirectionQuadruples& q, std::span<double> out);

namespace scalar {
void drain_flow(const FlowBatch& batch);
std::int64_t sum_signs(std::span<const std::int8_t> values);
void bell_dot_combination(const DirectionQuadruples& q, std::span<double> out);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define VESSELSIM_HAVE_AVX2_KERNELS 1
namespace avx2 {
void drain_flow(const FlowBatch& batch);
std::int64_t sum_signs(std::span<const std::int8_t> values);
void bell_dot_combination(const DirectionQuadruples& q, std::span<double> out);
}  // namespace avx2
#endif

}  // namespace vesselsim::kernels
