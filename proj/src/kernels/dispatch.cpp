#include <atomic>
#include <cstdlib>
#include <string>

#include "vesselsim/error.hpp"
#include "vesselsim/kernels.hpp"

namespace vesselsim::kernels {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "?";
}

Isa detected_isa() noexcept {
#if defined(VESSELSIM_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  if (__builtin_cpu_supports("avx2")) return Isa::Avx2;
#endif
  return Isa::Scalar;
}

namespace {

Isa initial_isa() noexcept {
  const Isa best = detected_isa();
  if (const char* env = std::getenv("VESSELSIM_ISA")) {
    const std::string_view want(env);
    if (want == "scalar") return Isa::Scalar;
    if (want == "avx2" && best == Isa::Avx2) return Isa::Avx2;
  }
  return best;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

Isa active_isa() noexcept { return active().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (isa == Isa::Avx2 && detected_isa() != Isa::Avx2) {
    throw InvalidArgument("AVX2 kernels are not available on this CPU or build");
  }
  active().store(isa, std::memory_order_relaxed);
}

void drain_flow(const FlowBatch& batch) {
  const std::size_t n = batch.lambda_a.size();
  if (batch.lambda_b.size() != n || batch.x_left.size() != n || batch.x_right.size() != n ||
      batch.steps.size() != n) {
    throw InvalidArgument("drain_flow: batch spans differ in length");
  }
#ifdef VESSELSIM_HAVE_AVX2_KERNELS
  if (active_isa() == Isa::Avx2) return avx2::drain_flow(batch);
#endif
  scalar::drain_flow(batch);
}

std::int64_t sum_signs(std::span<const std::int8_t> values) {
#ifdef VESSELSIM_HAVE_AVX2_KERNELS
  if (active_isa() == Isa::Avx2) return avx2::sum_signs(values);
#endif
  return scalar::sum_signs(values);
}

void bell_dot_combination(const DirectionQuadruples& q, std::span<double> out) {
  for (const auto* group : {&q.a, &q.a_prime, &q.b, &q.b_prime}) {
    for (const auto& component : *group) {
      if (component.size() < out.size()) {
        throw InvalidArgument("bell_dot_combination: component arrays shorter than output");
      }
    }
  }
#ifdef VESSELSIM_HAVE_AVX2_KERNELS
  if (active_isa() == Isa::Avx2) return avx2::bell_dot_combination(q, out);
#endif
  scalar::bell_dot_combination(q, out);
}

}  // namespace vesselsim::kernels
