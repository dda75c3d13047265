// Scalar reference kernels. The AVX2 versions in avx2.cpp mirror the operation
// order here exactly; keep the two in step.

#include <algorithm>
#include <cmath>

#include "vesselsim/kernels.hpp"

namespace vesselsim::kernels::scalar {

void drain_flow(const FlowBatch& batch) {
  const double total = batch.total_volume;
  const double initial_level = total * 0.5;
  const double dt = batch.dt;
  for (std::size_t i = 0; i < batch.lambda_a.size(); ++i) {
    const double rate_a = batch.rate_coefficient * batch.lambda_a[i] * batch.lambda_a[i];
    const double rate_b = batch.rate_coefficient * batch.lambda_b[i] * batch.lambda_b[i];
    double x_left = 0.0, comp_left = 0.0;
    double x_right = 0.0, comp_right = 0.0;
    std::uint64_t steps = 0;
    while (steps < batch.max_steps) {
      const double remaining = (total - x_left) - x_right;
      // Both vessels sit at the same level, each holding half the remainder.
      const double level = std::max((remaining * 0.5) / initial_level, 0.0);
      const double s = std::sqrt(level);
      double d_a = (rate_a * s) * dt;
      double d_b = (rate_b * s) * dt;
      const double drain = d_a + d_b;
      const bool last = drain >= remaining;
      if (last) {
        const double scale = remaining > 0.0 ? remaining / drain : 0.0;
        d_a = d_a * scale;
        d_b = d_b * scale;
      }
      // Kahan accumulation keeps x_left + x_right == total to ~1e-14.
      double y = d_a - comp_left;
      double t = x_left + y;
      comp_left = (t - x_left) - y;
      x_left = t;
      y = d_b - comp_right;
      t = x_right + y;
      comp_right = (t - x_right) - y;
      x_right = t;
      ++steps;
      if (last) break;
    }
    batch.x_left[i] = x_left;
    batch.x_right[i] = x_right;
    batch.steps[i] = steps;
  }
}

std::int64_t sum_signs(std::span<const std::int8_t> values) {
  std::int64_t sum = 0;
  for (auto v : values) sum += v;
  return sum;
}

namespace {
inline double dot3(const std::span<const double> (&u)[3], const std::span<const double> (&v)[3],
                   std::size_t i) {
  return ((u[0][i] * v[0][i]) + (u[1][i] * v[1][i])) + (u[2][i] * v[2][i]);
}
}  // namespace

void bell_dot_combination(const DirectionQuadruples& q, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double apbp = dot3(q.a_prime, q.b_prime, i);
    const double apb = dot3(q.a_prime, q.b, i);
    const double abp = dot3(q.a, q.b_prime, i);
    const double ab = dot3(q.a, q.b, i);
    out[i] = ((apbp + apb) + abp) - ab;
  }
}

}  // namespace vesselsim::kernels::scalar
