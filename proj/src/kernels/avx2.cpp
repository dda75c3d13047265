// AVX2 kernels. Compiled with -mavx2 only; reached through the dispatcher
// after a CPUID check.

#include <immintrin.h>

#include <array>

#include "vesselsim/kernels.hpp"

namespace vesselsim::kernels::avx2 {

namespace {

inline __m256d kahan_add(__m256d sum, __m256d& comp, __m256d value, __m256d active) {
  const __m256d y = _mm256_sub_pd(value, comp);
  const __m256d t = _mm256_add_pd(sum, y);
  const __m256d new_comp = _mm256_sub_pd(_mm256_sub_pd(t, sum), y);
  comp = _mm256_blendv_pd(comp, new_comp, active);
  return _mm256_blendv_pd(sum, t, active);
}

}  // namespace

void drain_flow(const FlowBatch& batch) {
  const std::size_t n = batch.lambda_a.size();
  const __m256d total = _mm256_set1_pd(batch.total_volume);
  const __m256d initial_level = _mm256_set1_pd(batch.total_volume * 0.5);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d dt = _mm256_set1_pd(batch.dt);
  const __m256d coeff = _mm256_set1_pd(batch.rate_coefficient);

  for (std::size_t base = 0; base < n; base += 4) {
    const std::size_t lanes = std::min<std::size_t>(4, n - base);
    alignas(32) std::array<double, 4> la{1.0, 1.0, 1.0, 1.0};
    alignas(32) std::array<double, 4> lb{1.0, 1.0, 1.0, 1.0};
    for (std::size_t l = 0; l < lanes; ++l) {
      la[l] = batch.lambda_a[base + l];
      lb[l] = batch.lambda_b[base + l];
    }
    const __m256d va = _mm256_load_pd(la.data());
    const __m256d vb = _mm256_load_pd(lb.data());
    const __m256d rate_a = _mm256_mul_pd(_mm256_mul_pd(coeff, va), va);
    const __m256d rate_b = _mm256_mul_pd(_mm256_mul_pd(coeff, vb), vb);

    __m256d x_left = zero, comp_left = zero, x_right = zero, comp_right = zero;
    std::array<std::uint64_t, 4> steps{0, 0, 0, 0};
    int active_bits = (1 << lanes) - 1;
    if (batch.max_steps == 0) active_bits = 0;

    while (active_bits != 0) {
      const __m256d active = _mm256_castsi256_pd(_mm256_set_epi64x(
          (active_bits & 8) ? -1 : 0, (active_bits & 4) ? -1 : 0, (active_bits & 2) ? -1 : 0,
          (active_bits & 1) ? -1 : 0));
      const __m256d remaining = _mm256_sub_pd(_mm256_sub_pd(total, x_left), x_right);
      const __m256d level =
          _mm256_max_pd(_mm256_div_pd(_mm256_mul_pd(remaining, half), initial_level), zero);
      const __m256d s = _mm256_sqrt_pd(level);
      __m256d d_a = _mm256_mul_pd(_mm256_mul_pd(rate_a, s), dt);
      __m256d d_b = _mm256_mul_pd(_mm256_mul_pd(rate_b, s), dt);
      const __m256d drain = _mm256_add_pd(d_a, d_b);
      const __m256d last = _mm256_cmp_pd(drain, remaining, _CMP_GE_OQ);
      const __m256d positive = _mm256_cmp_pd(remaining, zero, _CMP_GT_OQ);
      const __m256d scale = _mm256_and_pd(_mm256_div_pd(remaining, drain), positive);
      d_a = _mm256_blendv_pd(d_a, _mm256_mul_pd(d_a, scale), last);
      d_b = _mm256_blendv_pd(d_b, _mm256_mul_pd(d_b, scale), last);

      x_left = kahan_add(x_left, comp_left, d_a, active);
      x_right = kahan_add(x_right, comp_right, d_b, active);

      const int last_bits = _mm256_movemask_pd(last) & active_bits;
      for (int l = 0; l < 4; ++l) {
        if (active_bits & (1 << l)) {
          ++steps[l];
          if ((last_bits & (1 << l)) || steps[l] >= batch.max_steps) active_bits &= ~(1 << l);
        }
      }
    }

    alignas(32) std::array<double, 4> out_left;
    alignas(32) std::array<double, 4> out_right;
    _mm256_store_pd(out_left.data(), x_left);
    _mm256_store_pd(out_right.data(), x_right);
    for (std::size_t l = 0; l < lanes; ++l) {
      batch.x_left[base + l] = out_left[l];
      batch.x_right[base + l] = out_right[l];
      batch.steps[base + l] = steps[l];
    }
  }
}

std::int64_t sum_signs(std::span<const std::int8_t> values) {
  const std::size_t n = values.size();
  const auto* p = values.data();
  const __m256i one = _mm256_set1_epi8(1);
  const __m256i zero = _mm256_setzero_si256();
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  // v + 1 lies in {0, 1, 2}; SAD against zero sums groups of 8 bytes into u64.
  for (; i + 32 <= n; i += 32) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(_mm256_add_epi8(v, one), zero));
  }
  alignas(32) std::array<std::uint64_t, 4> parts;
  _mm256_store_si256(reinterpret_cast<__m256i*>(parts.data()), acc);
  std::int64_t sum = static_cast<std::int64_t>(parts[0] + parts[1] + parts[2] + parts[3]) -
                     static_cast<std::int64_t>(i);
  for (; i < n; ++i) sum += p[i];
  return sum;
}

namespace {
inline __m256d dot3(const std::span<const double> (&u)[3], const std::span<const double> (&v)[3],
                    std::size_t i) {
  const __m256d xx = _mm256_mul_pd(_mm256_loadu_pd(&u[0][i]), _mm256_loadu_pd(&v[0][i]));
  const __m256d yy = _mm256_mul_pd(_mm256_loadu_pd(&u[1][i]), _mm256_loadu_pd(&v[1][i]));
  const __m256d zz = _mm256_mul_pd(_mm256_loadu_pd(&u[2][i]), _mm256_loadu_pd(&v[2][i]));
  return _mm256_add_pd(_mm256_add_pd(xx, yy), zz);
}
}  // namespace

void bell_dot_combination(const DirectionQuadruples& q, std::span<double> out) {
  const std::size_t n = out.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d apbp = dot3(q.a_prime, q.b_prime, i);
    const __m256d apb = dot3(q.a_prime, q.b, i);
    const __m256d abp = dot3(q.a, q.b_prime, i);
    const __m256d ab = dot3(q.a, q.b, i);
    _mm256_storeu_pd(&out[i], _mm256_sub_pd(_mm256_add_pd(_mm256_add_pd(apbp, apb), abp), ab));
  }
  if (i < n) {
    DirectionQuadruples tail;
    for (int c = 0; c < 3; ++c) {
      tail.a[c] = q.a[c].subspan(i);
      tail.a_prime[c] = q.a_prime[c].subspan(i);
      tail.b[c] = q.b[c].subspan(i);
      tail.b_prime[c] = q.b_prime[c].subspan(i);
    }
    scalar::bell_dot_combination(tail, out.subspan(i));
  }
}

}  // namespace vesselsim::kernels::avx2
