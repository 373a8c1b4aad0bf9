#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "kernels/kernels_impl.hpp"

// Only multiplies and adds in the same order as the scalar reference; no FMA,
// so results match it bit for bit.

namespace ehsense::kernels::detail {
namespace {

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void gather_lerp(const double* row, const std::int32_t* idx, const double* w, double* out,
                 std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m128i vi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
    const __m256d left = _mm256_i32gather_pd(row, vi, 8);
    const __m256d right = _mm256_i32gather_pd(row + 1, vi, 8);
    const __m256d vw = _mm256_loadu_pd(w + i);
    const __m256d lhs = _mm256_mul_pd(left, _mm256_sub_pd(one, vw));
    _mm256_storeu_pd(out + i, _mm256_add_pd(lhs, _mm256_mul_pd(right, vw)));
  }
  for (; i < n; ++i) {
    const double* r = row + idx[i];
    out[i] = r[0] * (1.0 - w[i]) + r[1] * w[i];
  }
}

void mix(const double* p, double good, double bad, double* out, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d vg = _mm256_set1_pd(good);
  const __m256d vb = _mm256_set1_pd(bad);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vp = _mm256_loadu_pd(p + i);
    const __m256d g = _mm256_mul_pd(vp, vg);
    const __m256d b = _mm256_mul_pd(_mm256_sub_pd(one, vp), vb);
    _mm256_storeu_pd(out + i, _mm256_add_pd(g, b));
  }
  for (; i < n; ++i) out[i] = p[i] * good + (1.0 - p[i]) * bad;
}

void scale_shift(const double* x, double scale, double shift, double* out, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(scale);
  const __m256d vt = _mm256_set1_pd(shift);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(vs, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(vt, prod));
  }
  for (; i < n; ++i) out[i] = shift + scale * x[i];
}

void max_into(double* best, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d b = _mm256_loadu_pd(best + i);
    const __m256d v = _mm256_loadu_pd(x + i);
    // b < v ? v : b, matching the scalar select
    _mm256_storeu_pd(best + i, _mm256_blendv_pd(b, v, _mm256_cmp_pd(b, v, _CMP_LT_OQ)));
  }
  for (; i < n; ++i) best[i] = best[i] < x[i] ? x[i] : best[i];
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_max_pd(acc, _mm256_andnot_pd(sign, d));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable t{axpy, gather_lerp, mix, scale_shift, max_into, max_abs_diff};
  return t;
}

}  // namespace ehsense::kernels::detail
