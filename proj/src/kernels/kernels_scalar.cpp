#include <algorithm>
#include <cmath>

#include "kernels/kernels_impl.hpp"

namespace ehsense::kernels::detail {
namespace {

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void gather_lerp(const double* row, const std::int32_t* idx, const double* w, double* out,
                 std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* r = row + idx[i];
    out[i] = r[0] * (1.0 - w[i]) + r[1] * w[i];
  }
}

void mix(const double* p, double good, double bad, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = p[i] * good + (1.0 - p[i]) * bad;
}

void scale_shift(const double* x, double scale, double shift, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = shift + scale * x[i];
}

void max_into(double* best, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) best[i] = best[i] < x[i] ? x[i] : best[i];
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{axpy, gather_lerp, mix, scale_shift, max_into, max_abs_diff};
  return t;
}

}  // namespace ehsense::kernels::detail
