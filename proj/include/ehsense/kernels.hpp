#pragma once

// Data-parallel inner loops of the Bellman sweep. Every kernel has a scalar
// reference and, on x86-64, an AVX2 variant; the variant is chosen once at
// runtime from CPU support. Both variants produce bit-identical results.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace ehsense::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

struct KernelTable {
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // out[i] = row[idx[i]] * (1 - w[i]) + row[idx[i] + 1] * w[i]
  void (*gather_lerp)(const double* row, const std::int32_t* idx, const double* w,
                      double* out, std::size_t n);
  // out[i] = p[i] * good + (1 - p[i]) * bad
  void (*mix)(const double* p, double good, double bad, double* out, std::size_t n);
  // out[i] = shift + scale * x[i]
  void (*scale_shift)(const double* x, double scale, double shift, double* out,
                      std::size_t n);
  // best[i] = max(best[i], x[i])
  void (*max_into)(double* best, const double* x, std::size_t n);
  // max_i |a[i] - b[i]|
  double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
};

const KernelTable& table(Isa isa);
bool isa_available(Isa isa);

/// ISA used by the span wrappers below. Defaults to the widest available one;
/// EHSENSE_ISA=scalar in the environment forces the reference path.
Isa active_isa();
void set_active_isa(Isa isa);

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  table(active_isa()).axpy(a, x.data(), y.data(), y.size());
}
inline void gather_lerp(std::span<const double> row, std::span<const std::int32_t> idx,
                        std::span<const double> w, std::span<double> out) {
  table(active_isa()).gather_lerp(row.data(), idx.data(), w.data(), out.data(), out.size());
}
inline void mix(std::span<const double> p, double good, double bad, std::span<double> out) {
  table(active_isa()).mix(p.data(), good, bad, out.data(), out.size());
}
inline void scale_shift(std::span<const double> x, double scale, double shift,
                        std::span<double> out) {
  table(active_isa()).scale_shift(x.data(), scale, shift, out.data(), out.size());
}
inline void max_into(std::span<double> best, std::span<const double> x) {
  table(active_isa()).max_into(best.data(), x.data(), best.size());
}
inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  return table(active_isa()).max_abs_diff(a.data(), b.data(), a.size());
}

}  // namespace ehsense::kernels
