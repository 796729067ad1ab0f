#pragma once

/// @file kernels.hpp
/// Data-parallel inner loops with a scalar reference and an AVX2 variant,
/// selected once at runtime. Every variant produces bit-identical results: the
/// scalar reductions follow the same 4-lane order the vector code uses, and
/// the project is compiled without FP contraction.
///
/// The first call picks the widest ISA the CPU supports; the environment
/// variable CRANCACHE_ISA=scalar|avx2 or set_isa() overrides that.

#include <cstddef>
#include <span>

namespace crancache::kernels {

enum class Isa { Scalar, Avx2 };

const char* isa_name(Isa isa) noexcept;
bool isa_available(Isa isa) noexcept;
Isa active_isa() noexcept;
/// Returns false (and leaves the selection unchanged) if `isa` is unavailable.
bool set_isa(Isa isa) noexcept;

/// sum_i w[i] * x[i]
double weighted_sum(std::span<const double> w, std::span<const double> x);
/// acc[i] += scale * x[i]
void scaled_add(std::span<double> acc, double scale, std::span<const double> x);
/// number of i with x[i] < threshold
std::size_t count_below(std::span<const double> x, double threshold);

namespace scalar {
double weighted_sum(const double* w, const double* x, std::size_t n) noexcept;
void scaled_add(double* acc, double scale, const double* x, std::size_t n) noexcept;
std::size_t count_below(const double* x, std::size_t n, double threshold) noexcept;
}  // namespace scalar

namespace avx2 {
double weighted_sum(const double* w, const double* x, std::size_t n) noexcept;
void scaled_add(double* acc, double scale, const double* x, std::size_t n) noexcept;
std::size_t count_below(const double* x, std::size_t n, double threshold) noexcept;
}  // namespace avx2

}  // namespace crancache::kernels
