#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "crancache/kernels/kernels.hpp"

namespace crancache::kernels {

namespace {

struct Table {
  double (*weighted_sum)(const double*, const double*, std::size_t) noexcept;
  void (*scaled_add)(double*, double, const double*, std::size_t) noexcept;
  std::size_t (*count_below)(const double*, std::size_t, double) noexcept;
};

constexpr Table kScalar{scalar::weighted_sum, scalar::scaled_add, scalar::count_below};
#if defined(CRANCACHE_HAVE_AVX2)
constexpr Table kAvx2{avx2::weighted_sum, avx2::scaled_add, avx2::count_below};
#endif

const Table* table_for(Isa isa) noexcept {
#if defined(CRANCACHE_HAVE_AVX2)
  if (isa == Isa::Avx2) return &kAvx2;
#endif
  (void)isa;
  return &kScalar;
}

Isa initial_isa() noexcept {
  if (const char* env = std::getenv("CRANCACHE_ISA")) {
    const std::string_view v(env);
    if (v == "scalar") return Isa::Scalar;
    if (v == "avx2" && isa_available(Isa::Avx2)) return Isa::Avx2;
  }
  return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() noexcept {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

const Table& active() noexcept { return *table_for(current().load(std::memory_order_relaxed)); }

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernel operands differ in length");
}

}  // namespace

const char* isa_name(Isa isa) noexcept { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) noexcept {
  if (isa == Isa::Scalar) return true;
#if defined(CRANCACHE_HAVE_AVX2)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

bool set_isa(Isa isa) noexcept {
  if (!isa_available(isa)) return false;
  current().store(isa, std::memory_order_relaxed);
  return true;
}

double weighted_sum(std::span<const double> w, std::span<const double> x) {
  check_sizes(w.size(), x.size());
  return active().weighted_sum(w.data(), x.data(), w.size());
}

void scaled_add(std::span<double> acc, double scale, std::span<const double> x) {
  check_sizes(acc.size(), x.size());
  active().scaled_add(acc.data(), scale, x.data(), acc.size());
}

std::size_t count_below(std::span<const double> x, double threshold) {
  return active().count_below(x.data(), x.size(), threshold);
}

}  // namespace crancache::kernels
