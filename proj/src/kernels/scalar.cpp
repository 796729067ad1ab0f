#include "crancache/kernels/kernels.hpp"

namespace crancache::kernels::scalar {

double weighted_sum(const double* w, const double* x, std::size_t n) noexcept {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    for (int k = 0; k < 4; ++k) lane[k] += w[i + k] * x[i + k];
  // same combine order as the 256-bit horizontal add
  double total = (lane[0] + lane[2]) + (lane[1] + lane[3]);
  for (; i < n; ++i) total += w[i] * x[i];
  return total;
}

void scaled_add(double* acc, double scale, const double* x, std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) acc[i] += scale * x[i];
}

std::size_t count_below(const double* x, std::size_t n, double threshold) noexcept {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += x[i] < threshold ? 1 : 0;
  return c;
}

}  // namespace crancache::kernels::scalar
