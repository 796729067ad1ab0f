#pragma once

#include <numbers>
#include <vector>

#include "crancache/model.hpp"

namespace fixtures {

using namespace crancache;

inline constexpr double kPi = std::numbers::pi;

/// L=9, M=2, N=3, beta=1.5, RRHs at (R/4, 0), (R/3, 2pi/3), (R/2, 4pi/3).
inline Scenario three_rrh(double beta = 1.5) {
  return Scenario{FileLibrary(9, beta),
                  RrhLayout({{0.25, 0.0}, {1.0 / 3.0, 2.0 * kPi / 3.0}, {0.5, 4.0 * kPi / 3.0}},
                            {2, 2, 2}, 1.0),
                  RadioConfig{}};
}

/// One RRH at the center, six on the ring of radius 2R/3.
inline RrhLayout ring_layout(std::size_t cache_size, double offset = 0.0) {
  std::vector<Polar> p{{0.0, 0.0}};
  for (int k = 0; k < 6; ++k) p.push_back({2.0 / 3.0, offset + k * kPi / 3.0});
  return RrhLayout(p, std::vector<std::size_t>(7, cache_size), 1.0);
}

/// L=50, M=5, N=7 on the ring layout.
inline Scenario seven_rrh(double beta = 1.5, std::size_t grid = 6) {
  Scenario s{FileLibrary(50, beta), ring_layout(5), RadioConfig{}};
  s.grid_u = s.grid_v = grid;
  return s;
}

inline const std::vector<double> kD1{0.8, 0.8, 0.8, 0.8, 0.8, 0.8};
inline const std::vector<double> kD2{0.6, 0.7, 0.7, 0.8, 0.8, 0.8};
inline const std::vector<double> kD3{0.5, 0.6, 0.7, 0.8, 0.9, 1.0};

}  // namespace fixtures
