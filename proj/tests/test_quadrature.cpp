#include <cmath>

#include "crancache/error.hpp"
#include "crancache/montecarlo.hpp"
#include "crancache/quadrature.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace crancache;

TEST_CASE("Simpson weight patterns") {
  CHECK(simpson_weights(2) == std::vector<double>{1, 4, 1});
  CHECK(simpson_weights(4) == std::vector<double>{1, 4, 2, 4, 1});
  CHECK_THROWS_AS(simpson_weights(3), ValidationError);
  CHECK_THROWS_AS(simpson_weights(0), ValidationError);

  const auto g2 = build_grid(1.0, 2, 2);
  CHECK(g2.weight(0, 0) == 1.0);
  CHECK(g2.weight(1, 1) == 16.0);

  const auto g6 = build_grid(3.0, 6, 6);
  CHECK(g6.node_count() == 49);
  CHECK(g6.delta_h == doctest::Approx(0.5));
  CHECK(g6.delta_k == doctest::Approx(fixtures::kPi / 3.0));
  CHECK(g6.rho.back() == doctest::Approx(3.0));
  CHECK(g6.theta.back() == doctest::Approx(2.0 * fixtures::kPi));
}

TEST_CASE("uniform density integrates to one") {
  auto one = [](double, double) { return 1.0; };
  CHECK(std::abs(integrate(build_grid(1.0, 6, 6), one) - 1.0) <= 1e-3);
  CHECK(std::abs(integrate(build_grid(2.5, 32, 32), one) - 1.0) <= 1e-6);

  // a user-supplied density is used as given
  auto rim = [](double rho, double) { return 3.0 * rho / (2.0 * fixtures::kPi); };
  CHECK(integrate(build_grid(1.0, 16, 4), one, rim) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("grid nodes on RRH positions are displaced") {
  const auto sc = fixtures::three_rrh();
  const CellIntegrator cells(build_grid(1.0, 6, 6), sc.layout, sc.radio);
  CHECK(cells.displaced_nodes() == 2);
  const double p = cells.average_outage(std::vector<std::size_t>{1});
  CHECK(std::isfinite(p));
}

TEST_CASE("MPC cell averages agree across files") {
  const auto sc = fixtures::seven_rrh();
  const auto grid = build_grid(1.0, 6, 6);
  const auto mpc = mpc_placement(sc.layout, 50);
  const double first = cell_average_outage(mpc, 0, grid, sc.layout, sc.radio);
  CHECK(cell_average_outage(mpc, 3, grid, sc.layout, sc.radio) == first);
  CHECK(cell_average_outage(mpc, 40, grid, sc.layout, sc.radio) == first);
}

TEST_CASE("cell averages stay in [0, 1]") {
  const auto sc = fixtures::seven_rrh();
  const CellIntegrator cells(build_grid(1.0, 6, 6), sc.layout, sc.radio);
  for (std::uint64_t mask = 1; mask < 128; mask += 5) {
    std::vector<std::size_t> members;
    for (std::size_t n = 0; n < 7; ++n)
      if (mask >> n & 1) members.push_back(n);
    const double p = cells.average_outage(members);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
  }
}

TEST_CASE("rotating the layout and the grid together leaves the average unchanged") {
  const auto sc = fixtures::three_rrh();
  const double angle = 0.4123;
  const auto rotated = sc.layout.rotated(angle);
  const auto lcd = lb_lcd_placement(sc.layout, 9);
  for (std::size_t l : {0, 2, 4, 8}) {
    const double a = cell_average_outage(lcd, l, build_grid(1.0, 6, 6), sc.layout, sc.radio);
    const double b = cell_average_outage(lcd, l, build_grid(1.0, 6, 6, angle), rotated, sc.radio);
    CHECK(std::abs(a - b) <= 1e-9);
  }
}

TEST_CASE("MPC cell average matches simulation on the seven-RRH cell") {
  const auto sc = fixtures::seven_rrh();
  const auto mpc = mpc_placement(sc.layout, 50);
  const double analytic = cell_average_outage(mpc, 0, build_grid(1.0, 6, 6), sc.layout, sc.radio);
  const auto sim = empirical_service_outage({}, sc, 2'000'000, 5);
  CHECK(std::abs(analytic - sim.value) <= 0.01);
}
