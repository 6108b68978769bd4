#include <doctest.h>

#include <cmath>
#include <random>

#include "coverfield/coverage.hpp"
#include "coverfield/error.hpp"
#include "oracles.hpp"

using namespace coverfield;
using namespace coverfield::testing;

namespace {

BiquadraticSurface plane(double ax, double ay, double c = 0.0) {
  Coefficients a{};
  a[0] = c;
  a[1] = ax;
  a[2] = ay;
  return BiquadraticSurface(a, CoordTransform::identity(), -1e12, 1e12);
}

SensorSpec absolute_sensor(double e, double cap = 1e6) {
  SensorSpec s;
  s.abs_error = e;
  s.r_cap = cap;
  return s;
}

const GridSpec kGrid{0.0, 0.0, 1.0, 1.0, 12, 9};

}  // namespace

TEST_CASE("coverage radius at a point") {
  CHECK(coverage_radius_at(plane(0.01, 0.0), absolute_sensor(0.001), 3.0, 4.0) ==
        doctest::Approx(0.1).epsilon(1e-12));

  Coefficients c{};
  c[0] = 7.0;
  const BiquadraticSurface flat(c, CoordTransform::identity(), 0, 10);
  CHECK(coverage_radius_at(flat, absolute_sensor(0.001, 250.0), 1.0, 1.0) == 250.0);

  // 0.001 ml/l channel over a 1e-5 ml/l per m gradient
  CHECK(coverage_radius_at(plane(1e-5, 0.0), absolute_sensor(0.001), 0.0, 0.0) ==
        doctest::Approx(100.0).epsilon(1e-12));

  // r_max * xi form; cap binds for small gradients
  SensorSpec ranged;
  ranged.r_max = 20.0;
  ranged.xi = 0.005;
  ranged.r_cap = 5.0;
  CHECK(coverage_radius_at(plane(0.1, 0.0), ranged, 0.0, 0.0) == doctest::Approx(1.0));
  CHECK(coverage_radius_at(plane(0.001, 0.0), ranged, 0.0, 0.0) == 5.0);
}

TEST_CASE("sensor validation") {
  SensorSpec s;
  s.xi = 1.5;
  CHECK_THROWS_AS(s.validate(), Error);
  s.xi = 0.01;
  s.r_cap = 0.0;
  CHECK_THROWS_AS(s.validate(), Error);
  s.r_cap = 1.0;
  s.abs_error = -1.0;
  CHECK_THROWS_AS(s.validate(), Error);
  s.abs_error = 0.5;
  CHECK_NOTHROW(s.validate());
}

TEST_CASE("gradient magnitude raster") {
  const auto g = gradient_magnitude_field(plane(3.0, 4.0), kGrid, all_water(kGrid));
  for (double v : g.values) CHECK(v == 5.0);

  Coefficients c{};
  c[0] = 2.0;
  const auto flat = gradient_magnitude_field(BiquadraticSurface(c, CoordTransform::identity(), 0, 5),
                                             kGrid, all_water(kGrid));
  for (double v : flat.values) CHECK(v == 0.0);

  std::mt19937_64 rng(5);
  const CoordTransform t{5.5, 2.0 / 11.0, 4.0, 2.0 / 8.0};
  const BiquadraticSurface s(random_coefficients(rng), t, -0.2, 0.4, 0.5);
  const auto raster = gradient_magnitude_field(s, kGrid, all_water(kGrid));
  for (std::size_t idx = 0; idx < kGrid.size(); ++idx) {
    const auto p = kGrid.node(idx);
    CHECK(raster.values[idx] == s.gradient_smoothed(p.x, p.y).magnitude());
  }

  CHECK_THROWS_AS(gradient_magnitude_field(s, kGrid, Mask(5, 1)), Error);
}

TEST_CASE("coverage raster with and without land") {
  const auto sensor = absolute_sensor(0.001);
  const auto water = coverage_field(plane(0.01, 0.0), sensor, kGrid, all_water(kGrid));
  for (double v : water.values) CHECK(v == doctest::Approx(0.1).epsilon(1e-12));

  Mask half = all_water(kGrid);
  for (std::size_t j = 0; j < kGrid.ny; ++j) {
    for (std::size_t i = kGrid.nx / 2; i < kGrid.nx; ++i) half[j * kGrid.nx + i] = 0;
  }
  const auto coast = coverage_field(plane(0.01, 0.0), sensor, kGrid, half);
  for (std::size_t idx = 0; idx < kGrid.size(); ++idx) {
    if (half[idx]) {
      CHECK(coast.values[idx] == water.values[idx]);
    } else {
      CHECK(std::isnan(coast.values[idx]));
    }
  }
  CHECK(coast.water_count() == kGrid.size() / 2);

  try {
    coverage_field(plane(0.01, 0.0), sensor, kGrid, Mask(3, 1));
    FAIL("expected MaskMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MaskMismatch);
  }
}

TEST_CASE("coverage raster properties on random surfaces") {
  std::mt19937_64 rng(17);
  const GridSpec grid{1000.0, -500.0, 50.0, 40.0, 30, 25};
  const CoordTransform t{1750.0, 2.0 / 1500.0, -20.0, 2.0 / 960.0};
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  for (int trial = 0; trial < 5; ++trial) {
    const auto a = random_coefficients(rng);
    const BiquadraticSurface s(a, t, -0.4, 0.6, 1.0);
    SensorSpec sensor = absolute_sensor(0.01, 300.0);
    Mask mask = all_water(grid);
    for (auto& m : mask) m = coin(rng) < 0.7 ? 1 : 0;

    const auto cov = coverage_field(s, sensor, grid, mask);
    const auto full = coverage_field(s, sensor, grid, all_water(grid));
    SensorSpec doubled = sensor;
    doubled.abs_error = 2.0 * *sensor.abs_error;
    doubled.r_cap = 1e12;
    SensorSpec uncapped = sensor;
    uncapped.r_cap = 1e12;
    const auto base = coverage_field(s, uncapped, grid, mask);
    const auto twice = coverage_field(s, doubled, grid, mask);

    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
      if (!mask[idx]) continue;
      const auto p = grid.node(idx);
      CHECK(cov.values[idx] > 0.0);
      CHECK(cov.values[idx] <= sensor.r_cap);
      CHECK(cov.values[idx] == coverage_radius_at(s, sensor, p.x, p.y));
      CHECK(cov.values[idx] == full.values[idx]);  // land does not change water nodes
      CHECK(twice.values[idx] == 2.0 * base.values[idx]);
    }
  }
}

TEST_CASE("scaling the surface divides uncapped radii") {
  std::mt19937_64 rng(19);
  const GridSpec grid{0.0, 0.0, 0.1, 0.1, 21, 21};
  const auto a = random_coefficients(rng);
  Coefficients scaled = a;
  for (auto& c : scaled) c *= 4.0;
  // bounds wide enough that everything stays on the middle branch
  const BiquadraticSurface s1(a, CoordTransform::identity(), -1e6, 1e6);
  const BiquadraticSurface s4(scaled, CoordTransform::identity(), -4e6, 4e6);
  const auto sensor = absolute_sensor(0.01, 1e12);
  const auto r1 = coverage_field(s1, sensor, grid, all_water(grid));
  const auto r4 = coverage_field(s4, sensor, grid, all_water(grid));
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    CHECK(r4.values[idx] == doctest::Approx(r1.values[idx] / 4.0).epsilon(1e-12));
  }
}

TEST_CASE("region refinement") {
  const GridSpec grid{100.0, 200.0, 10.0, 5.0, 11, 9};

  SUBCASE("full extent, factor 2") {
    const auto fine = region_refine(grid, {grid.x0, grid.y0, grid.x_max(), grid.y_max()}, 2);
    CHECK(fine.dx == 5.0);
    CHECK(fine.dy == 2.5);
    CHECK(fine.nx == 2 * (grid.nx - 1) + 1);
    CHECK(fine.ny == 2 * (grid.ny - 1) + 1);
    CHECK(fine.x0 == grid.x0);
    CHECK(fine.y0 == grid.y0);

    // shared nodes carry identical values
    std::mt19937_64 rng(3);
    const CoordTransform t{150.0, 0.02, 220.0, 0.05};
    const BiquadraticSurface s(random_coefficients(rng), t, -0.5, 0.5);
    const auto coarse = gradient_magnitude_field(s, grid, all_water(grid));
    const auto refined = gradient_magnitude_field(s, fine, all_water(fine));
    for (std::size_t j = 0; j < grid.ny; ++j) {
      for (std::size_t i = 0; i < grid.nx; ++i) {
        CHECK(refined.values[(2 * j) * fine.nx + 2 * i] == coarse.values[j * grid.nx + i]);
      }
    }
  }

  SUBCASE("box outside the grid") {
    try {
      region_refine(grid, {1000.0, 1000.0, 2000.0, 2000.0}, 2);
      FAIL("expected EmptyRegion");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::EmptyRegion);
    }
    CHECK_THROWS_AS(region_refine(grid, {0, 0, 150, 240}, 1), Error);
  }

  SUBCASE("central quarter, factor 4") {
    const BoundingBox box{125.0, 210.0, 175.0, 230.0};
    const auto fine = region_refine(grid, box, 4);
    CHECK(fine.x0 == box.x_lo);
    CHECK(fine.y0 == box.y_lo);
    CHECK(fine.dx == 2.5);
    CHECK(fine.dy == 1.25);
    CHECK(std::abs(fine.x_max() - box.x_hi) <= fine.dx);
    CHECK(std::abs(fine.y_max() - box.y_hi) <= fine.dy);
    CHECK(fine.x_max() <= box.x_hi + 1e-9);
    CHECK(fine.y_max() <= box.y_hi + 1e-9);
  }

  SUBCASE("box partly outside is clipped") {
    const auto fine = region_refine(grid, {50.0, 150.0, 130.0, 215.0}, 2);
    CHECK(fine.x0 == grid.x0);
    CHECK(fine.y0 == grid.y0);
    CHECK(fine.nx == 7);  // 30 m at 5 m
    CHECK(fine.ny == 7);  // 15 m at 2.5 m
  }
}

TEST_CASE("mask resampling follows the nearest coarse node") {
  const GridSpec coarse{0.0, 0.0, 10.0, 10.0, 3, 3};
  const Mask m{1, 1, 0,
               1, 0, 0,
               1, 1, 1};
  const auto fine = region_refine(coarse, {0, 0, 20, 20}, 2);
  const auto fm = resample_mask(coarse, m, fine);
  REQUIRE(fm.size() == fine.size());
  for (std::size_t j = 0; j < coarse.ny; ++j) {
    for (std::size_t i = 0; i < coarse.nx; ++i) {
      CHECK(fm[(2 * j) * fine.nx + 2 * i] == m[j * coarse.nx + i]);
    }
  }
}
