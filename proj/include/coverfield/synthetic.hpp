#pragma once

// Synthetic bay: a smooth oxygen-like field (about 5 to 9 ml/l) over an
// elongated bay that opens to the sea on the west, used as an end-to-end
// fixture in place of atlas data.

#include <cstdint>
#include <filesystem>
#include <vector>

#include "coverfield/coverage.hpp"
#include "coverfield/field_model.hpp"

namespace coverfield {

struct BayFixture {
  GridSpec grid;
  Mask mask;
  std::vector<ScatterSample> samples;  ///< survey used for fitting
  std::vector<ScatterSample> probes;   ///< later readings, some anomalous
};

/// Dissolved-oxygen-like value (ml/l) at (x, y) meters.
double bay_field(double x, double y);

/// True where (x, y) lies in the bay or the open sea.
bool bay_is_water(double x, double y);

BayFixture make_bay_fixture(std::uint64_t seed = 2010, std::size_t sample_count = 300);

/// Writes samples.csv, probes.csv, mask.csv and config.toml into dir.
void write_bay_fixture(const BayFixture& fixture, const std::filesystem::path& dir);

}  // namespace coverfield
