#pragma once

// Station placement over a coverage-radius raster and survey tour ordering.

#include <cstddef>
#include <span>
#include <vector>

#include "coverfield/coverage.hpp"

namespace coverfield {

struct Station {
  double x = 0.0;
  double y = 0.0;
  double radius = 0.0;  ///< coverage radius at (x, y), m

  friend bool operator==(const Station&, const Station&) = default;
};

struct StationPlan {
  std::vector<Station> stations;
  double covered_fraction = 0.0;
  std::vector<std::size_t> tour;  ///< permutation of station indices, open path
  double tour_length = 0.0;       ///< m
};

/// A node is covered by a station iff it lies within the station's radius.
inline bool disk_covers(const Station& s, double x, double y) {
  const double ex = x - s.x;
  const double ey = y - s.y;
  return ex * ex + ey * ey <= s.radius * s.radius;
}

/// Greedy maximum-coverage placement over water-node candidates. Each round
/// picks the node whose disk covers the most still-uncovered water nodes
/// (lowest row-major index on ties) until every water node is covered. The
/// tour starts at station `start_index` and is ordered by nearest neighbour,
/// then 2-opt. Throws Error{EmptyDomain} when there are no water nodes and
/// Error{InvalidArgument} when start_index is out of range.
StationPlan plan_stations_greedy(const RasterField& coverage, std::size_t start_index = 0);

std::vector<std::size_t> order_tour_nearest_neighbor(std::span<const Station> stations,
                                                     std::size_t start_index);

/// 2-opt segment reversals on an open path until no reversal shortens it.
/// The first tour entry stays fixed.
std::vector<std::size_t> improve_tour_2opt(std::span<const Station> stations,
                                           std::vector<std::size_t> tour);

/// Sum of consecutive Euclidean legs (no return leg).
double tour_length(std::span<const Station> stations, std::span<const std::size_t> tour);

/// Water nodes not covered by any station of the plan, ascending. Throws
/// Error{GridMismatch} when a station does not sit on a water node of the
/// raster's grid.
std::vector<std::size_t> verify_coverage(const StationPlan& plan, const RasterField& coverage);

}  // namespace coverfield
