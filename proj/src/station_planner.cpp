#include "coverfield/station_planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <sstream>

#include "coverfield/error.hpp"

namespace coverfield {

namespace {

double leg(const Station& a, const Station& b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Water nodes inside the disk of the station placed at node `center`.
std::vector<std::uint32_t> disk_members(const RasterField& raster, std::size_t center) {
  const auto& g = raster.grid;
  const std::size_t ci = center % g.nx, cj = center / g.nx;
  const auto p = g.node(center);
  const Station s{p.x, p.y, raster.values[center]};

  auto span_of = [](double r, double step, std::size_t c, std::size_t n) {
    const double reach = std::floor(r / step) + 1.0;
    const double lo = std::max(0.0, static_cast<double>(c) - reach);
    const double hi = std::min(static_cast<double>(n - 1), static_cast<double>(c) + reach);
    return std::pair<std::size_t, std::size_t>{static_cast<std::size_t>(lo),
                                               static_cast<std::size_t>(hi)};
  };
  const auto [i_lo, i_hi] = span_of(s.radius, g.dx, ci, g.nx);
  const auto [j_lo, j_hi] = span_of(s.radius, g.dy, cj, g.ny);

  std::vector<std::uint32_t> members;
  for (std::size_t j = j_lo; j <= j_hi; ++j) {
    for (std::size_t i = i_lo; i <= i_hi; ++i) {
      const std::size_t idx = j * g.nx + i;
      if (raster.is_water(idx) && disk_covers(s, g.x_at(i), g.y_at(j))) {
        members.push_back(static_cast<std::uint32_t>(idx));
      }
    }
  }
  return members;
}

struct Candidate {
  std::size_t gain;
  std::size_t index;
};

// Max-heap order: larger gain first, then lower index.
struct CandidateLess {
  bool operator()(const Candidate& a, const Candidate& b) const {
    if (a.gain != b.gain) return a.gain < b.gain;
    return a.index > b.index;
  }
};

}  // namespace

StationPlan plan_stations_greedy(const RasterField& coverage, std::size_t start_index) {
  const auto& g = coverage.grid;
  g.validate();
  if (coverage.values.size() != g.size() || coverage.mask.size() != g.size()) {
    throw Error(Errc::MaskMismatch, "coverage raster arrays do not match its grid");
  }

  std::vector<std::size_t> water;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (coverage.is_water(idx)) {
      const double r = coverage.values[idx];
      if (!(r > 0.0) || !std::isfinite(r)) {
        throw Error(Errc::InvalidArgument,
                    "coverage radius at node " + std::to_string(idx) + " is not finite and > 0");
      }
      water.push_back(idx);
    }
  }
  if (water.empty()) throw Error(Errc::EmptyDomain, "coverage raster has no water nodes");

  std::vector<std::vector<std::uint32_t>> members(g.size());
  std::priority_queue<Candidate, std::vector<Candidate>, CandidateLess> heap;
  for (std::size_t idx : water) {
    members[idx] = disk_members(coverage, idx);
    heap.push({members[idx].size(), idx});
  }

  std::vector<std::uint8_t> covered(g.size(), 0);
  std::size_t remaining = water.size();
  StationPlan plan;

  // Lazy greedy: gains only shrink, so a refreshed candidate that still beats
  // the best stale bound is the true argmax.
  while (remaining > 0) {
    Candidate top = heap.top();
    heap.pop();
    std::size_t gain = 0;
    for (auto m : members[top.index]) gain += covered[m] ? 0 : 1;
    const Candidate fresh{gain, top.index};
    if (!heap.empty() && CandidateLess{}(fresh, heap.top())) {
      heap.push(fresh);
      continue;
    }
    for (auto m : members[top.index]) {
      if (!covered[m]) {
        covered[m] = 1;
        --remaining;
      }
    }
    const auto p = g.node(top.index);
    plan.stations.push_back({p.x, p.y, coverage.values[top.index]});
  }

  plan.covered_fraction = 1.0;
  if (start_index >= plan.stations.size()) {
    std::ostringstream msg;
    msg << "tour start index " << start_index << " out of range for " << plan.stations.size()
        << " stations";
    throw Error(Errc::InvalidArgument, msg.str());
  }
  plan.tour = improve_tour_2opt(plan.stations, order_tour_nearest_neighbor(plan.stations, start_index));
  plan.tour_length = tour_length(plan.stations, plan.tour);
  return plan;
}

std::vector<std::size_t> order_tour_nearest_neighbor(std::span<const Station> stations,
                                                     std::size_t start_index) {
  if (stations.empty()) return {};
  if (start_index >= stations.size()) {
    throw Error(Errc::InvalidArgument, "tour start index out of range");
  }
  std::vector<std::size_t> tour{start_index};
  std::vector<bool> visited(stations.size(), false);
  visited[start_index] = true;
  while (tour.size() < stations.size()) {
    const Station& here = stations[tour.back()];
    std::size_t best = stations.size();
    double best_d = 0.0;
    for (std::size_t k = 0; k < stations.size(); ++k) {
      if (visited[k]) continue;
      const double d = leg(here, stations[k]);
      if (best == stations.size() || d < best_d) {
        best = k;
        best_d = d;
      }
    }
    visited[best] = true;
    tour.push_back(best);
  }
  return tour;
}

std::vector<std::size_t> improve_tour_2opt(std::span<const Station> stations,
                                           std::vector<std::size_t> tour) {
  const std::size_t n = tour.size();
  if (n < 3) return tour;
  auto d = [&](std::size_t a, std::size_t b) { return leg(stations[tour[a]], stations[tour[b]]); };

  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const bool tail = j + 1 < n;
        const double before = d(i - 1, i) + (tail ? d(j, j + 1) : 0.0);
        const double after = d(i - 1, j) + (tail ? d(i, j + 1) : 0.0);
        if (after < before - 1e-12 * (before + 1.0)) {
          std::reverse(tour.begin() + static_cast<std::ptrdiff_t>(i),
                       tour.begin() + static_cast<std::ptrdiff_t>(j) + 1);
          improved = true;
        }
      }
    }
  }
  return tour;
}

double tour_length(std::span<const Station> stations, std::span<const std::size_t> tour) {
  double total = 0.0;
  for (std::size_t k = 1; k < tour.size(); ++k) total += leg(stations[tour[k - 1]], stations[tour[k]]);
  return total;
}

std::vector<std::size_t> verify_coverage(const StationPlan& plan, const RasterField& coverage) {
  const auto& g = coverage.grid;
  g.validate();
  if (coverage.mask.size() != g.size()) {
    throw Error(Errc::GridMismatch, "coverage raster mask does not match its grid");
  }
  for (std::size_t s = 0; s < plan.stations.size(); ++s) {
    const auto& st = plan.stations[s];
    const double fi = std::round((st.x - g.x0) / g.dx);
    const double fj = std::round((st.y - g.y0) / g.dy);
    const bool inside = fi >= 0 && fj >= 0 && fi < static_cast<double>(g.nx) &&
                        fj < static_cast<double>(g.ny);
    const auto i = static_cast<std::size_t>(std::max(fi, 0.0));
    const auto j = static_cast<std::size_t>(std::max(fj, 0.0));
    if (!inside || std::abs(g.x_at(i) - st.x) > 1e-9 * g.dx ||
        std::abs(g.y_at(j) - st.y) > 1e-9 * g.dy || !coverage.is_water(j * g.nx + i)) {
      std::ostringstream msg;
      msg << "station " << s << " at (" << st.x << ", " << st.y << ") is not a water node of the grid";
      throw Error(Errc::GridMismatch, msg.str());
    }
  }

  std::vector<std::size_t> uncovered;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!coverage.is_water(idx)) continue;
    const auto p = g.node(idx);
    const bool hit = std::any_of(plan.stations.begin(), plan.stations.end(),
                                 [&](const Station& s) { return disk_covers(s, p.x, p.y); });
    if (!hit) uncovered.push_back(idx);
  }
  return uncovered;
}

}  // namespace coverfield
