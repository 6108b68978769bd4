#include "coverfield/synthetic.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include "coverfield/error.hpp"
#include "coverfield/io.hpp"

namespace coverfield {

namespace {

constexpr double kWidth = 6000.0;
constexpr double kHeight = 4000.0;

void write_samples(const std::vector<ScatterSample>& samples, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoFailure, "cannot open " + path.string());
  out << "x,y,value\n";
  for (const auto& s : samples) {
    out << format_double(s.x) << ',' << format_double(s.y) << ',' << format_double(s.value) << '\n';
  }
}

}  // namespace

double bay_field(double x, double y) {
  const double along = 1.5 * std::tanh((2500.0 - x) / 2000.0);
  const double dx = x - 4500.0, dy = y - 2100.0;
  const double bump = 0.4 * std::exp(-(dx * dx + dy * dy) / (2.0 * 700.0 * 700.0));
  return 7.0 + along + bump + 0.1 * std::sin(y / 900.0);
}

bool bay_is_water(double x, double y) {
  if (x < 800.0) return true;
  const double axis = 2000.0 + 200.0 * std::sin(x / 1200.0);
  const double half_width = 1400.0 - 1000.0 * x / kWidth;
  return std::abs(y - axis) < half_width;
}

BayFixture make_bay_fixture(std::uint64_t seed, std::size_t sample_count) {
  BayFixture f;
  f.grid = GridSpec{0.0, 0.0, 100.0, 100.0, 61, 41};
  f.mask.resize(f.grid.size());
  for (std::size_t idx = 0; idx < f.grid.size(); ++idx) {
    const auto p = f.grid.node(idx);
    f.mask[idx] = bay_is_water(p.x, p.y) ? 1 : 0;
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, kWidth), uy(0.0, kHeight);
  std::normal_distribution<double> noise(0.0, 0.02);
  auto draw_water_point = [&] {
    while (true) {
      const double x = ux(rng), y = uy(rng);
      if (bay_is_water(x, y)) return std::pair{x, y};
    }
  };

  f.samples.reserve(sample_count);
  for (std::size_t i = 0; i < sample_count; ++i) {
    const auto [x, y] = draw_water_point();
    f.samples.push_back({x, y, bay_field(x, y) + noise(rng)});
  }

  for (std::size_t i = 0; i < 60; ++i) {
    const auto [x, y] = draw_water_point();
    double v = bay_field(x, y) + noise(rng);
    if (i % 20 == 7) v += 1.5;  // pollution-like spike
    if (i == 41) v = 12.0;      // sensor fault, outside the physical range
    f.probes.push_back({x, y, v});
  }
  return f;
}

void write_bay_fixture(const BayFixture& fixture, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_samples(fixture.samples, dir / "samples.csv");
  write_samples(fixture.probes, dir / "probes.csv");

  {
    std::ofstream out(dir / "mask.csv", std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoFailure, "cannot open mask.csv");
    const auto& g = fixture.grid;
    for (std::size_t j = 0; j < g.ny; ++j) {
      for (std::size_t i = 0; i < g.nx; ++i) {
        if (i) out << ',';
        out << int(fixture.mask[j * g.nx + i]);
      }
      out << '\n';
    }
  }

  std::ofstream cfg(dir / "config.toml", std::ios::binary | std::ios::trunc);
  if (!cfg) throw Error(Errc::IoFailure, "cannot open config.toml");
  const auto& g = fixture.grid;
  cfg << "# synthetic bay fixture\n"
      << "[sensor]\n"
      << "r_max = 10.0\n"
      << "xi = 0.01          # 0.1 ml/l absolute error\n\n"
      << "[fit]\n"
      << "method = \"gradient_descent\"\n"
      << "learning_rate = 0.5\n"
      << "max_iterations = 100000\n"
      << "tolerance = 1e-10\n"
      << "beta = 1.0\n\n"
      << "[grid]\n"
      << "x0 = " << format_double(g.x0) << "\ny0 = " << format_double(g.y0) << '\n'
      << "dx = " << format_double(g.dx) << "\ndy = " << format_double(g.dy) << '\n'
      << "nx = " << g.nx << "\nny = " << g.ny << "\n\n"
      << "[refine]\n"
      << "enabled = true\n"
      << "bbox = [1500.0, 1000.0, 4500.0, 3000.0]\n"
      << "factor = 2\n\n"
      << "[anomaly]\n"
      << "k = 3.0\n"
      << "lo = 0.0\n"
      << "hi = 11.0\n\n"
      << "[tour]\n"
      << "start_index = 0\n";
}

}  // namespace coverfield
