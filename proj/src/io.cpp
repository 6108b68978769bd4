#include "coverfield/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "coverfield/error.hpp"

namespace coverfield {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto comma = line.find(',');
    fields.push_back(trim(line.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return fields;
}

bool parse_double(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::string line_tag(std::size_t line) { return "line " + std::to_string(line); }

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoFailure, "cannot open " + path.string() + " for writing");
  return out;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(Errc::IoFailure, "write failed for " + path.string());
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "NA";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

SampleSet parse_samples(std::istream& in, const ProjectionConfig& projection) {
  const bool geographic = projection.kind == ProjectionKind::Equirect;
  const char* expected = geographic ? "lon,lat,value" : "x,y,value";

  std::string raw;
  std::size_t line = 0;
  bool have_header = false;
  std::vector<ScatterSample> samples;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(raw);
    if (text.empty()) continue;
    const auto fields = split_csv(text);
    if (!have_header) {
      if (fields.size() != 3 || fields[0] != (geographic ? "lon" : "x") ||
          fields[1] != (geographic ? "lat" : "y") || fields[2] != "value") {
        throw Error(Errc::MalformedRow, line_tag(line) + ": expected header '" + expected + "'");
      }
      have_header = true;
      continue;
    }
    if (fields.size() != 3) {
      throw Error(Errc::MalformedRow,
                  line_tag(line) + ": expected 3 fields, got " + std::to_string(fields.size()));
    }
    double v[3];
    for (int k = 0; k < 3; ++k) {
      if (!parse_double(fields[k], v[k])) {
        throw Error(Errc::MalformedRow, line_tag(line) + ": cannot parse '" + std::string(fields[k]) + "'");
      }
      if (!std::isfinite(v[k])) {
        throw Error(Errc::NonFiniteValue, line_tag(line) + ": non-finite value '" + std::string(fields[k]) + "'");
      }
    }
    samples.push_back({v[0], v[1], v[2]});
  }
  if (samples.empty()) throw Error(Errc::EmptyFile, "sample file has no data rows");

  if (geographic) {
    double lon_c = 0.0, lat_c = 0.0;
    for (const auto& s : samples) {
      lon_c += s.x;
      lat_c += s.y;
    }
    lon_c /= static_cast<double>(samples.size());
    lat_c /= static_cast<double>(samples.size());
    constexpr double deg = std::numbers::pi / 180.0;
    const double kx = kEarthRadiusM * std::cos(projection.ref_lat_deg * deg) * deg;
    const double ky = kEarthRadiusM * deg;
    for (auto& s : samples) {
      s.x = (s.x - lon_c) * kx;
      s.y = (s.y - lat_c) * ky;
    }
  }
  return SampleSet(std::move(samples));
}

Mask parse_mask(std::istream& in, const GridSpec& grid) {
  Mask mask;
  mask.reserve(grid.size());
  std::string raw;
  std::size_t line = 0, rows = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(raw);
    if (text.empty()) continue;
    const auto cells = split_csv(text);
    if (cells.size() != grid.nx) {
      throw Error(Errc::ShapeMismatch, line_tag(line) + ": expected " + std::to_string(grid.nx) +
                                           " cells, got " + std::to_string(cells.size()));
    }
    if (++rows > grid.ny) {
      throw Error(Errc::ShapeMismatch, line_tag(line) + ": more than " + std::to_string(grid.ny) + " rows");
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i] == "1") {
        mask.push_back(1);
      } else if (cells[i] == "0") {
        mask.push_back(0);
      } else {
        throw Error(Errc::InvalidCell, line_tag(line) + ", column " + std::to_string(i + 1) +
                                           ": mask cell '" + std::string(cells[i]) + "' is not 0 or 1");
      }
    }
  }
  if (rows != grid.ny) {
    throw Error(Errc::ShapeMismatch,
                "mask has " + std::to_string(rows) + " rows, grid needs " + std::to_string(grid.ny));
  }
  return mask;
}

void write_raster_csv(const RasterField& raster, std::ostream& out) {
  const auto& g = raster.grid;
  out << format_double(g.x0) << ',' << format_double(g.y0) << ',' << format_double(g.dx) << ','
      << format_double(g.dy) << ',' << g.nx << ',' << g.ny << '\n';
  for (std::size_t j = 0; j < g.ny; ++j) {
    for (std::size_t i = 0; i < g.nx; ++i) {
      const std::size_t idx = j * g.nx + i;
      if (i) out << ',';
      out << (raster.is_water(idx) ? format_double(raster.values[idx]) : "NA");
    }
    out << '\n';
  }
}

RasterField read_raster_csv(std::istream& in) {
  std::string raw;
  if (!std::getline(in, raw)) throw Error(Errc::EmptyFile, "raster file is empty");
  const auto head = split_csv(trim(raw));
  if (head.size() != 6) throw Error(Errc::MalformedRow, "line 1: raster header needs 6 fields");
  double h[6];
  for (int k = 0; k < 6; ++k) {
    if (!parse_double(head[k], h[k])) throw Error(Errc::MalformedRow, "line 1: bad raster header field");
  }
  RasterField r;
  r.grid = {h[0], h[1], h[2], h[3], static_cast<std::size_t>(h[4]), static_cast<std::size_t>(h[5])};
  r.grid.validate();
  r.values.reserve(r.grid.size());
  r.mask.reserve(r.grid.size());
  std::size_t line = 1;
  for (std::size_t j = 0; j < r.grid.ny; ++j) {
    ++line;
    if (!std::getline(in, raw)) throw Error(Errc::ShapeMismatch, "raster has too few rows");
    const auto cells = split_csv(trim(raw));
    if (cells.size() != r.grid.nx) throw Error(Errc::ShapeMismatch, line_tag(line) + ": wrong column count");
    for (auto c : cells) {
      if (c == "NA") {
        r.values.push_back(RasterField::kNoData);
        r.mask.push_back(0);
        continue;
      }
      double v = 0.0;
      if (!parse_double(c, v)) throw Error(Errc::MalformedRow, line_tag(line) + ": bad raster value");
      r.values.push_back(v);
      r.mask.push_back(1);
    }
  }
  return r;
}

void write_raster_pgm(const RasterField& raster, std::ostream& out) {
  const auto& g = raster.grid;
  const auto lo = raster.water_min();
  const auto hi = raster.water_max();
  const double span = (lo && hi) ? *hi - *lo : 0.0;

  out << "P2\n" << g.nx << ' ' << g.ny << "\n255\n";
  for (std::size_t row = 0; row < g.ny; ++row) {
    const std::size_t j = g.ny - 1 - row;
    for (std::size_t i = 0; i < g.nx; ++i) {
      const std::size_t idx = j * g.nx + i;
      long level = 0;
      if (raster.is_water(idx) && span > 0.0) {
        level = std::lround((raster.values[idx] - *lo) / span * 255.0);
        level = std::clamp(level, 0L, 255L);
      }
      if (i) out << ' ';
      out << level;
    }
    out << '\n';
  }
}

void write_raster_legend(const RasterField& raster, std::string_view units, std::ostream& out) {
  const auto lo = raster.water_min();
  const auto hi = raster.water_max();
  out << "min " << (lo ? format_double(*lo) : "NA") << '\n';
  out << "max " << (hi ? format_double(*hi) : "NA") << '\n';
  out << "units " << units << '\n';
}

void write_raster(const RasterField& raster, const std::filesystem::path& base,
                  std::string_view units) {
  const auto with_suffix = [&](const char* suffix) {
    auto p = base;
    p += suffix;
    return p;
  };
  const auto csv = with_suffix(".csv");
  const auto pgm = with_suffix(".pgm");
  const auto legend = with_suffix(".legend.txt");

  auto out = open_for_write(csv);
  write_raster_csv(raster, out);
  finish_write(out, csv);

  out = open_for_write(pgm);
  write_raster_pgm(raster, out);
  finish_write(out, pgm);

  out = open_for_write(legend);
  write_raster_legend(raster, units, out);
  finish_write(out, legend);
}

namespace {

void check_plan(const StationPlan& plan) {
  if (plan.stations.empty()) throw Error(Errc::InvalidPlan, "plan has no stations");
  std::vector<std::size_t> sorted = plan.tour;
  std::sort(sorted.begin(), sorted.end());
  bool permutation = sorted.size() == plan.stations.size();
  for (std::size_t k = 0; permutation && k < sorted.size(); ++k) permutation = sorted[k] == k;
  if (!permutation) throw Error(Errc::InvalidPlan, "plan tour is not a permutation of its stations");
}

}  // namespace

std::string plan_to_json(const StationPlan& plan) {
  check_plan(plan);
  ordered_json doc;
  doc["stations"] = ordered_json::array();
  for (const auto& s : plan.stations) {
    ordered_json st;
    st["x"] = s.x;
    st["y"] = s.y;
    st["radius"] = s.radius;
    doc["stations"].push_back(std::move(st));
  }
  doc["tour"] = plan.tour;
  doc["tour_length_m"] = plan.tour_length;
  doc["covered_fraction"] = plan.covered_fraction;
  return doc.dump(2) + "\n";
}

StationPlan plan_from_json(std::string_view text) {
  StationPlan plan;
  try {
    const auto doc = ordered_json::parse(text);
    for (const auto& st : doc.at("stations")) {
      plan.stations.push_back({st.at("x").get<double>(), st.at("y").get<double>(),
                               st.at("radius").get<double>()});
    }
    plan.tour = doc.at("tour").get<std::vector<std::size_t>>();
    plan.tour_length = doc.at("tour_length_m").get<double>();
    plan.covered_fraction = doc.at("covered_fraction").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidPlan, std::string("plan JSON: ") + e.what());
  }
  check_plan(plan);
  return plan;
}

void write_plan(const StationPlan& plan, const std::filesystem::path& path) {
  const std::string text = plan_to_json(plan);
  auto out = open_for_write(path);
  out << text;
  finish_write(out, path);
}

StationPlan read_plan(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return plan_from_json(ss.str());
}

void write_anomalies(std::span<const AnomalyReport> reports, std::ostream& out) {
  out << "x,y,value,predicted,residual,z,flagged,reason\n";
  for (const auto& r : reports) {
    out << format_double(r.sample.x) << ',' << format_double(r.sample.y) << ','
        << format_double(r.sample.value) << ',' << format_double(r.predicted) << ','
        << format_double(r.residual) << ',' << format_double(r.z_score) << ','
        << (r.flagged ? 1 : 0) << ',' << to_string(r.reason) << '\n';
  }
}

void write_fit_report(const BiquadraticSurface& surface, const FitReport& report, std::ostream& out) {
  static constexpr const char* kTerms[kNumCoefficients] = {"1", "x", "y", "xy", "x^2", "y^2", "x^2y", "xy^2", "x^2y^2"};
  const auto raw = surface.raw_frame_coefficients();
  out << "# biquadratic surface, coefficients in raw coordinates (m)\n";
  for (std::size_t k = 0; k < kNumCoefficients; ++k) {
    out << 'a' << k << ' ' << format_double(raw[k]) << "  # " << kTerms[k] << '\n';
  }
  out << "value_min " << format_double(surface.value_min()) << '\n';
  out << "value_max " << format_double(surface.value_max()) << '\n';
  out << "beta " << format_double(surface.beta()) << '\n';
  out << "F " << format_double(report.final_residual) << '\n';
  out << "rmse " << format_double(report.rmse) << '\n';
  out << "iterations " << report.iterations << '\n';
  out << "converged " << (report.converged ? "true" : "false") << '\n';
}

}  // namespace coverfield
