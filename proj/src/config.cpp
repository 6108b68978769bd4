#include "coverfield/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include "coverfield/error.hpp"
#include "coverfield/toml_lite.hpp"

namespace coverfield {

namespace {

using toml_lite::Document;
using toml_lite::Entry;

[[noreturn]] void config_error(const std::string& what) { throw Error(Errc::ConfigError, what); }

class TableReader {
 public:
  TableReader(const Document& doc, const std::string& name, std::set<std::string> allowed)
      : name_(name) {
    auto it = doc.find(name);
    if (it == doc.end()) return;
    table_ = &it->second;
    for (const auto& [key, entry] : *table_) {
      if (!allowed.count(key)) {
        config_error("config line " + std::to_string(entry.line) + ": unknown key '" + key +
                     "' in [" + name + "]");
      }
    }
  }

  bool present() const { return table_ != nullptr; }
  bool has(const std::string& key) const { return table_ && table_->count(key); }

  void number(const std::string& key, double& out) const {
    if (const Entry* e = find(key)) {
      if (auto d = std::get_if<double>(&e->value)) {
        out = *d;
      } else if (auto i = std::get_if<std::int64_t>(&e->value)) {
        out = static_cast<double>(*i);
      } else {
        type_error(key, *e, "a number");
      }
    }
  }

  void number(const std::string& key, std::optional<double>& out) const {
    if (has(key)) {
      double v = 0.0;
      number(key, v);
      out = v;
    }
  }

  void count(const std::string& key, std::size_t& out) const {
    if (const Entry* e = find(key)) {
      auto i = std::get_if<std::int64_t>(&e->value);
      if (!i || *i < 0) type_error(key, *e, "a non-negative integer");
      out = static_cast<std::size_t>(*i);
    }
  }

  void integer(const std::string& key, int& out) const {
    if (const Entry* e = find(key)) {
      auto i = std::get_if<std::int64_t>(&e->value);
      if (!i) type_error(key, *e, "an integer");
      out = static_cast<int>(*i);
    }
  }

  void boolean(const std::string& key, bool& out) const {
    if (const Entry* e = find(key)) {
      auto b = std::get_if<bool>(&e->value);
      if (!b) type_error(key, *e, "a boolean");
      out = *b;
    }
  }

  std::optional<std::string> string(const std::string& key) const {
    if (const Entry* e = find(key)) {
      auto s = std::get_if<std::string>(&e->value);
      if (!s) type_error(key, *e, "a string");
      return *s;
    }
    return std::nullopt;
  }

  std::optional<std::vector<double>> array(const std::string& key) const {
    if (const Entry* e = find(key)) {
      auto a = std::get_if<std::vector<double>>(&e->value);
      if (!a) type_error(key, *e, "an array of numbers");
      return *a;
    }
    return std::nullopt;
  }

  void require(const std::string& key) const {
    if (!has(key)) config_error("[" + name_ + "] is missing required key '" + key + "'");
  }

 private:
  const Entry* find(const std::string& key) const {
    if (!table_) return nullptr;
    auto it = table_->find(key);
    return it == table_->end() ? nullptr : &it->second;
  }

  [[noreturn]] void type_error(const std::string& key, const Entry& e, const char* expected) const {
    config_error("config line " + std::to_string(e.line) + ": [" + name_ + "] " + key +
                 " must be " + expected);
  }

  std::string name_;
  const std::map<std::string, Entry>* table_ = nullptr;
};

}  // namespace

SensorSpec SensorConfig::resolve(const GridSpec& grid) const {
  SensorSpec spec;
  spec.r_max = r_max;
  spec.xi = xi;
  spec.abs_error = abs_error;
  spec.r_cap = r_cap ? *r_cap : grid.diagonal();
  return spec;
}

const GridSpec& PipelineConfig::require_grid() const {
  if (!grid) config_error("this command needs a [grid] table in the config");
  return *grid;
}

void PipelineConfig::validate() const {
  auto check = [](bool ok, const char* what) {
    if (!ok) config_error(what);
  };
  check(fit.learning_rate > 0.0 && std::isfinite(fit.learning_rate), "[fit] learning_rate must be > 0");
  check(fit.tolerance > 0.0, "[fit] tolerance must be > 0");
  check(fit.beta > 0.0 && std::isfinite(fit.beta), "[fit] beta must be > 0");

  if (sensor.abs_error) {
    check(*sensor.abs_error > 0.0 && std::isfinite(*sensor.abs_error), "[sensor] abs_error must be > 0");
  } else {
    check(sensor.r_max > 0.0 && std::isfinite(sensor.r_max), "[sensor] r_max must be > 0");
    check(sensor.xi > 0.0 && sensor.xi < 1.0, "[sensor] xi must lie in (0, 1)");
  }
  if (sensor.r_cap) check(*sensor.r_cap > 0.0 && std::isfinite(*sensor.r_cap), "[sensor] r_cap must be > 0");

  if (grid) {
    check(grid->dx > 0.0 && grid->dy > 0.0, "[grid] dx and dy must be > 0");
    check(grid->nx >= 2 && grid->ny >= 2, "[grid] nx and ny must be >= 2");
    check(std::isfinite(grid->x0) && std::isfinite(grid->y0), "[grid] origin must be finite");
  }
  if (refine.enabled) {
    check(refine.factor >= 2, "[refine] factor must be >= 2");
    check(refine.bbox.x_lo <= refine.bbox.x_hi && refine.bbox.y_lo <= refine.bbox.y_hi,
          "[refine] bbox must be [x_lo, y_lo, x_hi, y_hi] with lo <= hi");
  }
  check(anomaly.k > 0.0, "[anomaly] k must be > 0");
  check(anomaly.lo < anomaly.hi, "[anomaly] lo must be < hi");
  if (projection.kind == ProjectionKind::Equirect) {
    check(std::abs(projection.ref_lat_deg) < 90.0, "[projection] ref_lat must lie in (-90, 90)");
  }
}

PipelineConfig parse_config(std::istream& in) {
  const Document doc = toml_lite::parse(in);
  static const std::set<std::string> tables{"", "sensor", "fit", "grid", "refine", "anomaly", "tour", "projection"};
  for (const auto& [name, entries] : doc) {
    if (!tables.count(name)) config_error("unknown config table [" + name + "]");
  }
  if (!doc.at("").empty()) {
    config_error("config line " + std::to_string(doc.at("").begin()->second.line) +
                 ": keys must live inside a table");
  }

  PipelineConfig cfg;

  TableReader sensor(doc, "sensor", {"r_max", "xi", "abs_error", "r_cap"});
  sensor.number("r_max", cfg.sensor.r_max);
  sensor.number("xi", cfg.sensor.xi);
  sensor.number("abs_error", cfg.sensor.abs_error);
  sensor.number("r_cap", cfg.sensor.r_cap);

  TableReader fit(doc, "fit", {"method", "learning_rate", "max_iterations", "tolerance", "beta"});
  if (auto m = fit.string("method")) {
    if (*m == "gradient_descent") {
      cfg.fit.method = FitMethod::GradientDescent;
    } else if (*m == "normal_equations") {
      cfg.fit.method = FitMethod::NormalEquations;
    } else {
      config_error("[fit] method must be \"gradient_descent\" or \"normal_equations\"");
    }
  }
  fit.number("learning_rate", cfg.fit.learning_rate);
  fit.count("max_iterations", cfg.fit.max_iterations);
  fit.number("tolerance", cfg.fit.tolerance);
  fit.number("beta", cfg.fit.beta);

  TableReader grid(doc, "grid", {"x0", "y0", "dx", "dy", "nx", "ny"});
  if (grid.present()) {
    GridSpec g;
    for (const char* key : {"x0", "y0", "dx", "dy", "nx", "ny"}) grid.require(key);
    grid.number("x0", g.x0);
    grid.number("y0", g.y0);
    grid.number("dx", g.dx);
    grid.number("dy", g.dy);
    grid.count("nx", g.nx);
    grid.count("ny", g.ny);
    cfg.grid = g;
  }

  TableReader refine(doc, "refine", {"enabled", "bbox", "factor"});
  refine.boolean("enabled", cfg.refine.enabled);
  refine.integer("factor", cfg.refine.factor);
  if (auto box = refine.array("bbox")) {
    if (box->size() != 4) config_error("[refine] bbox must have 4 numbers");
    cfg.refine.bbox = {(*box)[0], (*box)[1], (*box)[2], (*box)[3]};
  } else if (cfg.refine.enabled) {
    config_error("[refine] enabled requires a bbox");
  }

  TableReader anomaly(doc, "anomaly", {"k", "lo", "hi"});
  anomaly.number("k", cfg.anomaly.k);
  anomaly.number("lo", cfg.anomaly.lo);
  anomaly.number("hi", cfg.anomaly.hi);

  TableReader tour(doc, "tour", {"start_index"});
  tour.count("start_index", cfg.tour.start_index);

  TableReader projection(doc, "projection", {"kind", "ref_lat"});
  if (auto kind = projection.string("kind")) {
    if (*kind == "none") {
      cfg.projection.kind = ProjectionKind::None;
    } else if (*kind == "equirect") {
      cfg.projection.kind = ProjectionKind::Equirect;
    } else {
      config_error("[projection] kind must be \"none\" or \"equirect\"");
    }
  }
  projection.number("ref_lat", cfg.projection.ref_lat_deg);

  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, "cannot open config file " + path.string());
  return parse_config(in);
}

}  // namespace coverfield
