#pragma once

// Reader for the TOML subset used by pipeline configuration files:
// [table] headers, `key = value` pairs, comments, and values that are
// strings, booleans, integers, floats (including inf/nan) or single-line
// arrays of numbers. Dotted keys, inline tables and multi-line values are
// rejected.

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace coverfield::toml_lite {

using Value = std::variant<bool, std::int64_t, double, std::string, std::vector<double>>;

struct Entry {
  Value value;
  int line = 0;
};

/// table name ("" for top level) -> key -> entry
using Document = std::map<std::string, std::map<std::string, Entry>>;

/// Throws Error{ConfigError} naming the offending line.
Document parse(std::istream& in);

}  // namespace coverfield::toml_lite
