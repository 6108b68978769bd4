#include "coverfield/toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <string_view>

#include "coverfield/error.hpp"

namespace coverfield::toml_lite {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw Error(Errc::ConfigError, "config line " + std::to_string(line) + ": " + what);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Drops a trailing comment, ignoring '#' inside a basic string.
std::string_view strip_comment(std::string_view s) {
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_string = !in_string;
    if (s[i] == '#' && !in_string) return s.substr(0, i);
  }
  return s;
}

bool is_bare_key(std::string_view key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
  }
  return true;
}

bool parse_number(std::string_view text, int line, Value& out) {
  std::string cleaned;
  for (char c : text) {
    if (c != '_') cleaned.push_back(c);
  }
  std::string_view s = cleaned;
  std::string_view body = s;
  bool negative = false;
  if (!body.empty() && (body.front() == '+' || body.front() == '-')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  if (body == "inf") {
    out = negative ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    return true;
  }
  if (body == "nan") {
    out = std::numeric_limits<double>::quiet_NaN();
    return true;
  }
  if (body.empty()) return false;
  const bool looks_float = body.find_first_of(".eE") != std::string_view::npos;
  // from_chars rejects a leading '+'.
  std::string_view digits = s.front() == '+' ? s.substr(1) : s;
  if (looks_float) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) return false;
    out = v;
  } else {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec == std::errc::result_out_of_range) fail(line, "integer out of range");
    if (ec != std::errc() || ptr != digits.data() + digits.size()) return false;
    out = v;
  }
  return true;
}

std::string parse_string(std::string_view text, int line) {
  // text includes the surrounding quotes
  std::string out;
  for (std::size_t i = 1; i + 1 < text.size(); ++i) {
    char c = text[i];
    if (c == '\\') {
      if (i + 2 >= text.size()) fail(line, "dangling escape in string");
      char e = text[++i];
      switch (e) {
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        default: fail(line, std::string("unsupported escape \\") + e);
      }
    } else if (c == '"') {
      fail(line, "unexpected quote inside string");
    } else {
      out.push_back(c);
    }
  }
  return out;
}

Value parse_value(std::string_view text, int line) {
  text = trim(text);
  if (text.empty()) fail(line, "missing value");
  if (text.front() == '"') {
    if (text.size() < 2 || text.back() != '"') fail(line, "unterminated string");
    return parse_string(text, line);
  }
  if (text == "true") return true;
  if (text == "false") return false;
  if (text.front() == '[') {
    if (text.back() != ']') fail(line, "arrays must close on the same line");
    std::vector<double> items;
    std::string_view inner = trim(text.substr(1, text.size() - 2));
    while (!inner.empty()) {
      const auto comma = inner.find(',');
      const std::string_view item = trim(inner.substr(0, comma));
      if (item.empty()) {
        if (comma == std::string_view::npos) break;  // trailing comma
        fail(line, "empty array element");
      }
      Value v;
      if (!parse_number(item, line, v)) fail(line, "array elements must be numbers");
      items.push_back(std::holds_alternative<double>(v) ? std::get<double>(v)
                                                        : static_cast<double>(std::get<std::int64_t>(v)));
      if (comma == std::string_view::npos) break;
      inner = trim(inner.substr(comma + 1));
    }
    return items;
  }
  Value v;
  if (!parse_number(text, line, v)) fail(line, "cannot parse value '" + std::string(text) + "'");
  return v;
}

}  // namespace

Document parse(std::istream& in) {
  Document doc;
  doc[""];
  std::string current;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(strip_comment(raw));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']' || text.size() < 3) fail(line, "malformed table header");
      const std::string_view name = trim(text.substr(1, text.size() - 2));
      if (!is_bare_key(name)) fail(line, "unsupported table name '" + std::string(name) + "'");
      current = std::string(name);
      if (doc.count(current) && !doc[current].empty()) fail(line, "duplicate table [" + current + "]");
      doc[current];
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) fail(line, "expected key = value");
    const std::string_view key = trim(text.substr(0, eq));
    if (!is_bare_key(key)) fail(line, "unsupported key '" + std::string(key) + "'");
    auto& table = doc[current];
    if (table.count(std::string(key))) fail(line, "duplicate key '" + std::string(key) + "'");
    table[std::string(key)] = Entry{parse_value(text.substr(eq + 1), line), line};
  }
  return doc;
}

}  // namespace coverfield::toml_lite
