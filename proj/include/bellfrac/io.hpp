#pragma once

#include <array>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "bellfrac/behavior.hpp"

namespace bellfrac {

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// A behavior plus optional metadata, as found in input documents.
struct BehaviorDocument {
  Behavior behavior;
  std::string label;
};

namespace detail {

inline Rational json_value_to_rational(const nlohmann::json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_number_float()) {
    // Round-trip through the shortest decimal text so "0.25" means 1/4,
    // not the nearest binary64.
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return parse_rational(os.str());
  }
  throw ParseError("entry is not a number or rational string");
}

inline Behavior validate_maybe_lenient(const std::array<Rational, 16>& raw,
                                       const std::optional<Rational>& tolerance) {
  if (tolerance) return Behavior::validate_approx(raw, *tolerance);
  return Behavior::validate(raw);
}

}  // namespace detail

/// JSON document: {"P": [[4 values] x 4 rows], "label": "..."} with rows in
/// context order xy = 00,01,10,11 and columns in outcome order ab =
/// 00,01,10,11. Values are numbers or "num/den" strings.
inline BehaviorDocument parse_behavior_json(
    const std::string& text, const std::optional<Rational>& tolerance = {}) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("P"))
    throw ParseError("document must be an object with a \"P\" grid");
  const auto& grid = doc["P"];
  if (!grid.is_array() || grid.size() != 4)
    throw ParseError("\"P\" must be a 4x4 grid");

  std::array<Rational, 16> raw;
  for (std::size_t r = 0; r < 4; ++r) {
    if (!grid[r].is_array() || grid[r].size() != 4)
      throw ParseError("\"P\" row " + std::to_string(r) + " must have 4 entries");
    for (std::size_t c = 0; c < 4; ++c) {
      try {
        raw[4 * r + c] = detail::json_value_to_rational(grid[r][c]);
      } catch (const std::invalid_argument& e) {
        throw ParseError("P[" + std::to_string(r) + "][" + std::to_string(c) +
                         "]: " + e.what());
      }
    }
  }
  BehaviorDocument out{detail::validate_maybe_lenient(raw, tolerance), ""};
  if (doc.contains("label") && doc["label"].is_string())
    out.label = doc["label"].get<std::string>();
  return out;
}

inline std::string behavior_to_json(const Behavior& B, const std::string& label = "") {
  nlohmann::json grid = nlohmann::json::array();
  for (std::size_t r = 0; r < 4; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t c = 0; c < 4; ++c) row.push_back(B[4 * r + c].str());
    grid.push_back(std::move(row));
  }
  nlohmann::json doc;
  doc["P"] = std::move(grid);
  if (!label.empty()) doc["label"] = label;
  return doc.dump(2);
}

/// CSV line: 16 comma-separated values in flat order.
inline Behavior parse_behavior_csv_line(const std::string& line,
                                        const std::optional<Rational>& tolerance = {}) {
  std::array<Rational, 16> raw;
  std::istringstream ls(line);
  std::string field;
  for (std::size_t i = 0; i < 16; ++i) {
    if (!std::getline(ls, field, ','))
      throw ParseError("CSV line has fewer than 16 fields");
    // trim surrounding whitespace
    auto b = field.find_first_not_of(" \t\r");
    auto e = field.find_last_not_of(" \t\r");
    if (b == std::string::npos) throw ParseError("empty CSV field");
    try {
      raw[i] = parse_rational(std::string_view(field).substr(b, e - b + 1));
    } catch (const std::invalid_argument& ex) {
      throw ParseError(std::string("CSV field ") + std::to_string(i) + ": " + ex.what());
    }
  }
  if (std::getline(ls, field, ','))
    throw ParseError("CSV line has more than 16 fields");
  return detail::validate_maybe_lenient(raw, tolerance);
}

inline std::string behavior_to_csv(const Behavior& B) {
  std::ostringstream os;
  for (std::size_t i = 0; i < 16; ++i) {
    if (i) os << ',';
    os << B[i].str();
  }
  return os.str();
}

/// Loads one behavior from a file, dispatching on the .json/.csv suffix.
inline BehaviorDocument load_behavior_file(
    const std::string& path, const std::optional<Rational>& tolerance = {}) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open: " + path);
  std::stringstream buf;
  buf << is.rdbuf();
  std::string text = buf.str();
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
    std::istringstream ls(text);
    std::string line;
    while (std::getline(ls, line) && line.find_first_not_of(" \t\r") == std::string::npos) {}
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      throw ParseError("empty CSV file: " + path);
    return {parse_behavior_csv_line(line, tolerance), ""};
  }
  return parse_behavior_json(text, tolerance);
}

}  // namespace bellfrac
