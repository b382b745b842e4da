#pragma once

#include <initializer_list>
#include <string>
#include <string_view>

#include <fmt/core.h>

#include "json.hpp"
#include "keysim/error.hpp"

namespace keysim::detail {

inline nlohmann::json parse_json(std::string_view text, std::string_view what) {
  try {
    return nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(fmt::format("{}: invalid JSON: {}", what, e.what()));
  }
}

inline void reject_unknown(const nlohmann::json& obj, std::initializer_list<std::string_view> known,
                           std::string_view where) {
  for (const auto& [field, value] : obj.items()) {
    bool ok = false;
    for (std::string_view k : known) ok = ok || field == k;
    if (!ok) throw FormatError(fmt::format("{}: unknown field '{}'", where, field));
  }
}

inline const nlohmann::json& require(const nlohmann::json& obj, std::string_view field,
                                     std::string_view where) {
  auto it = obj.find(field);
  if (it == obj.end()) throw FormatError(fmt::format("{}: missing field '{}'", where, field));
  return *it;
}

inline double require_number(const nlohmann::json& obj, std::string_view field,
                             std::string_view where) {
  const auto& v = require(obj, field, where);
  if (!v.is_number()) throw FormatError(fmt::format("{}: field '{}' must be a number", where, field));
  return v.get<double>();
}

inline std::string require_string(const nlohmann::json& obj, std::string_view field,
                                  std::string_view where) {
  const auto& v = require(obj, field, where);
  if (!v.is_string()) throw FormatError(fmt::format("{}: field '{}' must be a string", where, field));
  return v.get<std::string>();
}

}  // namespace keysim::detail
