// Copyright 2026 The molgate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <initializer_list>
#include <string>
#include <string_view>

#include <json.hpp>

#include "molgate/errors.hpp"

namespace molgate::detail {

using nlohmann::json;

inline json parse_json(const std::string& text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string(what) + ": malformed JSON: " + e.what());
  }
}

inline void require_object(const json& j, std::string_view where) {
  if (!j.is_object()) throw ValidationError(std::string(where) + " must be a JSON object");
}

/// Rejects any key of `j` that is not in `allowed`.
inline void reject_unknown(const json& j, std::initializer_list<std::string_view> allowed,
                           std::string_view where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (auto a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ValidationError("unknown field '" + it.key() + "' in " + std::string(where));
  }
}

inline const json& field(const json& j, const char* key, std::string_view where) {
  auto it = j.find(key);
  if (it == j.end())
    throw ValidationError("missing field '" + std::string(key) + "' in " + std::string(where));
  return *it;
}

inline double number(const json& j, const char* key, std::string_view where) {
  const json& v = field(j, key, where);
  if (!v.is_number())
    throw ValidationError("field '" + std::string(key) + "' in " + std::string(where) +
                          " must be a number");
  return v.get<double>();
}

inline double number_or(const json& j, const char* key, double fallback, std::string_view where) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

inline long integer(const json& j, const char* key, std::string_view where) {
  const json& v = field(j, key, where);
  if (!v.is_number_integer())
    throw ValidationError("field '" + std::string(key) + "' in " + std::string(where) +
                          " must be an integer");
  return v.get<long>();
}

inline std::string string(const json& j, const char* key, std::string_view where) {
  const json& v = field(j, key, where);
  if (!v.is_string())
    throw ValidationError("field '" + std::string(key) + "' in " + std::string(where) +
                          " must be a string");
  return v.get<std::string>();
}

}  // namespace molgate::detail
