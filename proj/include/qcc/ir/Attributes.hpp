//===-- Attributes.hpp - Immutable op attributes ----------------*- C++ -*-===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace qcc {

/// A constant attached to an operation under a name. Attributes are
/// immutable once attached; rewrites replace the whole value.
class AttributeValue {
public:
  using Array = std::vector<AttributeValue>;

  AttributeValue() : value_(int64_t{0}) {}
  AttributeValue(double v) : value_(v) {}
  AttributeValue(int64_t v) : value_(v) {}
  AttributeValue(int v) : value_(int64_t{v}) {}
  AttributeValue(bool v) : value_(v) {}
  AttributeValue(std::string v) : value_(std::move(v)) {}
  AttributeValue(const char* v) : value_(std::string(v)) {}
  AttributeValue(Array v) : value_(std::move(v)) {}

  [[nodiscard]] bool isFloat() const {
    return std::holds_alternative<double>(value_);
  }
  [[nodiscard]] bool isInt() const {
    return std::holds_alternative<int64_t>(value_);
  }
  [[nodiscard]] bool isBool() const {
    return std::holds_alternative<bool>(value_);
  }
  [[nodiscard]] bool isString() const {
    return std::holds_alternative<std::string>(value_);
  }
  [[nodiscard]] bool isArray() const {
    return std::holds_alternative<Array>(value_);
  }

  [[nodiscard]] double asFloat() const { return std::get<double>(value_); }
  [[nodiscard]] int64_t asInt() const { return std::get<int64_t>(value_); }
  [[nodiscard]] bool asBool() const { return std::get<bool>(value_); }
  [[nodiscard]] const std::string& asString() const {
    return std::get<std::string>(value_);
  }
  [[nodiscard]] const Array& asArray() const { return std::get<Array>(value_); }

  friend bool operator==(const AttributeValue& a, const AttributeValue& b) {
    return a.value_ == b.value_;
  }
  friend bool operator!=(const AttributeValue& a, const AttributeValue& b) {
    return !(a == b);
  }

  /// Textual form used by the IR printer; floats always carry a '.' or
  /// exponent so the parser can tell them from integers.
  [[nodiscard]] std::string str() const;

private:
  std::variant<double, int64_t, bool, std::string, Array> value_;
};

/// std::map keeps attribute printing order deterministic.
using AttrMap = std::map<std::string, AttributeValue>;

/// Full-precision float formatting that round-trips through strtod.
std::string formatFloat(double v);

} // namespace qcc
