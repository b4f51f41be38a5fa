//===-- Attributes.cpp ----------------------------------------------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "qcc/ir/Attributes.hpp"

#include "qcc/ir/Types.hpp"

#include <cstdio>
#include <sstream>

namespace qcc {

std::string formatFloat(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  // Guarantee a float-looking token so the parser never reads it as an int.
  if (s.find_first_of(".eE") == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

std::string AttributeValue::str() const {
  if (isFloat())
    return formatFloat(asFloat());
  if (isInt())
    return std::to_string(asInt());
  if (isBool())
    return asBool() ? "true" : "false";
  if (isString()) {
    std::string out = "\"";
    for (char c : asString()) {
      if (c == '"' || c == '\\')
        out += '\\';
      out += c;
    }
    out += '"';
    return out;
  }
  std::ostringstream os;
  os << '[';
  bool first = true;
  for (const auto& e : asArray()) {
    if (!first)
      os << ", ";
    first = false;
    os << e.str();
  }
  os << ']';
  return os.str();
}

std::string TypeDesc::str() const {
  switch (kind) {
  case TypeKind::QubitRef:
    return "!qc.qubit";
  case TypeKind::QubitState:
    return "!qco.qubit";
  case TypeKind::QubitReg:
    return "!qc.qreg<" + std::to_string(param) + ">";
  case TypeKind::Bit:
    return "i1";
  case TypeKind::Int:
    return "i" + std::to_string(param);
  case TypeKind::F64:
    return "f64";
  case TypeKind::Index:
    return "index";
  case TypeKind::None:
    return "none";
  }
  return "none";
}

} // namespace qcc
