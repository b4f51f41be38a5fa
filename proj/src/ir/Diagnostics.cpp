//===-- Diagnostics.cpp ---------------------------------------------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "qcc/ir/Diagnostics.hpp"

#include <sstream>

namespace qcc {

std::string Location::str() const {
  if (isSynthetic())
    return "<unknown>";
  std::ostringstream os;
  os << (file.empty() ? "<input>" : file) << ':' << line << ':' << column;
  return os.str();
}

static const char* severityName(Severity s) {
  switch (s) {
  case Severity::Error:
    return "error";
  case Severity::Warning:
    return "warning";
  case Severity::Note:
    return "note";
  }
  return "error";
}

static const char* severityColor(Severity s) {
  switch (s) {
  case Severity::Error:
    return "\033[31m";
  case Severity::Warning:
    return "\033[33m";
  case Severity::Note:
    return "\033[36m";
  }
  return "";
}

std::string Diagnostic::str() const {
  std::ostringstream os;
  os << location.str() << ": " << severityName(severity) << ": " << message;
  return os.str();
}

void DiagnosticList::print(std::ostream& os, bool color) const {
  for (const auto& d : diags_) {
    if (color) {
      os << d.location.str() << ": " << severityColor(d.severity)
         << severityName(d.severity) << "\033[0m: " << d.message << '\n';
    } else {
      os << d.str() << '\n';
    }
  }
}

std::string DiagnosticList::str() const {
  std::ostringstream os;
  print(os);
  return os.str();
}

} // namespace qcc
