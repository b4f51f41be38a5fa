//===-- Diagnostics.hpp - Source locations and diagnostics ------*- C++ -*-===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcc {

/// A point in an input file. Synthetic locations (pass-created ops) have
/// line == 0 and an empty file name.
struct Location {
  std::string file;
  uint32_t line = 0;
  uint32_t column = 0;

  [[nodiscard]] bool isSynthetic() const { return line == 0; }
  [[nodiscard]] std::string str() const;
};

enum class Severity { Error, Warning, Note };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string message;
  Location location;

  [[nodiscard]] std::string str() const;
};

/// An ordered list of diagnostics. Verification and the frontends report
/// problems here instead of aborting.
class DiagnosticList {
public:
  void error(std::string message, Location loc = {}) {
    diags_.push_back({Severity::Error, std::move(message), std::move(loc)});
  }
  void warning(std::string message, Location loc = {}) {
    diags_.push_back({Severity::Warning, std::move(message), std::move(loc)});
  }
  void note(std::string message, Location loc = {}) {
    diags_.push_back({Severity::Note, std::move(message), std::move(loc)});
  }

  [[nodiscard]] bool hasErrors() const {
    for (const auto& d : diags_)
      if (d.severity == Severity::Error)
        return true;
    return false;
  }
  [[nodiscard]] bool empty() const { return diags_.empty(); }
  [[nodiscard]] size_t size() const { return diags_.size(); }
  [[nodiscard]] const Diagnostic& operator[](size_t i) const {
    return diags_[i];
  }
  [[nodiscard]] auto begin() const { return diags_.begin(); }
  [[nodiscard]] auto end() const { return diags_.end(); }

  void append(const DiagnosticList& other) {
    diags_.insert(diags_.end(), other.diags_.begin(), other.diags_.end());
  }
  void clear() { diags_.clear(); }

  /// Renders every diagnostic as "file:line:col: severity: message".
  void print(std::ostream& os, bool color = false) const;
  [[nodiscard]] std::string str() const;

private:
  std::vector<Diagnostic> diags_;
};

/// Thrown on IR API misuse (unknown opcode, arity mismatch, erasing a value
/// that is still in use, ...). User input problems go through DiagnosticList
/// instead.
class IrError : public std::runtime_error {
public:
  explicit IrError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qcc
