//===-- Types.hpp - IR type descriptors -------------------------*- C++ -*-===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include <cstdint>
#include <string>

namespace qcc {

/// The closed set of value types. QubitRef (!qc.qubit) and QubitState
/// (!qco.qubit) are distinct universes and never implicitly convertible:
/// the former is a mutable hardware reference, the latter a linear SSA value.
enum class TypeKind : uint8_t {
  QubitRef,
  QubitState,
  QubitReg, // param = register size (>= 1)
  Bit,      // prints as i1
  Int,      // param = bit width
  F64,
  Index,
  None,
};

struct TypeDesc {
  TypeKind kind = TypeKind::None;
  uint32_t param = 0;

  constexpr TypeDesc() = default;
  constexpr TypeDesc(TypeKind k, uint32_t p = 0) : kind(k), param(p) {}

  static constexpr TypeDesc qubitRef() { return {TypeKind::QubitRef}; }
  static constexpr TypeDesc qubitState() { return {TypeKind::QubitState}; }
  static constexpr TypeDesc qubitReg(uint32_t size) {
    return {TypeKind::QubitReg, size};
  }
  static constexpr TypeDesc bit() { return {TypeKind::Bit}; }
  static constexpr TypeDesc integer(uint32_t width) {
    return {TypeKind::Int, width};
  }
  static constexpr TypeDesc f64() { return {TypeKind::F64}; }
  static constexpr TypeDesc index() { return {TypeKind::Index}; }
  static constexpr TypeDesc none() { return {TypeKind::None}; }

  [[nodiscard]] bool isQubitRef() const { return kind == TypeKind::QubitRef; }
  [[nodiscard]] bool isQubitState() const {
    return kind == TypeKind::QubitState;
  }
  [[nodiscard]] bool isAnyQubit() const {
    return isQubitRef() || isQubitState();
  }

  friend bool operator==(TypeDesc a, TypeDesc b) {
    return a.kind == b.kind && a.param == b.param;
  }
  friend bool operator!=(TypeDesc a, TypeDesc b) { return !(a == b); }

  /// Textual form: !qc.qubit, !qco.qubit, !qc.qreg<4>, i1, i32, f64, index.
  [[nodiscard]] std::string str() const;
};

} // namespace qcc
