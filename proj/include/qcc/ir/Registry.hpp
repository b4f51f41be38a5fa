//===-- Registry.hpp - Opcode registry for all dialects ---------*- C++ -*-===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Dialects are compiled in: qc (imperative, reference semantics), qco
// (functional, value semantics) and the dialect-neutral cf opcodes
// (structured control flow plus scalar constants). Each opcode carries
// enough signature information for builder-side checking, result type
// inference and verification.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "qcc/ir/Types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qcc {

enum class Dialect : uint8_t { QC, QCO, CF };

enum class OpKind : uint8_t {
  Alloc,
  AllocReg,
  Extract,
  Dealloc,
  Gate,
  Measure,
  Reset,
  Ctrl,
  Inv,
  Pow,
  GateDef,
  CallGate,
  If,
  For,
  While,
  Yield,
  Const,
};

enum class GateKind : uint8_t {
  I,
  H,
  X,
  Y,
  Z,
  S,
  Sdg,
  T,
  Tdg,
  SX,
  SXdg,
  Swap,
  RX,
  RY,
  RZ,
  P,
  U,
  Custom,
  None,
};

struct OpcodeInfo {
  std::string name;
  Dialect dialect = Dialect::CF;
  OpKind kind = OpKind::Gate;
  GateKind gate = GateKind::None;
  uint8_t targets = 0; // qubit arity of standard gates
  uint8_t angles = 0;  // angle parameter count of standard gates
  uint8_t regions = 0;

  [[nodiscard]] bool isStandardGate() const { return kind == OpKind::Gate; }
  [[nodiscard]] bool isModifier() const {
    return kind == OpKind::Ctrl || kind == OpKind::Inv || kind == OpKind::Pow;
  }
  /// Standard gate, modifier or gate call: has a unitary descriptor.
  [[nodiscard]] bool isUnitary() const {
    return isStandardGate() || isModifier() || kind == OpKind::CallGate;
  }
  [[nodiscard]] bool isControlFlow() const {
    return kind == OpKind::If || kind == OpKind::For || kind == OpKind::While;
  }
};

/// Returns the opcode info, or null if the name is not registered.
const OpcodeInfo* lookupOpcode(const std::string& name);

/// Like lookupOpcode but throws IrError("unknown opcode ...").
const OpcodeInfo& getOpcode(const std::string& name);

/// All registered opcode names (deterministic order).
const std::vector<std::string>& allOpcodes();

/// Standard gate metadata keyed by GateKind.
struct GateInfo {
  GateKind kind;
  const char* name; // dialect-less ("h", "rz", ...)
  uint8_t targets;
  uint8_t angles;
  bool selfInverse;
};
const GateInfo& gateInfo(GateKind kind);
std::optional<GateKind> gateKindByName(const std::string& name);

/// Attribute names of the angle parameters of a standard gate, in order
/// ("angle" for one-angle gates; "theta", "phi", "lambda" for u).
const std::vector<std::string>& angleAttrNames(GateKind kind);

/// Dialect-qualified opcode for a gate kind, e.g. ("qc", RZ) -> "qc.rz".
std::string gateOpcode(Dialect dialect, GateKind kind);

inline const char* dialectPrefix(Dialect d) {
  switch (d) {
  case Dialect::QC:
    return "qc";
  case Dialect::QCO:
    return "qco";
  case Dialect::CF:
    return "cf";
  }
  return "";
}

} // namespace qcc
