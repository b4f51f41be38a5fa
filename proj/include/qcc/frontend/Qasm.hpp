//===-- Qasm.hpp - OpenQASM 3 subset frontend -------------------*- C++ -*-===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Hand-written recursive-descent parser for the OpenQASM 3 subset and its
// lowering into qc-dialect IR. The supported surface: qubit/bit
// declarations, the stdgates set with ctrl/negctrl/inv/pow modifiers,
// measure/reset, if/else on bits, integer-range for loops, while loops, and
// non-recursive gate definitions. Angle expressions fold to constants at
// parse time; gate parameters may be referenced bare (no arithmetic).
//
//===----------------------------------------------------------------------===//

#pragma once

#include "qcc/ir/Diagnostics.hpp"
#include "qcc/ir/Module.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace qcc::qasm {

/// Qubit or bit operand: `q`, `q[2]`. index < 0 means the whole register
/// (or a scalar declaration).
struct Operand {
  std::string name;
  int64_t index = -1;
  Location loc;
};

/// A folded angle: either a constant or a bare gate-parameter reference.
struct Angle {
  double value = 0.0;
  int paramIndex = -1;
  [[nodiscard]] bool isParam() const { return paramIndex >= 0; }
};

struct Modifier {
  enum class Kind { Ctrl, NegCtrl, Inv, Pow };
  Kind kind = Kind::Ctrl;
  int64_t exponent = 1; // Pow only
};

/// Loop bound: an integer literal/constant expression or a loop variable.
struct ForBound {
  int64_t value = 0;
  std::string var;
  [[nodiscard]] bool isVar() const { return !var.empty(); }
};

struct Stmt;
using StmtList = std::vector<Stmt>;

struct DeclStmt {
  bool isQubit = true;
  std::string name;
  int64_t size = -1; // -1 = scalar
};

struct GateApp {
  std::vector<Modifier> modifiers;
  std::string gate;
  std::vector<Angle> angles;
  std::vector<Operand> qubits;
};

struct MeasureStmt {
  Operand qubit;
  Operand target;
};

struct ResetStmt {
  Operand qubit;
};

struct IfStmt {
  Operand cond;
  bool negated = false; // if (c == 0)
  StmtList thenBody;
  StmtList elseBody;
};

struct ForStmt {
  std::string var;
  ForBound lb, ub, step;
  StmtList body;
};

struct WhileStmt {
  Operand cond;
  bool negated = false;
  StmtList body;
};

struct GateDefStmt {
  std::string name;
  std::vector<std::string> params;
  std::vector<std::string> qubits;
  StmtList body;
};

struct Stmt {
  Location loc;
  std::variant<DeclStmt, GateApp, MeasureStmt, ResetStmt, IfStmt, ForStmt,
               WhileStmt, GateDefStmt>
      node;
};

struct Program {
  std::vector<Stmt> statements;
};

/// Parses source text. Diagnostics carry line/column; unsupported
/// constructs name the offending feature.
std::optional<Program> parseQasm(const std::string& source,
                                 DiagnosticList& diags,
                                 const std::string& fileName = "<qasm>");

/// Lowers a parsed program to qc-dialect IR. The result passes verify().
std::optional<IrModule> lowerToQc(const Program& program,
                                  DiagnosticList& diags);

/// parseQasm + lowerToQc.
std::optional<IrModule> frontend(const std::string& source,
                                 DiagnosticList& diags,
                                 const std::string& fileName = "<qasm>");

} // namespace qcc::qasm
