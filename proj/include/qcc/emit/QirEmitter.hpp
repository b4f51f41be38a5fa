//===-- QirEmitter.hpp - Flat QIR-style text emission ------------*- C++ -*-===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include "qcc/ir/Diagnostics.hpp"
#include "qcc/ir/Module.hpp"

#include <optional>
#include <string>

namespace qcc {

inline constexpr int kMaxQirQubits = 64;

/// Emits a straight-line qc module (no residual control flow; run
/// simplify-control-flow first) as a flat sequence of quantum instruction
/// calls in LLVM-like syntax, with qubits and results as integer-identified
/// handles. Line count = op count + fixed prologue/epilogue.
std::optional<std::string> emitQirFlat(const IrModule& m,
                                       DiagnosticList& diags);

} // namespace qcc
