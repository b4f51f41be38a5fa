//===-- QasmEmitter.hpp - qc-dialect to OpenQASM 3 ---------------*- C++ -*-===//
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

/// Emits a qc-form module as OpenQASM 3. All qubit allocations re-group
/// into one `qubit[n] q;` register in allocation order and all measured
/// bits into one `bit[m] c;` register. The output reparses through the
/// frontend to a module structurally identical up to register grouping
/// (explodeRegisters normal form).
std::optional<std::string> emitQasm(const IrModule& m, DiagnosticList& diags);

} // namespace qcc
