//===-- Conversions.hpp - QC <-> QCO dialect conversion ---------*- C++ -*-===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Linearization builds the dataflow graph from reference semantics by
// tracking the latest state value of each qubit; bufferization reconstructs
// qubit references by collapsing each state chain back onto a single
// reference. bufferize(linearize(p)) is structurally identical to p up to
// value renaming (registers are exploded by linearize and stay exploded).
//
//===----------------------------------------------------------------------===//

#pragma once

#include "qcc/ir/Diagnostics.hpp"
#include "qcc/ir/Module.hpp"

#include <optional>

namespace qcc {

/// QC -> QCO. The input must pass verify(); the output passes the linearity
/// verifier. Registers are exploded into one qco.alloc per extracted slot.
std::optional<IrModule> linearize(const IrModule& m, DiagnosticList& diags);

/// QCO -> QC. Refuses non-linear input. Each alloc's wire chain collapses
/// onto one reference; qubit-state iter args of control flow are deleted.
std::optional<IrModule> bufferize(const IrModule& m, DiagnosticList& diags);

/// QC -> QC normalization: rewrites qc.alloc_reg + qc.extract into plain
/// qc.alloc per extracted slot (the normal form linearize produces and
/// bufferize emits). Used by the round-trip checks.
IrModule explodeRegisters(const IrModule& m);

} // namespace qcc
