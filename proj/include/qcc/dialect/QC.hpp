//===-- QC.hpp - Imperative reference-semantics dialect ---------*- C++ -*-===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// The qc dialect mirrors how established languages treat qubits: mutable
// resources modified in place, with data flow implicit in program order.
// This header holds the dialect-specific verification hooks and the shared
// helpers for navigating modifier regions and gate definitions.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "qcc/ir/Diagnostics.hpp"
#include "qcc/ir/Module.hpp"
#include "qcc/ir/Registry.hpp"

namespace qcc {

/// The single wrapped operation inside a ctrl/inv/pow body region. For qco
/// modifiers the trailing cf.yield is skipped. Throws IrError on malformed
/// bodies (the verifier reports these as diagnostics instead).
OpId modifierBodyOp(const IrModule& m, OpId modifier);

[[nodiscard]] bool isUnitaryOp(const IrModule& m, OpId op);

/// Number of controls of a ctrl op (= polarity attribute length).
int controlCountOf(const IrModule& m, OpId ctrlOp);

/// True if any executable op (gate-definition bodies excluded) belongs to
/// the given dialect.
bool hasDialectOps(const IrModule& m, Dialect d);

/// Dialect-specific structural checks for qc-dialect constructs and the
/// modifier/gate-definition machinery shared by both quantum dialects:
/// extract indices in range, single-unitary modifier bodies, dealloc
/// operands rooted in alloc/extract, gate bodies confined to their declared
/// parameters, resolvable and non-recursive gate calls.
void qcVerifyHooks(const IrModule& m, DiagnosticList& diags);

} // namespace qcc
