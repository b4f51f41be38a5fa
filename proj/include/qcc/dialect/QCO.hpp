//===-- QCO.hpp - Functional value-semantics dialect -------------*- C++ -*-===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// In the qco dialect every operation consumes qubit-state values and
// produces fresh ones, so the circuit's DAG is the use-def graph itself.
// Qubit states are linear: consumed exactly once, with region terminators
// counting as the single permitted escape.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "qcc/ir/Diagnostics.hpp"
#include "qcc/ir/Module.hpp"

#include <vector>

namespace qcc {

/// Checks the linearity discipline: every qubit-state value has exactly one
/// use ("state reused" / "leaked state" otherwise; values reaching the end
/// of the top-level region are the program's results and may be unused),
/// and every cf region threads its qubit-state block arguments through to
/// its yield.
void qcoLinearityVerify(const IrModule& m, DiagnosticList& diags);

struct DefiningChain {
  /// Gate sequence on the wire, from the originating qco.alloc (or the
  /// block argument where the walk stopped) to the op defining the queried
  /// value.
  std::vector<OpId> ops;
  /// True when the chain stopped at a region block argument instead of an
  /// alloc.
  bool crossesRegionBoundary = false;
};

/// Walks def -> operand backwards from a qubit-state value to its origin.
DefiningChain definingChain(const IrModule& m, ValueId state);

} // namespace qcc
