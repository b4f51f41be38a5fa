//===-- Optimizations.hpp - The optimization pass catalog --------*- C++ -*-===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include "qcc/ir/Diagnostics.hpp"
#include "qcc/ir/Module.hpp"
#include "qcc/ir/Patterns.hpp"

namespace qcc {

inline constexpr int kDefaultUnrollLimit = 64;

/// qc: erases alloc/dealloc pairs with no intervening computation, and
/// alloc_reg groups whose every extracted slot is unused or only
/// deallocated.
GreedyResult removeDeadAllocPass(IrModule& m);

/// qco: cancels gate pairs g1;g2 where g2 consumes exactly g1's results in
/// matching positions and their descriptors are mutually inverse (angles
/// within tolerance, modulo 2*pi). Runs to a fixpoint so chains collapse.
GreedyResult cancelInversesPass(IrModule& m);

/// qco: fuses consecutive same-kind rotations (rx/ry/rz/p) with identical
/// modifier stacks into one op with the summed angle; sums that reduce to
/// 0 modulo 2*pi drop out entirely (global phase).
GreedyResult mergeRotationsPass(IrModule& m);

/// qc and qco: inv{inv{U}} -> U, inv{U} -> named inverse, pow(1) -> unwrap,
/// pow(0) -> erase, pow(-k) -> pow(k){inv}, zero-control ctrl -> body,
/// nested ctrl -> merged control list.
GreedyResult canonicalizeModifiersPass(IrModule& m);

/// Inlines constant-condition cf.if ops, unrolls constant-trip cf.for loops
/// up to `unrollLimit` (skipping larger ones with a warning), and erases
/// empty conditionals and loops.
GreedyResult simplifyControlFlowPass(IrModule& m, int unrollLimit,
                                     DiagnosticList& diags);

} // namespace qcc
