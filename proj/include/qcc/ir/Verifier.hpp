//===-- Verifier.hpp - Module verification ----------------------*- C++ -*-===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include "qcc/ir/Diagnostics.hpp"
#include "qcc/ir/Module.hpp"

namespace qcc {

/// Verifies a module: operand/result arity and types against the registry,
/// use-def consistency, straight-line dominance, region containment and
/// terminators, plus the dialect hooks (qc structure checks, qco linearity).
/// Pure: never mutates the module, never aborts; problems come back as
/// diagnostics (empty list = valid).
DiagnosticList verify(const IrModule& m);

} // namespace qcc
