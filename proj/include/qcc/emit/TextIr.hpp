//===-- TextIr.hpp - Textual IR printer and parser ---------------*- C++ -*-===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// The .qcir text format is the only serialization of IR state. The grammar
// is frozen in docs/grammar.md; parse_ir(print_ir(m)) is structurally
// identical to m, and printing is deterministic (stable value names).
//
//===----------------------------------------------------------------------===//

#pragma once

#include "qcc/ir/Diagnostics.hpp"
#include "qcc/ir/Module.hpp"

#include <optional>
#include <string>

namespace qcc {

/// Prints a module in the textual IR grammar. One op per line; nested
/// regions indent by two spaces; single-op argument-less regions render
/// inline on the parent's line.
std::string printIr(const IrModule& m);

/// Parses textual IR. On failure returns std::nullopt with line/column
/// diagnostics. The result is not verified; run verify() for semantic
/// checks.
std::optional<IrModule> parseIr(const std::string& text,
                                DiagnosticList& diags,
                                const std::string& fileName = "<qcir>");

} // namespace qcc
