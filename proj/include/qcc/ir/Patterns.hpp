//===-- Patterns.hpp - Greedy fixpoint pattern rewriting --------*- C++ -*-===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include "qcc/ir/Module.hpp"

#include <memory>
#include <string>
#include <vector>

namespace qcc {

/// A local rewrite rule anchored on one opcode. A pattern either reports
/// "no match" and leaves the IR untouched, or performs its rewrite and
/// reports "changed". Higher benefit applies first; ties resolve in
/// registration order.
class RewritePattern {
public:
  RewritePattern(std::string rootOpcode, int benefit = 1)
      : root_(std::move(rootOpcode)), benefit_(benefit) {}
  virtual ~RewritePattern() = default;

  /// Root opcode this pattern anchors on; empty matches any op.
  [[nodiscard]] const std::string& rootOpcode() const { return root_; }
  [[nodiscard]] int benefit() const { return benefit_; }

  virtual bool matchAndRewrite(IrModule& m, OpId op) const = 0;

private:
  std::string root_;
  int benefit_;
};

struct GreedyResult {
  bool changed = false;
  /// False when max_iterations sweeps still produced changes (warning-level
  /// condition; the IR stays valid).
  bool reachedFixpoint = true;
};

inline constexpr int kDefaultMaxPatternIterations = 10;

/// Walks the region outermost-first (ops in block order, then their nested
/// regions), applying the highest-benefit matching pattern at each op.
/// Sweeps repeat until one changes nothing or maxIterations is reached.
/// Gate-definition bodies are skipped: they are templates, not code.
GreedyResult
applyPatternsGreedy(IrModule& m, RegionId region,
                    const std::vector<const RewritePattern*>& patterns,
                    int maxIterations = kDefaultMaxPatternIterations);

GreedyResult
applyPatternsGreedy(IrModule& m,
                    const std::vector<const RewritePattern*>& patterns,
                    int maxIterations = kDefaultMaxPatternIterations);

} // namespace qcc
