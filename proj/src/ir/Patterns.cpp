//===-- Patterns.cpp ------------------------------------------------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "qcc/ir/Patterns.hpp"

#include <algorithm>

namespace qcc {

namespace {

bool sweepRegion(IrModule& m, RegionId region,
                 const std::vector<const RewritePattern*>& ordered) {
  bool changed = false;
  for (BlockId b : m.region(region).blocks) {
    // Snapshot: patterns may erase or insert ops while we iterate.
    auto ops = m.block(b).ops;
    for (OpId op : ops) {
      if (m.op(op).dead)
        continue;
      if (m.op(op).opcode == "qc.gate_def")
        continue;
      for (const RewritePattern* p : ordered) {
        if (!p->rootOpcode().empty() && p->rootOpcode() != m.op(op).opcode)
          continue;
        if (p->matchAndRewrite(m, op)) {
          changed = true;
          break;
        }
      }
      if (m.op(op).dead)
        continue;
      auto regions = m.op(op).regions; // copy: rewrites may grow the table
      for (RegionId r : regions)
        changed |= sweepRegion(m, r, ordered);
    }
  }
  return changed;
}

} // namespace

GreedyResult
applyPatternsGreedy(IrModule& m, RegionId region,
                    const std::vector<const RewritePattern*>& patterns,
                    int maxIterations) {
  if (maxIterations < 1)
    throw IrError("applyPatternsGreedy: maxIterations must be >= 1");

  // Stable sort keeps registration order among equal benefits.
  std::vector<const RewritePattern*> ordered = patterns;
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const RewritePattern* a, const RewritePattern* b) {
                     return a->benefit() > b->benefit();
                   });

  GreedyResult result;
  for (int i = 0; i < maxIterations; ++i) {
    if (!sweepRegion(m, region, ordered))
      return result;
    result.changed = true;
  }
  // Every allowed sweep changed something; conservatively warn.
  result.reachedFixpoint = false;
  return result;
}

GreedyResult
applyPatternsGreedy(IrModule& m,
                    const std::vector<const RewritePattern*>& patterns,
                    int maxIterations) {
  return applyPatternsGreedy(m, m.entryRegion(), patterns, maxIterations);
}

} // namespace qcc
