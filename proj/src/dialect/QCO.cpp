//===-- QCO.cpp -----------------------------------------------------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "qcc/dialect/QCO.hpp"

#include "qcc/ir/Registry.hpp"

#include <algorithm>
#include <string>

namespace qcc {

namespace {

bool inTopLevelBlock(const IrModule& m, ValueId v) {
  const ValueInfo& info = m.value(v);
  BlockId b = info.isBlockArg() ? info.defBlock : m.op(info.defOp).parent;
  return b == m.entryBlock();
}

std::string valueName(const IrModule& m, ValueId v) {
  const ValueInfo& info = m.value(v);
  if (!info.name.empty())
    return "%" + info.name;
  return info.isBlockArg() ? "<block argument>"
                           : "result of '" + m.op(info.defOp).opcode + "'";
}

Location valueLoc(const IrModule& m, ValueId v) {
  const ValueInfo& info = m.value(v);
  return info.isBlockArg() ? Location{} : m.op(info.defOp).loc;
}

size_t countStates(const IrModule& m, const std::vector<ValueId>& vals) {
  return size_t(std::count_if(vals.begin(), vals.end(), [&](ValueId v) {
    return m.typeOf(v).isQubitState();
  }));
}

} // namespace

void qcoLinearityVerify(const IrModule& m, DiagnosticList& diags) {
  for (uint32_t i = 0; i < m.valueTableSize(); ++i) {
    ValueId v{i};
    const ValueInfo& info = m.value(v);
    if (info.dead || !info.type.isQubitState())
      continue;
    if (info.uses.size() == 1)
      continue;
    if (info.uses.empty()) {
      // States alive at the end of the top-level region are the program's
      // final wires; anywhere else an unconsumed state is a lost qubit.
      if (!inTopLevelBlock(m, v))
        diags.error("leaked qubit state " + valueName(m, v) +
                        ": never consumed and not a region result",
                    valueLoc(m, v));
      continue;
    }
    std::string users;
    for (const Use& u : info.uses) {
      if (!users.empty())
        users += ", ";
      users += "'" + m.op(u.user).opcode + "'";
    }
    diags.error("qubit state " + valueName(m, v) + " reused: consumed by " +
                    users,
                valueLoc(m, v));
  }

  // Region threading: every qubit-state block argument of a cf region must
  // come back out through the yield.
  m.walk([&](OpId opId) {
    const OperationNode& node = m.op(opId);
    const OpcodeInfo* info = lookupOpcode(node.opcode);
    if (!info || !info->isControlFlow())
      return true;
    for (RegionId r : node.regions) {
      BlockId b = m.region(r).front();
      const auto& ops = m.block(b).ops;
      if (ops.empty() || m.op(ops.back()).opcode != "cf.yield")
        continue; // structural verifier reports the missing terminator
      size_t argStates = countStates(m, m.block(b).args);
      size_t yieldStates = countStates(m, m.op(ops.back()).operands);
      if (argStates > yieldStates)
        diags.error("control-flow region consumes " +
                        std::to_string(argStates) +
                        " qubit state(s) but only yields " +
                        std::to_string(yieldStates),
                    node.loc);
    }
    return true;
  });
}

DefiningChain definingChain(const IrModule& m, ValueId state) {
  DefiningChain chain;
  ValueId cur = state;
  while (true) {
    const ValueInfo& info = m.value(cur);
    if (info.isBlockArg()) {
      chain.crossesRegionBoundary = true;
      break;
    }
    OpId def = info.defOp;
    chain.ops.push_back(def);
    const OpcodeInfo& opInfo = getOpcode(m.op(def).opcode);
    if (opInfo.kind == OpKind::Alloc)
      break;
    // Results and qubit-state operands correspond positionally for gates,
    // modifiers, measure and reset; control flow results map to the yield
    // operand in the same position.
    const OperationNode& node = m.op(def);
    if (opInfo.isControlFlow()) {
      // Follow into the first region's yield (if/while pick region 0).
      BlockId b = m.region(node.regions[0]).front();
      OpId yield = m.block(b).ops.back();
      size_t pos = 0;
      for (; pos < node.results.size(); ++pos)
        if (node.results[pos] == cur)
          break;
      // for/while results line up with iter args; treat the region edge as
      // a boundary rather than tracing loop-carried values.
      (void)yield;
      chain.crossesRegionBoundary = true;
      break;
    }
    size_t resultPos = 0;
    for (; resultPos < node.results.size(); ++resultPos)
      if (node.results[resultPos] == cur)
        break;
    size_t statePos = 0;
    ValueId next{};
    for (ValueId operand : node.operands) {
      if (!m.typeOf(operand).isQubitState())
        continue;
      if (statePos == resultPos) {
        next = operand;
        break;
      }
      ++statePos;
    }
    if (!next.valid())
      break;
    cur = next;
  }
  std::reverse(chain.ops.begin(), chain.ops.end());
  return chain;
}

} // namespace qcc
