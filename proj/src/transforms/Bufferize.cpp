//===-- Bufferize.cpp - QCO -> QC conversion ------------------------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Collapses each linear state chain onto one qubit reference. Because gate
// results are positionally identical to their operands, bufferization is a
// pure positional substitution; qubit-state iter args of control flow are
// deleted and their yields dropped.
//
//===----------------------------------------------------------------------===//

#include "qcc/dialect/QC.hpp"
#include "qcc/dialect/QCO.hpp"
#include "qcc/ir/Registry.hpp"
#include "qcc/ir/Verifier.hpp"
#include "qcc/transforms/Conversions.hpp"

#include <algorithm>

namespace qcc {

namespace {

std::string qcOpcodeFor(const std::string& qcoOpcode) {
  return "qc." + qcoOpcode.substr(4);
}

std::string stripStateSuffix(const std::string& name) {
  size_t pos = name.rfind('_');
  if (pos == std::string::npos || pos + 1 >= name.size())
    return name;
  for (size_t i = pos + 1; i < name.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(name[i])))
      return name;
  return name.substr(0, pos);
}

struct Bufferizer {
  const IrModule& src;
  DiagnosticList& diags;
  IrModule out;
  bool failed = false;

  std::map<uint32_t, ValueId> refOf;     // src state value -> out qubit ref
  std::map<uint32_t, ValueId> classical; // src classical value -> out value

  explicit Bufferizer(const IrModule& m, DiagnosticList& d)
      : src(m), diags(d) {}

  void fail(OpId op, const std::string& msg) {
    if (!failed)
      diags.error(msg, src.op(op).loc);
    failed = true;
  }

  ValueId refFor(OpId at, ValueId state) {
    auto it = refOf.find(state.idx);
    if (it == refOf.end()) {
      fail(at, "qubit state has no reconstructed reference");
      return ValueId{};
    }
    return it->second;
  }

  ValueId mapClassical(OpId at, ValueId v) {
    auto it = classical.find(v.idx);
    if (it == classical.end()) {
      fail(at, "classical value has no converted counterpart");
      return ValueId{};
    }
    return it->second;
  }

  /// Results of a qco op inherit the refs of the matching state operands.
  void propagateRefs(OpId srcOp) {
    const OperationNode& node = src.op(srcOp);
    size_t statePos = 0;
    std::vector<ValueId> operandStates;
    for (ValueId v : node.operands)
      if (src.typeOf(v).isQubitState())
        operandStates.push_back(v);
    for (ValueId r : node.results) {
      if (!src.typeOf(r).isQubitState())
        continue;
      refOf[r.idx] = refOf.at(operandStates[statePos].idx);
      ++statePos;
    }
  }

  void convertModifier(OpId srcOp, OpBuilder& b) {
    const OperationNode& node = src.op(srcOp);
    const OpcodeInfo& info = getOpcode(node.opcode);
    size_t controls =
        info.kind == OpKind::Ctrl ? node.attr("polarity")->asArray().size() : 0;

    std::vector<ValueId> controlRefs;
    for (size_t i = 0; i < controls; ++i)
      controlRefs.push_back(refFor(srcOp, node.operands[i]));
    if (failed)
      return;
    OpId newOp = b.create(qcOpcodeFor(node.opcode), controlRefs, node.attrs,
                          node.loc);

    // Body block args correspond to the target operands.
    BlockId srcBody = src.region(node.regions[0]).front();
    const auto& args = src.block(srcBody).args;
    for (size_t i = 0; i < args.size(); ++i)
      refOf[args[i].idx] = refFor(srcOp, node.operands[controls + i]);

    OpBuilder bodyBuilder(out, out.region(out.op(newOp).regions[0]).front());
    for (OpId inner : src.block(srcBody).ops) {
      if (src.op(inner).opcode == "cf.yield")
        break;
      convertOp(inner, bodyBuilder);
      if (failed)
        return;
    }
    propagateRefs(srcOp);
  }

  void convertControlFlow(OpId srcOp, OpBuilder& b) {
    const OperationNode& node = src.op(srcOp);
    std::vector<ValueId> operands;
    for (ValueId v : node.operands) {
      if (src.typeOf(v).isQubitState())
        continue;
      operands.push_back(mapClassical(srcOp, v));
    }
    if (failed)
      return;
    OpId newOp = b.create(node.opcode, operands, AttrMap{}, node.loc);

    for (size_t r = 0; r < node.regions.size(); ++r) {
      BlockId srcBlock = src.region(node.regions[r]).front();
      BlockId dstBlock = out.region(out.op(newOp).regions[r]).front();

      // Recreate classical args; bind state args to the refs of the
      // corresponding state operands.
      size_t stateIndex = 0;
      std::vector<ValueId> stateOperands;
      for (ValueId v : node.operands)
        if (src.typeOf(v).isQubitState())
          stateOperands.push_back(v);
      for (ValueId arg : src.block(srcBlock).args) {
        if (src.typeOf(arg).isQubitState()) {
          refOf[arg.idx] = refFor(srcOp, stateOperands[stateIndex]);
          ++stateIndex;
        } else {
          classical[arg.idx] = out.addBlockArg(dstBlock, src.typeOf(arg),
                                               src.value(arg).name);
        }
      }

      OpBuilder bodyBuilder(out, dstBlock);
      OpId srcYield;
      for (OpId inner : src.block(srcBlock).ops) {
        if (src.op(inner).opcode == "cf.yield") {
          srcYield = inner;
          break;
        }
        convertOp(inner, bodyBuilder);
        if (failed)
          return;
      }
      std::vector<ValueId> yieldOperands;
      if (srcYield.valid())
        for (ValueId v : src.op(srcYield).operands) {
          if (src.typeOf(v).isQubitState())
            continue;
          yieldOperands.push_back(mapClassical(srcYield, v));
        }
      if (failed)
        return;
      bodyBuilder.create("cf.yield", yieldOperands, AttrMap{},
                         srcYield.valid() ? src.op(srcYield).loc : node.loc);
    }

    // Classical results map positionally; state results inherit refs from
    // the state operands (region layouts are invariant).
    size_t stateIndex = 0;
    std::vector<ValueId> stateOperands;
    for (ValueId v : node.operands)
      if (src.typeOf(v).isQubitState())
        stateOperands.push_back(v);
    size_t newResultIndex = 0;
    for (ValueId r : node.results) {
      if (src.typeOf(r).isQubitState()) {
        refOf[r.idx] = refFor(srcOp, stateOperands[stateIndex]);
        ++stateIndex;
      } else {
        classical[r.idx] = out.op(newOp).results[newResultIndex];
        ++newResultIndex;
      }
    }
  }

  void convertOp(OpId srcOp, OpBuilder& b) {
    const OperationNode& node = src.op(srcOp);
    const OpcodeInfo& info = getOpcode(node.opcode);
    switch (info.kind) {
    case OpKind::GateDef: {
      copyGateDef(srcOp, b);
      return;
    }
    case OpKind::Alloc: {
      OpId newOp = b.create("qc.alloc", {}, AttrMap{}, node.loc);
      refOf[node.results[0].idx] = out.op(newOp).results[0];
      out.value(out.op(newOp).results[0]).name =
          stripStateSuffix(src.value(node.results[0]).name);
      return;
    }
    case OpKind::Dealloc: {
      ValueId ref = refFor(srcOp, node.operands[0]);
      if (failed)
        return;
      b.create("qc.dealloc", {ref}, AttrMap{}, node.loc);
      return;
    }
    case OpKind::Gate: {
      std::vector<ValueId> refs;
      for (ValueId v : node.operands)
        refs.push_back(refFor(srcOp, v));
      if (failed)
        return;
      b.create(qcOpcodeFor(node.opcode), refs, node.attrs, node.loc);
      propagateRefs(srcOp);
      return;
    }
    case OpKind::CallGate: {
      std::vector<ValueId> operands;
      for (ValueId v : node.operands) {
        if (src.typeOf(v).isQubitState())
          operands.push_back(refFor(srcOp, v));
        else
          operands.push_back(mapClassical(srcOp, v));
      }
      if (failed)
        return;
      b.create(qcOpcodeFor(node.opcode), operands, node.attrs, node.loc);
      propagateRefs(srcOp);
      return;
    }
    case OpKind::Ctrl:
    case OpKind::Inv:
    case OpKind::Pow:
      convertModifier(srcOp, b);
      return;
    case OpKind::Measure: {
      ValueId ref = refFor(srcOp, node.operands[0]);
      if (failed)
        return;
      OpId newOp = b.create("qc.measure", {ref}, AttrMap{}, node.loc);
      refOf[node.results[0].idx] = ref;
      classical[node.results[1].idx] = out.op(newOp).results[0];
      out.value(out.op(newOp).results[0]).name =
          src.value(node.results[1]).name;
      return;
    }
    case OpKind::Reset: {
      ValueId ref = refFor(srcOp, node.operands[0]);
      if (failed)
        return;
      b.create("qc.reset", {ref}, AttrMap{}, node.loc);
      refOf[node.results[0].idx] = ref;
      return;
    }
    case OpKind::Const: {
      OpId newOp = b.create("cf.const", {}, {src.typeOf(node.results[0])},
                            node.attrs, node.loc);
      classical[node.results[0].idx] = out.op(newOp).results[0];
      out.value(out.op(newOp).results[0]).name =
          src.value(node.results[0]).name;
      return;
    }
    case OpKind::If:
    case OpKind::For:
    case OpKind::While:
      convertControlFlow(srcOp, b);
      return;
    case OpKind::Yield:
      fail(srcOp, "unexpected cf.yield outside a region");
      return;
    case OpKind::AllocReg:
    case OpKind::Extract:
      fail(srcOp, "'" + node.opcode + "' cannot appear in a qco module");
      return;
    }
  }

  void copyGateDef(OpId srcOp, OpBuilder& b) {
    const OperationNode& node = src.op(srcOp);
    OpId id = out.allocateOp();
    out.op(id).opcode = node.opcode;
    out.op(id).attrs = node.attrs;
    out.op(id).loc = node.loc;
    RegionId r = out.createRegion(id);
    out.op(id).regions.push_back(r);
    BlockId dstBlock = out.createBlock(r);
    BlockId srcBlock = src.region(node.regions[0]).front();
    std::map<uint32_t, ValueId> map;
    for (ValueId arg : src.block(srcBlock).args)
      map[arg.idx] =
          out.addBlockArg(dstBlock, src.typeOf(arg), src.value(arg).name);
    copyOpsInto(srcBlock, dstBlock, map);
    out.insertOp(id, b.insertionBlock(), b.insertionPos());
    b.setInsertionPoint(b.insertionBlock(), b.insertionPos() + 1);
  }

  void copyOpsInto(BlockId srcBlock, BlockId dstBlock,
                   std::map<uint32_t, ValueId>& map) {
    for (OpId op : src.block(srcBlock).ops) {
      const OperationNode& node = src.op(op);
      OpId id = out.allocateOp();
      out.op(id).opcode = node.opcode;
      out.op(id).attrs = node.attrs;
      out.op(id).loc = node.loc;
      for (ValueId operand : node.operands)
        out.op(id).operands.push_back(map.at(operand.idx));
      for (uint32_t i = 0; i < node.results.size(); ++i) {
        ValueId r = out.mintResult(id, i, src.typeOf(node.results[i]),
                                   src.value(node.results[i]).name);
        out.op(id).results.push_back(r);
        map[node.results[i].idx] = r;
      }
      for (RegionId srcRegion : node.regions) {
        RegionId r = out.createRegion(id);
        out.op(id).regions.push_back(r);
        BlockId b = out.createBlock(r);
        for (ValueId arg : src.block(src.region(srcRegion).front()).args)
          map[arg.idx] =
              out.addBlockArg(b, src.typeOf(arg), src.value(arg).name);
        copyOpsInto(src.region(srcRegion).front(), b, map);
      }
      out.insertOp(id, dstBlock, out.block(dstBlock).ops.size());
    }
  }

  std::optional<IrModule> run() {
    DiagnosticList linearity;
    qcoLinearityVerify(src, linearity);
    if (linearity.hasErrors()) {
      diags.append(linearity);
      diags.error("bufferize: refusing non-linear input");
      return std::nullopt;
    }
    if (hasDialectOps(src, Dialect::QC)) {
      diags.error("bufferize: input module is not in qco form");
      return std::nullopt;
    }
    OpBuilder b(out, out.entryBlock());
    for (OpId op : src.block(src.entryBlock()).ops) {
      convertOp(op, b);
      if (failed)
        return std::nullopt;
    }
    return std::move(out);
  }
};

} // namespace

std::optional<IrModule> bufferize(const IrModule& m, DiagnosticList& diags) {
  Bufferizer driver(m, diags);
  return driver.run();
}

IrModule explodeRegisters(const IrModule& m) {
  IrModule out;
  std::map<uint32_t, ValueId> map; // src value -> out value

  std::function<void(const std::vector<OpId>&, BlockId)> convertOps =
      [&](const std::vector<OpId>& ops, BlockId dstBlock) {
    for (OpId opId : ops) {
      const OperationNode& node = m.op(opId);
      if (node.opcode == "qc.alloc_reg") {
        OpBuilder builder(out, dstBlock); // appends at the current end
        // One qc.alloc per extracted slot, in slot order.
        std::map<int64_t, std::vector<ValueId>> extracts;
        m.walk([&](OpId other) {
          if (m.op(other).opcode == "qc.extract" &&
              m.op(other).operands[0] == node.results[0])
            extracts[m.op(other).attr("index")->asInt()].push_back(
                m.op(other).results[0]);
          return true;
        });
        std::string base = m.value(node.results[0]).name;
        for (const auto& [index, refs] : extracts) {
          OpId alloc = builder.create("qc.alloc", {}, AttrMap{}, node.loc);
          out.value(out.op(alloc).results[0]).name =
              base.empty() ? "" : base + std::to_string(index);
          for (ValueId ref : refs)
            map[ref.idx] = out.op(alloc).results[0];
        }
        continue;
      }
      if (node.opcode == "qc.extract")
        continue; // uses were redirected at the alloc_reg
      OpId id = out.allocateOp();
      out.op(id).opcode = node.opcode;
      out.op(id).attrs = node.attrs;
      out.op(id).loc = node.loc;
      for (ValueId operand : node.operands)
        out.op(id).operands.push_back(map.at(operand.idx));
      for (uint32_t i = 0; i < node.results.size(); ++i) {
        ValueId r = out.mintResult(id, i, m.typeOf(node.results[i]),
                                   m.value(node.results[i]).name);
        out.op(id).results.push_back(r);
        map[node.results[i].idx] = r;
      }
      for (RegionId srcRegion : node.regions) {
        RegionId r = out.createRegion(id);
        out.op(id).regions.push_back(r);
        BlockId nested = out.createBlock(r);
        for (ValueId arg : m.block(m.region(srcRegion).front()).args)
          map[arg.idx] =
              out.addBlockArg(nested, m.typeOf(arg), m.value(arg).name);
        convertOps(m.block(m.region(srcRegion).front()).ops, nested);
      }
      out.insertOp(id, dstBlock, out.block(dstBlock).ops.size());
    }
  };

  // Gate definitions are symbol-table entries: the normal form hoists them
  // ahead of the executable entry code so textual frontends that emit
  // declarations first compare equal.
  std::vector<OpId> ordered;
  for (OpId op : m.block(m.entryBlock()).ops)
    if (m.op(op).opcode == "qc.gate_def")
      ordered.push_back(op);
  for (OpId op : m.block(m.entryBlock()).ops)
    if (m.op(op).opcode != "qc.gate_def")
      ordered.push_back(op);
  convertOps(ordered, out.entryBlock());
  return out;
}

} // namespace qcc
