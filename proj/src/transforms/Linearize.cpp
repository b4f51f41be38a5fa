//===-- Linearize.cpp - QC -> QCO conversion ------------------------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Walks the imperative program in order, tracking the latest qco state
// value of every qubit wire. Gates consume the tracked states and the map
// advances to their results. Control-flow regions thread states through
// iter args and yields: cf.if threads the union of wires touched in either
// branch, loops thread every live wire.
//
//===----------------------------------------------------------------------===//

#include "qcc/dialect/QC.hpp"
#include "qcc/dialect/Unitary.hpp"
#include "qcc/ir/Registry.hpp"
#include "qcc/ir/Verifier.hpp"
#include "qcc/transforms/Conversions.hpp"

#include <algorithm>
#include <set>

namespace qcc {

namespace {

std::string qcoOpcodeFor(const std::string& qcOpcode) {
  return "qco." + qcOpcode.substr(3);
}

struct Linearizer {
  const IrModule& src;
  DiagnosticList& diags;
  IrModule out;
  bool failed = false;

  // Wire bookkeeping. A wire is one qubit slot (an alloc, or one extracted
  // register slot).
  std::map<uint32_t, int> wireOfRef;
  std::map<uint32_t, std::map<int64_t, int>> regSlots;
  std::vector<ValueId> state; // wire -> latest qco state in `out`
  std::vector<std::string> wireBase;
  std::vector<int> wireCounter;
  std::map<uint32_t, ValueId> classical; // src value -> out value

  explicit Linearizer(const IrModule& m, DiagnosticList& d)
      : src(m), diags(d) {}

  void fail(OpId op, const std::string& msg) {
    if (!failed)
      diags.error(msg, src.op(op).loc);
    failed = true;
  }

  int newWire(std::string base) {
    int w = static_cast<int>(state.size());
    state.push_back(ValueId{});
    wireBase.push_back(base.empty() ? "q" + std::to_string(w)
                                    : std::move(base));
    wireCounter.push_back(0);
    return w;
  }

  void setState(int wire, ValueId v) {
    state[size_t(wire)] = v;
    ValueInfo& info = out.value(v);
    if (info.name.empty())
      info.name =
          wireBase[size_t(wire)] + "_" + std::to_string(wireCounter[size_t(wire)]);
    ++wireCounter[size_t(wire)];
  }

  ValueId stateOf(OpId at, int wire) {
    ValueId v = state[size_t(wire)];
    if (!v.valid())
      fail(at, "use of a deallocated qubit");
    return v;
  }

  int wireOf(OpId at, ValueId ref) {
    auto it = wireOfRef.find(ref.idx);
    if (it != wireOfRef.end())
      return it->second;
    const ValueInfo& info = src.value(ref);
    if (!info.isBlockArg() && src.op(info.defOp).opcode == "qc.extract") {
      const OperationNode& extract = src.op(info.defOp);
      int64_t index = extract.attr("index")->asInt();
      auto reg = regSlots.find(extract.operands[0].idx);
      if (reg != regSlots.end()) {
        auto slot = reg->second.find(index);
        if (slot != reg->second.end()) {
          wireOfRef[ref.idx] = slot->second;
          return slot->second;
        }
      }
    }
    fail(at, "qubit reference is not mapped to a wire");
    return 0;
  }

  ValueId mapClassical(OpId at, ValueId v) {
    auto it = classical.find(v.idx);
    if (it == classical.end()) {
      fail(at, "classical value has no converted counterpart");
      return ValueId{};
    }
    return it->second;
  }

  //===--------------------------------------------------------------------===//
  // Unitary rebuilding (shared by gates and nested modifiers)
  //===--------------------------------------------------------------------===//

  OpId buildQcoUnitary(OpId srcOp, OpBuilder& b,
                       const std::vector<ValueId>& inputs) {
    const OperationNode& node = src.op(srcOp);
    const OpcodeInfo& info = getOpcode(node.opcode);
    std::string opcode = qcoOpcodeFor(node.opcode);

    if (info.isStandardGate())
      return b.create(opcode, inputs, node.attrs, node.loc);

    if (info.kind == OpKind::CallGate) {
      std::vector<ValueId> operands;
      for (ValueId v : node.operands)
        if (src.typeOf(v).kind == TypeKind::F64)
          operands.push_back(mapClassical(srcOp, v));
      operands.insert(operands.end(), inputs.begin(), inputs.end());
      if (failed)
        return OpId{};
      return b.create(opcode, operands, node.attrs, node.loc);
    }

    // Modifier: targets become body block arguments, the wrapped op is
    // rebuilt inside, and the body yields its results.
    size_t controls =
        info.kind == OpKind::Ctrl ? node.attr("polarity")->asArray().size() : 0;
    OpId newOp = b.create(opcode, inputs, node.attrs, node.loc);
    BlockId body = out.region(out.op(newOp).regions[0]).front();
    std::vector<ValueId> bodyInputs;
    for (size_t i = controls; i < inputs.size(); ++i)
      bodyInputs.push_back(
          out.addBlockArg(body, TypeDesc::qubitState()));
    OpBuilder bodyBuilder(out, body);
    OpId inner = buildQcoUnitary(modifierBodyOp(src, srcOp), bodyBuilder,
                                 bodyInputs);
    if (failed)
      return OpId{};
    bodyBuilder.create("cf.yield", out.op(inner).results, AttrMap{},
                       node.loc);
    return newOp;
  }

  void convertUnitary(OpId srcOp, OpBuilder& b) {
    std::vector<int> wires;
    for (ValueId ref : unitaryWires(src, srcOp))
      wires.push_back(wireOf(srcOp, ref));
    std::vector<ValueId> inputs;
    for (int w : wires)
      inputs.push_back(stateOf(srcOp, w));
    if (failed)
      return;
    OpId newOp = buildQcoUnitary(srcOp, b, inputs);
    if (failed)
      return;
    const auto& results = out.op(newOp).results;
    for (size_t i = 0; i < wires.size(); ++i)
      setState(wires[i], results[i]);
  }

  //===--------------------------------------------------------------------===//
  // Touched / live wire analysis
  //===--------------------------------------------------------------------===//

  void collectTouchedWires(RegionId region, std::set<int>& wires) {
    src.walk(region, [&](OpId op) {
      const OpcodeInfo* info = lookupOpcode(src.op(op).opcode);
      if (!info)
        return true;
      if (info->isUnitary() &&
          !insideModifier(op)) { // modifiers cover their body's wires
        for (ValueId ref : unitaryWires(src, op))
          if (src.typeOf(ref).isQubitRef())
            wires.insert(wireOf(op, ref));
      } else if (info->kind == OpKind::Measure ||
                 info->kind == OpKind::Reset) {
        wires.insert(wireOf(op, src.op(op).operands[0]));
      } else if (info->kind == OpKind::Dealloc ||
                 info->kind == OpKind::Alloc ||
                 info->kind == OpKind::AllocReg) {
        fail(op, "'" + src.op(op).opcode +
                     "' inside a control-flow region is not supported by "
                     "linearize");
      }
      return !failed;
    });
  }

  bool insideModifier(OpId op) {
    OpId parent = src.region(src.block(src.op(op).parent).parentRegion).parentOp;
    if (!parent.valid())
      return false;
    const OpcodeInfo* info = lookupOpcode(src.op(parent).opcode);
    return info && info->isModifier();
  }

  std::vector<int> liveWires() const {
    std::vector<int> live;
    for (size_t w = 0; w < state.size(); ++w)
      if (state[w].valid())
        live.push_back(int(w));
    return live;
  }

  //===--------------------------------------------------------------------===//
  // Control flow
  //===--------------------------------------------------------------------===//

  /// Converts one source region body into `dstBlock`, giving it classical
  /// block args (mapped from srcArgs) and one state arg per threaded wire.
  /// Ends with a yield of mapped classical yields plus the wires' final
  /// states. Restores the caller's state map before returning.
  void convertRegion(OpId srcOp, RegionId srcRegion, BlockId dstBlock,
                     const std::vector<int>& threaded) {
    BlockId srcBlock = src.region(srcRegion).front();
    auto savedState = state;

    // Classical args mirror the source block args.
    for (ValueId arg : src.block(srcBlock).args) {
      ValueId newArg = out.addBlockArg(dstBlock, src.typeOf(arg),
                                       src.value(arg).name);
      classical[arg.idx] = newArg;
    }
    // Only threaded wires are visible inside the region: nested loops must
    // not reach out and consume states the region never received.
    for (auto& s : state)
      s = ValueId{};
    for (int w : threaded) {
      ValueId stateArg = out.addBlockArg(dstBlock, TypeDesc::qubitState());
      setState(w, stateArg);
    }

    OpBuilder b(out, dstBlock);
    const auto& ops = src.block(srcBlock).ops;
    OpId srcYield;
    for (OpId op : ops) {
      if (src.op(op).opcode == "cf.yield") {
        srcYield = op;
        break;
      }
      convertOp(op, b);
      if (failed)
        return;
    }

    std::vector<ValueId> yieldOperands;
    if (srcYield.valid())
      for (ValueId v : src.op(srcYield).operands)
        yieldOperands.push_back(mapClassical(srcYield, v));
    for (int w : threaded)
      yieldOperands.push_back(stateOf(srcYield.valid() ? srcYield : srcOp, w));
    if (failed)
      return;
    b.create("cf.yield", yieldOperands, AttrMap{},
             srcYield.valid() ? src.op(srcYield).loc : src.op(srcOp).loc);

    state = std::move(savedState);
  }

  void convertIf(OpId srcOp, OpBuilder& b) {
    const OperationNode& node = src.op(srcOp);
    std::set<int> touchedSet;
    collectTouchedWires(node.regions[0], touchedSet);
    collectTouchedWires(node.regions[1], touchedSet);
    if (failed)
      return;
    std::vector<int> threaded(touchedSet.begin(), touchedSet.end());

    std::vector<ValueId> operands;
    operands.push_back(mapClassical(srcOp, node.operands[0]));
    for (size_t i = 1; i < node.operands.size(); ++i)
      operands.push_back(mapClassical(srcOp, node.operands[i]));
    for (int w : threaded)
      operands.push_back(stateOf(srcOp, w));
    if (failed)
      return;

    OpId newOp = b.create("cf.if", operands, AttrMap{}, node.loc);
    for (int i = 0; i < 2; ++i)
      convertRegion(srcOp, node.regions[size_t(i)],
                    out.region(out.op(newOp).regions[size_t(i)]).front(),
                    threaded);
    if (failed)
      return;

    const auto& results = out.op(newOp).results;
    size_t classicalCount = node.results.size();
    for (size_t i = 0; i < classicalCount; ++i)
      classical[node.results[i].idx] = results[i];
    for (size_t i = 0; i < threaded.size(); ++i)
      setState(threaded[i], results[classicalCount + i]);
  }

  void convertFor(OpId srcOp, OpBuilder& b) {
    const OperationNode& node = src.op(srcOp);
    std::vector<int> threaded = liveWires();

    std::vector<ValueId> operands;
    for (size_t i = 0; i < node.operands.size(); ++i)
      operands.push_back(mapClassical(srcOp, node.operands[i]));
    for (int w : threaded)
      operands.push_back(stateOf(srcOp, w));
    if (failed)
      return;

    OpId newOp = b.create("cf.for", operands, AttrMap{}, node.loc);
    convertRegion(srcOp, node.regions[0],
                  out.region(out.op(newOp).regions[0]).front(), threaded);
    if (failed)
      return;

    const auto& results = out.op(newOp).results;
    size_t classicalCount = node.results.size();
    for (size_t i = 0; i < classicalCount; ++i)
      classical[node.results[i].idx] = results[i];
    for (size_t i = 0; i < threaded.size(); ++i)
      setState(threaded[i], results[classicalCount + i]);
  }

  void convertWhile(OpId srcOp, OpBuilder& b) {
    const OperationNode& node = src.op(srcOp);
    std::vector<int> threaded = liveWires();

    std::vector<ValueId> operands;
    for (ValueId v : node.operands)
      operands.push_back(mapClassical(srcOp, v));
    for (int w : threaded)
      operands.push_back(stateOf(srcOp, w));
    if (failed)
      return;

    OpId newOp = b.create("cf.while", operands, AttrMap{}, node.loc);
    convertRegion(srcOp, node.regions[0],
                  out.region(out.op(newOp).regions[0]).front(), threaded);
    if (failed)
      return;
    convertRegion(srcOp, node.regions[1],
                  out.region(out.op(newOp).regions[1]).front(), threaded);
    if (failed)
      return;

    const auto& results = out.op(newOp).results;
    size_t classicalCount = node.results.size();
    for (size_t i = 0; i < classicalCount; ++i)
      classical[node.results[i].idx] = results[i];
    for (size_t i = 0; i < threaded.size(); ++i)
      setState(threaded[i], results[classicalCount + i]);
  }

  //===--------------------------------------------------------------------===//
  // Main dispatch
  //===--------------------------------------------------------------------===//

  void convertOp(OpId srcOp, OpBuilder& b) {
    const OperationNode& node = src.op(srcOp);
    const OpcodeInfo& info = getOpcode(node.opcode);
    switch (info.kind) {
    case OpKind::GateDef:
      cloneBlockOpsSingle(srcOp, b);
      return;
    case OpKind::Alloc: {
      int w = newWire(src.value(node.results[0]).name);
      OpId newOp = b.create("qco.alloc", {}, AttrMap{}, node.loc);
      wireOfRef[node.results[0].idx] = w;
      setState(w, out.op(newOp).results[0]);
      return;
    }
    case OpKind::AllocReg: {
      // One wire per extracted slot, allocated here in slot order.
      std::string base = src.value(node.results[0]).name;
      std::set<int64_t> indices;
      src.walk([&](OpId op) {
        if (src.op(op).opcode == "qc.extract" &&
            src.op(op).operands[0] == node.results[0])
          indices.insert(src.op(op).attr("index")->asInt());
        return true;
      });
      for (int64_t index : indices) {
        int w = newWire(base.empty() ? "" : base + std::to_string(index));
        regSlots[node.results[0].idx][index] = w;
        OpId newOp = b.create("qco.alloc", {}, AttrMap{}, node.loc);
        setState(w, out.op(newOp).results[0]);
      }
      return;
    }
    case OpKind::Extract:
      wireOfRef[node.results[0].idx] =
          regSlots[node.operands[0].idx][node.attr("index")->asInt()];
      return;
    case OpKind::Dealloc: {
      int w = wireOf(srcOp, node.operands[0]);
      ValueId s = stateOf(srcOp, w);
      if (failed)
        return;
      b.create("qco.dealloc", {s}, AttrMap{}, node.loc);
      state[size_t(w)] = ValueId{};
      return;
    }
    case OpKind::Gate:
    case OpKind::Ctrl:
    case OpKind::Inv:
    case OpKind::Pow:
    case OpKind::CallGate:
      convertUnitary(srcOp, b);
      return;
    case OpKind::Measure: {
      int w = wireOf(srcOp, node.operands[0]);
      ValueId s = stateOf(srcOp, w);
      if (failed)
        return;
      OpId newOp = b.create("qco.measure", {s}, AttrMap{}, node.loc);
      setState(w, out.op(newOp).results[0]);
      classical[node.results[0].idx] = out.op(newOp).results[1];
      out.value(out.op(newOp).results[1]).name =
          src.value(node.results[0]).name;
      return;
    }
    case OpKind::Reset: {
      int w = wireOf(srcOp, node.operands[0]);
      ValueId s = stateOf(srcOp, w);
      if (failed)
        return;
      OpId newOp = b.create("qco.reset", {s}, AttrMap{}, node.loc);
      setState(w, out.op(newOp).results[0]);
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
      convertIf(srcOp, b);
      return;
    case OpKind::For:
      convertFor(srcOp, b);
      return;
    case OpKind::While:
      convertWhile(srcOp, b);
      return;
    case OpKind::Yield:
      fail(srcOp, "unexpected cf.yield outside a region");
      return;
    }
  }

  /// Verbatim clone of a gate definition (bodies stay in qc form).
  void cloneBlockOpsSingle(OpId srcOp, OpBuilder& b) {
    // gate_def has no operands and no results; deep-clone via the shared
    // region cloner by copying the op shell manually.
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
    DiagnosticList vd = verify(src);
    if (vd.hasErrors()) {
      diags.append(vd);
      diags.error("linearize: input module does not verify");
      return std::nullopt;
    }
    if (hasDialectOps(src, Dialect::QCO)) {
      diags.error("linearize: input module is already in qco form");
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

std::optional<IrModule> linearize(const IrModule& m, DiagnosticList& diags) {
  Linearizer driver(m, diags);
  return driver.run();
}

} // namespace qcc
