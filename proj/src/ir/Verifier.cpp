//===-- Verifier.cpp ------------------------------------------------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "qcc/ir/Verifier.hpp"

#include "qcc/dialect/QC.hpp"
#include "qcc/dialect/QCO.hpp"
#include "qcc/ir/Registry.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace qcc {

namespace {

struct Verifier {
  const IrModule& m;
  DiagnosticList diags;
  std::set<uint32_t> seenOps;
  // For each visited block: its ancestry for dominance checks.
  // ancestry(block) = list of (block, op index of the enclosing op in it),
  // innermost first.
  struct Frame {
    BlockId block;
    size_t enclosingIndex; // index of the enclosing op within `block`
  };

  void error(OpId op, const std::string& msg) {
    diags.error(msg, m.op(op).loc);
  }

  void run() {
    std::vector<Frame> ancestry;
    visitRegion(m.entryRegion(), ancestry);
    checkUseListConsistency();
    if (!diags.hasErrors()) {
      bool qc = hasDialectOps(m, Dialect::QC);
      bool qco = hasDialectOps(m, Dialect::QCO);
      if (qc && qco)
        diags.error("module mixes qc and qco executable operations");
      qcVerifyHooks(m, diags);
      if (qco)
        qcoLinearityVerify(m, diags);
    }
  }

  void visitRegion(RegionId region, std::vector<Frame>& ancestry) {
    for (BlockId b : m.region(region).blocks)
      visitBlock(b, ancestry);
  }

  void visitBlock(BlockId b, std::vector<Frame>& ancestry) {
    const auto& ops = m.block(b).ops;
    for (size_t i = 0; i < ops.size(); ++i) {
      OpId opId = ops[i];
      const OperationNode& node = m.op(opId);
      if (node.dead) {
        diags.error("block references an erased operation");
        continue;
      }
      if (!seenOps.insert(opId.idx).second) {
        error(opId, "operation appears in two blocks");
        continue;
      }
      if (node.parent != b)
        error(opId, "operation parent link is inconsistent");
      visitOp(opId, b, i, ancestry);
      for (RegionId r : node.regions) {
        ancestry.push_back(Frame{b, i});
        visitRegion(r, ancestry);
        ancestry.pop_back();
      }
    }
  }

  void visitOp(OpId opId, BlockId b, size_t index,
               const std::vector<Frame>& ancestry) {
    const OperationNode& node = m.op(opId);
    const OpcodeInfo* info = lookupOpcode(node.opcode);
    if (!info) {
      error(opId, "unknown opcode '" + node.opcode + "'");
      return;
    }
    if (node.regions.size() != info->regions) {
      error(opId, "'" + node.opcode + "' must have " +
                      std::to_string(info->regions) + " region(s)");
      return;
    }
    for (size_t i = 0; i < node.operands.size(); ++i) {
      ValueId v = node.operands[i];
      if (!v.valid() || v.idx >= m.valueTableSize() || m.value(v).dead) {
        error(opId, "operand " + std::to_string(i) + " of '" + node.opcode +
                        "' references a dead or invalid value");
        return;
      }
      checkDominance(opId, b, index, i, v, ancestry);
    }
    checkSignature(opId, *info);
    if (info->isControlFlow())
      checkControlFlow(opId, *info);
    if (info->kind == OpKind::Yield)
      checkYieldPlacement(opId, b);
  }

  void checkDominance(OpId user, BlockId userBlock, size_t userIndex,
                      size_t operandIndex, ValueId v,
                      const std::vector<Frame>& ancestry) {
    const ValueInfo& info = m.value(v);
    if (info.isBlockArg()) {
      BlockId defBlock = info.defBlock;
      if (defBlock == userBlock)
        return;
      for (const Frame& f : ancestry)
        if (f.block == defBlock)
          return;
      error(user, "operand " + std::to_string(operandIndex) +
                      " uses a block argument from an unrelated region");
      return;
    }
    const OperationNode& defNode = m.op(info.defOp);
    BlockId defBlock = defNode.parent;
    if (defBlock == userBlock) {
      if (m.positionInBlock(info.defOp) >= userIndex)
        error(user, "operand " + std::to_string(operandIndex) +
                        " uses a value before its definition");
      return;
    }
    for (auto it = ancestry.rbegin(); it != ancestry.rend(); ++it) {
      if (it->block != defBlock)
        continue;
      if (m.positionInBlock(info.defOp) < it->enclosingIndex)
        return;
      error(user, "operand " + std::to_string(operandIndex) +
                      " uses a value before its definition");
      return;
    }
    error(user, "operand " + std::to_string(operandIndex) +
                    " references a value defined in a sibling region");
  }

  void checkSignature(OpId opId, const OpcodeInfo& info) {
    const OperationNode& node = m.op(opId);
    auto operandType = [&](size_t i) { return m.typeOf(node.operands[i]); };
    auto expect = [&](bool cond, const std::string& msg) {
      if (!cond)
        error(opId, "'" + node.opcode + "': " + msg);
      return cond;
    };
    TypeDesc qubit = info.dialect == Dialect::QCO ? TypeDesc::qubitState()
                                                  : TypeDesc::qubitRef();
    switch (info.kind) {
    case OpKind::Alloc:
      expect(node.operands.empty() && node.results.size() == 1 &&
                 m.typeOf(node.results[0]) == qubit,
             "signature is () -> qubit");
      break;
    case OpKind::AllocReg: {
      const AttributeValue* size = node.attr("size");
      if (!expect(size && size->isInt() && size->asInt() >= 1,
                  "needs a positive 'size' attribute"))
        break;
      expect(node.results.size() == 1 &&
                 m.typeOf(node.results[0]) ==
                     TypeDesc::qubitReg(uint32_t(size->asInt())),
             "result must be !qc.qreg<size>");
      break;
    }
    case OpKind::Extract:
      expect(node.operands.size() == 1 &&
                 operandType(0).kind == TypeKind::QubitReg,
             "operand must be a qubit register");
      expect(node.attr("index") && node.attr("index")->isInt(),
             "needs an integer 'index' attribute");
      expect(node.results.size() == 1 &&
                 m.typeOf(node.results[0]).isQubitRef(),
             "result must be !qc.qubit");
      break;
    case OpKind::Dealloc:
      expect(node.operands.size() == 1 && operandType(0) == qubit &&
                 node.results.empty(),
             "signature is (qubit) -> ()");
      break;
    case OpKind::Gate: {
      if (!expect(node.operands.size() == info.targets,
                  "expects " + std::to_string(info.targets) + " qubit "
                  "operand(s)"))
        break;
      for (size_t i = 0; i < node.operands.size(); ++i)
        expect(operandType(i) == qubit,
               "operand " + std::to_string(i) + " must be " + qubit.str());
      size_t expectedResults =
          info.dialect == Dialect::QCO ? node.operands.size() : 0;
      expect(node.results.size() == expectedResults,
             "result count does not match the signature");
      for (const auto& name : angleAttrNames(info.gate)) {
        const AttributeValue* attr = node.attr(name);
        expect(attr && (attr->isFloat() || attr->isString()),
               "needs angle attribute '" + name + "'");
      }
      break;
    }
    case OpKind::Measure:
      expect(node.operands.size() == 1 && operandType(0) == qubit,
             "operand must be " + qubit.str());
      if (info.dialect == Dialect::QCO)
        expect(node.results.size() == 2 &&
                   m.typeOf(node.results[0]).isQubitState() &&
                   m.typeOf(node.results[1]) == TypeDesc::bit(),
               "results must be (!qco.qubit, i1)");
      else
        expect(node.results.size() == 1 &&
                   m.typeOf(node.results[0]) == TypeDesc::bit(),
               "result must be i1");
      break;
    case OpKind::Reset:
      expect(node.operands.size() == 1 && operandType(0) == qubit,
             "operand must be " + qubit.str());
      expect(node.results.size() ==
                 (info.dialect == Dialect::QCO ? size_t(1) : size_t(0)),
             "result count does not match the signature");
      break;
    case OpKind::Ctrl: {
      const AttributeValue* pol = node.attr("polarity");
      if (!expect(pol && pol->isArray(), "needs a 'polarity' array"))
        break;
      size_t controls = pol->asArray().size();
      if (info.dialect == Dialect::QC)
        expect(node.operands.size() == controls && node.results.empty(),
               "control count must match the polarity array");
      else
        expect(node.operands.size() > controls &&
                   node.results.size() == node.operands.size(),
               "needs targets after controls and positional results");
      for (size_t i = 0; i < node.operands.size(); ++i)
        expect(operandType(i) == qubit,
               "operand " + std::to_string(i) + " must be " + qubit.str());
      break;
    }
    case OpKind::Inv:
    case OpKind::Pow:
      if (info.kind == OpKind::Pow)
        expect(node.attr("exponent") && node.attr("exponent")->isInt(),
               "needs an integer 'exponent' attribute");
      if (info.dialect == Dialect::QC)
        expect(node.operands.empty() && node.results.empty(),
               "takes no operands in qc form");
      else
        expect(!node.operands.empty() &&
                   node.results.size() == node.operands.size(),
               "needs target states and positional results");
      break;
    case OpKind::GateDef:
      expect(node.attr("name") && node.attr("name")->isString(),
             "needs a string 'name' attribute");
      expect(node.operands.empty() && node.results.empty(),
             "takes no operands");
      break;
    case OpKind::CallGate: {
      expect(node.attr("callee") && node.attr("callee")->isString(),
             "needs a string 'callee' attribute");
      size_t states = 0;
      for (ValueId v : node.operands)
        if (m.typeOf(v).isAnyQubit())
          ++states;
      size_t expectedResults = info.dialect == Dialect::QCO ? states : 0;
      expect(node.results.size() == expectedResults,
             "result count does not match the signature");
      break;
    }
    case OpKind::If:
      expect(!node.operands.empty() && operandType(0) == TypeDesc::bit(),
             "condition must be i1");
      break;
    case OpKind::For:
      expect(node.operands.size() >= 3, "needs lb, ub, step");
      for (size_t i = 0; i < std::min<size_t>(3, node.operands.size()); ++i)
        expect(operandType(i) == TypeDesc::index(),
               "bound operand " + std::to_string(i) + " must be index");
      break;
    case OpKind::While:
    case OpKind::Yield:
      break;
    case OpKind::Const: {
      const AttributeValue* v = node.attr("value");
      if (!expect(v && (v->isInt() || v->isFloat()),
                  "needs a numeric 'value' attribute"))
        break;
      if (!expect(node.results.size() == 1, "has exactly one result"))
        break;
      TypeKind k = m.typeOf(node.results[0]).kind;
      bool intLike =
          k == TypeKind::Index || k == TypeKind::Bit || k == TypeKind::Int;
      expect(v->isInt() == intLike,
             "value attribute kind does not match the result type");
      break;
    }
    }
  }

  std::vector<TypeDesc> typesOf(const std::vector<ValueId>& vals) {
    std::vector<TypeDesc> out;
    out.reserve(vals.size());
    for (ValueId v : vals)
      out.push_back(m.typeOf(v));
    return out;
  }

  /// Returns the terminator of a cf region block, reporting if missing.
  OpId regionYield(OpId parent, RegionId r) {
    BlockId b = m.region(r).front();
    const auto& ops = m.block(b).ops;
    if (ops.empty() || m.op(ops.back()).opcode != "cf.yield") {
      error(parent, "'" + m.op(parent).opcode +
                        "' region must end with cf.yield");
      return OpId{};
    }
    for (size_t i = 0; i + 1 < ops.size(); ++i)
      if (m.op(ops[i]).opcode == "cf.yield")
        error(ops[i], "cf.yield must be the last operation of its block");
    return ops.back();
  }

  void checkControlFlow(OpId opId, const OpcodeInfo& info) {
    const OperationNode& node = m.op(opId);
    auto resultTypes = typesOf(node.results);
    if (info.kind == OpKind::If) {
      std::vector<TypeDesc> iterTypes;
      for (size_t i = 1; i < node.operands.size(); ++i)
        iterTypes.push_back(m.typeOf(node.operands[i]));
      if (iterTypes != resultTypes) {
        error(opId, "'cf.if' results must match its iter operands");
        return;
      }
      for (RegionId r : node.regions) {
        BlockId b = m.region(r).front();
        if (typesOf(m.block(b).args) != iterTypes) {
          error(opId, "'cf.if' region arguments must match the iter "
                      "operands");
          return;
        }
        OpId yield = regionYield(opId, r);
        if (yield.valid() && typesOf(m.op(yield).operands) != resultTypes)
          error(yield, "yield types must match the 'cf.if' results");
      }
    } else if (info.kind == OpKind::For) {
      std::vector<TypeDesc> iterTypes;
      for (size_t i = 3; i < node.operands.size(); ++i)
        iterTypes.push_back(m.typeOf(node.operands[i]));
      if (iterTypes != resultTypes) {
        error(opId, "'cf.for' results must match its iter operands");
        return;
      }
      BlockId b = m.region(node.regions[0]).front();
      std::vector<TypeDesc> expectedArgs = {TypeDesc::index()};
      expectedArgs.insert(expectedArgs.end(), iterTypes.begin(),
                          iterTypes.end());
      if (typesOf(m.block(b).args) != expectedArgs) {
        error(opId, "'cf.for' body must take (index, iter values...)");
        return;
      }
      OpId yield = regionYield(opId, node.regions[0]);
      if (yield.valid() && typesOf(m.op(yield).operands) != iterTypes)
        error(yield, "yield types must match the 'cf.for' iter values");
    } else if (info.kind == OpKind::While) {
      auto iterTypes = typesOf(node.operands);
      if (iterTypes != resultTypes) {
        error(opId, "'cf.while' results must match its iter operands");
        return;
      }
      BlockId cond = m.region(node.regions[0]).front();
      BlockId body = m.region(node.regions[1]).front();
      if (typesOf(m.block(cond).args) != iterTypes ||
          typesOf(m.block(body).args) != iterTypes) {
        error(opId, "'cf.while' regions must take the iter values");
        return;
      }
      OpId condYield = regionYield(opId, node.regions[0]);
      if (condYield.valid()) {
        std::vector<TypeDesc> expected = {TypeDesc::bit()};
        expected.insert(expected.end(), iterTypes.begin(), iterTypes.end());
        if (typesOf(m.op(condYield).operands) != expected)
          error(condYield,
                "condition region must yield (i1, iter values...)");
      }
      OpId bodyYield = regionYield(opId, node.regions[1]);
      if (bodyYield.valid() &&
          typesOf(m.op(bodyYield).operands) != iterTypes)
        error(bodyYield, "body region must yield the iter values");
    }
  }

  void checkYieldPlacement(OpId opId, BlockId b) {
    OpId parent = m.region(m.block(b).parentRegion).parentOp;
    if (!parent.valid()) {
      error(opId, "cf.yield is not allowed at module scope");
      return;
    }
    const OpcodeInfo& parentInfo = getOpcode(m.op(parent).opcode);
    bool ok = parentInfo.isControlFlow() ||
              (parentInfo.isModifier() && parentInfo.dialect == Dialect::QCO);
    if (!ok)
      error(opId, "cf.yield is not allowed inside '" + m.op(parent).opcode +
                      "'");
    else if (parentInfo.isModifier()) {
      const auto& ops = m.block(b).ops;
      if (ops.empty() || ops.back() != opId)
        error(opId, "cf.yield must terminate the modifier body");
    }
  }

  void checkUseListConsistency() {
    // uses(v) must equal the operand slots that reference v, as a multiset.
    std::map<uint32_t, std::vector<Use>> found;
    m.walk([&](OpId opId) {
      const OperationNode& node = m.op(opId);
      for (uint32_t i = 0; i < node.operands.size(); ++i)
        found[node.operands[i].idx].push_back(Use{opId, i});
      return true;
    });
    auto useLess = [](const Use& a, const Use& b) {
      return a.user.idx != b.user.idx ? a.user.idx < b.user.idx
                                      : a.operandIndex < b.operandIndex;
    };
    for (uint32_t i = 0; i < m.valueTableSize(); ++i) {
      const ValueInfo& info = m.value(ValueId{i});
      if (info.dead)
        continue;
      auto recorded = info.uses;
      auto actual = found.count(i) ? found[i] : std::vector<Use>{};
      std::sort(recorded.begin(), recorded.end(), useLess);
      std::sort(actual.begin(), actual.end(), useLess);
      if (recorded != actual)
        diags.error("use list of " +
                    (info.name.empty() ? std::string("a value")
                                       : "%" + info.name) +
                    " is inconsistent with the operand slots");
    }
  }
};

} // namespace

DiagnosticList verify(const IrModule& m) {
  Verifier v{m, {}, {}};
  v.run();
  return std::move(v.diags);
}

} // namespace qcc
