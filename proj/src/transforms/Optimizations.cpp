//===-- Optimizations.cpp -------------------------------------------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "qcc/transforms/Optimizations.hpp"

#include "qcc/dialect/QC.hpp"
#include "qcc/dialect/Unitary.hpp"
#include "qcc/ir/Patterns.hpp"
#include "qcc/ir/Registry.hpp"

#include <cmath>
#include <numbers>
#include <optional>

namespace qcc {

namespace {

//===----------------------------------------------------------------------===//
// remove-dead-alloc
//===----------------------------------------------------------------------===//

struct RemoveDeadAllocPair final : RewritePattern {
  RemoveDeadAllocPair() : RewritePattern("qc.dealloc", 1) {}

  bool matchAndRewrite(IrModule& m, OpId op) const override {
    ValueId qubit = m.op(op).operands[0];
    const ValueInfo& info = m.value(qubit);
    if (info.isBlockArg() || m.op(info.defOp).opcode != "qc.alloc")
      return false;
    if (info.uses.size() != 1)
      return false; // an intervening computation also uses the qubit
    OpId alloc = info.defOp;
    m.eraseOp(op);
    m.eraseOp(alloc);
    return true;
  }
};

struct RemoveDeadAllocReg final : RewritePattern {
  RemoveDeadAllocReg() : RewritePattern("qc.alloc_reg", 1) {}

  bool matchAndRewrite(IrModule& m, OpId op) const override {
    // Every use of the register must be an extract whose qubit is unused or
    // only deallocated; then the whole group goes at once.
    std::vector<OpId> extracts;
    std::vector<OpId> deallocs;
    for (const Use& use : m.value(m.op(op).results[0]).uses) {
      if (m.op(use.user).opcode != "qc.extract")
        return false;
      extracts.push_back(use.user);
      const ValueInfo& qubit = m.value(m.op(use.user).results[0]);
      if (qubit.uses.empty())
        continue;
      if (qubit.uses.size() != 1 ||
          m.op(qubit.uses[0].user).opcode != "qc.dealloc")
        return false;
      deallocs.push_back(qubit.uses[0].user);
    }
    for (OpId dealloc : deallocs)
      m.eraseOp(dealloc);
    for (OpId extract : extracts)
      m.eraseOp(extract);
    m.eraseOp(op);
    return true;
  }
};

//===----------------------------------------------------------------------===//
// Shared qco matching plumbing
//===----------------------------------------------------------------------===//

/// Qubit-state operands of a qco unitary op, in order.
std::vector<ValueId> stateOperands(const IrModule& m, OpId op) {
  std::vector<ValueId> out;
  for (ValueId v : m.op(op).operands)
    if (m.typeOf(v).isQubitState())
      out.push_back(v);
  return out;
}

/// The producer op if every qubit-state operand of `op` is one of its
/// results, in matching positions; invalid otherwise.
OpId matchingProducer(const IrModule& m, OpId op) {
  auto inputs = stateOperands(m, op);
  if (inputs.empty())
    return OpId{};
  const ValueInfo& first = m.value(inputs[0]);
  if (first.isBlockArg())
    return OpId{};
  OpId producer = first.defOp;
  if (!isUnitaryOp(m, producer))
    return OpId{};
  if (m.op(producer).results != inputs)
    return OpId{};
  return producer;
}

std::optional<UnitaryDescriptor> tryDescriptor(const IrModule& m, OpId op) {
  try {
    return unitaryDescriptor(m, op);
  } catch (const IrError&) {
    return std::nullopt;
  }
}

bool isTopLevelUnitary(const IrModule& m, OpId op) {
  if (!isUnitaryOp(m, op))
    return false;
  OpId parent = m.region(m.block(m.op(op).parent).parentRegion).parentOp;
  if (!parent.valid())
    return true;
  const OpcodeInfo* info = lookupOpcode(m.op(parent).opcode);
  return !(info && info->isModifier());
}

//===----------------------------------------------------------------------===//
// cancel-inverses
//===----------------------------------------------------------------------===//

struct CancelInversePairs final : RewritePattern {
  CancelInversePairs() : RewritePattern("", 1) {}

  bool matchAndRewrite(IrModule& m, OpId op) const override {
    if (!isTopLevelUnitary(m, op) ||
        getOpcode(m.op(op).opcode).dialect != Dialect::QCO)
      return false;
    OpId producer = matchingProducer(m, op);
    if (!producer.valid())
      return false;
    auto d2 = tryDescriptor(m, op);
    auto d1 = tryDescriptor(m, producer);
    if (!d1 || !d2 || !d2->equals(inverseDescriptor(*d1)))
      return false;
    auto producerInputs = stateOperands(m, producer);
    const auto results = m.op(op).results;
    for (size_t i = 0; i < results.size(); ++i)
      m.replaceAllUses(results[i], producerInputs[i]);
    m.eraseOp(op);
    m.eraseOp(producer);
    return true;
  }
};

//===----------------------------------------------------------------------===//
// merge-rotations
//===----------------------------------------------------------------------===//

bool isRotationBase(GateKind kind) {
  return kind == GateKind::RX || kind == GateKind::RY ||
         kind == GateKind::RZ || kind == GateKind::P;
}

/// Innermost standard-gate op of a (possibly modifier-wrapped) unitary.
OpId innermostGate(const IrModule& m, OpId op) {
  const OpcodeInfo& info = getOpcode(m.op(op).opcode);
  if (info.isStandardGate())
    return op;
  if (info.isModifier())
    return innermostGate(m, modifierBodyOp(m, op));
  return OpId{};
}

struct MergeRotations final : RewritePattern {
  MergeRotations() : RewritePattern("", 1) {}

  bool matchAndRewrite(IrModule& m, OpId op) const override {
    if (!isTopLevelUnitary(m, op) ||
        getOpcode(m.op(op).opcode).dialect != Dialect::QCO)
      return false;
    auto d2 = tryDescriptor(m, op);
    if (!d2 || !isRotationBase(d2->base))
      return false;
    OpId producer = matchingProducer(m, op);
    if (!producer.valid())
      return false;
    auto d1 = tryDescriptor(m, producer);
    if (!d1 || d1->base != d2->base || d1->stack != d2->stack)
      return false;

    double sum = d1->angles[0] + d2->angles[0];
    auto producerInputs = stateOperands(m, producer);
    const auto results = m.op(op).results;
    if (std::abs(std::remainder(sum, 2 * std::numbers::pi)) <=
        kAngleTolerance) {
      // The fused rotation is the identity up to global phase.
      for (size_t i = 0; i < results.size(); ++i)
        m.replaceAllUses(results[i], producerInputs[i]);
      m.eraseOp(op);
      m.eraseOp(producer);
      return true;
    }
    // Keep this op, retarget it to the producer's inputs, sum the angle.
    OpId gate = innermostGate(m, op);
    m.op(gate).attrs["angle"] = AttributeValue(sum);
    auto inputs = stateOperands(m, op);
    for (size_t i = 0; i < m.op(op).operands.size(); ++i) {
      ValueId operand = m.op(op).operands[i];
      for (size_t s = 0; s < inputs.size(); ++s)
        if (operand == inputs[s])
          m.setOperand(op, uint32_t(i), producerInputs[s]);
    }
    m.eraseOp(producer);
    return true;
  }
};

//===----------------------------------------------------------------------===//
// canonicalize-modifiers
//===----------------------------------------------------------------------===//

struct CanonicalDescriptor {
  UnitaryDescriptor desc;
  bool becomesIdentity = false;
  bool changed = false;
};

/// Wraps inverseDescriptor's base table: returns false for custom bases.
bool invertBaseOf(UnitaryDescriptor& d) {
  if (d.base == GateKind::Custom)
    return false;
  UnitaryDescriptor stackless;
  stackless.base = d.base;
  stackless.angles = d.angles;
  stackless.targetArity = d.targetArity;
  UnitaryDescriptor inverted = inverseDescriptor(stackless);
  if (!inverted.stack.empty())
    return false;
  d.base = inverted.base;
  d.angles = inverted.angles;
  return true;
}

CanonicalDescriptor canonicalizeDescriptor(UnitaryDescriptor d) {
  CanonicalDescriptor out;
  bool changed = false;
  bool again = true;
  while (again) {
    again = false;
    for (size_t i = 0; i < d.stack.size(); ++i) {
      ModifierEntry& e = d.stack[i];
      if (e.kind == ModifierEntry::Kind::Pow) {
        if (e.exponent == 0) {
          out.becomesIdentity = true;
          out.changed = true;
          return out;
        }
        if (e.exponent == 1) {
          d.stack.erase(d.stack.begin() + ptrdiff_t(i));
          changed = again = true;
          break;
        }
        if (e.exponent < 0) {
          e.exponent = -e.exponent;
          d.stack.insert(d.stack.begin() + ptrdiff_t(i) + 1,
                         {ModifierEntry::Kind::Inv, {}, 0});
          changed = again = true;
          break;
        }
      } else if (e.kind == ModifierEntry::Kind::Inv) {
        if (i + 1 < d.stack.size()) {
          if (d.stack[i + 1].kind == ModifierEntry::Kind::Inv) {
            d.stack.erase(d.stack.begin() + ptrdiff_t(i),
                          d.stack.begin() + ptrdiff_t(i) + 2);
          } else {
            // Inversion commutes with ctrl and pow: push it inward.
            std::swap(d.stack[i], d.stack[i + 1]);
          }
          changed = again = true;
          break;
        }
        // Innermost: absorb into the base when it has a named inverse.
        UnitaryDescriptor probe = d;
        probe.stack.pop_back();
        if (invertBaseOf(probe)) {
          d = probe;
          changed = again = true;
          break;
        }
      } else { // Ctrl
        if (e.polarity.empty()) {
          d.stack.erase(d.stack.begin() + ptrdiff_t(i));
          changed = again = true;
          break;
        }
        if (i + 1 < d.stack.size() &&
            d.stack[i + 1].kind == ModifierEntry::Kind::Ctrl) {
          e.polarity.insert(e.polarity.end(),
                            d.stack[i + 1].polarity.begin(),
                            d.stack[i + 1].polarity.end());
          d.stack.erase(d.stack.begin() + ptrdiff_t(i) + 1);
          changed = again = true;
          break;
        }
      }
    }
  }
  out.desc = std::move(d);
  out.changed = changed;
  return out;
}

struct CanonicalizeModifier final : RewritePattern {
  explicit CanonicalizeModifier(std::string root)
      : RewritePattern(std::move(root), 1) {}

  bool matchAndRewrite(IrModule& m, OpId op) const override {
    if (!isTopLevelUnitary(m, op))
      return false;
    auto d = tryDescriptor(m, op);
    if (!d)
      return false;
    CanonicalDescriptor canonical = canonicalizeDescriptor(*d);
    if (!canonical.changed)
      return false;

    const OpcodeInfo& info = getOpcode(m.op(op).opcode);
    std::vector<ValueId> wires = unitaryWires(m, op);

    if (canonical.becomesIdentity) {
      if (info.dialect == Dialect::QCO) {
        const auto results = m.op(op).results;
        for (size_t i = 0; i < results.size(); ++i)
          m.replaceAllUses(results[i], m.op(op).operands[i]);
      }
      m.eraseOp(op);
      return true;
    }

    std::vector<ValueId> customAngles;
    if (canonical.desc.base == GateKind::Custom) {
      OpId call = op;
      while (getOpcode(m.op(call).opcode).isModifier())
        call = modifierBodyOp(m, call);
      for (ValueId v : m.op(call).operands)
        if (m.typeOf(v).kind == TypeKind::F64)
          customAngles.push_back(v);
    }

    OpBuilder b = OpBuilder::before(m, op);
    OpId newOp = buildFromDescriptor(m, b, info.dialect, canonical.desc,
                                     wires, customAngles, m.op(op).loc);
    if (info.dialect == Dialect::QCO) {
      const auto oldResults = m.op(op).results;
      const auto& newResults = m.op(newOp).results;
      for (size_t i = 0; i < oldResults.size(); ++i)
        m.replaceAllUses(oldResults[i], newResults[i]);
    }
    m.eraseOp(op);
    return true;
  }
};

//===----------------------------------------------------------------------===//
// simplify-control-flow
//===----------------------------------------------------------------------===//

std::optional<int64_t> constIntOf(const IrModule& m, ValueId v) {
  const ValueInfo& info = m.value(v);
  if (info.isBlockArg() || m.op(info.defOp).opcode != "cf.const")
    return std::nullopt;
  const AttributeValue* value = m.op(info.defOp).attr("value");
  if (!value || !value->isInt())
    return std::nullopt;
  return value->asInt();
}

/// True when the region only forwards its block args through the yield.
bool regionIsPassthrough(const IrModule& m, RegionId r) {
  BlockId b = m.region(r).front();
  const auto& ops = m.block(b).ops;
  if (ops.size() != 1 || m.op(ops[0]).opcode != "cf.yield")
    return false;
  const auto& args = m.block(b).args;
  const auto& yielded = m.op(ops[0]).operands;
  return std::vector<ValueId>(args.begin(), args.end()) == yielded;
}

struct SimplifyIf final : RewritePattern {
  SimplifyIf() : RewritePattern("cf.if", 2) {}

  bool matchAndRewrite(IrModule& m, OpId op) const override {
    const OperationNode& node = m.op(op);
    // Both branches pass-through: drop the conditional entirely.
    if (regionIsPassthrough(m, node.regions[0]) &&
        regionIsPassthrough(m, node.regions[1])) {
      for (size_t i = 0; i < node.results.size(); ++i)
        m.replaceAllUses(node.results[i], node.operands[i + 1]);
      m.eraseOp(op);
      return true;
    }
    auto cond = constIntOf(m, node.operands[0]);
    if (!cond)
      return false;
    RegionId taken = *cond != 0 ? node.regions[0] : node.regions[1];
    BlockId takenBlock = m.region(taken).front();

    const auto& args = m.block(takenBlock).args;
    for (size_t i = 0; i < args.size(); ++i)
      m.replaceAllUses(args[i], node.operands[i + 1]);

    auto ops = m.block(takenBlock).ops;
    OpId yield = ops.back();
    size_t insertAt = m.positionInBlock(op);
    BlockId parent = node.parent;
    for (size_t i = 0; i + 1 < ops.size(); ++i)
      m.moveOp(ops[i], parent, insertAt++);

    const auto results = m.op(op).results;
    const auto yielded = m.op(yield).operands;
    for (size_t i = 0; i < results.size(); ++i)
      m.replaceAllUses(results[i], yielded[i]);
    m.eraseOp(yield);
    m.eraseOp(op);
    return true;
  }
};

struct UnrollFor final : RewritePattern {
  explicit UnrollFor(int limit) : RewritePattern("cf.for", 2), limit_(limit) {}

  bool matchAndRewrite(IrModule& m, OpId op) const override {
    const OperationNode& node = m.op(op);
    if (regionIsPassthrough(m, node.regions[0])) {
      // The body is the identity on its iter values; the loop is a no-op
      // regardless of its bounds.
      for (size_t i = 0; i < node.results.size(); ++i)
        m.replaceAllUses(node.results[i], node.operands[i + 3]);
      m.eraseOp(op);
      return true;
    }
    auto lb = constIntOf(m, node.operands[0]);
    auto ub = constIntOf(m, node.operands[1]);
    auto step = constIntOf(m, node.operands[2]);
    if (!lb || !ub || !step || *step <= 0)
      return false;
    int64_t trips = *ub > *lb ? (*ub - *lb + *step - 1) / *step : 0;
    if (trips > limit_)
      return false; // reported as a warning by the pass driver

    // Copies, not references: create/clone below may grow the op, value
    // and block tables and invalidate anything pointing into them.
    BlockId body = m.region(node.regions[0]).front();
    const std::vector<ValueId> args = m.block(body).args;
    OpId yield = m.block(body).ops.back();
    const Location loc = node.loc;
    BlockId parent = node.parent;

    std::vector<ValueId> current(node.operands.begin() + 3,
                                 node.operands.end());
    size_t insertAt = m.positionInBlock(op);
    for (int64_t iv = *lb; iv < *ub; iv += *step) {
      std::map<uint32_t, ValueId> map;
      if (!m.value(args[0]).uses.empty()) {
        OpBuilder b(m, parent);
        b.setInsertionPoint(parent, insertAt);
        OpId ivConst = b.create("cf.const", {}, {TypeDesc::index()},
                                {{"value", AttributeValue(iv)}}, loc);
        map[args[0].idx] = m.op(ivConst).results[0];
        insertAt = b.insertionPos();
      }
      for (size_t i = 1; i < args.size(); ++i)
        map[args[i].idx] = current[i - 1];
      OpBuilder b(m, parent);
      b.setInsertionPoint(parent, insertAt);
      // Clone everything but the terminator.
      auto bodyOps = m.block(body).ops;
      std::vector<ValueId> nextValues;
      for (size_t i = 0; i + 1 < bodyOps.size(); ++i)
        cloneOperation(m, bodyOps[i], b, map);
      insertAt = b.insertionPos();
      for (ValueId v : m.op(yield).operands) {
        auto it = map.find(v.idx);
        nextValues.push_back(it == map.end() ? v : it->second);
      }
      current = std::move(nextValues);
    }
    const auto results = m.op(op).results;
    for (size_t i = 0; i < results.size(); ++i)
      m.replaceAllUses(results[i], current[i]);
    m.eraseOp(op);
    return true;
  }

private:
  int limit_;
};

} // namespace

//===----------------------------------------------------------------------===//
// Pass entry points
//===----------------------------------------------------------------------===//

GreedyResult removeDeadAllocPass(IrModule& m) {
  RemoveDeadAllocPair pair;
  RemoveDeadAllocReg reg;
  return applyPatternsGreedy(m, {&pair, &reg});
}

GreedyResult cancelInversesPass(IrModule& m) {
  CancelInversePairs cancel;
  return applyPatternsGreedy(m, {&cancel});
}

GreedyResult mergeRotationsPass(IrModule& m) {
  MergeRotations merge;
  return applyPatternsGreedy(m, {&merge});
}

GreedyResult canonicalizeModifiersPass(IrModule& m) {
  std::vector<CanonicalizeModifier> patterns;
  for (const char* root : {"qc.ctrl", "qc.inv", "qc.pow", "qco.ctrl",
                           "qco.inv", "qco.pow"})
    patterns.emplace_back(root);
  std::vector<const RewritePattern*> refs;
  for (const auto& p : patterns)
    refs.push_back(&p);
  return applyPatternsGreedy(m, refs);
}

GreedyResult simplifyControlFlowPass(IrModule& m, int unrollLimit,
                                     DiagnosticList& diags) {
  SimplifyIf simplifyIf;
  UnrollFor unroll(unrollLimit);
  GreedyResult result = applyPatternsGreedy(m, {&simplifyIf, &unroll});
  // Surviving constant-bound loops were over the limit: warn, don't fail.
  m.walk([&](OpId op) {
    if (m.op(op).opcode != "cf.for")
      return true;
    auto lb = constIntOf(m, m.op(op).operands[0]);
    auto ub = constIntOf(m, m.op(op).operands[1]);
    auto step = constIntOf(m, m.op(op).operands[2]);
    if (lb && ub && step && *step > 0) {
      int64_t trips = *ub > *lb ? (*ub - *lb + *step - 1) / *step : 0;
      if (trips > unrollLimit)
        diags.warning("loop trip count " + std::to_string(trips) +
                          " exceeds the unroll limit " +
                          std::to_string(unrollLimit) + "; not unrolled",
                      m.op(op).loc);
    }
    return true;
  });
  return result;
}

} // namespace qcc
