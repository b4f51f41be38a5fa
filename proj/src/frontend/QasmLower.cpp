//===-- QasmLower.cpp - AST to qc-dialect lowering ------------------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "qcc/frontend/Qasm.hpp"

#include "qcc/ir/Registry.hpp"
#include "qcc/ir/Verifier.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace qcc::qasm {

namespace {

/// Standard-gate surface names accepted by the frontend, mapped to the qc
/// gate plus implied modifiers (cx/cz/ccx desugar to controls).
struct GateSpelling {
  GateKind kind;
  int impliedControls;
};

std::optional<GateSpelling> spellGate(const std::string& name) {
  static const std::map<std::string, GateSpelling> table = {
      {"id", {GateKind::I, 0}},    {"h", {GateKind::H, 0}},
      {"x", {GateKind::X, 0}},     {"y", {GateKind::Y, 0}},
      {"z", {GateKind::Z, 0}},     {"s", {GateKind::S, 0}},
      {"sdg", {GateKind::Sdg, 0}}, {"t", {GateKind::T, 0}},
      {"tdg", {GateKind::Tdg, 0}}, {"sx", {GateKind::SX, 0}},
      {"sxdg", {GateKind::SXdg, 0}},
      {"swap", {GateKind::Swap, 0}},
      {"rx", {GateKind::RX, 0}},   {"ry", {GateKind::RY, 0}},
      {"rz", {GateKind::RZ, 0}},   {"p", {GateKind::P, 0}},
      {"phase", {GateKind::P, 0}},
      {"u", {GateKind::U, 0}},     {"u3", {GateKind::U, 0}},
      {"U", {GateKind::U, 0}},
      {"cx", {GateKind::X, 1}},    {"CX", {GateKind::X, 1}},
      {"cz", {GateKind::Z, 1}},    {"ccx", {GateKind::X, 2}},
  };
  auto it = table.find(name);
  if (it == table.end())
    return std::nullopt;
  return it->second;
}

using BitSlot = std::pair<std::string, int64_t>;

struct Lowerer {
  const Program& program;
  DiagnosticList& diags;
  IrModule m;
  bool failed = false;

  struct QubitSym {
    ValueId scalar;  // valid for `qubit q;`
    ValueId reg;     // valid for `qubit[n] q;`
    int64_t size = -1;
  };
  std::map<std::string, QubitSym> qubitSyms;
  std::map<BitSlot, ValueId> extractCache; // (register, index) -> ref
  std::map<std::string, int64_t> bitSizes; // -1 = scalar (one slot)
  std::map<BitSlot, ValueId> bitValues;
  struct GateDefSym {
    size_t params = 0;
    size_t qubits = 0;
  };
  std::map<std::string, GateDefSym> gateDefs;
  std::map<std::string, ValueId> loopVars;

  explicit Lowerer(const Program& p, DiagnosticList& d)
      : program(p), diags(d) {}

  void fail(Location loc, const std::string& msg) {
    if (!failed)
      diags.error(msg, loc);
    failed = true;
  }

  //===--------------------------------------------------------------------===//
  // Declarations and symbol access
  //===--------------------------------------------------------------------===//

  void lowerDecl(const DeclStmt& decl, Location loc, OpBuilder& b) {
    if (decl.isQubit) {
      if (qubitSyms.count(decl.name)) {
        fail(loc, "redeclaration of '" + decl.name + "'");
        return;
      }
      QubitSym sym;
      sym.size = decl.size;
      if (decl.size < 0) {
        OpId alloc = b.create("qc.alloc", {}, AttrMap{}, loc);
        b.nameResult(alloc, 0, decl.name);
        sym.scalar = m.op(alloc).results[0];
      } else {
        OpId alloc = b.create("qc.alloc_reg", {},
                              {{"size", AttributeValue(decl.size)}}, loc);
        b.nameResult(alloc, 0, decl.name);
        sym.reg = m.op(alloc).results[0];
        // Every slot extracts eagerly: a declared register means that many
        // wires, and use sites are always dominated.
        for (int64_t index = 0; index < decl.size; ++index) {
          OpId extract = b.create("qc.extract", {sym.reg},
                                  {{"index", AttributeValue(index)}}, loc);
          b.nameResult(extract, 0, decl.name + std::to_string(index));
          extractCache[{decl.name, index}] = m.op(extract).results[0];
        }
      }
      qubitSyms.emplace(decl.name, sym);
    } else {
      if (bitSizes.count(decl.name)) {
        fail(loc, "redeclaration of '" + decl.name + "'");
        return;
      }
      bitSizes[decl.name] = decl.size;
    }
  }

  /// Qubit refs an operand denotes: one for scalars/indexed uses, all slots
  /// for whole-register uses.
  std::vector<ValueId> resolveQubits(const Operand& op) {
    auto it = qubitSyms.find(op.name);
    if (it == qubitSyms.end()) {
      fail(op.loc, "undeclared qubit '" + op.name + "'");
      return {};
    }
    const QubitSym& sym = it->second;
    if (op.index >= 0) {
      if (sym.size < 0) {
        fail(op.loc, "'" + op.name + "' is not a register");
        return {};
      }
      if (op.index >= sym.size) {
        fail(op.loc, "index " + std::to_string(op.index) +
                         " is out of range for '" + op.name + "[" +
                         std::to_string(sym.size) + "]'");
        return {};
      }
      return {extractCache.at({op.name, op.index})};
    }
    if (sym.size < 0)
      return {sym.scalar};
    std::vector<ValueId> refs;
    for (int64_t i = 0; i < sym.size; ++i)
      refs.push_back(extractCache.at({op.name, i}));
    return refs;
  }

  std::vector<BitSlot> resolveBitSlots(const Operand& op) {
    auto it = bitSizes.find(op.name);
    if (it == bitSizes.end()) {
      fail(op.loc, "undeclared bit '" + op.name + "'");
      return {};
    }
    int64_t size = it->second;
    if (op.index >= 0) {
      if (size < 0 || op.index >= size) {
        fail(op.loc, "bit index out of range for '" + op.name + "'");
        return {};
      }
      return {{op.name, op.index}};
    }
    if (size < 0)
      return {{op.name, int64_t(0)}};
    std::vector<BitSlot> slots;
    for (int64_t i = 0; i < size; ++i)
      slots.emplace_back(op.name, i);
    return slots;
  }

  /// Bits read before assignment are 0 (OpenQASM initialization); a
  /// constant materializes lazily at the read position.
  ValueId readBit(const BitSlot& slot, OpBuilder& b, Location loc) {
    auto it = bitValues.find(slot);
    if (it != bitValues.end() && it->second.valid())
      return it->second;
    OpId zero = b.create("cf.const", {}, {TypeDesc::bit()},
                         {{"value", AttributeValue(int64_t(0))}}, loc);
    b.nameResult(zero, 0, slot.first);
    bitValues[slot] = m.op(zero).results[0];
    return bitValues[slot];
  }

  //===--------------------------------------------------------------------===//
  // Gate applications
  //===--------------------------------------------------------------------===//

  struct GateBodyScope {
    std::map<std::string, ValueId> qubitArgs;
    size_t paramCount = 0;
  };

  void lowerGateApp(const GateApp& app, Location loc, OpBuilder& b,
                    const GateBodyScope* bodyScope) {
    std::vector<Modifier> modifiers = app.modifiers;
    auto spelling = spellGate(app.gate);
    bool isCustom = false;
    if (!spelling) {
      if (gateDefs.count(app.gate)) {
        isCustom = true;
      } else {
        fail(loc, "unknown gate '" + app.gate + "'");
        return;
      }
    }
    if (spelling)
      for (int i = 0; i < spelling->impliedControls; ++i)
        modifiers.push_back({Modifier::Kind::Ctrl, 1});

    // Angle arity.
    size_t expectedAngles =
        isCustom ? gateDefs[app.gate].params : gateInfo(spelling->kind).angles;
    if (app.angles.size() != expectedAngles) {
      fail(loc, "gate '" + app.gate + "' expects " +
                    std::to_string(expectedAngles) + " angle parameter(s)");
      return;
    }
    size_t baseArity =
        isCustom ? gateDefs[app.gate].qubits : gateInfo(spelling->kind).targets;
    size_t controls = 0;
    for (const Modifier& mod : modifiers)
      if (mod.kind == Modifier::Kind::Ctrl ||
          mod.kind == Modifier::Kind::NegCtrl)
        ++controls;
    if (app.qubits.size() != controls + baseArity) {
      fail(loc, "gate '" + app.gate + "' with its modifiers expects " +
                    std::to_string(controls + baseArity) + " qubit(s), got " +
                    std::to_string(app.qubits.size()));
      return;
    }

    // Resolve operands; whole registers broadcast slotwise.
    std::vector<std::vector<ValueId>> resolved;
    size_t broadcast = 1;
    for (const Operand& q : app.qubits) {
      std::vector<ValueId> refs =
          bodyScope ? resolveBodyQubit(q, *bodyScope) : resolveQubits(q);
      if (failed)
        return;
      if (refs.size() > 1) {
        if (broadcast != 1 && refs.size() != broadcast) {
          fail(q.loc, "broadcast register sizes disagree");
          return;
        }
        broadcast = refs.size();
      }
      resolved.push_back(std::move(refs));
    }

    for (size_t slot = 0; slot < broadcast; ++slot) {
      std::vector<ValueId> qubits;
      for (const auto& refs : resolved)
        qubits.push_back(refs.size() == 1 ? refs[0] : refs[slot]);
      buildModified(modifiers, 0, app, qubits, loc, b, bodyScope);
      if (failed)
        return;
    }
  }

  std::vector<ValueId> resolveBodyQubit(const Operand& op,
                                        const GateBodyScope& scope) {
    if (op.index >= 0) {
      fail(op.loc, "gate bodies cannot index registers");
      return {};
    }
    auto it = scope.qubitArgs.find(op.name);
    if (it == scope.qubitArgs.end()) {
      fail(op.loc, "unknown qubit parameter '" + op.name + "'");
      return {};
    }
    return {it->second};
  }

  void buildModified(const std::vector<Modifier>& modifiers, size_t depth,
                     const GateApp& app, std::vector<ValueId> qubits,
                     Location loc, OpBuilder& b,
                     const GateBodyScope* bodyScope) {
    if (depth == modifiers.size()) {
      buildBaseGate(app, qubits, loc, b, bodyScope);
      return;
    }
    const Modifier& mod = modifiers[depth];
    if (mod.kind == Modifier::Kind::Ctrl ||
        mod.kind == Modifier::Kind::NegCtrl) {
      ValueId control = qubits.front();
      qubits.erase(qubits.begin());
      AttributeValue::Array polarity{
          AttributeValue(mod.kind == Modifier::Kind::Ctrl)};
      OpId op = b.create("qc.ctrl", {control},
                         {{"polarity", AttributeValue(std::move(polarity))}},
                         loc);
      OpBuilder body(m, m.region(m.op(op).regions[0]).front());
      buildModified(modifiers, depth + 1, app, std::move(qubits), loc, body,
                    bodyScope);
      return;
    }
    AttrMap attrs;
    std::string opcode = "qc.inv";
    if (mod.kind == Modifier::Kind::Pow) {
      opcode = "qc.pow";
      attrs["exponent"] = AttributeValue(mod.exponent);
    }
    OpId op = b.create(opcode, {}, std::move(attrs), loc);
    OpBuilder body(m, m.region(m.op(op).regions[0]).front());
    buildModified(modifiers, depth + 1, app, std::move(qubits), loc, body,
                  bodyScope);
  }

  void buildBaseGate(const GateApp& app, const std::vector<ValueId>& qubits,
                     Location loc, OpBuilder& b,
                     const GateBodyScope* bodyScope) {
    auto spelling = spellGate(app.gate);
    if (spelling) {
      AttrMap attrs;
      const auto& names = angleAttrNames(spelling->kind);
      for (size_t i = 0; i < names.size(); ++i) {
        const Angle& angle = app.angles[i];
        if (angle.isParam())
          attrs[names[i]] =
              AttributeValue("$" + std::to_string(angle.paramIndex));
        else
          attrs[names[i]] = AttributeValue(angle.value);
      }
      b.create(gateOpcode(Dialect::QC, spelling->kind), qubits,
               std::move(attrs), loc);
      return;
    }
    // Custom gate call: angles become f64 constants at the call site.
    if (bodyScope && !app.angles.empty()) {
      fail(loc, "unsupported feature: parameterized gate call inside a gate "
                "definition");
      return;
    }
    std::vector<ValueId> operands;
    for (const Angle& angle : app.angles) {
      if (angle.isParam()) {
        fail(loc, "unsupported feature: forwarding gate parameters to "
                  "another gate call");
        return;
      }
      OpId c = b.create("cf.const", {}, {TypeDesc::f64()},
                        {{"value", AttributeValue(angle.value)}}, loc);
      operands.push_back(m.op(c).results[0]);
    }
    operands.insert(operands.end(), qubits.begin(), qubits.end());
    b.create("qc.call_gate", operands,
             {{"callee", AttributeValue(app.gate)}}, loc);
  }

  //===--------------------------------------------------------------------===//
  // Classical statements and control flow
  //===--------------------------------------------------------------------===//

  void lowerMeasure(const MeasureStmt& stmt, Location loc, OpBuilder& b) {
    auto qubits = resolveQubits(stmt.qubit);
    auto slots = resolveBitSlots(stmt.target);
    if (failed)
      return;
    if (qubits.size() != slots.size()) {
      fail(loc, "measurement source and target sizes disagree");
      return;
    }
    for (size_t i = 0; i < qubits.size(); ++i) {
      OpId op = b.create("qc.measure", {qubits[i]}, AttrMap{}, loc);
      std::string name = slots[i].first;
      if (bitSizes[slots[i].first] >= 0)
        name += std::to_string(slots[i].second);
      b.nameResult(op, 0, name);
      bitValues[slots[i]] = m.op(op).results[0];
    }
  }

  /// Bits (name, slot) assigned anywhere in the statement list.
  void collectAssignedBits(const StmtList& stmts, std::set<BitSlot>& out) {
    for (const Stmt& stmt : stmts) {
      if (const auto* ms = std::get_if<MeasureStmt>(&stmt.node)) {
        for (const BitSlot& slot : resolveBitSlots(ms->target))
          out.insert(slot);
      } else if (const auto* is = std::get_if<IfStmt>(&stmt.node)) {
        collectAssignedBits(is->thenBody, out);
        collectAssignedBits(is->elseBody, out);
      } else if (const auto* fs = std::get_if<ForStmt>(&stmt.node)) {
        collectAssignedBits(fs->body, out);
      } else if (const auto* ws = std::get_if<WhileStmt>(&stmt.node)) {
        collectAssignedBits(ws->body, out);
      }
    }
  }

  ValueId readCondition(const Operand& cond, OpBuilder& b) {
    auto slots = resolveBitSlots(cond);
    if (failed)
      return ValueId{};
    if (slots.size() != 1) {
      fail(cond.loc, "conditions must read a single bit");
      return ValueId{};
    }
    return readBit(slots[0], b, cond.loc);
  }

  void lowerIf(const IfStmt& stmt, Location loc, OpBuilder& b) {
    ValueId cond = readCondition(stmt.cond, b);
    if (failed)
      return;
    std::set<BitSlot> assignedSet;
    collectAssignedBits(stmt.thenBody, assignedSet);
    collectAssignedBits(stmt.elseBody, assignedSet);
    if (failed)
      return;
    std::vector<BitSlot> assigned(assignedSet.begin(), assignedSet.end());

    std::vector<ValueId> operands{cond};
    for (const BitSlot& slot : assigned)
      operands.push_back(readBit(slot, b, loc));
    OpId op = b.create("cf.if", operands, AttrMap{}, loc);

    // `if (c == 0)` swaps the regions.
    const StmtList* bodies[2] = {&stmt.thenBody, &stmt.elseBody};
    if (stmt.negated)
      std::swap(bodies[0], bodies[1]);
    for (int r = 0; r < 2; ++r)
      lowerRegion(*bodies[r], m.op(op).regions[size_t(r)], assigned, loc);

    for (size_t i = 0; i < assigned.size(); ++i)
      bitValues[assigned[i]] = m.op(op).results[i];
  }

  /// Lowers a statement list into a region whose block args carry the
  /// assigned bits, ending with a yield of their final values.
  void lowerRegion(const StmtList& body, RegionId region,
                   const std::vector<BitSlot>& assigned, Location loc) {
    BlockId block = m.region(region).front();
    auto savedBits = bitValues;
    for (const BitSlot& slot : assigned) {
      std::string name = slot.first;
      if (bitSizes[slot.first] >= 0)
        name += std::to_string(slot.second);
      bitValues[slot] = m.addBlockArg(block, TypeDesc::bit(), name);
    }
    OpBuilder b(m, block);
    for (const Stmt& stmt : body) {
      lowerStmt(stmt, b);
      if (failed)
        return;
    }
    std::vector<ValueId> finals;
    for (const BitSlot& slot : assigned)
      finals.push_back(readBit(slot, b, loc));
    b.create("cf.yield", finals, AttrMap{}, loc);
    bitValues = std::move(savedBits);
  }

  ValueId constIndex(int64_t value, OpBuilder& b, Location loc) {
    OpId c = b.create("cf.const", {}, {TypeDesc::index()},
                      {{"value", AttributeValue(value)}}, loc);
    return m.op(c).results[0];
  }

  ValueId resolveBound(const ForBound& bound, OpBuilder& b, Location loc) {
    if (!bound.isVar())
      return constIndex(bound.value, b, loc);
    auto it = loopVars.find(bound.var);
    if (it == loopVars.end()) {
      fail(loc, "unknown loop variable '" + bound.var + "'");
      return ValueId{};
    }
    return it->second;
  }

  void lowerFor(const ForStmt& stmt, Location loc, OpBuilder& b) {
    ValueId lb = resolveBound(stmt.lb, b, loc);
    ValueId ub = resolveBound(stmt.ub, b, loc);
    ValueId step = resolveBound(stmt.step, b, loc);
    if (failed)
      return;
    std::set<BitSlot> assignedSet;
    collectAssignedBits(stmt.body, assignedSet);
    if (failed)
      return;
    std::vector<BitSlot> assigned(assignedSet.begin(), assignedSet.end());

    std::vector<ValueId> operands{lb, ub, step};
    for (const BitSlot& slot : assigned)
      operands.push_back(readBit(slot, b, loc));
    OpId op = b.create("cf.for", operands, AttrMap{}, loc);

    BlockId block = m.region(m.op(op).regions[0]).front();
    ValueId iv = m.addBlockArg(block, TypeDesc::index(), stmt.var);
    auto savedBits = bitValues;
    auto savedLoopVar = loopVars;
    loopVars[stmt.var] = iv;
    for (const BitSlot& slot : assigned) {
      std::string name = slot.first;
      if (bitSizes[slot.first] >= 0)
        name += std::to_string(slot.second);
      bitValues[slot] = m.addBlockArg(block, TypeDesc::bit(), name);
    }
    OpBuilder body(m, block);
    for (const Stmt& inner : stmt.body) {
      lowerStmt(inner, body);
      if (failed)
        return;
    }
    std::vector<ValueId> finals;
    for (const BitSlot& slot : assigned)
      finals.push_back(readBit(slot, body, loc));
    body.create("cf.yield", finals, AttrMap{}, loc);
    bitValues = std::move(savedBits);
    loopVars = std::move(savedLoopVar);

    for (size_t i = 0; i < assigned.size(); ++i)
      bitValues[assigned[i]] = m.op(op).results[i];
  }

  /// i1 negation without a dedicated op: cf.if(c, true){yield false}{pass}.
  ValueId lowerNot(ValueId bit, OpBuilder& b, Location loc) {
    OpId trueConst = b.create("cf.const", {}, {TypeDesc::bit()},
                              {{"value", AttributeValue(int64_t(1))}}, loc);
    OpId op =
        b.create("cf.if", {bit, m.op(trueConst).results[0]}, AttrMap{}, loc);
    BlockId thenBlock = m.region(m.op(op).regions[0]).front();
    m.addBlockArg(thenBlock, TypeDesc::bit());
    OpBuilder thenB(m, thenBlock);
    OpId falseConst = thenB.create("cf.const", {}, {TypeDesc::bit()},
                                   {{"value", AttributeValue(int64_t(0))}},
                                   loc);
    thenB.create("cf.yield", {m.op(falseConst).results[0]}, AttrMap{}, loc);
    BlockId elseBlock = m.region(m.op(op).regions[1]).front();
    ValueId arg = m.addBlockArg(elseBlock, TypeDesc::bit());
    OpBuilder elseB(m, elseBlock);
    elseB.create("cf.yield", {arg}, AttrMap{}, loc);
    return m.op(op).results[0];
  }

  void lowerWhile(const WhileStmt& stmt, Location loc, OpBuilder& b) {
    std::set<BitSlot> assignedSet;
    collectAssignedBits(stmt.body, assignedSet);
    auto condSlots = resolveBitSlots(stmt.cond);
    if (failed)
      return;
    if (condSlots.size() != 1) {
      fail(stmt.cond.loc, "conditions must read a single bit");
      return;
    }
    assignedSet.insert(condSlots[0]);
    std::vector<BitSlot> iters(assignedSet.begin(), assignedSet.end());

    std::vector<ValueId> operands;
    for (const BitSlot& slot : iters)
      operands.push_back(readBit(slot, b, loc));
    OpId op = b.create("cf.while", operands, AttrMap{}, loc);

    // Condition region: forward the iter values, yielding the cond bit.
    {
      BlockId block = m.region(m.op(op).regions[0]).front();
      auto savedBits = bitValues;
      for (const BitSlot& slot : iters)
        bitValues[slot] = m.addBlockArg(block, TypeDesc::bit(),
                                        slot.first);
      OpBuilder condB(m, block);
      ValueId bit = readBit(condSlots[0], condB, stmt.cond.loc);
      if (stmt.negated)
        bit = lowerNot(bit, condB, stmt.cond.loc);
      std::vector<ValueId> yields{bit};
      for (const BitSlot& slot : iters)
        yields.push_back(readBit(slot, condB, loc));
      condB.create("cf.yield", yields, AttrMap{}, loc);
      bitValues = std::move(savedBits);
    }
    lowerRegion(stmt.body, m.op(op).regions[1], iters, loc);

    for (size_t i = 0; i < iters.size(); ++i)
      bitValues[iters[i]] = m.op(op).results[i];
  }

  void lowerGateDef(const GateDefStmt& def, Location loc, OpBuilder& b) {
    if (gateDefs.count(def.name) || spellGate(def.name)) {
      fail(loc, "redefinition of gate '" + def.name + "'");
      return;
    }
    OpId op = b.create("qc.gate_def", {},
                       {{"name", AttributeValue(def.name)}}, loc);
    BlockId block = m.region(m.op(op).regions[0]).front();
    GateBodyScope scope;
    scope.paramCount = def.params.size();
    for (const std::string& param : def.params)
      m.addBlockArg(block, TypeDesc::f64(), param);
    for (const std::string& qubit : def.qubits)
      scope.qubitArgs[qubit] =
          m.addBlockArg(block, TypeDesc::qubitRef(), qubit);
    // Register before lowering the body so self-calls are reported as
    // recursion by the verifier rather than as unknown gates.
    gateDefs[def.name] = {def.params.size(), def.qubits.size()};

    OpBuilder body(m, block);
    for (const Stmt& stmt : def.body) {
      if (const auto* app = std::get_if<GateApp>(&stmt.node)) {
        if (app->gate == def.name) {
          fail(stmt.loc, "recursive gate definition '" + def.name + "'");
          return;
        }
        lowerGateApp(*app, stmt.loc, body, &scope);
      } else {
        fail(stmt.loc, "gate bodies may contain only gate applications");
      }
      if (failed)
        return;
    }
  }

  void lowerStmt(const Stmt& stmt, OpBuilder& b) {
    if (failed)
      return;
    if (const auto* decl = std::get_if<DeclStmt>(&stmt.node)) {
      if (b.insertionBlock() != m.entryBlock()) {
        fail(stmt.loc, "declarations are only allowed at the top level");
        return;
      }
      lowerDecl(*decl, stmt.loc, b);
    } else if (const auto* app = std::get_if<GateApp>(&stmt.node)) {
      lowerGateApp(*app, stmt.loc, b, nullptr);
    } else if (const auto* ms = std::get_if<MeasureStmt>(&stmt.node)) {
      lowerMeasure(*ms, stmt.loc, b);
    } else if (const auto* rs = std::get_if<ResetStmt>(&stmt.node)) {
      auto qubits = resolveQubits(rs->qubit);
      for (ValueId q : qubits)
        b.create("qc.reset", {q}, AttrMap{}, stmt.loc);
    } else if (const auto* is = std::get_if<IfStmt>(&stmt.node)) {
      lowerIf(*is, stmt.loc, b);
    } else if (const auto* fs = std::get_if<ForStmt>(&stmt.node)) {
      lowerFor(*fs, stmt.loc, b);
    } else if (const auto* ws = std::get_if<WhileStmt>(&stmt.node)) {
      lowerWhile(*ws, stmt.loc, b);
    } else if (const auto* gd = std::get_if<GateDefStmt>(&stmt.node)) {
      if (b.insertionBlock() != m.entryBlock()) {
        fail(stmt.loc, "gate definitions are only allowed at the top level");
        return;
      }
      lowerGateDef(*gd, stmt.loc, b);
    }
  }

  std::optional<IrModule> run() {
    OpBuilder b(m, m.entryBlock());
    for (const Stmt& stmt : program.statements) {
      lowerStmt(stmt, b);
      if (failed)
        return std::nullopt;
    }
    DiagnosticList vd = verify(m);
    if (vd.hasErrors()) {
      diags.append(vd);
      return std::nullopt;
    }
    return std::move(m);
  }
};

} // namespace

std::optional<IrModule> lowerToQc(const Program& program,
                                  DiagnosticList& diags) {
  Lowerer lowerer(program, diags);
  return lowerer.run();
}

} // namespace qcc::qasm
