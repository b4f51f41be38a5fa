//===-- QC.cpp ------------------------------------------------------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "qcc/dialect/QC.hpp"

#include <set>
#include <string>

namespace qcc {

OpId modifierBodyOp(const IrModule& m, OpId modifier) {
  const OperationNode& node = m.op(modifier);
  const OpcodeInfo& info = getOpcode(node.opcode);
  if (!info.isModifier())
    throw IrError("'" + node.opcode + "' is not a modifier");
  BlockId body = m.region(node.regions[0]).front();
  const auto& ops = m.block(body).ops;
  if (info.dialect == Dialect::QC) {
    if (ops.size() != 1)
      throw IrError("'" + node.opcode + "' body must hold exactly one op");
    return ops[0];
  }
  if (ops.size() != 2 || m.op(ops[1]).opcode != "cf.yield")
    throw IrError("'" + node.opcode +
                  "' body must hold one unitary op and a yield");
  return ops[0];
}

bool isUnitaryOp(const IrModule& m, OpId op) {
  const OpcodeInfo* info = lookupOpcode(m.op(op).opcode);
  return info && info->isUnitary();
}

int controlCountOf(const IrModule& m, OpId ctrlOp) {
  return static_cast<int>(m.op(ctrlOp).attr("polarity")->asArray().size());
}

bool hasDialectOps(const IrModule& m, Dialect d) {
  bool found = false;
  m.walk([&](OpId op) {
    const std::string& opcode = m.op(op).opcode;
    if (opcode == "qc.gate_def")
      return true; // definitions do not count as executable code
    const OpcodeInfo* info = lookupOpcode(opcode);
    if (info && info->dialect == d) {
      // Ops inside gate_def bodies are skipped by checking ancestry lazily:
      // gate_def is only legal in the entry block, and its body ops are
      // reached through the walk; filter them out here.
      BlockId b = m.op(op).parent;
      bool inGateDef = false;
      while (b.valid()) {
        RegionId r = m.block(b).parentRegion;
        OpId parent = m.region(r).parentOp;
        if (!parent.valid())
          break;
        if (m.op(parent).opcode == "qc.gate_def") {
          inGateDef = true;
          break;
        }
        b = m.op(parent).parent;
      }
      if (!inGateDef) {
        found = true;
        return false;
      }
    }
    return true;
  });
  return found;
}

//===----------------------------------------------------------------------===//
// Verification hooks
//===----------------------------------------------------------------------===//

namespace {

struct QcVerifier {
  const IrModule& m;
  DiagnosticList& diags;

  void error(OpId op, const std::string& msg) {
    diags.error(msg, m.op(op).loc);
  }

  void checkExtract(OpId op) {
    const OperationNode& node = m.op(op);
    const AttributeValue* index = node.attr("index");
    if (!index || !index->isInt())
      return; // builder-level check reports this
    TypeDesc reg = m.typeOf(node.operands[0]);
    if (reg.kind != TypeKind::QubitReg)
      return;
    int64_t i = index->asInt();
    if (i < 0 || i >= int64_t(reg.param))
      error(op, "extract index " + std::to_string(i) +
                    " is out of range for !qc.qreg<" +
                    std::to_string(reg.param) + ">");
  }

  void checkModifierBody(OpId op) {
    const OperationNode& node = m.op(op);
    const OpcodeInfo& info = getOpcode(node.opcode);
    BlockId body = m.region(node.regions[0]).front();
    const auto& ops = m.block(body).ops;
    if (info.dialect == Dialect::QC) {
      if (!m.block(body).args.empty())
        error(op, "'" + node.opcode + "' body takes no block arguments");
      if (ops.size() != 1 || !isUnitaryOp(m, ops[0])) {
        error(op, "'" + node.opcode +
                      "' body must contain exactly one unitary operation");
        return;
      }
    } else {
      if (ops.size() != 2 || !isUnitaryOp(m, ops[0]) ||
          m.op(ops[1]).opcode != "cf.yield") {
        error(op, "'" + node.opcode +
                      "' body must contain one unitary operation and a "
                      "yield of its results");
        return;
      }
      const auto& yieldOperands = m.op(ops[1]).operands;
      if (yieldOperands != m.op(ops[0]).results)
        error(op, "'" + node.opcode +
                      "' body yield must forward the inner op's results");
      size_t controls = node.attr("polarity")
                            ? node.attr("polarity")->asArray().size()
                            : 0;
      if (node.opcode != "qco.ctrl")
        controls = 0;
      if (m.block(body).args.size() != node.operands.size() - controls)
        error(op, "'" + node.opcode +
                      "' body must take one block argument per target");
    }
  }

  void checkDealloc(OpId op) {
    ValueId operand = m.op(op).operands[0];
    const ValueInfo& info = m.value(operand);
    if (info.isBlockArg()) {
      error(op, "deallocated qubit does not originate from an alloc or "
                "extract");
      return;
    }
    const std::string& def = m.op(info.defOp).opcode;
    if (def != "qc.alloc" && def != "qc.extract")
      error(op, "deallocated qubit does not originate from an alloc or "
                "extract");
  }

  void checkDistinctWires(OpId op) {
    // Only outermost unitary ops: nested bodies are covered transitively.
    OpId parentOp = m.region(m.block(m.op(op).parent).parentRegion).parentOp;
    if (parentOp.valid()) {
      const OpcodeInfo* parentInfo = lookupOpcode(m.op(parentOp).opcode);
      if (parentInfo && parentInfo->isModifier())
        return;
    }
    std::vector<ValueId> wires;
    try {
      wires = unitaryWiresForCheck(op);
    } catch (const IrError&) {
      return; // malformed body reported elsewhere
    }
    std::set<uint32_t> seen;
    for (ValueId v : wires)
      if (!seen.insert(v.idx).second) {
        error(op, "gate operands must be pairwise-distinct qubits");
        return;
      }
  }

  std::vector<ValueId> unitaryWiresForCheck(OpId op) {
    const OperationNode& node = m.op(op);
    const OpcodeInfo& info = getOpcode(node.opcode);
    if (info.isModifier() && info.dialect == Dialect::QC) {
      std::vector<ValueId> out = node.operands;
      auto inner = unitaryWiresForCheck(modifierBodyOp(m, op));
      out.insert(out.end(), inner.begin(), inner.end());
      return out;
    }
    std::vector<ValueId> out;
    for (ValueId v : node.operands)
      if (m.typeOf(v).isAnyQubit())
        out.push_back(v);
    return out;
  }

  void checkGateDef(OpId op) {
    const OperationNode& node = m.op(op);
    if (m.op(op).parent != m.entryBlock()) {
      error(op, "'qc.gate_def' is only allowed at module scope");
      return;
    }
    BlockId body = m.region(node.regions[0]).front();
    size_t params = 0;
    bool seenQubit = false;
    std::set<uint32_t> ownArgs;
    for (ValueId arg : m.block(body).args) {
      TypeDesc t = m.typeOf(arg);
      ownArgs.insert(arg.idx);
      if (t.kind == TypeKind::F64) {
        if (seenQubit)
          error(op, "gate parameters must precede qubit parameters");
        ++params;
      } else if (t.isQubitRef()) {
        seenQubit = true;
      } else {
        error(op, "gate definition arguments must be f64 or !qc.qubit");
      }
    }
    for (OpId inner : m.block(body).ops) {
      if (!isUnitaryOp(m, inner)) {
        error(inner, "gate definition bodies may contain only unitary "
                     "operations");
        continue;
      }
      checkBodyOp(inner, params, ownArgs, body);
    }
  }

  void checkBodyOp(OpId op, size_t params, const std::set<uint32_t>& ownArgs,
                   BlockId body) {
    const OperationNode& node = m.op(op);
    for (ValueId v : node.operands)
      if (m.typeOf(v).isQubitRef() && !ownArgs.count(v.idx))
        error(op, "gate definition bodies may only use their declared qubit "
                  "parameters");
    const OpcodeInfo& info = getOpcode(node.opcode);
    if (info.isStandardGate()) {
      for (const auto& name : angleAttrNames(info.gate)) {
        const AttributeValue* attr = node.attr(name);
        if (attr && attr->isString()) {
          const std::string& ref = attr->asString();
          bool ok = ref.size() > 1 && ref[0] == '$';
          size_t index = 0;
          if (ok) {
            try {
              index = std::stoul(ref.substr(1));
            } catch (...) {
              ok = false;
            }
          }
          if (!ok || index >= params)
            error(op, "invalid gate-parameter reference '" + ref + "'");
        }
      }
    }
    if (info.isModifier() && !node.regions.empty()) {
      BlockId inner = m.region(node.regions[0]).front();
      for (OpId innerOp : m.block(inner).ops)
        checkBodyOp(innerOp, params, ownArgs, body);
    }
  }

  void checkCall(OpId op) {
    const OperationNode& node = m.op(op);
    const std::string& callee = node.attr("callee")->asString();
    OpId def = m.lookupGateDef(callee);
    if (!def.valid()) {
      error(op, "call of undefined gate '" + callee + "'");
      return;
    }
    size_t angles = 0;
    size_t qubits = 0;
    for (ValueId v : node.operands) {
      if (m.typeOf(v).kind == TypeKind::F64)
        ++angles;
      else
        ++qubits;
    }
    size_t defAngles = 0;
    size_t defQubits = 0;
    BlockId body = m.region(m.op(def).regions[0]).front();
    for (ValueId arg : m.block(body).args) {
      if (m.typeOf(arg).kind == TypeKind::F64)
        ++defAngles;
      else
        ++defQubits;
    }
    if (angles != defAngles || qubits != defQubits)
      error(op, "call of gate '" + callee + "' expects " +
                    std::to_string(defAngles) + " parameter(s) and " +
                    std::to_string(defQubits) + " qubit(s)");
  }

  void checkRecursion() {
    // DFS over the gate call graph.
    std::set<std::string> visiting;
    std::set<std::string> done;
    for (OpId op : m.block(m.entryBlock()).ops) {
      if (m.op(op).opcode != "qc.gate_def")
        continue;
      const AttributeValue* name = m.op(op).attr("name");
      if (name && visitDef(name->asString(), visiting, done))
        error(op, "recursive gate definition '" + name->asString() + "'");
    }
  }

  bool visitDef(const std::string& name, std::set<std::string>& visiting,
                std::set<std::string>& done) {
    if (done.count(name))
      return false;
    if (!visiting.insert(name).second)
      return true;
    OpId def = m.lookupGateDef(name);
    bool cyc = false;
    if (def.valid()) {
      m.walk(m.op(def).regions[0], [&](OpId inner) {
        const OperationNode& node = m.op(inner);
        if (getOpcode(node.opcode).kind == OpKind::CallGate)
          cyc = cyc || visitDef(node.attr("callee")->asString(), visiting,
                                done);
        return true;
      });
    }
    visiting.erase(name);
    done.insert(name);
    return cyc;
  }

  void run() {
    m.walk([&](OpId op) {
      const OpcodeInfo* info = lookupOpcode(m.op(op).opcode);
      if (!info)
        return true;
      switch (info->kind) {
      case OpKind::Extract:
        checkExtract(op);
        break;
      case OpKind::Ctrl:
      case OpKind::Inv:
      case OpKind::Pow:
        checkModifierBody(op);
        checkDistinctWires(op);
        break;
      case OpKind::Dealloc:
        if (info->dialect == Dialect::QC)
          checkDealloc(op);
        break;
      case OpKind::Gate:
      case OpKind::CallGate:
        if (info->kind == OpKind::CallGate)
          checkCall(op);
        checkDistinctWires(op);
        break;
      case OpKind::GateDef:
        checkGateDef(op);
        break;
      default:
        break;
      }
      return true;
    });
    checkRecursion();
  }
};

} // namespace

void qcVerifyHooks(const IrModule& m, DiagnosticList& diags) {
  QcVerifier{m, diags}.run();
}

} // namespace qcc
