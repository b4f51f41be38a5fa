//===-- QasmEmitter.cpp ---------------------------------------------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "qcc/emit/QasmEmitter.hpp"

#include "qcc/dialect/QC.hpp"
#include "qcc/ir/Registry.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace qcc {

namespace {

/// Union-find over classical i1 values: measures, threaded iter args,
/// yields and results of the same slot collapse to one program variable.
struct BitClasses {
  std::map<uint32_t, uint32_t> parent;

  uint32_t find(uint32_t v) {
    auto it = parent.find(v);
    if (it == parent.end()) {
      parent[v] = v;
      return v;
    }
    if (it->second == v)
      return v;
    return parent[v] = find(it->second);
  }

  void unite(uint32_t a, uint32_t b) { parent[find(a)] = find(b); }
};

struct QasmEmitter {
  const IrModule& m;
  DiagnosticList& diags;
  std::ostringstream body;
  bool failed = false;

  std::map<uint32_t, int> qubitOf; // ref value -> register slot
  std::map<uint32_t, int> regBase; // register value -> first slot
  int totalQubits = 0;

  BitClasses bits;
  std::map<uint32_t, int> bitIndexOfClass; // class root -> c[] index
  int totalBits = 0;

  explicit QasmEmitter(const IrModule& mod, DiagnosticList& d)
      : m(mod), diags(d) {}

  void fail(OpId op, const std::string& msg) {
    if (!failed)
      diags.error(msg, m.op(op).loc);
    failed = true;
  }

  //===--------------------------------------------------------------------===//
  // Analysis: qubit slots and bit classes
  //===--------------------------------------------------------------------===//

  void assignQubits() {
    for (OpId op : m.block(m.entryBlock()).ops) {
      const OperationNode& node = m.op(op);
      if (node.opcode == "qc.alloc") {
        qubitOf[node.results[0].idx] = totalQubits++;
      } else if (node.opcode == "qc.alloc_reg") {
        regBase[node.results[0].idx] = totalQubits;
        totalQubits += int(node.attr("size")->asInt());
      }
    }
    // Extracts may sit inside regions; registers are always top-level.
    m.walk([&](OpId op) {
      const OperationNode& node = m.op(op);
      if (node.opcode == "qc.extract" && regBase.count(node.operands[0].idx))
        qubitOf[node.results[0].idx] = regBase.at(node.operands[0].idx) +
                                       int(node.attr("index")->asInt());
      return true;
    });
  }

  void classifyBits() {
    m.walk([&](OpId op) {
      const OperationNode& node = m.op(op);
      const OpcodeInfo* info = lookupOpcode(node.opcode);
      if (!info)
        return true;
      if (!info->isControlFlow())
        return true;
      // Iter slot k: operand, both regions' args, all yields, result.
      size_t iterOffset = info->kind == OpKind::For   ? 3
                          : info->kind == OpKind::If  ? 1
                                                      : 0;
      size_t argOffset = info->kind == OpKind::For ? 1 : 0;
      for (size_t k = 0; k + iterOffset < node.operands.size(); ++k) {
        ValueId operand = node.operands[k + iterOffset];
        if (m.typeOf(operand) != TypeDesc::bit())
          continue;
        bits.unite(operand.idx, node.results[k].idx);
        for (size_t r = 0; r < node.regions.size(); ++r) {
          BlockId block = m.region(node.regions[r]).front();
          bits.unite(operand.idx, m.block(block).args[k + argOffset].idx);
          OpId yield = m.block(block).ops.back();
          size_t yieldOffset =
              info->kind == OpKind::While && r == 0 ? 1 : 0;
          bits.unite(operand.idx,
                     m.op(yield).operands[k + yieldOffset].idx);
        }
      }
      return true;
    });

    // Index assignment: a topological order consistent with every iter
    // list, so reparsing (which sorts threaded bits by index) reproduces
    // the original operand order. Ties break by first appearance.
    std::vector<uint32_t> appearance;
    std::map<uint32_t, std::set<uint32_t>> after; // edges a -> b (a before b)
    auto note = [&](ValueId v) {
      uint32_t root = bits.find(v.idx);
      if (std::find(appearance.begin(), appearance.end(), root) ==
          appearance.end())
        appearance.push_back(root);
      return root;
    };
    m.walk([&](OpId op) {
      const OperationNode& node = m.op(op);
      const OpcodeInfo* info = lookupOpcode(node.opcode);
      if (!info)
        return true;
      if (info->kind == OpKind::Measure)
        note(node.results[0]);
      if (info->kind == OpKind::Const &&
          m.typeOf(node.results[0]) == TypeDesc::bit())
        note(node.results[0]);
      if (info->isControlFlow()) {
        uint32_t prev = 0;
        bool havePrev = false;
        for (ValueId operand : node.operands) {
          if (m.typeOf(operand) != TypeDesc::bit())
            continue;
          uint32_t root = note(operand);
          if (havePrev && prev != root)
            after[prev].insert(root);
          prev = root;
          havePrev = true;
        }
      }
      return true;
    });
    // Kahn's algorithm over the appearance list.
    std::vector<uint32_t> order;
    std::set<uint32_t> placed;
    while (order.size() < appearance.size()) {
      bool progressed = false;
      for (uint32_t cand : appearance) {
        if (placed.count(cand))
          continue;
        bool ready = true;
        for (const auto& [from, tos] : after)
          if (!placed.count(from) && tos.count(cand) && from != cand)
            ready = false;
        if (ready) {
          order.push_back(cand);
          placed.insert(cand);
          progressed = true;
        }
      }
      if (!progressed) { // inconsistent threading order; fall back
        for (uint32_t cand : appearance)
          if (!placed.count(cand)) {
            order.push_back(cand);
            placed.insert(cand);
          }
      }
    }
    for (uint32_t root : order)
      bitIndexOfClass[root] = totalBits++;
  }

  std::string bitName(ValueId v) {
    uint32_t root = bits.find(v.idx);
    auto it = bitIndexOfClass.find(root);
    if (it == bitIndexOfClass.end()) {
      bitIndexOfClass[root] = totalBits++;
      it = bitIndexOfClass.find(root);
    }
    return "c[" + std::to_string(it->second) + "]";
  }

  std::string qubitName(ValueId v) {
    auto it = qubitOf.find(v.idx);
    if (it == qubitOf.end())
      return "q[?]";
    return "q[" + std::to_string(it->second) + "]";
  }

  //===--------------------------------------------------------------------===//
  // Gate-definition bodies
  //===--------------------------------------------------------------------===//

  std::string bodyQubitName(const IrModule& mod, ValueId v, OpId defOp) {
    const std::string& hint = mod.value(v).name;
    if (!hint.empty())
      return hint;
    BlockId body = mod.region(mod.op(defOp).regions[0]).front();
    const auto& args = mod.block(body).args;
    for (size_t i = 0; i < args.size(); ++i)
      if (args[i] == v)
        return "a" + std::to_string(i);
    return "a?";
  }

  //===--------------------------------------------------------------------===//
  // Emission
  //===--------------------------------------------------------------------===//

  std::string angleText(const AttributeValue& attr, OpId gateDef) {
    if (attr.isFloat())
      return formatFloat(attr.asFloat());
    // "$k" parameter reference inside a gate definition.
    const std::string& ref = attr.asString();
    size_t index = std::stoul(ref.substr(1));
    if (gateDef.valid()) {
      BlockId body = m.region(m.op(gateDef).regions[0]).front();
      ValueId arg = m.block(body).args[index];
      if (!m.value(arg).name.empty())
        return m.value(arg).name;
    }
    return "p" + std::to_string(index);
  }

  /// Flattens modifiers into a prefix and returns the base gate op.
  OpId modifierPrefix(OpId op, std::string& prefix,
                      std::vector<std::string>& controlNames, OpId gateDef) {
    const OperationNode& node = m.op(op);
    const OpcodeInfo& info = getOpcode(node.opcode);
    if (!info.isModifier())
      return op;
    if (info.kind == OpKind::Ctrl) {
      const auto& polarity = node.attr("polarity")->asArray();
      for (size_t i = 0; i < node.operands.size(); ++i) {
        prefix += polarity[i].asBool() ? "ctrl @ " : "negctrl @ ";
        controlNames.push_back(gateDef.valid()
                                   ? bodyQubitName(m, node.operands[i],
                                                   gateDef)
                                   : qubitName(node.operands[i]));
      }
    } else if (info.kind == OpKind::Inv) {
      prefix += "inv @ ";
    } else {
      prefix += "pow(" + std::to_string(node.attr("exponent")->asInt()) +
                ") @ ";
    }
    return modifierPrefix(modifierBodyOp(m, op), prefix, controlNames,
                          gateDef);
  }

  void emitUnitary(OpId op, int indent, OpId gateDef) {
    std::string prefix;
    std::vector<std::string> controls;
    OpId base = modifierPrefix(op, prefix, controls, gateDef);
    const OperationNode& node = m.op(base);
    const OpcodeInfo& info = getOpcode(node.opcode);

    std::string line = prefix;
    if (info.kind == OpKind::CallGate) {
      line += node.attr("callee")->asString();
      std::string angles;
      for (ValueId operand : node.operands) {
        if (m.typeOf(operand).kind != TypeKind::F64)
          continue;
        const ValueInfo& vi = m.value(operand);
        if (vi.isBlockArg() || m.op(vi.defOp).opcode != "cf.const") {
          fail(base, "gate-call angles must be constants");
          return;
        }
        if (!angles.empty())
          angles += ", ";
        angles += formatFloat(m.op(vi.defOp).attr("value")->asFloat());
      }
      if (!angles.empty())
        line += "(" + angles + ")";
    } else {
      line += gateInfo(info.gate).kind == GateKind::I
                  ? "id"
                  : gateInfo(info.gate).name;
      const auto& names = angleAttrNames(info.gate);
      if (!names.empty()) {
        line += "(";
        for (size_t i = 0; i < names.size(); ++i) {
          if (i)
            line += ", ";
          line += angleText(*node.attr(names[i]), gateDef);
        }
        line += ")";
      }
    }
    line += " ";
    bool first = true;
    for (const std::string& control : controls) {
      if (!first)
        line += ", ";
      first = false;
      line += control;
    }
    for (ValueId operand : node.operands) {
      if (!m.typeOf(operand).isQubitRef())
        continue;
      if (!first)
        line += ", ";
      first = false;
      line += gateDef.valid() ? bodyQubitName(m, operand, gateDef)
                              : qubitName(operand);
    }
    emitLine(line + ";", indent);
  }

  void emitLine(const std::string& text, int indent) {
    body << std::string(size_t(indent), ' ') << text << '\n';
  }

  /// Recognizes the frontend's negation idiom so `while (c == 0)` survives
  /// the round trip: cf.if(bit, trueConst) { const0; yield } { yield(arg) }.
  std::optional<ValueId> recognizeNot(OpId op) {
    const OperationNode& node = m.op(op);
    if (node.opcode != "cf.if" || node.operands.size() != 2 ||
        node.results.size() != 1)
      return std::nullopt;
    BlockId thenBlock = m.region(node.regions[0]).front();
    const auto& thenOps = m.block(thenBlock).ops;
    if (thenOps.size() != 2 || m.op(thenOps[0]).opcode != "cf.const")
      return std::nullopt;
    if (!regionYieldsArgs(node.regions[1]))
      return std::nullopt;
    return node.operands[0];
  }

  bool regionYieldsArgs(RegionId r) {
    BlockId block = m.region(r).front();
    const auto& ops = m.block(block).ops;
    if (ops.size() != 1 || m.op(ops[0]).opcode != "cf.yield")
      return false;
    return m.op(ops[0]).operands ==
           std::vector<ValueId>(m.block(block).args.begin(),
                                m.block(block).args.end());
  }

  bool regionIsEmptyPassthrough(RegionId r) { return regionYieldsArgs(r); }

  void emitBlock(BlockId block, int indent, OpId gateDef) {
    for (OpId op : m.block(block).ops) {
      if (failed)
        return;
      const OperationNode& node = m.op(op);
      const OpcodeInfo& info = getOpcode(node.opcode);
      switch (info.kind) {
      case OpKind::Alloc:
      case OpKind::AllocReg:
      case OpKind::Extract:
      case OpKind::Dealloc:
      case OpKind::Const:
      case OpKind::Yield:
        break; // implicit in the declarations / threading
      case OpKind::GateDef:
        emitGateDef(op);
        break;
      case OpKind::Gate:
      case OpKind::Ctrl:
      case OpKind::Inv:
      case OpKind::Pow:
      case OpKind::CallGate:
        emitUnitary(op, indent, gateDef);
        break;
      case OpKind::Measure:
        emitLine(bitName(node.results[0]) + " = measure " +
                     qubitName(node.operands[0]) + ";",
                 indent);
        break;
      case OpKind::Reset:
        emitLine("reset " + qubitName(node.operands[0]) + ";", indent);
        break;
      case OpKind::If: {
        // The negation helper prints as part of its consumer.
        if (recognizeNot(op))
          break;
        emitLine("if (" + bitName(node.operands[0]) + ") {", indent);
        emitBlock(m.region(node.regions[0]).front(), indent + 2, gateDef);
        if (!regionIsEmptyPassthrough(node.regions[1])) {
          emitLine("} else {", indent);
          emitBlock(m.region(node.regions[1]).front(), indent + 2, gateDef);
        }
        emitLine("}", indent);
        break;
      }
      case OpKind::For: {
        std::string lb = indexText(node.operands[0]);
        std::string ub = indexText(node.operands[1]);
        std::string step = indexText(node.operands[2]);
        BlockId bodyBlock = m.region(node.regions[0]).front();
        std::string var = m.value(m.block(bodyBlock).args[0]).name;
        if (var.empty())
          var = "i";
        std::string range =
            step == "1" ? lb + ":" + ub : lb + ":" + step + ":" + ub;
        emitLine("for uint " + var + " in [" + range + "] {", indent);
        emitBlock(bodyBlock, indent + 2, gateDef);
        emitLine("}", indent);
        break;
      }
      case OpKind::While: {
        BlockId cond = m.region(node.regions[0]).front();
        OpId yield = m.block(cond).ops.back();
        ValueId condBit = m.op(yield).operands[0];
        std::string text;
        const ValueInfo& info2 = m.value(condBit);
        if (!info2.isBlockArg() && m.op(info2.defOp).opcode == "cf.if") {
          if (auto inner = recognizeNot(info2.defOp)) {
            text = bitName(*inner) + " == 0";
          }
        }
        if (text.empty()) {
          // Plain condition: the yielded bit must be readable by name.
          text = bitName(condBit);
          // Any ops beyond the negation idiom cannot be expressed.
          for (OpId inner : m.block(cond).ops)
            if (m.op(inner).opcode != "cf.yield" &&
                m.op(inner).opcode != "cf.const" &&
                m.op(inner).opcode != "cf.if")
              fail(inner, "while condition region is not expressible in "
                          "OpenQASM");
        }
        emitLine("while (" + text + ") {", indent);
        emitBlock(m.region(node.regions[1]).front(), indent + 2, gateDef);
        emitLine("}", indent);
        break;
      }
      }
    }
  }

  std::string indexText(ValueId v) {
    const ValueInfo& info = m.value(v);
    if (info.isBlockArg())
      return info.name.empty() ? "i" : info.name;
    if (m.op(info.defOp).opcode == "cf.const")
      return std::to_string(m.op(info.defOp).attr("value")->asInt());
    return "?";
  }

  void emitGateDef(OpId op) {
    const OperationNode& node = m.op(op);
    BlockId block = m.region(node.regions[0]).front();
    std::string params;
    std::string qubits;
    size_t index = 0;
    for (ValueId arg : m.block(block).args) {
      std::string name = m.value(arg).name;
      if (m.typeOf(arg).kind == TypeKind::F64) {
        if (name.empty())
          name = "p" + std::to_string(index);
        params += (params.empty() ? "" : ", ") + name;
      } else {
        if (name.empty())
          name = "a" + std::to_string(index);
        qubits += (qubits.empty() ? "" : ", ") + name;
      }
      ++index;
    }
    std::string head = "gate " + node.attr("name")->asString();
    if (!params.empty())
      head += "(" + params + ")";
    emitLine(head + " " + qubits + " {", 0);
    for (OpId inner : m.block(block).ops)
      emitUnitary(inner, 2, op);
    emitLine("}", 0);
  }

  std::optional<std::string> run() {
    assignQubits();
    classifyBits();
    emitBlock(m.entryBlock(), 0, OpId{});
    if (failed)
      return std::nullopt;
    std::ostringstream out;
    out << "OPENQASM 3;\n"
        << "include \"stdgates.inc\";\n";
    if (totalQubits > 0)
      out << "qubit[" << totalQubits << "] q;\n";
    if (totalBits > 0)
      out << "bit[" << totalBits << "] c;\n";
    out << body.str();
    return out.str();
  }
};

} // namespace

std::optional<std::string> emitQasm(const IrModule& m, DiagnosticList& diags) {
  QasmEmitter emitter(m, diags);
  return emitter.run();
}

} // namespace qcc
