//===-- QirEmitter.cpp ----------------------------------------------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "qcc/emit/QirEmitter.hpp"

#include "qcc/dialect/QC.hpp"
#include "qcc/dialect/Unitary.hpp"
#include "qcc/ir/Registry.hpp"

#include <map>
#include <sstream>

namespace qcc {

namespace {

struct QirEmitter {
  const IrModule& m;
  DiagnosticList& diags;
  std::ostringstream body;
  bool failed = false;

  std::map<uint32_t, int> qubitOf;
  std::map<uint32_t, int> regBase;
  int totalQubits = 0;
  int totalResults = 0;

  explicit QirEmitter(const IrModule& mod, DiagnosticList& d)
      : m(mod), diags(d) {}

  void fail(OpId op, const std::string& msg) {
    if (!failed)
      diags.error(msg, m.op(op).loc);
    failed = true;
  }

  static std::string qubitArg(int handle) {
    return "%Qubit* inttoptr (i64 " + std::to_string(handle) +
           " to %Qubit*)";
  }
  static std::string resultArg(int handle) {
    return "%Result* inttoptr (i64 " + std::to_string(handle) +
           " to %Result*)";
  }

  void call(const std::string& gate, const std::string& args) {
    body << "  call void @__quantum__qis__" << gate << "__body(" << args
         << ")\n";
  }

  /// Gate-call spelling for a descriptor; controlled forms use the fused
  /// cnot/cz/ccx intrinsics.
  void emitDescriptor(OpId op, const UnitaryDescriptor& d,
                      const std::vector<int>& wires) {
    if (d.base == GateKind::Custom) {
      fail(op, "custom gate calls survived inlining");
      return;
    }
    std::string name;
    if (!d.stack.empty()) {
      // Only plain positive controls on x / z are representable.
      int controls = d.controlCount();
      bool onlyCtrl = true;
      for (const auto& entry : d.stack) {
        if (entry.kind != ModifierEntry::Kind::Ctrl)
          onlyCtrl = false;
        for (bool p : entry.polarity)
          onlyCtrl &= p;
      }
      if (onlyCtrl && controls == 1 && d.base == GateKind::X)
        name = "cnot";
      else if (onlyCtrl && controls == 1 && d.base == GateKind::Z)
        name = "cz";
      else if (onlyCtrl && controls == 2 && d.base == GateKind::X)
        name = "ccx";
      else {
        fail(op, "modifier form is not expressible in flat QIR; run "
                 "canonicalize-modifiers first");
        return;
      }
    } else {
      switch (d.base) {
      case GateKind::I:
        name = "i";
        break;
      case GateKind::H:
        name = "h";
        break;
      case GateKind::X:
        name = "x";
        break;
      case GateKind::Y:
        name = "y";
        break;
      case GateKind::Z:
        name = "z";
        break;
      case GateKind::S:
        name = "s";
        break;
      case GateKind::Sdg:
        name = "s__adj";
        break;
      case GateKind::T:
        name = "t";
        break;
      case GateKind::Tdg:
        name = "t__adj";
        break;
      case GateKind::SX:
        name = "sx";
        break;
      case GateKind::SXdg:
        name = "sx__adj";
        break;
      case GateKind::Swap:
        name = "swap";
        break;
      case GateKind::RX:
        name = "rx";
        break;
      case GateKind::RY:
        name = "ry";
        break;
      case GateKind::RZ:
        name = "rz";
        break;
      case GateKind::P:
        name = "p";
        break;
      case GateKind::U:
        name = "u";
        break;
      default:
        fail(op, "gate is not expressible in flat QIR");
        return;
      }
    }
    std::string args;
    for (double angle : d.angles)
      args += "double " + formatFloat(angle) + ", ";
    bool first = true;
    for (int wire : wires) {
      if (!first)
        args += ", ";
      first = false;
      args += qubitArg(wire);
    }
    call(name, args);
  }

  /// Inlines a custom-gate call: body gates emit directly with the call's
  /// angle bindings and wire mapping.
  void emitCall(OpId op, const UnitaryDescriptor& d,
                const std::vector<int>& wires, int depth) {
    if (depth > 64) {
      fail(op, "gate call nesting too deep");
      return;
    }
    OpId def = m.lookupGateDef(d.customName);
    if (!def.valid()) {
      fail(op, "call of undefined gate '" + d.customName + "'");
      return;
    }
    BlockId block = m.region(m.op(def).regions[0]).front();
    std::map<uint32_t, int> wireOfArg;
    int qubitIndex = 0;
    for (ValueId arg : m.block(block).args)
      if (m.typeOf(arg).isQubitRef())
        wireOfArg[arg.idx] = wires[size_t(qubitIndex++)];
    for (OpId inner : m.block(block).ops) {
      if (failed)
        return;
      UnitaryDescriptor innerDesc = boundBodyDescriptor(inner, d.angles);
      std::vector<int> innerWires;
      for (ValueId v : unitaryWires(m, inner))
        innerWires.push_back(wireOfArg.at(v.idx));
      if (innerDesc.base == GateKind::Custom)
        emitCall(inner, innerDesc, innerWires, depth + 1);
      else
        emitDescriptor(inner, innerDesc, innerWires);
    }
  }

  /// Descriptor of a gate-body op with "$k" angles bound.
  UnitaryDescriptor boundBodyDescriptor(OpId op,
                                        const std::vector<double>& params) {
    const OperationNode& node = m.op(op);
    const OpcodeInfo& info = getOpcode(node.opcode);
    if (info.isStandardGate()) {
      UnitaryDescriptor d;
      d.base = info.gate;
      d.targetArity = info.targets;
      for (const auto& name : angleAttrNames(info.gate)) {
        const AttributeValue* attr = node.attr(name);
        if (attr->isString())
          d.angles.push_back(params.at(std::stoul(attr->asString().substr(1))));
        else
          d.angles.push_back(attr->asFloat());
      }
      return d;
    }
    if (info.kind == OpKind::CallGate)
      return unitaryDescriptor(m, op);
    UnitaryDescriptor d = boundBodyDescriptor(modifierBodyOp(m, op), params);
    ModifierEntry entry;
    if (info.kind == OpKind::Ctrl) {
      entry.kind = ModifierEntry::Kind::Ctrl;
      for (const auto& p : node.attr("polarity")->asArray())
        entry.polarity.push_back(p.asBool());
    } else if (info.kind == OpKind::Inv) {
      entry.kind = ModifierEntry::Kind::Inv;
    } else {
      entry.kind = ModifierEntry::Kind::Pow;
      entry.exponent = node.attr("exponent")->asInt();
    }
    d.stack.insert(d.stack.begin(), entry);
    return d;
  }

  std::optional<std::string> run() {
    for (OpId op : m.block(m.entryBlock()).ops) {
      if (failed)
        break;
      const OperationNode& node = m.op(op);
      const OpcodeInfo& info = getOpcode(node.opcode);
      switch (info.kind) {
      case OpKind::Alloc:
        qubitOf[node.results[0].idx] = totalQubits++;
        break;
      case OpKind::AllocReg:
        regBase[node.results[0].idx] = totalQubits;
        totalQubits += int(node.attr("size")->asInt());
        break;
      case OpKind::Extract:
        qubitOf[node.results[0].idx] = regBase.at(node.operands[0].idx) +
                                       int(node.attr("index")->asInt());
        break;
      case OpKind::Dealloc:
      case OpKind::GateDef:
        break;
      case OpKind::Const:
        break; // call-site angle constants; folded into the call line
      case OpKind::Gate:
      case OpKind::Ctrl:
      case OpKind::Inv:
      case OpKind::Pow:
      case OpKind::CallGate: {
        UnitaryDescriptor d;
        try {
          d = unitaryDescriptor(m, op);
        } catch (const IrError& e) {
          fail(op, e.what());
          break;
        }
        std::vector<int> wires;
        for (ValueId v : unitaryWires(m, op))
          wires.push_back(qubitOf.at(v.idx));
        if (d.base == GateKind::Custom && d.stack.empty())
          emitCall(op, d, wires, 0);
        else
          emitDescriptor(op, d, wires);
        break;
      }
      case OpKind::Measure:
        call("mz", qubitArg(qubitOf.at(node.operands[0].idx)) + ", " +
                       resultArg(totalResults++));
        break;
      case OpKind::Reset:
        call("reset", qubitArg(qubitOf.at(node.operands[0].idx)));
        break;
      case OpKind::If:
      case OpKind::For:
      case OpKind::While:
      case OpKind::Yield:
        fail(op, "residual control flow; run simplify-control-flow before "
                 "emitting QIR");
        break;
      }
    }
    if (failed)
      return std::nullopt;
    if (totalQubits > kMaxQirQubits) {
      diags.error("program uses " + std::to_string(totalQubits) +
                  " qubits; the flat QIR emitter supports at most " +
                  std::to_string(kMaxQirQubits));
      return std::nullopt;
    }
    std::ostringstream out;
    out << "; ModuleID = 'qcc'\n"
        << "define void @main() #0 {\n"
        << "entry:\n"
        << body.str() //
        << "  ret void\n"
        << "}\n"
        << "attributes #0 = { \"entry_point\" \"required_num_qubits\"=\""
        << totalQubits << "\" \"required_num_results\"=\"" << totalResults
        << "\" }\n";
    return out.str();
  }
};

} // namespace

std::optional<std::string> emitQirFlat(const IrModule& m,
                                       DiagnosticList& diags) {
  QirEmitter emitter(m, diags);
  return emitter.run();
}

} // namespace qcc
