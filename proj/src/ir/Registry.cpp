//===-- Registry.cpp ------------------------------------------------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "qcc/ir/Registry.hpp"

#include "qcc/ir/Diagnostics.hpp"

#include <array>
#include <map>

namespace qcc {

namespace {

constexpr std::array<GateInfo, 17> kGates = {{
    {GateKind::I, "i", 1, 0, true},
    {GateKind::H, "h", 1, 0, true},
    {GateKind::X, "x", 1, 0, true},
    {GateKind::Y, "y", 1, 0, true},
    {GateKind::Z, "z", 1, 0, true},
    {GateKind::S, "s", 1, 0, false},
    {GateKind::Sdg, "sdg", 1, 0, false},
    {GateKind::T, "t", 1, 0, false},
    {GateKind::Tdg, "tdg", 1, 0, false},
    {GateKind::SX, "sx", 1, 0, false},
    {GateKind::SXdg, "sxdg", 1, 0, false},
    {GateKind::Swap, "swap", 2, 0, true},
    {GateKind::RX, "rx", 1, 1, false},
    {GateKind::RY, "ry", 1, 1, false},
    {GateKind::RZ, "rz", 1, 1, false},
    {GateKind::P, "p", 1, 1, false},
    {GateKind::U, "u", 1, 3, false},
}};

struct RegistryTables {
  std::map<std::string, OpcodeInfo> opcodes;
  std::vector<std::string> names;

  void add(OpcodeInfo info) {
    names.push_back(info.name);
    opcodes.emplace(info.name, std::move(info));
  }

  void addQuantumDialect(Dialect d) {
    const std::string p = dialectPrefix(d);
    add({p + ".alloc", d, OpKind::Alloc, GateKind::None, 0, 0, 0});
    add({p + ".dealloc", d, OpKind::Dealloc, GateKind::None, 0, 0, 0});
    if (d == Dialect::QC) {
      add({"qc.alloc_reg", d, OpKind::AllocReg, GateKind::None, 0, 0, 0});
      add({"qc.extract", d, OpKind::Extract, GateKind::None, 0, 0, 0});
    }
    for (const auto& g : kGates)
      add({p + "." + g.name, d, OpKind::Gate, g.kind, g.targets, g.angles, 0});
    add({p + ".measure", d, OpKind::Measure, GateKind::None, 0, 0, 0});
    add({p + ".reset", d, OpKind::Reset, GateKind::None, 0, 0, 0});
    add({p + ".ctrl", d, OpKind::Ctrl, GateKind::None, 0, 0, 1});
    add({p + ".inv", d, OpKind::Inv, GateKind::None, 0, 0, 1});
    add({p + ".pow", d, OpKind::Pow, GateKind::None, 0, 0, 1});
    add({p + ".call_gate", d, OpKind::CallGate, GateKind::None, 0, 0, 0});
    if (d == Dialect::QC)
      add({"qc.gate_def", d, OpKind::GateDef, GateKind::None, 0, 0, 1});
  }

  RegistryTables() {
    addQuantumDialect(Dialect::QC);
    addQuantumDialect(Dialect::QCO);
    add({"cf.if", Dialect::CF, OpKind::If, GateKind::None, 0, 0, 2});
    add({"cf.for", Dialect::CF, OpKind::For, GateKind::None, 0, 0, 1});
    add({"cf.while", Dialect::CF, OpKind::While, GateKind::None, 0, 0, 2});
    add({"cf.yield", Dialect::CF, OpKind::Yield, GateKind::None, 0, 0, 0});
    add({"cf.const", Dialect::CF, OpKind::Const, GateKind::None, 0, 0, 0});
  }
};

const RegistryTables& tables() {
  static const RegistryTables t;
  return t;
}

} // namespace

const OpcodeInfo* lookupOpcode(const std::string& name) {
  const auto& t = tables().opcodes;
  auto it = t.find(name);
  return it == t.end() ? nullptr : &it->second;
}

const OpcodeInfo& getOpcode(const std::string& name) {
  const OpcodeInfo* info = lookupOpcode(name);
  if (!info)
    throw IrError("unknown opcode '" + name + "'");
  return *info;
}

const std::vector<std::string>& allOpcodes() { return tables().names; }

const GateInfo& gateInfo(GateKind kind) {
  for (const auto& g : kGates)
    if (g.kind == kind)
      return g;
  throw IrError("no gate info for this kind");
}

std::optional<GateKind> gateKindByName(const std::string& name) {
  for (const auto& g : kGates)
    if (name == g.name)
      return g.kind;
  return std::nullopt;
}

const std::vector<std::string>& angleAttrNames(GateKind kind) {
  static const std::vector<std::string> none = {};
  static const std::vector<std::string> one = {"angle"};
  static const std::vector<std::string> three = {"theta", "phi", "lambda"};
  switch (gateInfo(kind).angles) {
  case 1:
    return one;
  case 3:
    return three;
  default:
    return none;
  }
}

std::string gateOpcode(Dialect dialect, GateKind kind) {
  return std::string(dialectPrefix(dialect)) + "." + gateInfo(kind).name;
}

} // namespace qcc
