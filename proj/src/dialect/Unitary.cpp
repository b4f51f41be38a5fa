//===-- Unitary.cpp -------------------------------------------------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "qcc/dialect/Unitary.hpp"

#include "qcc/dialect/QC.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

namespace qcc {

using std::complex;

//===----------------------------------------------------------------------===//
// Matrix
//===----------------------------------------------------------------------===//

Matrix Matrix::identity(int dim) {
  Matrix m(dim);
  for (int i = 0; i < dim; ++i)
    m.at(i, i) = 1.0;
  return m;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  assert(dim_ == rhs.dim_);
  Matrix out(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int k = 0; k < dim_; ++k) {
      complex<double> lik = at(i, k);
      if (lik == 0.0)
        continue;
      for (int j = 0; j < dim_; ++j)
        out.at(i, j) += lik * rhs.at(k, j);
    }
  return out;
}

Matrix Matrix::dagger() const {
  Matrix out(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      out.at(j, i) = std::conj(at(i, j));
  return out;
}

Matrix Matrix::power(int64_t exponent) const {
  Matrix base = exponent < 0 ? dagger() : *this;
  uint64_t k = exponent < 0 ? uint64_t(-exponent) : uint64_t(exponent);
  Matrix acc = Matrix::identity(dim_);
  while (k > 0) {
    if (k & 1)
      acc = acc * base;
    base = base * base;
    k >>= 1;
  }
  return acc;
}

double Matrix::maxAbsDiff(const Matrix& other) const {
  assert(dim_ == other.dim_);
  double worst = 0.0;
  for (size_t i = 0; i < a_.size(); ++i)
    worst = std::max(worst, std::abs(a_[i] - other.a_[i]));
  return worst;
}

double Matrix::maxAbsDiffUpToPhase(const Matrix& other) const {
  assert(dim_ == other.dim_);
  // Align the global phase on this matrix's largest entry.
  size_t ref = 0;
  double best = -1.0;
  for (size_t i = 0; i < a_.size(); ++i)
    if (std::abs(a_[i]) > best) {
      best = std::abs(a_[i]);
      ref = i;
    }
  if (best <= 0.0 || std::abs(other.a_[ref]) == 0.0)
    return maxAbsDiff(other);
  complex<double> phase = a_[ref] / std::abs(a_[ref]) *
                          (std::abs(other.a_[ref]) / other.a_[ref]);
  double worst = 0.0;
  for (size_t i = 0; i < a_.size(); ++i)
    worst = std::max(worst, std::abs(a_[i] - phase * other.a_[i]));
  return worst;
}

Matrix embedMatrix(const Matrix& u, const std::vector<int>& wires, int n) {
  const int k = static_cast<int>(wires.size());
  assert(u.dim() == (1 << k));
  Matrix out(1 << n);
  const uint32_t dim = 1u << n;
  uint32_t wireMask = 0;
  for (int w : wires)
    wireMask |= 1u << w;
  for (uint32_t col = 0; col < dim; ++col) {
    uint32_t rest = col & ~wireMask;
    uint32_t smallCol = 0;
    for (int b = 0; b < k; ++b)
      smallCol |= ((col >> wires[b]) & 1u) << b;
    for (uint32_t smallRow = 0; smallRow < (1u << k); ++smallRow) {
      complex<double> v = u.at(int(smallRow), int(smallCol));
      if (v == 0.0)
        continue;
      uint32_t row = rest;
      for (int b = 0; b < k; ++b)
        row |= ((smallRow >> b) & 1u) << wires[b];
      out.at(int(row), int(col)) = v;
    }
  }
  return out;
}

Matrix permutationMatrix(const std::vector<int>& sigma) {
  const int n = static_cast<int>(sigma.size());
  Matrix out(1 << n);
  for (uint32_t col = 0; col < (1u << n); ++col) {
    uint32_t row = 0;
    for (int i = 0; i < n; ++i)
      row |= ((col >> i) & 1u) << sigma[i];
    out.at(int(row), int(col)) = 1.0;
  }
  return out;
}

//===----------------------------------------------------------------------===//
// Standard gate matrices (OpenQASM 3 stdgates conventions)
//===----------------------------------------------------------------------===//

Matrix gateMatrix(GateKind kind, const std::vector<double>& angles) {
  const complex<double> i1(0.0, 1.0);
  auto m2 = [](complex<double> a, complex<double> b, complex<double> c,
               complex<double> d) {
    Matrix m(2);
    m.at(0, 0) = a;
    m.at(0, 1) = b;
    m.at(1, 0) = c;
    m.at(1, 1) = d;
    return m;
  };
  const double isq2 = 1.0 / std::numbers::sqrt2;
  switch (kind) {
  case GateKind::I:
    return Matrix::identity(2);
  case GateKind::H:
    return m2(isq2, isq2, isq2, -isq2);
  case GateKind::X:
    return m2(0, 1, 1, 0);
  case GateKind::Y:
    return m2(0, -i1, i1, 0);
  case GateKind::Z:
    return m2(1, 0, 0, -1);
  case GateKind::S:
    return m2(1, 0, 0, i1);
  case GateKind::Sdg:
    return m2(1, 0, 0, -i1);
  case GateKind::T:
    return m2(1, 0, 0, std::exp(i1 * (std::numbers::pi / 4)));
  case GateKind::Tdg:
    return m2(1, 0, 0, std::exp(-i1 * (std::numbers::pi / 4)));
  case GateKind::SX:
    return m2(0.5 * (1.0 + i1), 0.5 * (1.0 - i1), 0.5 * (1.0 - i1),
              0.5 * (1.0 + i1));
  case GateKind::SXdg:
    return m2(0.5 * (1.0 - i1), 0.5 * (1.0 + i1), 0.5 * (1.0 + i1),
              0.5 * (1.0 - i1));
  case GateKind::Swap: {
    Matrix m(4);
    m.at(0, 0) = 1.0;
    m.at(1, 2) = 1.0;
    m.at(2, 1) = 1.0;
    m.at(3, 3) = 1.0;
    return m;
  }
  case GateKind::RX: {
    double t = angles.at(0) / 2;
    return m2(std::cos(t), -i1 * std::sin(t), -i1 * std::sin(t), std::cos(t));
  }
  case GateKind::RY: {
    double t = angles.at(0) / 2;
    return m2(std::cos(t), -std::sin(t), std::sin(t), std::cos(t));
  }
  case GateKind::RZ: {
    double t = angles.at(0) / 2;
    return m2(std::exp(-i1 * t), 0, 0, std::exp(i1 * t));
  }
  case GateKind::P:
    return m2(1, 0, 0, std::exp(i1 * angles.at(0)));
  case GateKind::U: {
    double t = angles.at(0) / 2;
    double phi = angles.at(1);
    double lam = angles.at(2);
    return m2(std::cos(t), -std::exp(i1 * lam) * std::sin(t),
              std::exp(i1 * phi) * std::sin(t),
              std::exp(i1 * (phi + lam)) * std::cos(t));
  }
  case GateKind::Custom:
  case GateKind::None:
    break;
  }
  throw IrError("no matrix for this gate kind");
}

//===----------------------------------------------------------------------===//
// Descriptor construction
//===----------------------------------------------------------------------===//

namespace {

double angleFromAttr(const IrModule& m, OpId op, const std::string& name) {
  const AttributeValue* attr = m.op(op).attr(name);
  if (!attr)
    throw IrError("missing angle attribute '" + name + "' on '" +
                  m.op(op).opcode + "'");
  if (attr->isString())
    throw IrError("unresolved gate parameter '" + attr->asString() +
                  "' outside a call context");
  return attr->asFloat();
}

std::vector<bool> polarityOf(const IrModule& m, OpId op) {
  std::vector<bool> out;
  for (const auto& p : m.op(op).attr("polarity")->asArray())
    out.push_back(p.asBool());
  return out;
}

double constFloatOperand(const IrModule& m, ValueId v) {
  const ValueInfo& info = m.value(v);
  if (!info.isBlockArg() && m.op(info.defOp).opcode == "cf.const")
    return m.op(info.defOp).attr("value")->asFloat();
  throw IrError("gate-call angle operand is not a constant");
}

} // namespace

UnitaryDescriptor unitaryDescriptor(const IrModule& m, OpId opId) {
  const OperationNode& node = m.op(opId);
  const OpcodeInfo& info = getOpcode(node.opcode);
  if (!info.isUnitary())
    throw IrError("not a unitary operation: '" + node.opcode + "'");

  if (info.isStandardGate()) {
    UnitaryDescriptor d;
    d.base = info.gate;
    d.targetArity = info.targets;
    for (const auto& name : angleAttrNames(info.gate))
      d.angles.push_back(angleFromAttr(m, opId, name));
    return d;
  }
  if (info.kind == OpKind::CallGate) {
    UnitaryDescriptor d;
    d.base = GateKind::Custom;
    d.customName = node.attr("callee")->asString();
    for (ValueId v : node.operands) {
      if (m.typeOf(v).kind == TypeKind::F64)
        d.angles.push_back(constFloatOperand(m, v));
      else
        ++d.targetArity;
    }
    return d;
  }

  // Modifier: wrap the body op's descriptor with one more stack entry.
  OpId body = modifierBodyOp(m, opId);
  UnitaryDescriptor d = unitaryDescriptor(m, body);
  ModifierEntry entry;
  if (info.kind == OpKind::Ctrl) {
    entry.kind = ModifierEntry::Kind::Ctrl;
    entry.polarity = polarityOf(m, opId);
  } else if (info.kind == OpKind::Inv) {
    entry.kind = ModifierEntry::Kind::Inv;
  } else {
    entry.kind = ModifierEntry::Kind::Pow;
    entry.exponent = node.attr("exponent")->asInt();
  }
  d.stack.insert(d.stack.begin(), entry);
  return d;
}

std::vector<ValueId> unitaryWires(const IrModule& m, OpId opId) {
  const OperationNode& node = m.op(opId);
  const OpcodeInfo& info = getOpcode(node.opcode);
  if (info.isStandardGate() || info.kind == OpKind::CallGate) {
    std::vector<ValueId> out;
    for (ValueId v : node.operands)
      if (m.typeOf(v).isAnyQubit())
        out.push_back(v);
    return out;
  }
  if (!info.isModifier())
    throw IrError("not a unitary operation: '" + node.opcode + "'");
  if (info.dialect == Dialect::QCO) {
    // Value semantics: the op itself carries controls and targets.
    return node.operands;
  }
  std::vector<ValueId> out = node.operands; // QC ctrl controls (if any)
  auto bodyWires = unitaryWires(m, modifierBodyOp(m, opId));
  out.insert(out.end(), bodyWires.begin(), bodyWires.end());
  return out;
}

//===----------------------------------------------------------------------===//
// Inversion
//===----------------------------------------------------------------------===//

namespace {

bool invertBaseInPlace(UnitaryDescriptor& d) {
  switch (d.base) {
  case GateKind::I:
  case GateKind::H:
  case GateKind::X:
  case GateKind::Y:
  case GateKind::Z:
  case GateKind::Swap:
    return true;
  case GateKind::S:
    d.base = GateKind::Sdg;
    return true;
  case GateKind::Sdg:
    d.base = GateKind::S;
    return true;
  case GateKind::T:
    d.base = GateKind::Tdg;
    return true;
  case GateKind::Tdg:
    d.base = GateKind::T;
    return true;
  case GateKind::SX:
    d.base = GateKind::SXdg;
    return true;
  case GateKind::SXdg:
    d.base = GateKind::SX;
    return true;
  case GateKind::RX:
  case GateKind::RY:
  case GateKind::RZ:
  case GateKind::P:
    d.angles[0] = -d.angles[0];
    return true;
  case GateKind::U: {
    double t = d.angles[0], phi = d.angles[1], lam = d.angles[2];
    d.angles = {-t, -lam, -phi};
    return true;
  }
  case GateKind::Custom:
  case GateKind::None:
    return false;
  }
  return false;
}

UnitaryDescriptor inverseFrom(const UnitaryDescriptor& d, size_t depth) {
  if (depth == d.stack.size()) {
    UnitaryDescriptor out = d;
    if (!invertBaseInPlace(out))
      out.stack.push_back({ModifierEntry::Kind::Inv, {}, 0});
    return out;
  }
  const ModifierEntry& entry = d.stack[depth];
  if (entry.kind == ModifierEntry::Kind::Inv) {
    // inv(inv(U)) = U: drop this entry, keep the remainder as-is.
    UnitaryDescriptor out = d;
    out.stack.erase(out.stack.begin() + static_cast<ptrdiff_t>(depth));
    return out;
  }
  // Ctrl and Pow commute with inversion: invert the wrapped part.
  UnitaryDescriptor out = inverseFrom(d, depth + 1);
  return out;
}

} // namespace

UnitaryDescriptor inverseDescriptor(const UnitaryDescriptor& d) {
  return inverseFrom(d, 0);
}

bool UnitaryDescriptor::equals(const UnitaryDescriptor& other,
                               double tol) const {
  if (base != other.base || customName != other.customName ||
      targetArity != other.targetArity || stack != other.stack ||
      angles.size() != other.angles.size())
    return false;
  for (size_t i = 0; i < angles.size(); ++i) {
    double diff = std::remainder(angles[i] - other.angles[i],
                                 2 * std::numbers::pi);
    if (std::abs(diff) > tol)
      return false;
  }
  return true;
}

//===----------------------------------------------------------------------===//
// Matrix of a descriptor
//===----------------------------------------------------------------------===//

namespace {

Matrix controlledMatrix(const Matrix& body, const std::vector<bool>& polarity) {
  const int c = static_cast<int>(polarity.size());
  const int dim = body.dim() << c;
  uint32_t pattern = 0;
  for (int k = 0; k < c; ++k)
    if (polarity[k])
      pattern |= 1u << k;
  const uint32_t mask = (1u << c) - 1;
  Matrix out(dim);
  for (uint32_t col = 0; col < uint32_t(dim); ++col) {
    const uint32_t ctrlBits = col & mask;
    if (ctrlBits == pattern) {
      for (uint32_t tr = 0; tr < uint32_t(body.dim()); ++tr) {
        auto v = body.at(int(tr), int(col >> c));
        if (v != 0.0)
          out.at(int((tr << c) | ctrlBits), int(col)) = v;
      }
    } else {
      out.at(int(col), int(col)) = 1.0;
    }
  }
  return out;
}

Matrix customGateMatrix(const UnitaryDescriptor& d, const IrModule* symbols,
                        int depth);

Matrix baseMatrix(const UnitaryDescriptor& d, const IrModule* symbols,
                  int depth) {
  if (d.base != GateKind::Custom)
    return gateMatrix(d.base, d.angles);
  return customGateMatrix(d, symbols, depth);
}

/// Descriptor of a gate-definition body op with "$k" parameter references
/// resolved against the call's angle values.
UnitaryDescriptor boundDescriptor(const IrModule& m, OpId op,
                                  const std::vector<double>& params) {
  UnitaryDescriptor d;
  const OpcodeInfo& info = getOpcode(m.op(op).opcode);
  if (info.isStandardGate()) {
    d.base = info.gate;
    d.targetArity = info.targets;
    for (const auto& name : angleAttrNames(info.gate)) {
      const AttributeValue* attr = m.op(op).attr(name);
      if (attr && attr->isString()) {
        const std::string& ref = attr->asString();
        size_t index = std::stoul(ref.substr(1));
        d.angles.push_back(params.at(index));
      } else if (attr) {
        d.angles.push_back(attr->asFloat());
      } else {
        throw IrError("missing angle attribute '" + name + "'");
      }
    }
    return d;
  }
  if (info.kind == OpKind::CallGate)
    return unitaryDescriptor(m, op); // nested call: angles are constants
  OpId body = modifierBodyOp(m, op);
  d = boundDescriptor(m, body, params);
  ModifierEntry entry;
  if (info.kind == OpKind::Ctrl) {
    entry.kind = ModifierEntry::Kind::Ctrl;
    entry.polarity = polarityOf(m, op);
  } else if (info.kind == OpKind::Inv) {
    entry.kind = ModifierEntry::Kind::Inv;
  } else {
    entry.kind = ModifierEntry::Kind::Pow;
    entry.exponent = m.op(op).attr("exponent")->asInt();
  }
  d.stack.insert(d.stack.begin(), entry);
  return d;
}

Matrix descriptorMatrixImpl(const UnitaryDescriptor& d,
                            const IrModule* symbols, int depth) {
  Matrix m = baseMatrix(d, symbols, depth);
  for (auto it = d.stack.rbegin(); it != d.stack.rend(); ++it) {
    switch (it->kind) {
    case ModifierEntry::Kind::Inv:
      m = m.dagger();
      break;
    case ModifierEntry::Kind::Pow:
      m = m.power(it->exponent);
      break;
    case ModifierEntry::Kind::Ctrl:
      m = controlledMatrix(m, it->polarity);
      break;
    }
  }
  return m;
}

Matrix customGateMatrix(const UnitaryDescriptor& d, const IrModule* symbols,
                        int depth) {
  if (!symbols)
    throw IrError("unresolved custom gate '" + d.customName +
                  "': no symbol table available");
  if (depth > 64)
    throw IrError("custom gate resolution exceeds depth limit (recursive "
                  "definition?)");
  OpId def = symbols->lookupGateDef(d.customName);
  if (!def.valid())
    throw IrError("unresolved custom gate '" + d.customName + "'");

  const IrModule& m = *symbols;
  BlockId body = m.region(m.op(def).regions[0]).front();
  // Wire index of each qubit block argument.
  std::map<uint32_t, int> wireOf;
  int qubits = 0;
  for (ValueId arg : m.block(body).args)
    if (m.typeOf(arg).isQubitRef())
      wireOf[arg.idx] = qubits++;
  if (qubits != d.targetArity)
    throw IrError("call of '" + d.customName + "' has wrong qubit arity");

  Matrix acc = Matrix::identity(1 << qubits);
  for (OpId opId : m.block(body).ops) {
    UnitaryDescriptor inner = boundDescriptor(m, opId, d.angles);
    Matrix gate = descriptorMatrixImpl(inner, symbols, depth + 1);
    std::vector<int> wires;
    for (ValueId v : unitaryWires(m, opId))
      wires.push_back(wireOf.at(v.idx));
    acc = embedMatrix(gate, wires, qubits) * acc;
  }
  return acc;
}

} // namespace

Matrix descriptorMatrix(const UnitaryDescriptor& d, const IrModule* symbols) {
  return descriptorMatrixImpl(d, symbols, 0);
}

//===----------------------------------------------------------------------===//
// Descriptor -> op tree
//===----------------------------------------------------------------------===//

namespace {

OpId buildFromDescriptorAt(IrModule& m, OpBuilder& b, Dialect dialect,
                           const UnitaryDescriptor& d, size_t depth,
                           const std::vector<ValueId>& wires,
                           const std::vector<ValueId>& customAngles,
                           Location loc) {
  if (depth == d.stack.size()) {
    if (d.base == GateKind::Custom) {
      std::vector<ValueId> operands = customAngles;
      operands.insert(operands.end(), wires.begin(), wires.end());
      return b.create(std::string(dialectPrefix(dialect)) + ".call_gate",
                      operands, {{"callee", AttributeValue(d.customName)}},
                      loc);
    }
    AttrMap attrs;
    const auto& names = angleAttrNames(d.base);
    for (size_t i = 0; i < names.size(); ++i)
      attrs[names[i]] = AttributeValue(d.angles[i]);
    return b.create(gateOpcode(dialect, d.base), wires, std::move(attrs),
                    loc);
  }

  const ModifierEntry& entry = d.stack[depth];
  AttrMap attrs;
  std::string opcode;
  size_t controls = 0;
  if (entry.kind == ModifierEntry::Kind::Ctrl) {
    opcode = std::string(dialectPrefix(dialect)) + ".ctrl";
    AttributeValue::Array polarity;
    for (bool p : entry.polarity)
      polarity.emplace_back(p);
    attrs["polarity"] = AttributeValue(std::move(polarity));
    controls = entry.polarity.size();
  } else if (entry.kind == ModifierEntry::Kind::Inv) {
    opcode = std::string(dialectPrefix(dialect)) + ".inv";
  } else {
    opcode = std::string(dialectPrefix(dialect)) + ".pow";
    attrs["exponent"] = AttributeValue(entry.exponent);
  }

  std::vector<ValueId> innerWires(wires.begin() +
                                      static_cast<ptrdiff_t>(controls),
                                  wires.end());
  if (dialect == Dialect::QC) {
    std::vector<ValueId> operands(wires.begin(),
                                  wires.begin() +
                                      static_cast<ptrdiff_t>(controls));
    OpId op = b.create(opcode, operands, std::move(attrs), loc);
    OpBuilder body(m, m.region(m.op(op).regions[0]).front());
    buildFromDescriptorAt(m, body, dialect, d, depth + 1, innerWires,
                          customAngles, loc);
    return op;
  }
  OpId op = b.create(opcode, wires, std::move(attrs), loc);
  BlockId bodyBlock = m.region(m.op(op).regions[0]).front();
  std::vector<ValueId> bodyArgs;
  for (size_t i = 0; i < innerWires.size(); ++i)
    bodyArgs.push_back(m.addBlockArg(bodyBlock, TypeDesc::qubitState()));
  OpBuilder body(m, bodyBlock);
  OpId inner = buildFromDescriptorAt(m, body, dialect, d, depth + 1, bodyArgs,
                                     customAngles, loc);
  body.create("cf.yield", m.op(inner).results, AttrMap{}, loc);
  return op;
}

} // namespace

OpId buildFromDescriptor(IrModule& m, OpBuilder& b, Dialect dialect,
                         const UnitaryDescriptor& d,
                         const std::vector<ValueId>& wires,
                         const std::vector<ValueId>& customAngles,
                         Location loc) {
  return buildFromDescriptorAt(m, b, dialect, d, 0, wires, customAngles, loc);
}

} // namespace qcc
