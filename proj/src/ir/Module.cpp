//===-- Module.cpp --------------------------------------------------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "qcc/ir/Module.hpp"

#include "qcc/ir/Registry.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace qcc {

IrModule::IrModule() {
  entry_ = createRegion(OpId{});
  createBlock(entry_);
}

RegionId IrModule::createRegion(OpId parentOp) {
  RegionId id{static_cast<uint32_t>(regions_.size())};
  regions_.push_back(RegionData{{}, parentOp, false});
  return id;
}

BlockId IrModule::createBlock(RegionId parent) {
  BlockId id{static_cast<uint32_t>(blocks_.size())};
  blocks_.push_back(BlockData{{}, {}, parent, false});
  regions_[parent.idx].blocks.push_back(id);
  return id;
}

ValueId IrModule::addBlockArg(BlockId b, TypeDesc type, std::string name) {
  ValueId id{static_cast<uint32_t>(values_.size())};
  ValueInfo info;
  info.type = type;
  info.defBlock = b;
  info.defArgIndex = static_cast<uint32_t>(block(b).args.size());
  info.name = std::move(name);
  values_.push_back(std::move(info));
  block(b).args.push_back(id);
  return id;
}

ValueId IrModule::mintResult(OpId op, uint32_t resultIndex, TypeDesc type,
                             std::string name) {
  ValueId id{static_cast<uint32_t>(values_.size())};
  ValueInfo info;
  info.type = type;
  info.defOp = op;
  info.defResultIndex = resultIndex;
  info.name = std::move(name);
  values_.push_back(std::move(info));
  return id;
}

OpId IrModule::allocateOp() {
  OpId id{static_cast<uint32_t>(ops_.size())};
  ops_.push_back(OperationNode{});
  return id;
}

void IrModule::insertOp(OpId opId, BlockId b, size_t pos) {
  OperationNode& node = op(opId);
  assert(!node.parent.valid() && "op already attached to a block");
  node.parent = b;
  auto& list = block(b).ops;
  list.insert(list.begin() + static_cast<ptrdiff_t>(pos), opId);
  for (uint32_t i = 0; i < node.operands.size(); ++i)
    value(node.operands[i]).uses.push_back(Use{opId, i});
}

void IrModule::replaceAllUses(ValueId from, ValueId to) {
  if (from == to)
    return;
  ValueInfo& oldInfo = value(from);
  ValueInfo& newInfo = value(to);
  if (oldInfo.type != newInfo.type)
    throw IrError("replaceAllUses: type mismatch (" + oldInfo.type.str() +
                  " vs " + newInfo.type.str() + ")");
  for (const Use& u : oldInfo.uses) {
    op(u.user).operands[u.operandIndex] = to;
    newInfo.uses.push_back(u);
  }
  oldInfo.uses.clear();
}

void IrModule::eraseOp(OpId opId) {
  OperationNode& node = op(opId);
  for (ValueId r : node.results) {
    const ValueInfo& info = value(r);
    if (!info.uses.empty())
      throw IrError("cannot erase '" + node.opcode + "': result " +
                    (info.name.empty() ? "" : "%" + info.name + " ") +
                    "still used by '" + op(info.uses.front().user).opcode +
                    "'");
  }
  if (node.parent.valid()) {
    auto& list = block(node.parent).ops;
    list.erase(std::remove(list.begin(), list.end(), opId), list.end());
    node.parent = BlockId{};
  }
  for (uint32_t i = 0; i < node.operands.size(); ++i) {
    auto& uses = value(node.operands[i]).uses;
    auto it = std::find(uses.begin(), uses.end(), Use{opId, i});
    if (it != uses.end())
      uses.erase(it);
  }
  for (RegionId r : node.regions)
    eraseRegionContents(r);
  for (ValueId r : node.results)
    value(r).dead = true;
  node.dead = true;
}

void IrModule::eraseRegionContents(RegionId regionId) {
  for (BlockId b : region(regionId).blocks) {
    // Reverse order so use lists of surviving outer values drain cleanly.
    auto ops = block(b).ops;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
      OperationNode& node = op(*it);
      for (uint32_t i = 0; i < node.operands.size(); ++i) {
        auto& uses = value(node.operands[i]).uses;
        auto pos = std::find(uses.begin(), uses.end(), Use{*it, i});
        if (pos != uses.end())
          uses.erase(pos);
      }
      for (RegionId r : node.regions)
        eraseRegionContents(r);
      for (ValueId v : node.results)
        value(v).dead = true;
      node.dead = true;
      node.parent = BlockId{};
    }
    for (ValueId arg : block(b).args)
      value(arg).dead = true;
    block(b).ops.clear();
    block(b).dead = true;
  }
  region(regionId).dead = true;
}

void IrModule::moveOp(OpId opId, BlockId b, size_t pos) {
  OperationNode& node = op(opId);
  assert(node.parent.valid() && "op not attached");
  auto& oldList = block(node.parent).ops;
  oldList.erase(std::remove(oldList.begin(), oldList.end(), opId),
                oldList.end());
  auto& newList = block(b).ops;
  newList.insert(newList.begin() + static_cast<ptrdiff_t>(pos), opId);
  node.parent = b;
}

void IrModule::setOperand(OpId user, uint32_t index, ValueId newValue) {
  OperationNode& node = op(user);
  ValueId old = node.operands[index];
  if (old == newValue)
    return;
  auto& uses = value(old).uses;
  auto it = std::find(uses.begin(), uses.end(), Use{user, index});
  if (it != uses.end())
    uses.erase(it);
  node.operands[index] = newValue;
  value(newValue).uses.push_back(Use{user, index});
}

void IrModule::appendOperand(OpId user, ValueId v) {
  OperationNode& node = op(user);
  uint32_t index = static_cast<uint32_t>(node.operands.size());
  node.operands.push_back(v);
  if (node.parent.valid())
    value(v).uses.push_back(Use{user, index});
}

ValueId IrModule::appendResult(OpId opId, TypeDesc type, std::string name) {
  OperationNode& node = op(opId);
  ValueId v = mintResult(opId, static_cast<uint32_t>(node.results.size()),
                         type, std::move(name));
  node.results.push_back(v);
  return v;
}

OpId IrModule::lookupGateDef(const std::string& name) const {
  for (OpId id : block(entryBlock()).ops) {
    const OperationNode& node = op(id);
    if (node.opcode != "qc.gate_def")
      continue;
    const AttributeValue* attr = node.attr("name");
    if (attr && attr->isString() && attr->asString() == name)
      return id;
  }
  return OpId{};
}

size_t IrModule::positionInBlock(OpId opId) const {
  const auto& list = block(op(opId).parent).ops;
  auto it = std::find(list.begin(), list.end(), opId);
  assert(it != list.end());
  return static_cast<size_t>(it - list.begin());
}

void IrModule::walk(RegionId regionId,
                    const std::function<bool(OpId)>& fn) const {
  for (BlockId b : region(regionId).blocks) {
    auto snapshot = block(b).ops;
    for (OpId id : snapshot) {
      if (op(id).dead)
        continue;
      if (!fn(id))
        return;
      auto regions = op(id).regions; // copy: the callback may mutate
      for (RegionId r : regions)
        walk(r, fn);
    }
  }
}

void IrModule::walk(const std::function<bool(OpId)>& fn) const {
  walk(entry_, fn);
}

std::string IrModule::describeOp(OpId opId) const {
  const OperationNode& node = op(opId);
  std::string s = "'" + node.opcode + "'";
  if (!node.results.empty() && !value(node.results[0]).name.empty())
    s += " (%" + value(node.results[0]).name + ")";
  return s;
}

//===----------------------------------------------------------------------===//
// OpBuilder
//===----------------------------------------------------------------------===//

OpBuilder OpBuilder::before(IrModule& m, OpId op) {
  OpBuilder b(m, m.op(op).parent);
  b.pos_ = m.positionInBlock(op);
  return b;
}

OpBuilder OpBuilder::after(IrModule& m, OpId op) {
  OpBuilder b(m, m.op(op).parent);
  b.pos_ = m.positionInBlock(op) + 1;
  return b;
}

namespace {

void requireOperandType(const IrModule& m, const std::string& opcode,
                        const std::vector<ValueId>& operands, size_t index,
                        TypeDesc expected) {
  if (index >= operands.size())
    throw IrError("'" + opcode + "': missing operand " +
                  std::to_string(index));
  TypeDesc got = m.typeOf(operands[index]);
  if (got != expected)
    throw IrError("'" + opcode + "': operand " + std::to_string(index) +
                  " has type " + got.str() + ", expected " + expected.str());
}

void requireArity(const std::string& opcode,
                  const std::vector<ValueId>& operands, size_t n) {
  if (operands.size() != n)
    throw IrError("'" + opcode + "': expected " + std::to_string(n) +
                  " operands, got " + std::to_string(operands.size()));
}

TypeDesc qubitType(Dialect d) {
  return d == Dialect::QCO ? TypeDesc::qubitState() : TypeDesc::qubitRef();
}

/// Build-time operand/attribute checking. The verifier re-checks all of
/// this plus the global invariants; here we fail fast with operand indices.
void checkBuild(const IrModule& m, const OpcodeInfo& info,
                const std::vector<ValueId>& operands, const AttrMap& attrs) {
  const std::string& name = info.name;
  switch (info.kind) {
  case OpKind::Alloc:
    requireArity(name, operands, 0);
    break;
  case OpKind::AllocReg: {
    requireArity(name, operands, 0);
    auto it = attrs.find("size");
    if (it == attrs.end() || !it->second.isInt() || it->second.asInt() < 1)
      throw IrError("'qc.alloc_reg' requires a positive integer 'size' "
                    "attribute");
    break;
  }
  case OpKind::Extract: {
    requireArity(name, operands, 1);
    if (m.typeOf(operands[0]).kind != TypeKind::QubitReg)
      throw IrError("'qc.extract': operand 0 must be a qubit register");
    auto it = attrs.find("index");
    if (it == attrs.end() || !it->second.isInt())
      throw IrError("'qc.extract' requires an integer 'index' attribute");
    break;
  }
  case OpKind::Dealloc:
    requireArity(name, operands, 1);
    requireOperandType(m, name, operands, 0, qubitType(info.dialect));
    break;
  case OpKind::Gate: {
    requireArity(name, operands, info.targets);
    for (size_t i = 0; i < operands.size(); ++i)
      requireOperandType(m, name, operands, i, qubitType(info.dialect));
    for (const auto& angleName : angleAttrNames(info.gate)) {
      auto it = attrs.find(angleName);
      if (it == attrs.end() ||
          !(it->second.isFloat() || it->second.isString()))
        throw IrError("'" + name + "' requires angle attribute '" + angleName +
                      "'");
    }
    break;
  }
  case OpKind::Measure:
  case OpKind::Reset:
    requireArity(name, operands, 1);
    requireOperandType(m, name, operands, 0, qubitType(info.dialect));
    break;
  case OpKind::Ctrl: {
    auto it = attrs.find("polarity");
    if (it == attrs.end() || !it->second.isArray())
      throw IrError("'" + name + "' requires a 'polarity' array attribute");
    size_t controls = it->second.asArray().size();
    for (const auto& p : it->second.asArray())
      if (!p.isBool())
        throw IrError("'" + name + "': polarity entries must be booleans");
    if (info.dialect == Dialect::QC) {
      if (operands.size() != controls)
        throw IrError("'qc.ctrl': polarity length must equal control count");
    } else if (operands.size() <= controls) {
      throw IrError("'qco.ctrl': needs target operands after " +
                    std::to_string(controls) + " controls");
    }
    for (size_t i = 0; i < operands.size(); ++i)
      requireOperandType(m, name, operands, i, qubitType(info.dialect));
    break;
  }
  case OpKind::Inv:
  case OpKind::Pow: {
    if (info.kind == OpKind::Pow) {
      auto it = attrs.find("exponent");
      if (it == attrs.end() || !it->second.isInt())
        throw IrError("'" + name + "' requires an integer 'exponent' "
                      "attribute");
    }
    if (info.dialect == Dialect::QC) {
      requireArity(name, operands, 0);
    } else {
      if (operands.empty())
        throw IrError("'" + name + "': needs at least one target state");
      for (size_t i = 0; i < operands.size(); ++i)
        requireOperandType(m, name, operands, i, TypeDesc::qubitState());
    }
    break;
  }
  case OpKind::GateDef: {
    requireArity(name, operands, 0);
    auto it = attrs.find("name");
    if (it == attrs.end() || !it->second.isString())
      throw IrError("'qc.gate_def' requires a string 'name' attribute");
    break;
  }
  case OpKind::CallGate: {
    auto it = attrs.find("callee");
    if (it == attrs.end() || !it->second.isString())
      throw IrError("'" + name + "' requires a string 'callee' attribute");
    bool seenQubit = false;
    for (size_t i = 0; i < operands.size(); ++i) {
      TypeDesc t = m.typeOf(operands[i]);
      if (t == qubitType(info.dialect)) {
        seenQubit = true;
      } else if (t.kind == TypeKind::F64 && !seenQubit) {
        // leading angle operands
      } else {
        throw IrError("'" + name + "': operand " + std::to_string(i) +
                      " must be f64 angles followed by qubits");
      }
    }
    if (!seenQubit)
      throw IrError("'" + name + "': needs at least one qubit operand");
    break;
  }
  case OpKind::If:
    if (operands.empty())
      throw IrError("'cf.if': missing condition operand");
    requireOperandType(m, name, operands, 0, TypeDesc::bit());
    break;
  case OpKind::For:
    if (operands.size() < 3)
      throw IrError("'cf.for': needs lb, ub, step operands");
    for (size_t i = 0; i < 3; ++i)
      requireOperandType(m, name, operands, i, TypeDesc::index());
    break;
  case OpKind::While:
  case OpKind::Yield:
    break;
  case OpKind::Const: {
    requireArity(name, operands, 0);
    auto it = attrs.find("value");
    if (it == attrs.end() || !(it->second.isInt() || it->second.isFloat()))
      throw IrError("'cf.const' requires a numeric 'value' attribute");
    break;
  }
  }
}

std::optional<std::vector<TypeDesc>>
inferResultTypes(const IrModule& m, const OpcodeInfo& info,
                 const std::vector<ValueId>& operands, const AttrMap& attrs) {
  std::vector<TypeDesc> out;
  switch (info.kind) {
  case OpKind::Alloc:
    out.push_back(qubitType(info.dialect));
    return out;
  case OpKind::AllocReg:
    out.push_back(TypeDesc::qubitReg(
        static_cast<uint32_t>(attrs.at("size").asInt())));
    return out;
  case OpKind::Extract:
    out.push_back(TypeDesc::qubitRef());
    return out;
  case OpKind::Dealloc:
  case OpKind::GateDef:
  case OpKind::Yield:
    return out;
  case OpKind::Gate:
  case OpKind::Ctrl:
  case OpKind::Inv:
  case OpKind::Pow:
    if (info.dialect == Dialect::QCO)
      out.assign(operands.size(), TypeDesc::qubitState());
    return out;
  case OpKind::Measure:
    if (info.dialect == Dialect::QCO)
      out.push_back(TypeDesc::qubitState());
    out.push_back(TypeDesc::bit());
    return out;
  case OpKind::Reset:
    if (info.dialect == Dialect::QCO)
      out.push_back(TypeDesc::qubitState());
    return out;
  case OpKind::CallGate:
    if (info.dialect == Dialect::QCO) {
      for (ValueId v : operands)
        if (m.typeOf(v).isQubitState())
          out.push_back(TypeDesc::qubitState());
    }
    return out;
  case OpKind::If:
    for (size_t i = 1; i < operands.size(); ++i)
      out.push_back(m.typeOf(operands[i]));
    return out;
  case OpKind::For:
    for (size_t i = 3; i < operands.size(); ++i)
      out.push_back(m.typeOf(operands[i]));
    return out;
  case OpKind::While:
    for (ValueId v : operands)
      out.push_back(m.typeOf(v));
    return out;
  case OpKind::Const:
    return std::nullopt; // needs an explicit result type
  }
  return out;
}

} // namespace

OpId OpBuilder::create(const std::string& opcode,
                       std::vector<ValueId> operands, AttrMap attrs,
                       Location loc) {
  const OpcodeInfo& info = getOpcode(opcode);
  checkBuild(*mod_, info, operands, attrs);
  auto inferred = inferResultTypes(*mod_, info, operands, attrs);
  if (!inferred)
    throw IrError("'" + opcode + "' requires explicit result types");
  return create(opcode, std::move(operands), std::move(*inferred),
                std::move(attrs), loc);
}

OpId OpBuilder::create(const std::string& opcode,
                       std::vector<ValueId> operands,
                       std::vector<TypeDesc> resultTypes, AttrMap attrs,
                       Location loc) {
  const OpcodeInfo& info = getOpcode(opcode);
  checkBuild(*mod_, info, operands, attrs);
  if (auto inferred = inferResultTypes(*mod_, info, operands, attrs)) {
    if (*inferred != resultTypes)
      throw IrError("'" + opcode + "': result types do not match the "
                    "signature");
  } else if (info.kind == OpKind::Const) {
    if (resultTypes.size() != 1)
      throw IrError("'cf.const': exactly one result");
    TypeKind k = resultTypes[0].kind;
    bool intLike = k == TypeKind::Index || k == TypeKind::Bit ||
                   k == TypeKind::Int;
    const AttributeValue& v = attrs.at("value");
    if (v.isInt() != intLike)
      throw IrError("'cf.const': value attribute kind does not match result "
                    "type " +
                    resultTypes[0].str());
  }

  OpId id = mod_->allocateOp();
  OperationNode& node = mod_->op(id);
  node.opcode = opcode;
  node.operands = std::move(operands);
  node.attrs = std::move(attrs);
  node.loc = std::move(loc);
  for (uint32_t i = 0; i < resultTypes.size(); ++i)
    node.results.push_back(mod_->mintResult(id, i, resultTypes[i]));
  for (uint8_t i = 0; i < info.regions; ++i) {
    RegionId r = mod_->createRegion(id);
    mod_->createBlock(r);
    mod_->op(id).regions.push_back(r);
  }
  mod_->insertOp(id, block_, pos_);
  ++pos_;
  return id;
}

void OpBuilder::nameResult(OpId op, uint32_t index, std::string name) {
  mod_->value(mod_->op(op).results[index]).name = std::move(name);
}

//===----------------------------------------------------------------------===//
// Cloning
//===----------------------------------------------------------------------===//

namespace {

ValueId mapValue(const std::map<uint32_t, ValueId>& valueMap, ValueId v) {
  auto it = valueMap.find(v.idx);
  return it == valueMap.end() ? v : it->second;
}

void cloneRegionInto(IrModule& m, RegionId src, RegionId dst,
                     std::map<uint32_t, ValueId>& valueMap);

OpId cloneOp(IrModule& m, OpId src, BlockId dstBlock, size_t pos,
             std::map<uint32_t, ValueId>& valueMap) {
  const OperationNode srcNode = m.op(src); // copy: tables may reallocate
  OpId id = m.allocateOp();
  {
    OperationNode& node = m.op(id);
    node.opcode = srcNode.opcode;
    node.attrs = srcNode.attrs;
    node.loc = srcNode.loc;
    for (ValueId operand : srcNode.operands)
      node.operands.push_back(mapValue(valueMap, operand));
  }
  for (uint32_t i = 0; i < srcNode.results.size(); ++i) {
    ValueId r = m.mintResult(id, i, m.value(srcNode.results[i]).type,
                             m.value(srcNode.results[i]).name);
    m.op(id).results.push_back(r);
    valueMap[srcNode.results[i].idx] = r;
  }
  for (RegionId srcRegion : srcNode.regions) {
    RegionId r = m.createRegion(id);
    m.op(id).regions.push_back(r);
    cloneRegionInto(m, srcRegion, r, valueMap);
  }
  m.insertOp(id, dstBlock, pos);
  return id;
}

void cloneRegionInto(IrModule& m, RegionId src, RegionId dst,
                     std::map<uint32_t, ValueId>& valueMap) {
  for (BlockId srcBlock : m.region(src).blocks) {
    BlockId b = m.createBlock(dst);
    for (ValueId arg : m.block(srcBlock).args) {
      ValueId newArg =
          m.addBlockArg(b, m.value(arg).type, m.value(arg).name);
      valueMap[arg.idx] = newArg;
    }
    auto ops = m.block(srcBlock).ops;
    size_t pos = 0;
    for (OpId opId : ops)
      cloneOp(m, opId, b, pos++, valueMap);
  }
}

} // namespace

void cloneBlockOps(IrModule& m, BlockId srcBlock, OpBuilder& builder,
                   std::map<uint32_t, ValueId>& valueMap) {
  auto ops = m.block(srcBlock).ops;
  for (OpId opId : ops)
    cloneOperation(m, opId, builder, valueMap);
}

OpId cloneOperation(IrModule& m, OpId src, OpBuilder& builder,
                    std::map<uint32_t, ValueId>& valueMap) {
  OpId id = cloneOp(m, src, builder.insertionBlock(), builder.insertionPos(),
                    valueMap);
  builder.setInsertionPoint(builder.insertionBlock(),
                            builder.insertionPos() + 1);
  return id;
}

namespace {

OpId copyOpImpl(const IrModule& src, OpId opId, IrModule& dst,
                BlockId dstBlock, size_t pos,
                std::map<uint32_t, ValueId>& valueMap) {
  const OperationNode& node = src.op(opId);
  OpId id = dst.allocateOp();
  dst.op(id).opcode = node.opcode;
  dst.op(id).attrs = node.attrs;
  dst.op(id).loc = node.loc;
  for (ValueId operand : node.operands)
    dst.op(id).operands.push_back(valueMap.at(operand.idx));
  for (uint32_t i = 0; i < node.results.size(); ++i) {
    ValueId r = dst.mintResult(id, i, src.typeOf(node.results[i]),
                               src.value(node.results[i]).name);
    dst.op(id).results.push_back(r);
    valueMap[node.results[i].idx] = r;
  }
  for (RegionId srcRegion : node.regions) {
    RegionId r = dst.createRegion(id);
    dst.op(id).regions.push_back(r);
    BlockId b = dst.createBlock(r);
    BlockId srcBlock = src.region(srcRegion).front();
    for (ValueId arg : src.block(srcBlock).args)
      valueMap[arg.idx] =
          dst.addBlockArg(b, src.typeOf(arg), src.value(arg).name);
    size_t innerPos = 0;
    for (OpId inner : src.block(srcBlock).ops)
      copyOpImpl(src, inner, dst, b, innerPos++, valueMap);
  }
  dst.insertOp(id, dstBlock, pos);
  return id;
}

} // namespace

OpId copyOperation(const IrModule& srcModule, OpId src, OpBuilder& builder,
                   std::map<uint32_t, ValueId>& valueMap) {
  OpId id = copyOpImpl(srcModule, src, builder.module(),
                       builder.insertionBlock(), builder.insertionPos(),
                       valueMap);
  builder.setInsertionPoint(builder.insertionBlock(),
                            builder.insertionPos() + 1);
  return id;
}

//===----------------------------------------------------------------------===//
// Structural equality
//===----------------------------------------------------------------------===//

namespace {

struct StructCompare {
  const IrModule& a;
  const IrModule& b;
  std::map<uint32_t, uint32_t> valueCorr; // a value idx -> b value idx
  std::string why;

  bool fail(const std::string& msg) {
    why = msg;
    return false;
  }

  bool compareRegion(RegionId ra, RegionId rb) {
    const auto& blocksA = a.region(ra).blocks;
    const auto& blocksB = b.region(rb).blocks;
    if (blocksA.size() != blocksB.size())
      return fail("block count differs");
    for (size_t i = 0; i < blocksA.size(); ++i)
      if (!compareBlock(blocksA[i], blocksB[i]))
        return false;
    return true;
  }

  bool compareBlock(BlockId ba, BlockId bb) {
    const auto& argsA = a.block(ba).args;
    const auto& argsB = b.block(bb).args;
    if (argsA.size() != argsB.size())
      return fail("block argument count differs");
    for (size_t i = 0; i < argsA.size(); ++i) {
      if (a.value(argsA[i]).type != b.value(argsB[i]).type)
        return fail("block argument type differs");
      valueCorr[argsA[i].idx] = argsB[i].idx;
    }
    const auto& opsA = a.block(ba).ops;
    const auto& opsB = b.block(bb).ops;
    if (opsA.size() != opsB.size())
      return fail("op count differs (" + std::to_string(opsA.size()) + " vs " +
                  std::to_string(opsB.size()) + ")");
    for (size_t i = 0; i < opsA.size(); ++i)
      if (!compareOp(opsA[i], opsB[i]))
        return false;
    return true;
  }

  bool compareOp(OpId oa, OpId ob) {
    const OperationNode& na = a.op(oa);
    const OperationNode& nb = b.op(ob);
    if (na.opcode != nb.opcode)
      return fail("opcode differs: '" + na.opcode + "' vs '" + nb.opcode +
                  "'");
    if (na.attrs != nb.attrs)
      return fail("attributes differ on '" + na.opcode + "'");
    if (na.operands.size() != nb.operands.size())
      return fail("operand count differs on '" + na.opcode + "'");
    for (size_t i = 0; i < na.operands.size(); ++i) {
      auto it = valueCorr.find(na.operands[i].idx);
      if (it == valueCorr.end() || it->second != nb.operands[i].idx)
        return fail("operand " + std::to_string(i) + " of '" + na.opcode +
                    "' is wired differently");
    }
    if (na.results.size() != nb.results.size())
      return fail("result count differs on '" + na.opcode + "'");
    for (size_t i = 0; i < na.results.size(); ++i) {
      if (a.value(na.results[i]).type != b.value(nb.results[i]).type)
        return fail("result type differs on '" + na.opcode + "'");
      valueCorr[na.results[i].idx] = nb.results[i].idx;
    }
    if (na.regions.size() != nb.regions.size())
      return fail("region count differs on '" + na.opcode + "'");
    for (size_t i = 0; i < na.regions.size(); ++i)
      if (!compareRegion(na.regions[i], nb.regions[i]))
        return false;
    return true;
  }
};

} // namespace

bool structurallyEqual(const IrModule& a, const IrModule& b,
                       std::string* why) {
  StructCompare cmp{a, b, {}, {}};
  bool ok = cmp.compareRegion(a.entryRegion(), b.entryRegion());
  if (!ok && why)
    *why = cmp.why;
  return ok;
}

} // namespace qcc
