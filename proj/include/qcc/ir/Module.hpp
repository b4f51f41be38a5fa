//===-- Module.hpp - SSA IR container: ops, values, regions -----*- C++ -*-===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// The IR is a generic multi-dialect SSA graph. Operations, values, blocks
// and regions live in module-owned tables indexed by integer ids; blocks
// hold ordered id lists. Erased entities are tombstoned so ids stay stable,
// which keeps structural diffing and golden tests cheap.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "qcc/ir/Attributes.hpp"
#include "qcc/ir/Diagnostics.hpp"
#include "qcc/ir/Types.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace qcc {

namespace detail {
constexpr uint32_t kInvalidId = std::numeric_limits<uint32_t>::max();
}

#define QCC_DEFINE_ID(Name)                                                    \
  struct Name {                                                                \
    uint32_t idx = detail::kInvalidId;                                         \
    constexpr Name() = default;                                                \
    constexpr explicit Name(uint32_t i) : idx(i) {}                            \
    [[nodiscard]] constexpr bool valid() const {                               \
      return idx != detail::kInvalidId;                                        \
    }                                                                          \
    friend constexpr bool operator==(Name a, Name b) {                         \
      return a.idx == b.idx;                                                   \
    }                                                                          \
    friend constexpr bool operator!=(Name a, Name b) {                         \
      return a.idx != b.idx;                                                   \
    }                                                                          \
    friend constexpr bool operator<(Name a, Name b) { return a.idx < b.idx; }  \
  }

QCC_DEFINE_ID(ValueId);
QCC_DEFINE_ID(OpId);
QCC_DEFINE_ID(BlockId);
QCC_DEFINE_ID(RegionId);

#undef QCC_DEFINE_ID

/// One (operation, operand index) pair referencing a value.
struct Use {
  OpId user;
  uint32_t operandIndex = 0;

  friend bool operator==(Use a, Use b) {
    return a.user == b.user && a.operandIndex == b.operandIndex;
  }
};

struct ValueInfo {
  TypeDesc type;
  /// Defining operation, or invalid if this is a block argument.
  OpId defOp;
  uint32_t defResultIndex = 0;
  /// Owning block for block arguments.
  BlockId defBlock;
  uint32_t defArgIndex = 0;
  /// Optional printer name hint ("q0", "q0_1", ...).
  std::string name;
  std::vector<Use> uses;
  bool dead = false;

  [[nodiscard]] bool isBlockArg() const { return defBlock.valid(); }
};

struct OperationNode {
  std::string opcode;
  std::vector<ValueId> operands;
  std::vector<ValueId> results;
  AttrMap attrs;
  std::vector<RegionId> regions;
  Location loc;
  BlockId parent;
  bool dead = false;

  [[nodiscard]] const AttributeValue* attr(const std::string& name) const {
    auto it = attrs.find(name);
    return it == attrs.end() ? nullptr : &it->second;
  }
};

struct BlockData {
  std::vector<ValueId> args;
  std::vector<OpId> ops;
  RegionId parentRegion;
  bool dead = false;
};

struct RegionData {
  std::vector<BlockId> blocks;
  /// Owning operation; invalid for the module entry region.
  OpId parentOp;
  bool dead = false;

  [[nodiscard]] BlockId front() const { return blocks.front(); }
};

/// The shared container all passes operate on: tables of operations, values,
/// blocks and regions, plus one top-level entry region. Custom-gate
/// definitions (`qc.gate_def`) in the entry region form the symbol table.
class IrModule {
public:
  IrModule();

  IrModule(const IrModule&) = delete;
  IrModule& operator=(const IrModule&) = delete;
  IrModule(IrModule&&) = default;
  IrModule& operator=(IrModule&&) = default;

  [[nodiscard]] RegionId entryRegion() const { return entry_; }
  [[nodiscard]] BlockId entryBlock() const {
    return regions_[entry_.idx].blocks.front();
  }

  // Table access.
  [[nodiscard]] OperationNode& op(OpId id) { return ops_[id.idx]; }
  [[nodiscard]] const OperationNode& op(OpId id) const { return ops_[id.idx]; }
  [[nodiscard]] ValueInfo& value(ValueId id) { return values_[id.idx]; }
  [[nodiscard]] const ValueInfo& value(ValueId id) const {
    return values_[id.idx];
  }
  [[nodiscard]] BlockData& block(BlockId id) { return blocks_[id.idx]; }
  [[nodiscard]] const BlockData& block(BlockId id) const {
    return blocks_[id.idx];
  }
  [[nodiscard]] RegionData& region(RegionId id) { return regions_[id.idx]; }
  [[nodiscard]] const RegionData& region(RegionId id) const {
    return regions_[id.idx];
  }
  [[nodiscard]] size_t opTableSize() const { return ops_.size(); }
  [[nodiscard]] size_t valueTableSize() const { return values_.size(); }

  [[nodiscard]] TypeDesc typeOf(ValueId v) const { return value(v).type; }

  // Construction primitives. OpBuilder is the usual front door; these are
  // the raw table operations it drives.
  RegionId createRegion(OpId parentOp);
  BlockId createBlock(RegionId parent);
  ValueId addBlockArg(BlockId b, TypeDesc type, std::string name = {});
  ValueId mintResult(OpId op, uint32_t resultIndex, TypeDesc type,
                     std::string name = {});
  OpId allocateOp();

  /// Inserts `op` into `b` at `pos` and updates operand use lists.
  void insertOp(OpId op, BlockId b, size_t pos);

  /// Rewires every use of `from` to `to`. Types must match exactly.
  void replaceAllUses(ValueId from, ValueId to);

  /// Removes `op` from its block. Every result must be use-free; operand
  /// use lists are updated and nested regions are erased recursively.
  void eraseOp(OpId op);

  /// Detaches `op` from its current block and re-inserts it into `b` at
  /// `pos`. Values and regions move along unchanged.
  void moveOp(OpId op, BlockId b, size_t pos);

  /// Replaces operand `index` of `user`, keeping use lists consistent.
  void setOperand(OpId user, uint32_t index, ValueId newValue);

  /// Appends an operand slot (used when promoting captures to iter args).
  void appendOperand(OpId user, ValueId v);

  /// Appends a result slot of the given type and returns the new value.
  ValueId appendResult(OpId op, TypeDesc type, std::string name = {});

  /// Looks up a `qc.gate_def` in the entry region by its `name` attribute.
  [[nodiscard]] OpId lookupGateDef(const std::string& name) const;

  /// Index of `op` within its parent block's op list.
  [[nodiscard]] size_t positionInBlock(OpId op) const;

  /// Pre-order walk over live ops: the op itself, then its regions.
  /// Returning false from the callback stops the walk.
  void walk(RegionId region, const std::function<bool(OpId)>& fn) const;
  void walk(const std::function<bool(OpId)>& fn) const;

  /// Short human-readable handle for diagnostics, e.g. "qc.h" or "%q0 = ...".
  [[nodiscard]] std::string describeOp(OpId op) const;

private:
  std::vector<OperationNode> ops_;
  std::vector<ValueInfo> values_;
  std::vector<BlockData> blocks_;
  std::vector<RegionData> regions_;
  RegionId entry_;

  void eraseRegionContents(RegionId region);
};

/// Insertion cursor for building ops. Validates opcode, arity and operand
/// types against the registry; result types are inferred where the opcode
/// determines them and must be passed explicitly otherwise (cf.const).
class OpBuilder {
public:
  OpBuilder(IrModule& m, BlockId b) : mod_(&m), block_(b) {
    pos_ = m.block(b).ops.size();
  }

  static OpBuilder atEnd(IrModule& m, BlockId b) { return {m, b}; }
  static OpBuilder before(IrModule& m, OpId op);
  static OpBuilder after(IrModule& m, OpId op);

  [[nodiscard]] IrModule& module() const { return *mod_; }
  [[nodiscard]] BlockId insertionBlock() const { return block_; }
  [[nodiscard]] size_t insertionPos() const { return pos_; }

  void setInsertionPoint(BlockId b, size_t pos) {
    block_ = b;
    pos_ = pos;
  }

  /// Creates an op with inferred result types. Region-bearing opcodes get
  /// the registered number of empty single-block regions.
  OpId create(const std::string& opcode, std::vector<ValueId> operands = {},
              AttrMap attrs = {}, Location loc = {});

  /// Creates an op with explicit result types (checked against inference
  /// when the opcode can infer).
  OpId create(const std::string& opcode, std::vector<ValueId> operands,
              std::vector<TypeDesc> resultTypes, AttrMap attrs = {},
              Location loc = {});

  /// Names the `index`-th result of the most convenient op.
  void nameResult(OpId op, uint32_t index, std::string name);

private:
  IrModule* mod_;
  BlockId block_;
  size_t pos_ = 0;
};

/// Deep-copies the ops of `srcBlock` (recursively with their regions) into
/// the builder's insertion point. `valueMap` maps source values to
/// replacement values; it is extended with every cloned result. Operands not
/// in the map are used as-is (captures of values outside the cloned range).
void cloneBlockOps(IrModule& m, BlockId srcBlock, OpBuilder& builder,
                   std::map<uint32_t, ValueId>& valueMap);

/// Deep-copies one op (with its nested regions) into the builder's
/// insertion point, advancing the builder past it.
OpId cloneOperation(IrModule& m, OpId src, OpBuilder& builder,
                    std::map<uint32_t, ValueId>& valueMap);

/// Cross-module variant: copies `src` (with nested regions and block args)
/// from `srcModule` into the builder's module. `valueMap` maps source value
/// ids to destination values and gains every copied result and block arg.
OpId copyOperation(const IrModule& srcModule, OpId src, OpBuilder& builder,
                   std::map<uint32_t, ValueId>& valueMap);

/// Structural equality up to value numbering: opcodes, attributes, types,
/// operand wiring and region shapes must agree; value names and locations
/// are ignored. On mismatch returns false and, if `why` is non-null, stores
/// a one-line description of the first difference.
bool structurallyEqual(const IrModule& a, const IrModule& b,
                       std::string* why = nullptr);

} // namespace qcc
