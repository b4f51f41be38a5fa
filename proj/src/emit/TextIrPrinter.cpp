//===-- TextIrPrinter.cpp -------------------------------------------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "qcc/emit/TextIr.hpp"

#include "qcc/ir/Registry.hpp"

#include <map>
#include <set>
#include <sstream>

namespace qcc {

namespace {

struct Printer {
  explicit Printer(const IrModule& mod) : m(mod) {}

  const IrModule& m;
  std::ostringstream os;
  std::map<uint32_t, std::string> names;
  std::set<std::string> used;
  uint32_t nextNumeric = 0;

  std::string assignName(ValueId v) {
    const std::string& hint = m.value(v).name;
    std::string candidate = hint;
    if (candidate.empty()) {
      do {
        candidate = std::to_string(nextNumeric++);
      } while (used.count(candidate));
    } else if (used.count(candidate)) {
      uint32_t n = 1;
      std::string base = candidate;
      do {
        candidate = base + "_" + std::to_string(n++);
      } while (used.count(candidate));
    }
    used.insert(candidate);
    names[v.idx] = candidate;
    return candidate;
  }

  const std::string& nameOf(ValueId v) { return names.at(v.idx); }

  /// True when all-positive, which the printer elides.
  static bool defaultPolarity(const AttributeValue& polarity) {
    for (const auto& p : polarity.asArray())
      if (!p.asBool())
        return false;
    return true;
  }

  bool inlineRegion(RegionId r) const {
    const RegionData& region = m.region(r);
    if (region.blocks.size() != 1)
      return false;
    const BlockData& b = m.block(region.blocks[0]);
    return b.args.empty() && b.ops.size() == 1;
  }

  void printOpLine(OpId opId, int indent) {
    os << std::string(size_t(indent), ' ');
    printOp(opId, indent);
    os << '\n';
  }

  void printOp(OpId opId, int indent) {
    const OperationNode& node = m.op(opId);
    if (!node.results.empty()) {
      bool first = true;
      for (ValueId r : node.results) {
        os << (first ? "%" : ", %") << assignName(r);
        first = false;
      }
      os << " = ";
    }
    os << node.opcode;
    if (!node.operands.empty()) {
      os << '(';
      bool first = true;
      for (ValueId v : node.operands) {
        os << (first ? "%" : ", %") << nameOf(v);
        first = false;
      }
      os << ')';
    }
    // Attributes; an all-positive polarity is implied by the operand count.
    AttrMap attrs = node.attrs;
    if (auto it = attrs.find("polarity");
        it != attrs.end() && defaultPolarity(it->second))
      attrs.erase(it);
    if (!attrs.empty()) {
      os << " { ";
      bool first = true;
      for (const auto& [key, value] : attrs) {
        if (!first)
          os << ", ";
        first = false;
        os << key << " = " << value.str();
      }
      os << " }";
    }
    if (!node.results.empty()) {
      os << " : ";
      bool first = true;
      for (ValueId r : node.results) {
        if (!first)
          os << ", ";
        first = false;
        os << m.typeOf(r).str();
      }
    }
    for (size_t i = 0; i < node.regions.size(); ++i) {
      RegionId r = node.regions[i];
      if (inlineRegion(r)) {
        os << " { ";
        printOp(m.block(m.region(r).front()).ops[0], indent);
        os << " }";
        continue;
      }
      os << " {\n";
      printBlockBody(m.region(r).front(), indent + 2);
      os << std::string(size_t(indent), ' ') << '}';
    }
  }

  void printBlockBody(BlockId b, int indent) {
    const BlockData& block = m.block(b);
    if (!block.args.empty()) {
      os << std::string(size_t(indent), ' ') << "^(";
      bool first = true;
      for (ValueId arg : block.args) {
        if (!first)
          os << ", ";
        first = false;
        os << '%' << assignName(arg) << ": " << m.typeOf(arg).str();
      }
      os << "):\n";
    }
    for (OpId op : block.ops)
      printOpLine(op, indent);
  }

  std::string run() {
    os << "module\n";
    for (OpId op : m.block(m.entryBlock()).ops)
      printOpLine(op, 0);
    return os.str();
  }
};

} // namespace

std::string printIr(const IrModule& m) {
  Printer p(m);
  return p.run();
}

} // namespace qcc
