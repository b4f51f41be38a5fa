//===-- Routing.cpp -------------------------------------------------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "qcc/transforms/Routing.hpp"

#include "qcc/dialect/QC.hpp"
#include "qcc/dialect/QCO.hpp"
#include "qcc/dialect/Unitary.hpp"
#include "qcc/ir/Registry.hpp"
#include "qcc/ir/Verifier.hpp"

#include <json.hpp>

#include <algorithm>
#include <climits>
#include <deque>
#include <functional>
#include <set>

namespace qcc {

//===----------------------------------------------------------------------===//
// CouplingMap
//===----------------------------------------------------------------------===//

CouplingMap::CouplingMap(int numQubits, std::vector<std::pair<int, int>> edges)
    : n_(numQubits) {
  if (n_ < 1)
    throw IrError("coupling map needs at least one qubit");
  adj_.assign(size_t(n_), {});
  std::set<std::pair<int, int>> seen;
  for (auto [a, b] : edges) {
    if (a == b)
      throw IrError("coupling map contains a self-loop");
    if (a < 0 || b < 0 || a >= n_ || b >= n_)
      throw IrError("coupling map edge endpoint out of range");
    auto [lo, hi] = std::minmax(a, b);
    if (!seen.insert({lo, hi}).second)
      continue;
    edges_.emplace_back(lo, hi);
    adj_[size_t(a)].push_back(b);
    adj_[size_t(b)].push_back(a);
  }
  for (auto& nbrs : adj_)
    std::sort(nbrs.begin(), nbrs.end());
  std::sort(edges_.begin(), edges_.end());

  // BFS all-pairs distances; also proves connectivity.
  dist_.assign(size_t(n_), std::vector<int>(size_t(n_), -1));
  for (int s = 0; s < n_; ++s) {
    auto& d = dist_[size_t(s)];
    d[size_t(s)] = 0;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : adj_[size_t(u)])
        if (d[size_t(v)] < 0) {
          d[size_t(v)] = d[size_t(u)] + 1;
          queue.push_back(v);
        }
    }
    for (int t = 0; t < n_; ++t)
      if (d[size_t(t)] < 0)
        throw IrError("coupling map is not connected");
  }
}

bool CouplingMap::adjacent(int a, int b) const { return dist_[a][b] == 1; }

std::vector<std::vector<int>> CouplingMap::shortestPaths(int from, int to,
                                                         size_t cap) const {
  std::vector<std::vector<int>> out;
  std::vector<int> path{from};
  // DFS over the BFS shortest-path DAG; index-ordered neighbors give
  // lexicographically sorted output.
  std::function<void(int)> go = [&](int u) {
    if (out.size() >= cap)
      return;
    if (u == to) {
      out.push_back(path);
      return;
    }
    for (int v : adj_[size_t(u)]) {
      if (dist_[size_t(v)][size_t(to)] != dist_[size_t(u)][size_t(to)] - 1)
        continue;
      path.push_back(v);
      go(v);
      path.pop_back();
    }
  };
  go(from);
  return out;
}

std::optional<CouplingMap> CouplingMap::fromJson(const std::string& text,
                                                 DiagnosticList& diags) {
  try {
    auto j = nlohmann::json::parse(text);
    int n = j.at("qubits").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges"))
      edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    return CouplingMap(n, std::move(edges));
  } catch (const std::exception& e) {
    diags.error(std::string("invalid coupling map: ") + e.what());
    return std::nullopt;
  }
}

//===----------------------------------------------------------------------===//
// Wire tracing (shared by the planner and the conformance auditor)
//===----------------------------------------------------------------------===//

namespace {

/// Propagates wire identity positionally through a qco module: allocs mint
/// wires, results inherit their operands' wires, region args inherit the
/// parent op's state operands.
struct WireTrace {
  const IrModule& m;
  std::map<uint32_t, int> wireOf;
  int nextWire = 0;

  explicit WireTrace(const IrModule& mod) : m(mod) {}

  std::vector<int> statesToWires(const std::vector<ValueId>& values) {
    std::vector<int> wires;
    for (ValueId v : values)
      if (m.typeOf(v).isQubitState()) {
        auto it = wireOf.find(v.idx);
        wires.push_back(it == wireOf.end() ? -1 : it->second);
      }
    return wires;
  }

  /// visit(op, wires of its qubit states) is called for every op in
  /// pre-order; wires for unitary ops are in descriptor order.
  void walk(const std::function<void(OpId, const std::vector<int>&)>& visit) {
    walkBlock(m.entryBlock(), visit);
  }

  void walkBlock(BlockId block,
                 const std::function<void(OpId, const std::vector<int>&)>&
                     visit) {
    for (OpId op : m.block(block).ops) {
      const OperationNode& node = m.op(op);
      const OpcodeInfo* info = lookupOpcode(node.opcode);
      if (!info || node.opcode == "qc.gate_def")
        continue;
      if (info->kind == OpKind::Alloc) {
        wireOf[node.results[0].idx] = nextWire++;
        visit(op, {});
        continue;
      }
      std::vector<int> wires;
      if (info->isUnitary() && info->dialect == Dialect::QCO) {
        for (ValueId v : unitaryWires(m, op)) {
          auto it = wireOf.find(v.idx);
          wires.push_back(it == wireOf.end() ? -1 : it->second);
        }
      } else {
        wires = statesToWires(node.operands);
      }
      // Results inherit wires positionally.
      size_t pos = 0;
      for (ValueId r : node.results)
        if (m.typeOf(r).isQubitState() && pos < wires.size())
          wireOf[r.idx] = wires[pos++];
      visit(op, wires);
      // Region args inherit from the state operands, then recurse.
      if (!node.regions.empty() && info->isControlFlow()) {
        auto operandWires = statesToWires(node.operands);
        for (RegionId r : node.regions) {
          BlockId b = m.region(r).front();
          size_t argPos = 0;
          for (ValueId arg : m.block(b).args)
            if (m.typeOf(arg).isQubitState() && argPos < operandWires.size())
              wireOf[arg.idx] = operandWires[argPos++];
          walkBlock(b, visit);
        }
      } else if (info->isModifier() && info->dialect == Dialect::QCO) {
        // Body args line up with the target tail of the op's wires.
        BlockId b = m.region(node.regions[0]).front();
        size_t controls = node.attr("polarity")
                              ? (node.opcode == "qco.ctrl"
                                     ? node.attr("polarity")->asArray().size()
                                     : 0)
                              : 0;
        size_t argPos = controls;
        for (ValueId arg : m.block(b).args)
          if (m.typeOf(arg).isQubitState() && argPos < wires.size())
            wireOf[arg.idx] = wires[argPos++];
        walkBlock(b, visit);
      }
    }
  }
};

//===----------------------------------------------------------------------===//
// Layout
//===----------------------------------------------------------------------===//

struct Layout {
  std::vector<int> toPhys; // virtual wire -> physical qubit
  std::vector<int> toVirt; // physical qubit -> virtual wire

  static Layout identity(int n) {
    Layout l;
    l.toPhys.resize(size_t(n));
    l.toVirt.resize(size_t(n));
    for (int i = 0; i < n; ++i)
      l.toPhys[size_t(i)] = l.toVirt[size_t(i)] = i;
    return l;
  }

  void swapPhysical(int a, int b) {
    int va = toVirt[size_t(a)];
    int vb = toVirt[size_t(b)];
    std::swap(toVirt[size_t(a)], toVirt[size_t(b)]);
    toPhys[size_t(va)] = b;
    toPhys[size_t(vb)] = a;
  }

  friend bool operator==(const Layout& x, const Layout& y) {
    return x.toPhys == y.toPhys;
  }
};

//===----------------------------------------------------------------------===//
// Router
//===----------------------------------------------------------------------===//

struct Router {
  const IrModule& src;
  const CouplingMap& cm;
  const RouteOptions& options;
  DiagnosticList& diags;
  IrModule out;
  bool failed = false;

  int logicalWires = 0;
  Layout layout;
  Layout initialLayout;
  int swapCount = 0;

  std::map<uint32_t, int> virtOfState;   // src state -> virtual wire
  std::map<uint32_t, ValueId> classical; // src classical -> out value
  std::vector<ValueId> physState;        // physical -> current out state

  // Planner data: wires of every op's qubit states, filled by a WireTrace
  // pre-pass (used for the initial layout and the lookahead window).
  std::map<uint32_t, std::vector<int>> plannedWires;
  std::vector<std::pair<int, int>> interactionSequence;

  Router(const IrModule& m, const CouplingMap& map, const RouteOptions& opts,
         DiagnosticList& d)
      : src(m), cm(map), options(opts), diags(d) {}

  void fail(OpId op, const std::string& msg) {
    if (!failed)
      diags.error(msg, src.op(op).loc);
    failed = true;
  }

  void plan() {
    WireTrace trace(src);
    trace.walk([&](OpId op, const std::vector<int>& wires) {
      plannedWires[op.idx] = wires;
      if (wires.size() == 2 && wires[0] >= 0 && wires[1] >= 0 &&
          isUnitaryOp(src, op))
        interactionSequence.emplace_back(wires[0], wires[1]);
    });
    logicalWires = trace.nextWire;
  }

  Layout chooseInitialLayout(int n) {
    if (options.layout == InitialLayoutPolicy::Identity)
      return Layout::identity(n);
    std::vector<int> virtToPhys(size_t(n), -1);
    std::vector<bool> physUsed(size_t(n), false);
    auto place = [&](int wire, int phys) {
      virtToPhys[size_t(wire)] = phys;
      physUsed[size_t(phys)] = true;
    };
    for (auto [a, b] : interactionSequence) {
      bool aPlaced = virtToPhys[size_t(a)] >= 0;
      bool bPlaced = virtToPhys[size_t(b)] >= 0;
      if (aPlaced && bPlaced)
        continue;
      if (!aPlaced && !bPlaced) {
        for (auto [u, v] : cm.edges())
          if (!physUsed[size_t(u)] && !physUsed[size_t(v)]) {
            place(a, u);
            place(b, v);
            break;
          }
      } else {
        int anchor = virtToPhys[size_t(aPlaced ? a : b)];
        int other = aPlaced ? b : a;
        for (int nbr : cm.neighbors(anchor))
          if (!physUsed[size_t(nbr)]) {
            place(other, nbr);
            break;
          }
      }
    }
    for (int w = 0; w < n; ++w) {
      if (virtToPhys[size_t(w)] >= 0)
        continue;
      for (int p = 0; p < n; ++p)
        if (!physUsed[size_t(p)]) {
          place(w, p);
          break;
        }
    }
    Layout l;
    l.toPhys = virtToPhys;
    l.toVirt.assign(size_t(n), 0);
    for (int w = 0; w < n; ++w)
      l.toVirt[size_t(l.toPhys[size_t(w)])] = w;
    return l;
  }

  //===--------------------------------------------------------------------===//
  // SWAP machinery
  //===--------------------------------------------------------------------===//

  void emitSwap(OpBuilder& b, int physA, int physB, Location loc) {
    OpId op = b.create("qco.swap",
                       {physState[size_t(physA)], physState[size_t(physB)]},
                       {{"inserted", AttributeValue(true)}}, loc);
    physState[size_t(physA)] = out.op(op).results[0];
    physState[size_t(physB)] = out.op(op).results[1];
    layout.swapPhysical(physA, physB);
    ++swapCount;
  }

  void makeAdjacent(OpBuilder& b, int virtA, int virtB, Location loc,
                    const std::vector<std::pair<int, int>>& lookahead) {
    int pa = layout.toPhys[size_t(virtA)];
    int pb = layout.toPhys[size_t(virtB)];
    if (pa == pb || cm.adjacent(pa, pb))
      return;
    auto paths = cm.shortestPaths(pa, pb);
    size_t bestIndex = 0;
    long bestCost = LONG_MAX;
    for (size_t i = 0; i < paths.size(); ++i) {
      Layout probe = layout;
      const auto& path = paths[i];
      for (size_t s = 0; s + 2 < path.size(); ++s)
        probe.swapPhysical(path[s], path[s + 1]);
      long cost = 0;
      for (auto [x, y] : lookahead)
        cost += cm.distance(probe.toPhys[size_t(x)], probe.toPhys[size_t(y)]);
      if (cost < bestCost) { // ties keep the lexicographically first path
        bestCost = cost;
        bestIndex = i;
      }
    }
    const auto& path = paths[bestIndex];
    for (size_t s = 0; s + 2 < path.size(); ++s)
      emitSwap(b, path[s], path[s + 1], loc);
  }

  /// Physical indices ordered so every remaining suffix stays connected.
  std::vector<int> eliminationOrder() {
    std::set<int> remaining;
    for (int p = 0; p < cm.numQubits(); ++p)
      remaining.insert(p);
    std::vector<int> order;
    while (remaining.size() > 1) {
      for (int p : remaining) {
        std::set<int> rest = remaining;
        rest.erase(p);
        if (isConnected(rest)) {
          order.push_back(p);
          remaining = rest;
          break;
        }
      }
    }
    order.push_back(*remaining.begin());
    return order;
  }

  bool isConnected(const std::set<int>& nodes) {
    if (nodes.empty())
      return true;
    std::set<int> seen{*nodes.begin()};
    std::deque<int> queue{*nodes.begin()};
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : cm.neighbors(u))
        if (nodes.count(v) && seen.insert(v).second)
          queue.push_back(v);
    }
    return seen.size() == nodes.size();
  }

  std::vector<int> pathWithin(const std::set<int>& nodes, int from, int to) {
    std::map<int, int> parent;
    std::deque<int> queue{from};
    parent[from] = from;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      if (u == to)
        break;
      for (int v : cm.neighbors(u))
        if (nodes.count(v) && !parent.count(v)) {
          parent[v] = u;
          queue.push_back(v);
        }
    }
    std::vector<int> path;
    for (int v = to; v != from; v = parent.at(v))
      path.push_back(v);
    path.push_back(from);
    std::reverse(path.begin(), path.end());
    return path;
  }

  void restoreLayout(OpBuilder& b, const Layout& target, Location loc) {
    std::set<int> remaining;
    for (int p = 0; p < cm.numQubits(); ++p)
      remaining.insert(p);
    for (int p : eliminationOrder()) {
      int wantedVirt = target.toVirt[size_t(p)];
      int from = layout.toPhys[size_t(wantedVirt)];
      if (from != p) {
        auto path = pathWithin(remaining, from, p);
        for (size_t s = 0; s + 1 < path.size(); ++s)
          emitSwap(b, path[s], path[s + 1], loc);
      }
      remaining.erase(p);
    }
  }

  //===--------------------------------------------------------------------===//
  // Rebuild walk
  //===--------------------------------------------------------------------===//

  std::vector<std::pair<int, int>> lookaheadAfter(BlockId block,
                                                  size_t index, int virtA,
                                                  int virtB) {
    std::vector<std::pair<int, int>> window;
    const auto& ops = src.block(block).ops;
    for (size_t i = index + 1;
         i < ops.size() && window.size() < size_t(options.lookahead); ++i) {
      auto it = plannedWires.find(ops[i].idx);
      if (it == plannedWires.end())
        continue;
      const auto& wires = it->second;
      if (wires.size() == 2 && wires[0] >= 0 && wires[1] >= 0 &&
          isUnitaryOp(src, ops[i]) &&
          (wires[0] == virtA || wires[0] == virtB || wires[1] == virtA ||
           wires[1] == virtB))
        window.emplace_back(wires[0], wires[1]);
    }
    return window;
  }

  int virtOf(OpId at, ValueId state) {
    auto it = virtOfState.find(state.idx);
    if (it == virtOfState.end()) {
      fail(at, "qubit state has no wire assignment");
      return 0;
    }
    return it->second;
  }

  ValueId mapClassical(OpId at, ValueId v) {
    auto it = classical.find(v.idx);
    if (it == classical.end()) {
      fail(at, "classical value has no converted counterpart");
      return ValueId{};
    }
    return it->second;
  }

  void convertUnitary(OpId srcOp, OpBuilder& b, BlockId srcBlock,
                      size_t opIndex) {
    auto srcWires = unitaryWires(src, srcOp);
    std::vector<int> virts;
    for (ValueId v : srcWires)
      virts.push_back(virtOf(srcOp, v));
    if (failed)
      return;
    if (virts.size() > 2) {
      fail(srcOp, "'" + src.op(srcOp).opcode +
                      "' acts on more than two qubits; run "
                      "canonicalize-modifiers before route");
      return;
    }
    if (virts.size() == 2)
      makeAdjacent(b, virts[0], virts[1], src.op(srcOp).loc,
                   lookaheadAfter(srcBlock, opIndex, virts[0], virts[1]));

    std::map<uint32_t, ValueId> map;
    for (size_t i = 0; i < srcWires.size(); ++i)
      map[srcWires[i].idx] =
          physState[size_t(layout.toPhys[size_t(virts[i])])];
    for (ValueId v : src.op(srcOp).operands)
      if (src.typeOf(v).kind == TypeKind::F64)
        map[v.idx] = mapClassical(srcOp, v);
    if (failed)
      return;
    OpId newOp = copyOperation(src, srcOp, b, map);
    const auto& results = out.op(newOp).results;
    for (size_t i = 0; i < virts.size(); ++i) {
      physState[size_t(layout.toPhys[size_t(virts[i])])] = results[i];
      virtOfState[src.op(srcOp).results[i].idx] = virts[i];
    }
  }

  void convertControlFlow(OpId srcOp, OpBuilder& b) {
    const OperationNode& node = src.op(srcOp);
    const int n = cm.numQubits();

    std::vector<ValueId> operands;
    std::vector<int> operandVirts;
    for (ValueId v : node.operands) {
      if (src.typeOf(v).isQubitState())
        operandVirts.push_back(virtOf(srcOp, v));
      else
        operands.push_back(mapClassical(srcOp, v));
    }
    if (failed)
      return;
    for (int p = 0; p < n; ++p)
      operands.push_back(physState[size_t(p)]);

    OpId newOp = b.create(node.opcode, operands, AttrMap{}, node.loc);
    Layout entryLayout = layout;

    for (size_t r = 0; r < node.regions.size(); ++r) {
      BlockId srcBlock = src.region(node.regions[r]).front();
      BlockId dstBlock = out.region(out.op(newOp).regions[r]).front();

      layout = entryLayout;
      // Region args: classical ones mirror the source, then one state arg
      // per physical qubit.
      size_t statePos = 0;
      for (ValueId arg : src.block(srcBlock).args) {
        if (src.typeOf(arg).isQubitState()) {
          virtOfState[arg.idx] = operandVirts[statePos++];
        } else {
          classical[arg.idx] = out.addBlockArg(dstBlock, src.typeOf(arg),
                                               src.value(arg).name);
        }
      }
      for (int p = 0; p < n; ++p)
        physState[size_t(p)] =
            out.addBlockArg(dstBlock, TypeDesc::qubitState());

      OpBuilder body(out, dstBlock);
      OpId srcYield;
      const auto& ops = src.block(srcBlock).ops;
      for (size_t i = 0; i < ops.size(); ++i) {
        if (src.op(ops[i]).opcode == "cf.yield") {
          srcYield = ops[i];
          break;
        }
        convertOp(ops[i], body, srcBlock, i);
        if (failed)
          return;
      }
      restoreLayout(body, entryLayout,
                    srcYield.valid() ? src.op(srcYield).loc : node.loc);

      std::vector<ValueId> yieldOperands;
      if (srcYield.valid())
        for (ValueId v : src.op(srcYield).operands)
          if (!src.typeOf(v).isQubitState())
            yieldOperands.push_back(mapClassical(srcYield, v));
      if (failed)
        return;
      for (int p = 0; p < n; ++p)
        yieldOperands.push_back(physState[size_t(p)]);
      body.create("cf.yield", yieldOperands, AttrMap{},
                  srcYield.valid() ? src.op(srcYield).loc : node.loc);
    }

    // Every region restored the entry layout, so it holds after the op too.
    layout = entryLayout;
    const auto& results = out.op(newOp).results;
    size_t classicalCount = results.size() - size_t(n);
    size_t classicalIndex = 0;
    size_t stateIndex = 0;
    for (ValueId r : node.results) {
      if (src.typeOf(r).isQubitState())
        virtOfState[r.idx] = operandVirts[stateIndex++];
      else
        classical[r.idx] = results[classicalIndex++];
    }
    for (int p = 0; p < n; ++p)
      physState[size_t(p)] = results[classicalCount + size_t(p)];
  }

  void convertOp(OpId srcOp, OpBuilder& b, BlockId srcBlock, size_t opIndex) {
    const OperationNode& node = src.op(srcOp);
    const OpcodeInfo& info = getOpcode(node.opcode);
    switch (info.kind) {
    case OpKind::GateDef: {
      std::map<uint32_t, ValueId> map;
      copyOperation(src, srcOp, b, map);
      return;
    }
    case OpKind::Alloc: {
      if (node.parent != src.entryBlock()) {
        fail(srcOp, "allocation inside a control-flow region is not "
                    "supported by route");
        return;
      }
      virtOfState[node.results[0].idx] = allocCounter_++;
      return;
    }
    case OpKind::Dealloc:
      return; // physical wires persist in the routed program
    case OpKind::Gate:
    case OpKind::Ctrl:
    case OpKind::Inv:
    case OpKind::Pow:
    case OpKind::CallGate:
      convertUnitary(srcOp, b, srcBlock, opIndex);
      return;
    case OpKind::Measure: {
      int w = virtOf(srcOp, node.operands[0]);
      if (failed)
        return;
      int p = layout.toPhys[size_t(w)];
      OpId newOp = b.create("qco.measure", {physState[size_t(p)]}, AttrMap{},
                            node.loc);
      physState[size_t(p)] = out.op(newOp).results[0];
      virtOfState[node.results[0].idx] = w;
      classical[node.results[1].idx] = out.op(newOp).results[1];
      out.value(out.op(newOp).results[1]).name =
          src.value(node.results[1]).name;
      return;
    }
    case OpKind::Reset: {
      int w = virtOf(srcOp, node.operands[0]);
      if (failed)
        return;
      int p = layout.toPhys[size_t(w)];
      OpId newOp =
          b.create("qco.reset", {physState[size_t(p)]}, AttrMap{}, node.loc);
      physState[size_t(p)] = out.op(newOp).results[0];
      virtOfState[node.results[0].idx] = w;
      return;
    }
    case OpKind::Const: {
      std::map<uint32_t, ValueId> map;
      OpId newOp = copyOperation(src, srcOp, b, map);
      classical[node.results[0].idx] = out.op(newOp).results[0];
      return;
    }
    case OpKind::If:
    case OpKind::For:
    case OpKind::While:
      convertControlFlow(srcOp, b);
      return;
    case OpKind::Yield:
      fail(srcOp, "unexpected cf.yield outside a region");
      return;
    case OpKind::AllocReg:
    case OpKind::Extract:
      fail(srcOp, "'" + node.opcode + "' cannot appear in a qco module");
      return;
    }
  }

  int allocCounter_ = 0;

  std::optional<IrModule> run(RouteReport* report) {
    DiagnosticList vd = verify(src);
    if (vd.hasErrors()) {
      diags.append(vd);
      diags.error("route: input module does not verify");
      return std::nullopt;
    }
    if (hasDialectOps(src, Dialect::QC)) {
      diags.error("route: input module is not in qco form");
      return std::nullopt;
    }
    plan();
    const int n = cm.numQubits();
    if (logicalWires > n) {
      diags.error("route: program uses " + std::to_string(logicalWires) +
                  " qubits but the device has " + std::to_string(n));
      return std::nullopt;
    }
    layout = chooseInitialLayout(n);
    initialLayout = layout;

    OpBuilder b(out, out.entryBlock());
    physState.resize(size_t(n));
    for (int p = 0; p < n; ++p) {
      OpId alloc = b.create("qco.alloc");
      out.value(out.op(alloc).results[0]).name = "p" + std::to_string(p) +
                                                 "_0";
      physState[size_t(p)] = out.op(alloc).results[0];
    }
    const auto& ops = src.block(src.entryBlock()).ops;
    for (size_t i = 0; i < ops.size(); ++i) {
      convertOp(ops[i], b, src.entryBlock(), i);
      if (failed)
        return std::nullopt;
    }
    if (report) {
      report->initialLayout = initialLayout.toPhys;
      report->finalLayout = layout.toPhys;
      report->logicalWires = logicalWires;
      report->insertedSwaps = swapCount;
    }
    return std::move(out);
  }
};

} // namespace

std::optional<IrModule> route(const IrModule& m, const CouplingMap& cm,
                              const RouteOptions& options,
                              DiagnosticList& diags, RouteReport* report) {
  Router router(m, cm, options, diags);
  return router.run(report);
}

//===----------------------------------------------------------------------===//
// Conformance audit
//===----------------------------------------------------------------------===//

DiagnosticList checkConformance(const IrModule& routed, const CouplingMap& cm,
                                const RouteReport* report) {
  DiagnosticList diags;
  const int n = cm.numQubits();

  // Relative inserted-SWAP permutation per region: entry layout == exit
  // layout iff the net permutation is the identity.
  WireTrace trace(routed);
  // WireTrace has no region-exit hook, so audit permutations with an
  // explicit recursive walk instead.
  std::function<void(BlockId, std::vector<int>&)> walkBlock =
      [&](BlockId block, std::vector<int>& perm) {
        for (OpId op : routed.block(block).ops) {
          const OperationNode& node = routed.op(op);
          const OpcodeInfo* info = lookupOpcode(node.opcode);
          if (!info || node.opcode == "qc.gate_def")
            continue;
          if (info->isUnitary() && info->dialect == Dialect::QCO) {
            std::vector<int> wires;
            for (ValueId v : unitaryWires(routed, op)) {
              auto it = trace.wireOf.find(v.idx);
              wires.push_back(it == trace.wireOf.end() ? -1 : it->second);
            }
            if (wires.size() == 2) {
              if (wires[0] < 0 || wires[1] < 0 || wires[0] >= n ||
                  wires[1] >= n || !cm.adjacent(wires[0], wires[1]))
                diags.error("two-qubit interaction not on a coupling edge",
                            node.loc);
              if (node.opcode == "qco.swap" && node.attr("inserted"))
                std::swap(perm[size_t(wires[0])], perm[size_t(wires[1])]);
            } else if (wires.size() > 2) {
              diags.error("interaction with more than two qubits survived "
                          "routing",
                          node.loc);
            }
          }
          if (info->isControlFlow()) {
            for (RegionId r : node.regions) {
              std::vector<int> inner(static_cast<size_t>(n), 0);
              for (int i = 0; i < n; ++i)
                inner[size_t(i)] = i;
              walkBlock(routed.region(r).front(), inner);
              bool identity = true;
              for (int i = 0; i < n; ++i)
                identity &= inner[size_t(i)] == i;
              if (!identity)
                diags.error("region exit layout differs from its entry "
                            "layout",
                            node.loc);
            }
          } else if (info->isModifier()) {
            // Wire propagation for bodies is handled by the trace pre-pass.
          }
        }
      };

  // Seed the wire map over the whole module first.
  trace.walk([](OpId, const std::vector<int>&) {});
  std::vector<int> topPerm(static_cast<size_t>(n), 0);
  for (int i = 0; i < n; ++i)
    topPerm[size_t(i)] = i;
  walkBlock(routed.entryBlock(), topPerm);

  if (report && int(report->initialLayout.size()) == n &&
      int(report->finalLayout.size()) == n) {
    // topPerm[p] names the initial physical position whose content sits at
    // p after the top-level inserted SWAPs (regions net to the identity).
    // A virtual wire starting at initial[v] must therefore end at the p
    // with topPerm[p] == initial[v], and that p must be finalLayout[v].
    std::vector<int> contentAt(size_t(n), 0); // initial position -> current
    for (int p = 0; p < n; ++p)
      contentAt[size_t(topPerm[size_t(p)])] = p;
    for (int v = 0; v < n; ++v) {
      int traced = contentAt[size_t(report->initialLayout[size_t(v)])];
      if (traced != report->finalLayout[size_t(v)]) {
        diags.error("traced inserted SWAPs do not reproduce the reported "
                    "final layout");
        break;
      }
    }
  }
  return diags;
}

} // namespace qcc
