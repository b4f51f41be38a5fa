//===-- Routing.hpp - Coupling-constrained qubit mapping ---------*- C++ -*-===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Places logical wires onto a connectivity-limited device and inserts SWAP
// chains so every two-qubit interaction lands on a coupling edge, including
// through structured control flow: every region exits with the layout it
// entered with, so branches and loop iterations always agree.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "qcc/ir/Diagnostics.hpp"
#include "qcc/ir/Module.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qcc {

/// Undirected physical-connectivity graph with precomputed all-pairs
/// shortest-path distances.
class CouplingMap {
public:
  CouplingMap() = default;
  /// Throws IrError on self-loops, out-of-range endpoints or a
  /// disconnected graph.
  CouplingMap(int numQubits, std::vector<std::pair<int, int>> edges);

  [[nodiscard]] int numQubits() const { return n_; }
  [[nodiscard]] bool adjacent(int a, int b) const;
  [[nodiscard]] int distance(int a, int b) const { return dist_[a][b]; }
  [[nodiscard]] const std::vector<int>& neighbors(int a) const {
    return adj_[a];
  }
  [[nodiscard]] const std::vector<std::pair<int, int>>& edges() const {
    return edges_;
  }

  /// All shortest paths between two nodes (capped), each as a node list
  /// including both endpoints, sorted lexicographically.
  [[nodiscard]] std::vector<std::vector<int>>
  shortestPaths(int from, int to, size_t cap = 32) const;

  /// Parses {"qubits": n, "edges": [[a,b], ...]} JSON.
  static std::optional<CouplingMap> fromJson(const std::string& text,
                                             DiagnosticList& diags);

private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<std::vector<int>> dist_;
};

enum class InitialLayoutPolicy { Identity, Greedy };

struct RouteOptions {
  InitialLayoutPolicy layout = InitialLayoutPolicy::Identity;
  int lookahead = 5;
};

struct RouteReport {
  /// Virtual wire -> physical qubit. Virtual wires 0..logicalWires-1 are
  /// the input module's allocs in order; the rest are fillers.
  std::vector<int> initialLayout;
  std::vector<int> finalLayout;
  int logicalWires = 0;
  int insertedSwaps = 0;
};

/// Routes a linear qco module onto the device. The result allocates one
/// wire per physical qubit; inserted SWAPs carry an `inserted = true`
/// attribute to distinguish them from program swaps.
std::optional<IrModule> route(const IrModule& m, const CouplingMap& cm,
                              const RouteOptions& options,
                              DiagnosticList& diags,
                              RouteReport* report = nullptr);

/// Post-condition auditor: every two-qubit interaction of the routed module
/// acts on a coupling edge, and every control-flow region's inserted-SWAP
/// permutation is the identity (entry layout == exit layout). With a
/// report, additionally re-traces the top-level inserted SWAPs and checks
/// they carry initialLayout to finalLayout.
DiagnosticList checkConformance(const IrModule& routed, const CouplingMap& cm,
                                const RouteReport* report = nullptr);

} // namespace qcc
