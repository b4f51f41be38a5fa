//===-- Simulator.hpp - Statevector oracle ----------------------*- C++ -*-===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Dense statevector execution of qc-form modules at desk scale (<= 12
// qubits). Measurements fork the branch tree exhaustively instead of
// sampling, so pass-equivalence checks are deterministic and need no
// statistical tolerances.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "qcc/dialect/Unitary.hpp"
#include "qcc/ir/Diagnostics.hpp"
#include "qcc/ir/Module.hpp"

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qcc {

inline constexpr int kMaxSimQubits = 12;
inline constexpr int kMaxUnitaryQubits = 6;
inline constexpr double kEquivTolerance = 1e-9;
inline constexpr double kBranchPruneThreshold = 1e-12;

/// Dense amplitude vector; qubit 0 is the least significant index bit.
class StateVector {
public:
  StateVector() = default;
  /// |0...0> on n qubits.
  explicit StateVector(int numQubits);

  [[nodiscard]] int numQubits() const { return numQubits_; }
  [[nodiscard]] size_t size() const { return amps_.size(); }
  std::complex<double>& amp(size_t i) { return amps_[i]; }
  [[nodiscard]] std::complex<double> amp(size_t i) const { return amps_[i]; }

  /// Applies a k-qubit matrix to the given wires (matrix bit b <-> wires[b]).
  void applyMatrix(const Matrix& u, const std::vector<int>& wires);

  /// Probability of measuring |1> on a wire.
  [[nodiscard]] double probabilityOfOne(int wire) const;

  /// Projects onto `outcome` for the wire and renormalizes by the given
  /// probability.
  void collapse(int wire, bool outcome, double probability);

  [[nodiscard]] double norm() const;

  /// Max-norm distance after aligning global phase on the largest amplitude.
  [[nodiscard]] double maxAbsDiffUpToPhase(const StateVector& other) const;

private:
  int numQubits_ = 0;
  std::vector<std::complex<double>> amps_;
};

/// One leaf of the measurement branch tree. `bits` records measurement
/// outcomes in execution order ('0'/'1' per measure event).
struct OutcomeBranch {
  std::string bits;
  double probability = 0.0;
  StateVector state;
};

struct OutcomeDistribution {
  std::vector<OutcomeBranch> branches;

  /// Probability per outcome record, aggregated over branches.
  [[nodiscard]] std::map<std::string, double> probabilities() const;
  [[nodiscard]] double totalProbability() const;
};

struct SimOptions {
  int maxQubits = kMaxSimQubits;
  /// Iteration cap for cf.while loops before reporting an unbounded loop.
  int maxLoopIterations = 100;
  double pruneThreshold = kBranchPruneThreshold;
};

/// Executes a qc-form module. Reports TooManyQubits / unbounded-loop
/// conditions via diagnostics and returns an empty distribution on error.
OutcomeDistribution simulate(const IrModule& m, DiagnosticList& diags,
                             const SimOptions& options = {});

/// Product of the gate matrices of a measurement-free, control-flow-free
/// module, wire-expanded to the full qubit count (n <= 6).
std::optional<Matrix> circuitUnitary(const IrModule& m, DiagnosticList& diags);

enum class EquivalenceMode { State, Unitary, Distribution };

struct EquivalenceResult {
  bool equivalent = false;
  double maxDeviation = 0.0;
};

/// Compares two qc-form modules. State and unitary modes align global phase
/// before the max-norm test; distribution mode compares per-outcome
/// probabilities. `outputPermutation`, when given, reinterprets b's output
/// wire i as wire outputPermutation[i] (unitary mode only; used for routed
/// circuits).
EquivalenceResult equivalent(const IrModule& a, const IrModule& b,
                             EquivalenceMode mode, DiagnosticList& diags,
                             const std::vector<int>* outputPermutation =
                                 nullptr,
                             double tolerance = kEquivTolerance);

/// Wires (allocation slots) of a qc-form module, in allocation order.
/// Registers contribute one wire per slot.
int countWires(const IrModule& m);

} // namespace qcc
