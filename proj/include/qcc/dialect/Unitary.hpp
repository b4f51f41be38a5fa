//===-- Unitary.hpp - Unified unitary introspection -------------*- C++ -*-===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Every unitary operation -- standard gates, custom-gate calls, and gates
// wrapped in ctrl/inv/pow modifiers, in either dialect -- exposes the same
// descriptor: base kind, angle parameters and a modifier stack. The
// descriptor determines a unique unitary matrix, which is what the
// verifier, the optimizer and the simulator all consume.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "qcc/ir/Module.hpp"
#include "qcc/ir/Registry.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace qcc {

/// Angle comparisons treat rotations as equal up to this tolerance after
/// reduction modulo 2*pi (global phase is unobservable).
inline constexpr double kAngleTolerance = 1e-12;

/// Dense square complex matrix, row-major. Row/column index bit k
/// corresponds to qubit operand k (qubit 0 is least significant).
class Matrix {
public:
  Matrix() = default;
  explicit Matrix(int dim) : dim_(dim), a_(size_t(dim) * dim) {}

  static Matrix identity(int dim);

  [[nodiscard]] int dim() const { return dim_; }
  std::complex<double>& at(int row, int col) {
    return a_[size_t(row) * dim_ + col];
  }
  [[nodiscard]] std::complex<double> at(int row, int col) const {
    return a_[size_t(row) * dim_ + col];
  }

  [[nodiscard]] Matrix operator*(const Matrix& rhs) const;
  [[nodiscard]] Matrix dagger() const;
  [[nodiscard]] Matrix power(int64_t exponent) const;

  /// Largest entry-wise absolute difference.
  [[nodiscard]] double maxAbsDiff(const Matrix& other) const;
  /// maxAbsDiff after aligning the global phase on the largest entry.
  [[nodiscard]] double maxAbsDiffUpToPhase(const Matrix& other) const;

private:
  int dim_ = 0;
  std::vector<std::complex<double>> a_;
};

/// Embeds a matrix acting on `wires` (bit k of the small index <-> wires[k])
/// into an n-qubit unitary, identity elsewhere.
Matrix embedMatrix(const Matrix& u, const std::vector<int>& wires, int n);

/// Permutation unitary for sigma: wire i -> wire sigma[i].
Matrix permutationMatrix(const std::vector<int>& sigma);

struct ModifierEntry {
  enum class Kind : uint8_t { Ctrl, Inv, Pow };
  Kind kind;
  std::vector<bool> polarity; // Ctrl: one entry per control, true = |1>
  int64_t exponent = 0;       // Pow

  [[nodiscard]] int controls() const {
    return static_cast<int>(polarity.size());
  }
  friend bool operator==(const ModifierEntry& a, const ModifierEntry& b) {
    return a.kind == b.kind && a.polarity == b.polarity &&
           a.exponent == b.exponent;
  }
};

struct UnitaryDescriptor {
  GateKind base = GateKind::None;
  std::string customName; // when base == GateKind::Custom
  std::vector<double> angles;
  std::vector<ModifierEntry> stack; // outermost first
  int targetArity = 0;

  [[nodiscard]] int controlCount() const {
    int n = 0;
    for (const auto& e : stack)
      n += e.controls();
    return n;
  }
  [[nodiscard]] int qubitCount() const { return targetArity + controlCount(); }

  /// True if the bases, stacks and angles agree; rotation angles compare
  /// modulo 2*pi within kAngleTolerance.
  [[nodiscard]] bool equals(const UnitaryDescriptor& other,
                            double tol = kAngleTolerance) const;
};

/// Reads the descriptor of a unitary op (standard gate, modifier, or gate
/// call in either dialect), flattening nested modifier regions. Throws
/// IrError for non-unitary ops (measure, reset, alloc, dealloc, ...).
UnitaryDescriptor unitaryDescriptor(const IrModule& m, OpId op);

/// The qubit values the descriptor's matrix acts on, in matrix bit order:
/// controls outermost-first, then the base gate's targets.
std::vector<ValueId> unitaryWires(const IrModule& m, OpId op);

/// Descriptor of the op with the inverse matrix: self-inverse kinds map to
/// themselves, s<->sdg, t<->tdg, sx<->sxdg, rotations negate their angles,
/// u(theta,phi,lambda) -> u(-theta,-lambda,-phi); otherwise an Inv stack
/// entry is pushed or popped. Ctrl and Pow commute with inversion.
UnitaryDescriptor inverseDescriptor(const UnitaryDescriptor& d);

/// The unitary matrix of the descriptor, dimension 2^(targets+controls).
/// Custom-gate kinds need `symbols` to resolve their definition bodies;
/// without it they raise IrError ("unresolved custom gate").
Matrix descriptorMatrix(const UnitaryDescriptor& d,
                        const IrModule* symbols = nullptr);

/// Matrix of a standard gate kind given its angle parameters.
Matrix gateMatrix(GateKind kind, const std::vector<double>& angles);

/// Materializes an op tree realizing the descriptor, applied to `wires`
/// (refs in qc form, states in qco form; controls outermost-first, then
/// targets -- the order unitaryWires returns). For custom bases,
/// `customAngles` supplies the f64 angle operands of the call. Returns the
/// outermost op.
OpId buildFromDescriptor(IrModule& m, OpBuilder& b, Dialect dialect,
                         const UnitaryDescriptor& d,
                         const std::vector<ValueId>& wires,
                         const std::vector<ValueId>& customAngles = {},
                         Location loc = {});

} // namespace qcc
