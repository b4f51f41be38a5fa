//===-- TestUtil.hpp - Shared test helpers ----------------------*- C++ -*-===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Test-side oracle helpers. The matrix routines here are deliberately
// independent of qcc::Matrix and qcc::descriptorMatrix so that gate-algebra
// checks compare two unrelated computation paths.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "qcc/ir/Module.hpp"

#include <complex>
#include <random>
#include <string>
#include <vector>

namespace qcctest {

using Cx = std::complex<double>;
/// Row-major square matrix, dimension inferred from size.
using CMat = std::vector<Cx>;

inline int cmatDim(const CMat& m) {
  int d = 1;
  while (size_t(d) * size_t(d) < m.size())
    ++d;
  return d;
}

inline CMat cmatMul(const CMat& a, const CMat& b) {
  int d = cmatDim(a);
  CMat out(size_t(d) * d, Cx(0));
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j)
        out[size_t(i) * d + j] += a[size_t(i) * d + k] * b[size_t(k) * d + j];
  return out;
}

inline CMat cmatDagger(const CMat& a) {
  int d = cmatDim(a);
  CMat out(size_t(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      out[size_t(j) * d + i] = std::conj(a[size_t(i) * d + j]);
  return out;
}

inline CMat cmatIdentity(int d) {
  CMat out(size_t(d) * d, Cx(0));
  for (int i = 0; i < d; ++i)
    out[size_t(i) * d + i] = 1.0;
  return out;
}

inline double cmatMaxDiff(const CMat& a, const CMat& b) {
  double worst = 0.0;
  for (size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

/// Max difference after aligning the global phase on a's largest entry.
inline double cmatMaxDiffUpToPhase(const CMat& a, const CMat& b) {
  size_t ref = 0;
  double best = -1.0;
  for (size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i]) > best) {
      best = std::abs(a[i]);
      ref = i;
    }
  if (best <= 0.0 || std::abs(b[ref]) == 0.0)
    return cmatMaxDiff(a, b);
  Cx phase = a[ref] / std::abs(a[ref]) * (std::abs(b[ref]) / b[ref]);
  CMat scaled = b;
  for (auto& v : scaled)
    v *= phase;
  return cmatMaxDiff(a, scaled);
}

/// Reference single-qubit matrices written out longhand.
CMat refGate(const std::string& name, const std::vector<double>& angles = {});

/// Reference CNOT with the control on matrix bit 0 (the textbook layout
/// used throughout: qubit operand k <-> index bit k).
CMat refCnotControlFirst();

/// Reads a whole file into a string (test corpus loading).
std::string readFile(const std::string& path);

/// Directory of the checked-in test data (tests/), from QCC_TEST_DIR.
std::string testDataDir();

} // namespace qcctest

namespace qcctest {

/// Bell-pair program in the qc dialect: two allocs, H on q0, CX(q0, q1),
/// optionally measuring both qubits.
qcc::IrModule buildBellQc(bool withMeasures = false);

} // namespace qcctest

namespace qcctest {

struct RandomCircuitOptions {
  int maxQubits = 5;
  int maxOps = 30;
  bool allowMeasure = true;
  bool allowControlFlow = true;
  bool allowModifiers = true;
  int maxMeasures = 3;
};

/// Seeded random qc-dialect program: standard gates, rotations, modifiers,
/// measurements feeding if conditions, and constant-bound for loops.
/// Always verifies.
qcc::IrModule randomQcModule(uint32_t seed,
                             const RandomCircuitOptions& options = {});

} // namespace qcctest
