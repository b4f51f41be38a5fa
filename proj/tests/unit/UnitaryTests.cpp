//===-- UnitaryTests.cpp - descriptor and matrix tests --------------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// The reference matrices come from tests/support (hand-written, independent
// of descriptorMatrix) so the two computation paths check each other.
//
//===----------------------------------------------------------------------===//

#include "../support/TestUtil.hpp"
#include "qcc/dialect/QC.hpp"
#include "qcc/dialect/Unitary.hpp"
#include "qcc/ir/Registry.hpp"

#include <doctest.h>

#include <random>

using namespace qcc;
using namespace qcctest;

namespace {

CMat toCMat(const Matrix& m) {
  CMat out(size_t(m.dim()) * m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j)
      out[size_t(i) * m.dim() + j] = m.at(i, j);
  return out;
}

UnitaryDescriptor gateDescriptor(GateKind kind, std::vector<double> angles) {
  UnitaryDescriptor d;
  d.base = kind;
  d.targetArity = gateInfo(kind).targets;
  d.angles = std::move(angles);
  return d;
}

const std::vector<GateKind> kAllKinds = {
    GateKind::I,  GateKind::H,    GateKind::X,  GateKind::Y,  GateKind::Z,
    GateKind::S,  GateKind::Sdg,  GateKind::T,  GateKind::Tdg,
    GateKind::SX, GateKind::SXdg, GateKind::Swap,
    GateKind::RX, GateKind::RY,   GateKind::RZ, GateKind::P,  GateKind::U};

std::vector<double> randomAngles(GateKind kind, std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-6.0, 6.0);
  std::vector<double> angles;
  for (int i = 0; i < gateInfo(kind).angles; ++i)
    angles.push_back(dist(rng));
  return angles;
}

} // namespace

TEST_CASE("standard gate matrices match the reference table") {
  for (GateKind kind : kAllKinds) {
    std::vector<double> angles;
    for (int i = 0; i < gateInfo(kind).angles; ++i)
      angles.push_back(0.37 * (i + 1));
    CMat expected = refGate(gateInfo(kind).name, angles);
    CMat actual = toCMat(gateMatrix(kind, angles));
    CHECK_MESSAGE(cmatMaxDiff(expected, actual) <= 1e-15,
                  "gate ", gateInfo(kind).name);
  }
}

TEST_CASE("descriptor of modifier-wrapped ops flattens the stack") {
  IrModule m;
  OpBuilder b(m, m.entryBlock());
  ValueId c = m.op(b.create("qc.alloc")).results[0];
  ValueId t = m.op(b.create("qc.alloc")).results[0];

  SUBCASE("bare gate") {
    OpId h = b.create("qc.h", {t});
    UnitaryDescriptor d = unitaryDescriptor(m, h);
    CHECK(d.base == GateKind::H);
    CHECK(d.angles.empty());
    CHECK(d.stack.empty());
  }
  SUBCASE("ctrl { x } is a CX") {
    OpId ctrl = b.create("qc.ctrl", {c},
                         {{"polarity", AttributeValue(AttributeValue::Array{
                                           AttributeValue(true)})}});
    OpBuilder body(m, m.region(m.op(ctrl).regions[0]).front());
    body.create("qc.x", {t});
    UnitaryDescriptor d = unitaryDescriptor(m, ctrl);
    CHECK(d.base == GateKind::X);
    REQUIRE(d.stack.size() == 1);
    CHECK(d.stack[0].kind == ModifierEntry::Kind::Ctrl);
    CHECK(d.stack[0].polarity == std::vector<bool>{true});
    // Matrix equals the textbook CNOT with control = operand 0.
    CHECK(cmatMaxDiff(toCMat(descriptorMatrix(d)), refCnotControlFirst()) <=
          1e-15);
  }
  SUBCASE("inv { s } has the S-dagger matrix") {
    OpId inv = b.create("qc.inv", {});
    OpBuilder body(m, m.region(m.op(inv).regions[0]).front());
    body.create("qc.s", {t});
    UnitaryDescriptor d = unitaryDescriptor(m, inv);
    CHECK(d.base == GateKind::S);
    REQUIRE(d.stack.size() == 1);
    CHECK(d.stack[0].kind == ModifierEntry::Kind::Inv);
    // Two independent references: the named sdg matrix and dagger(S).
    CHECK(cmatMaxDiff(toCMat(descriptorMatrix(d)), refGate("sdg")) <= 1e-15);
    CHECK(cmatMaxDiff(toCMat(descriptorMatrix(d)),
                      cmatDagger(refGate("s"))) <= 1e-15);
  }
  SUBCASE("measure is not unitary") {
    OpId measure = b.create("qc.measure", {t});
    CHECK_THROWS_AS(unitaryDescriptor(m, measure), IrError);
  }
}

TEST_CASE("inverse descriptor follows the inversion table") {
  SUBCASE("h maps to itself") {
    auto d = inverseDescriptor(gateDescriptor(GateKind::H, {}));
    CHECK(d.base == GateKind::H);
    CHECK(d.stack.empty());
  }
  SUBCASE("rz flips its angle") {
    auto d = inverseDescriptor(gateDescriptor(GateKind::RZ, {0.3}));
    CHECK(d.base == GateKind::RZ);
    CHECK(d.angles[0] == -0.3);
  }
  SUBCASE("u permutes and negates its angles") {
    auto d = inverseDescriptor(gateDescriptor(GateKind::U, {0.1, 0.2, 0.3}));
    CHECK(d.angles == std::vector<double>{-0.1, -0.3, -0.2});
    // The product with the original must be the identity.
    auto u = gateDescriptor(GateKind::U, {0.1, 0.2, 0.3});
    Matrix product = descriptorMatrix(d) * descriptorMatrix(u);
    CHECK(product.maxAbsDiff(Matrix::identity(2)) <= 1e-12);
  }
  SUBCASE("named inverses swap") {
    CHECK(inverseDescriptor(gateDescriptor(GateKind::S, {})).base ==
          GateKind::Sdg);
    CHECK(inverseDescriptor(gateDescriptor(GateKind::Tdg, {})).base ==
          GateKind::T);
    CHECK(inverseDescriptor(gateDescriptor(GateKind::SX, {})).base ==
          GateKind::SXdg);
  }
  SUBCASE("inv entries cancel through ctrl and pow") {
    UnitaryDescriptor d;
    d.base = GateKind::Custom;
    d.customName = "g";
    d.targetArity = 1;
    d.stack.push_back({ModifierEntry::Kind::Ctrl, {true}, 0});
    UnitaryDescriptor inv = inverseDescriptor(d);
    REQUIRE(inv.stack.size() == 2);
    CHECK(inv.stack[0].kind == ModifierEntry::Kind::Ctrl);
    CHECK(inv.stack[1].kind == ModifierEntry::Kind::Inv);
    // And inverting again restores the original stack.
    CHECK(inverseDescriptor(inv).stack == d.stack);
  }
}

TEST_CASE("inverse times forward is the identity for all kinds and angles") {
  std::mt19937 rng(7);
  for (GateKind kind : kAllKinds) {
    for (int sample = 0; sample < 100; ++sample) {
      auto d = gateDescriptor(kind, randomAngles(kind, rng));
      Matrix product =
          descriptorMatrix(inverseDescriptor(d)) * descriptorMatrix(d);
      REQUIRE_MESSAGE(
          product.maxAbsDiff(Matrix::identity(product.dim())) <= 1e-12,
          "kind ", gateInfo(kind).name, " sample ", sample);
      if (gateInfo(kind).angles == 0)
        break; // deterministic kinds need one sample
    }
  }
}

TEST_CASE("pow(2) of sx equals x") {
  // Oracle first: squaring the reference sx gives the reference x.
  CHECK(cmatMaxDiff(cmatMul(refGate("sx"), refGate("sx")), refGate("x")) <=
        1e-12);

  UnitaryDescriptor d = gateDescriptor(GateKind::SX, {});
  d.stack.push_back({ModifierEntry::Kind::Pow, {}, 2});
  CHECK(cmatMaxDiff(toCMat(descriptorMatrix(d)), refGate("x")) <= 1e-12);
}

TEST_CASE("nested controls concatenate into a Toffoli") {
  UnitaryDescriptor d = gateDescriptor(GateKind::X, {});
  d.stack.push_back({ModifierEntry::Kind::Ctrl, {true}, 0});
  d.stack.push_back({ModifierEntry::Kind::Ctrl, {true}, 0});
  Matrix ccx = descriptorMatrix(d);
  REQUIRE(ccx.dim() == 8);
  // Toffoli with controls on bits 0 and 1: the target (bit 2) flips only
  // when both control bits are set.
  for (int col = 0; col < 8; ++col) {
    int row = (col & 3) == 3 ? col ^ 4 : col;
    CHECK(std::abs(ccx.at(row, col) - 1.0) <= 1e-15);
  }
}

TEST_CASE("negative-polarity controls fire on |0>") {
  UnitaryDescriptor d = gateDescriptor(GateKind::X, {});
  d.stack.push_back({ModifierEntry::Kind::Ctrl, {false}, 0});
  Matrix m = descriptorMatrix(d);
  // Control bit 0 must be 0 for the X on bit 1 to fire.
  CHECK(std::abs(m.at(2, 0) - 1.0) <= 1e-15); // |00> -> |10>
  CHECK(std::abs(m.at(1, 1) - 1.0) <= 1e-15); // |01> fixed
}

TEST_CASE("descriptor round-trips through op construction") {
  IrModule m;
  OpBuilder b(m, m.entryBlock());
  std::vector<ValueId> qubits;
  for (int i = 0; i < 2; ++i)
    qubits.push_back(m.op(b.create("qc.alloc")).results[0]);
  std::mt19937 rng(11);
  for (GateKind kind : kAllKinds) {
    auto d = gateDescriptor(kind, randomAngles(kind, rng));
    std::vector<ValueId> wires(qubits.begin(),
                               qubits.begin() + gateInfo(kind).targets);
    OpId op = buildFromDescriptor(m, b, Dialect::QC, d, wires);
    UnitaryDescriptor readBack = unitaryDescriptor(m, op);
    CHECK(readBack.equals(d));
  }
  // A stacked descriptor round-trips as nested modifier regions.
  UnitaryDescriptor d = gateDescriptor(GateKind::RX, {0.25});
  d.stack.push_back({ModifierEntry::Kind::Ctrl, {true}, 0});
  d.stack.push_back({ModifierEntry::Kind::Inv, {}, 0});
  OpId op = buildFromDescriptor(m, b, Dialect::QC, d, qubits);
  CHECK(unitaryDescriptor(m, op).equals(d));
}

TEST_CASE("descriptor matrices are pure functions of the descriptor") {
  auto d = gateDescriptor(GateKind::U, {1.0, 2.0, 3.0});
  Matrix a = descriptorMatrix(d);
  Matrix b = descriptorMatrix(d);
  CHECK(a.maxAbsDiff(b) == 0.0);
}

TEST_CASE("custom gates resolve through the symbol table") {
  IrModule m;
  OpBuilder b(m, m.entryBlock());
  // gate flip q { x q; } -- calling it equals a plain X.
  OpId def = b.create("qc.gate_def", {}, {{"name", AttributeValue("flip")}});
  BlockId body = m.region(m.op(def).regions[0]).front();
  ValueId arg = m.addBlockArg(body, TypeDesc::qubitRef(), "a");
  OpBuilder bodyBuilder(m, body);
  bodyBuilder.create("qc.x", {arg});

  ValueId q = m.op(b.create("qc.alloc")).results[0];
  OpId call =
      b.create("qc.call_gate", {q}, {{"callee", AttributeValue("flip")}});
  UnitaryDescriptor d = unitaryDescriptor(m, call);
  CHECK(d.base == GateKind::Custom);
  CHECK(d.customName == "flip");
  CHECK(cmatMaxDiff(toCMat(descriptorMatrix(d, &m)), refGate("x")) <= 1e-15);
  // Without the symbol table the matrix is unresolvable.
  CHECK_THROWS_AS(descriptorMatrix(d), IrError);
}
