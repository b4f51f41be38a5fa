//===-- OptTests.cpp - optimization pass tests ----------------------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "../support/TestUtil.hpp"
#include "qcc/dialect/Unitary.hpp"
#include "qcc/emit/TextIr.hpp"
#include "qcc/frontend/Qasm.hpp"
#include "qcc/ir/PassManager.hpp"
#include "qcc/ir/Registry.hpp"
#include "qcc/ir/Verifier.hpp"
#include "qcc/sim/Simulator.hpp"
#include "qcc/transforms/Conversions.hpp"
#include "qcc/transforms/Optimizations.hpp"

#include <doctest.h>

#include <numbers>

using namespace qcc;
using namespace qcctest;

namespace {

size_t countOps(const IrModule& m, const std::string& opcode) {
  size_t n = 0;
  m.walk([&](OpId op) {
    if (m.op(op).opcode == opcode)
      ++n;
    return true;
  });
  return n;
}

size_t countUnitaries(const IrModule& m) {
  size_t n = 0;
  m.walk([&](OpId op) {
    const OpcodeInfo* info = lookupOpcode(m.op(op).opcode);
    if (info && info->isUnitary())
      ++n;
    return true;
  });
  return n;
}

IrModule qcoOf(const IrModule& qc) {
  DiagnosticList diags;
  auto out = linearize(qc, diags);
  REQUIRE_MESSAGE(out.has_value(), diags.str());
  return std::move(*out);
}

void requireValid(const IrModule& m) {
  DiagnosticList diags = verify(m);
  REQUIRE_MESSAGE(diags.str().empty(), diags.str());
}

} // namespace

//===----------------------------------------------------------------------===//
// remove-dead-alloc
//===----------------------------------------------------------------------===//

TEST_CASE("remove-dead-alloc erases untouched alloc/dealloc pairs") {
  IrModule m;
  OpBuilder b(m, m.entryBlock());
  ValueId q = m.op(b.create("qc.alloc")).results[0];
  b.create("qc.dealloc", {q});
  removeDeadAllocPass(m);
  CHECK(m.block(m.entryBlock()).ops.empty());
  requireValid(m);
}

TEST_CASE("remove-dead-alloc keeps pairs with intervening computation") {
  IrModule m;
  OpBuilder b(m, m.entryBlock());
  ValueId q = m.op(b.create("qc.alloc")).results[0];
  b.create("qc.h", {q});
  b.create("qc.dealloc", {q});
  removeDeadAllocPass(m);
  CHECK(m.block(m.entryBlock()).ops.size() == 3);
}

TEST_CASE("registers are removed only as a whole") {
  IrModule m;
  OpBuilder b(m, m.entryBlock());
  OpId reg = b.create("qc.alloc_reg", {}, {{"size", AttributeValue(2)}});
  ValueId regVal = m.op(reg).results[0];
  OpId e0 = b.create("qc.extract", {regVal}, {{"index", AttributeValue(0)}});
  OpId e1 = b.create("qc.extract", {regVal}, {{"index", AttributeValue(1)}});
  b.create("qc.h", {m.op(e0).results[0]});
  (void)e1; // slot 1 is extracted but unused
  removeDeadAllocPass(m);
  // One slot is H'd, so the whole group stays.
  CHECK(countOps(m, "qc.alloc_reg") == 1);

  // Without the H the group (extracts + register) goes at once.
  IrModule m2;
  OpBuilder b2(m2, m2.entryBlock());
  OpId reg2 = b2.create("qc.alloc_reg", {}, {{"size", AttributeValue(2)}});
  OpId f0 = b2.create("qc.extract", {m2.op(reg2).results[0]},
                      {{"index", AttributeValue(0)}});
  b2.create("qc.dealloc", {m2.op(f0).results[0]});
  removeDeadAllocPass(m2);
  CHECK(m2.block(m2.entryBlock()).ops.empty());
}

//===----------------------------------------------------------------------===//
// cancel-inverses
//===----------------------------------------------------------------------===//

TEST_CASE("H;H cancels in qco form") {
  IrModule qc;
  OpBuilder b(qc, qc.entryBlock());
  ValueId q = qc.op(b.create("qc.alloc")).results[0];
  b.create("qc.h", {q});
  b.create("qc.h", {q});
  IrModule m = qcoOf(qc);
  cancelInversesPass(m);
  CHECK(countOps(m, "qco.h") == 0);
  requireValid(m);
}

TEST_CASE("H;X;H does not cancel") {
  IrModule qc;
  OpBuilder b(qc, qc.entryBlock());
  ValueId q = qc.op(b.create("qc.alloc")).results[0];
  b.create("qc.h", {q});
  b.create("qc.x", {q});
  b.create("qc.h", {q});
  IrModule m = qcoOf(qc);
  cancelInversesPass(m);
  CHECK(countUnitaries(m) == 3);
}

TEST_CASE("four H in a row collapse fully at the fixpoint") {
  IrModule qc;
  OpBuilder b(qc, qc.entryBlock());
  ValueId q = qc.op(b.create("qc.alloc")).results[0];
  for (int i = 0; i < 4; ++i)
    b.create("qc.h", {q});
  IrModule m = qcoOf(qc);
  cancelInversesPass(m);
  CHECK(countUnitaries(m) == 0);
}

TEST_CASE("inverse rotations cancel within tolerance") {
  IrModule qc;
  OpBuilder b(qc, qc.entryBlock());
  ValueId q = qc.op(b.create("qc.alloc")).results[0];
  b.create("qc.rz", {q}, {{"angle", AttributeValue(0.3)}});
  b.create("qc.rz", {q}, {{"angle", AttributeValue(-0.3)}});
  IrModule m = qcoOf(qc);
  cancelInversesPass(m);
  CHECK(countUnitaries(m) == 0);
}

TEST_CASE("s and sdg cancel as named inverses") {
  IrModule qc;
  OpBuilder b(qc, qc.entryBlock());
  ValueId q = qc.op(b.create("qc.alloc")).results[0];
  b.create("qc.s", {q});
  b.create("qc.sdg", {q});
  IrModule m = qcoOf(qc);
  cancelInversesPass(m);
  CHECK(countUnitaries(m) == 0);
}

TEST_CASE("CX pairs cancel only with matching operand positions") {
  // Oracle first: CX(a,b) * CX(b,a) is not the identity.
  {
    CMat cx = refCnotControlFirst();
    // CX with reversed roles: swap the control/target bit interpretation.
    CMat swapped = {
        1, 0, 0, 0, //
        0, 0, 1, 0, //
        0, 0, 0, 1, //
        0, 1, 0, 0, //
    };
    CHECK(cmatMaxDiff(cmatMul(cx, swapped), cmatIdentity(4)) > 0.5);
  }

  auto makeCx = [](OpBuilder& b, IrModule& m, ValueId c, ValueId t) {
    OpId ctrl = b.create("qc.ctrl", {c},
                         {{"polarity", AttributeValue(AttributeValue::Array{
                                           AttributeValue(true)})}});
    OpBuilder body(m, m.region(m.op(ctrl).regions[0]).front());
    body.create("qc.x", {t});
  };

  SUBCASE("same positions cancel") {
    IrModule qc;
    OpBuilder b(qc, qc.entryBlock());
    ValueId a = qc.op(b.create("qc.alloc")).results[0];
    ValueId c = qc.op(b.create("qc.alloc")).results[0];
    makeCx(b, qc, a, c);
    makeCx(b, qc, a, c);
    IrModule m = qcoOf(qc);
    cancelInversesPass(m);
    CHECK(countUnitaries(m) == 0);
  }
  SUBCASE("reversed positions stay") {
    IrModule qc;
    OpBuilder b(qc, qc.entryBlock());
    ValueId a = qc.op(b.create("qc.alloc")).results[0];
    ValueId c = qc.op(b.create("qc.alloc")).results[0];
    makeCx(b, qc, a, c);
    makeCx(b, qc, c, a);
    IrModule m = qcoOf(qc);
    cancelInversesPass(m);
    CHECK(countOps(m, "qco.ctrl") == 2);
  }
}

TEST_CASE("measurement blocks cancellation") {
  IrModule qc;
  OpBuilder b(qc, qc.entryBlock());
  ValueId q = qc.op(b.create("qc.alloc")).results[0];
  b.create("qc.h", {q});
  b.create("qc.measure", {q});
  b.create("qc.h", {q});
  IrModule m = qcoOf(qc);
  cancelInversesPass(m);
  CHECK(countOps(m, "qco.h") == 2);
}

//===----------------------------------------------------------------------===//
// merge-rotations
//===----------------------------------------------------------------------===//

TEST_CASE("consecutive rz angles sum") {
  IrModule qc;
  OpBuilder b(qc, qc.entryBlock());
  ValueId q = qc.op(b.create("qc.alloc")).results[0];
  b.create("qc.rz", {q}, {{"angle", AttributeValue(0.2)}});
  b.create("qc.rz", {q}, {{"angle", AttributeValue(0.3)}});
  IrModule m = qcoOf(qc);
  mergeRotationsPass(m);
  REQUIRE(countOps(m, "qco.rz") == 1);
  m.walk([&](OpId op) {
    if (m.op(op).opcode == "qco.rz")
      CHECK(m.op(op).attr("angle")->asFloat() == doctest::Approx(0.5));
    return true;
  });
  requireValid(m);
}

TEST_CASE("rotations summing to 2pi vanish (global phase)") {
  // Oracle: rz(pi);rz(pi) equals the identity up to a -1 global phase.
  {
    CMat two = cmatMul(refGate("rz", {std::numbers::pi}),
                       refGate("rz", {std::numbers::pi}));
    CHECK(cmatMaxDiffUpToPhase(two, cmatIdentity(2)) <= 1e-12);
    CHECK(cmatMaxDiff(two, cmatIdentity(2)) > 1.9); // strictly != identity
  }
  IrModule qc;
  OpBuilder b(qc, qc.entryBlock());
  ValueId q = qc.op(b.create("qc.alloc")).results[0];
  b.create("qc.rz", {q}, {{"angle", AttributeValue(std::numbers::pi)}});
  b.create("qc.rz", {q}, {{"angle", AttributeValue(std::numbers::pi)}});
  IrModule m = qcoOf(qc);
  mergeRotationsPass(m);
  CHECK(countUnitaries(m) == 0);
}

TEST_CASE("different rotation kinds stay apart") {
  IrModule qc;
  OpBuilder b(qc, qc.entryBlock());
  ValueId q = qc.op(b.create("qc.alloc")).results[0];
  b.create("qc.rx", {q}, {{"angle", AttributeValue(0.1)}});
  b.create("qc.rz", {q}, {{"angle", AttributeValue(0.1)}});
  IrModule m = qcoOf(qc);
  mergeRotationsPass(m);
  CHECK(countUnitaries(m) == 2);
}

//===----------------------------------------------------------------------===//
// canonicalize-modifiers
//===----------------------------------------------------------------------===//

TEST_CASE("inv of h unwraps to h") {
  IrModule m;
  OpBuilder b(m, m.entryBlock());
  ValueId q = m.op(b.create("qc.alloc")).results[0];
  OpId inv = b.create("qc.inv", {});
  OpBuilder body(m, m.region(m.op(inv).regions[0]).front());
  body.create("qc.h", {q});
  canonicalizeModifiersPass(m);
  CHECK(countOps(m, "qc.inv") == 0);
  CHECK(countOps(m, "qc.h") == 1);
  requireValid(m);
}

TEST_CASE("pow(0) erases its body") {
  IrModule m;
  OpBuilder b(m, m.entryBlock());
  ValueId q = m.op(b.create("qc.alloc")).results[0];
  OpId pow = b.create("qc.pow", {}, {{"exponent", AttributeValue(0)}});
  OpBuilder body(m, m.region(m.op(pow).regions[0]).front());
  body.create("qc.x", {q});
  canonicalizeModifiersPass(m);
  CHECK(countUnitaries(m) == 0);
}

TEST_CASE("pow(-k) rewrites to pow(k){inv}") {
  IrModule m;
  OpBuilder b(m, m.entryBlock());
  ValueId q = m.op(b.create("qc.alloc")).results[0];
  OpId pow = b.create("qc.pow", {}, {{"exponent", AttributeValue(-3)}});
  OpBuilder body(m, m.region(m.op(pow).regions[0]).front());
  body.create("qc.t", {q});
  canonicalizeModifiersPass(m);
  requireValid(m);
  // t has a named inverse, so the inv is absorbed: pow(3){tdg}.
  REQUIRE(countOps(m, "qc.pow") == 1);
  CHECK(countOps(m, "qc.tdg") == 1);
  CHECK(countOps(m, "qc.inv") == 0);
  m.walk([&](OpId op) {
    if (m.op(op).opcode == "qc.pow")
      CHECK(m.op(op).attr("exponent")->asInt() == 3);
    return true;
  });
}

TEST_CASE("nested controls merge into a Toffoli-equivalent") {
  IrModule m;
  OpBuilder b(m, m.entryBlock());
  ValueId c1 = m.op(b.create("qc.alloc")).results[0];
  ValueId c2 = m.op(b.create("qc.alloc")).results[0];
  ValueId t = m.op(b.create("qc.alloc")).results[0];
  AttributeValue polarity(AttributeValue::Array{AttributeValue(true)});
  OpId outer = b.create("qc.ctrl", {c1}, {{"polarity", polarity}});
  OpBuilder outerBody(m, m.region(m.op(outer).regions[0]).front());
  OpId inner = outerBody.create("qc.ctrl", {c2}, {{"polarity", polarity}});
  OpBuilder innerBody(m, m.region(m.op(inner).regions[0]).front());
  innerBody.create("qc.x", {t});

  // Oracle: the merged matrix must equal the original nested matrix.
  OpId original = m.block(m.entryBlock()).ops[3];
  Matrix before = descriptorMatrix(unitaryDescriptor(m, original));

  canonicalizeModifiersPass(m);
  requireValid(m);
  CHECK(countOps(m, "qc.ctrl") == 1);
  m.walk([&](OpId op) {
    if (m.op(op).opcode != "qc.ctrl")
      return true;
    CHECK(m.op(op).operands.size() == 2);
    Matrix after = descriptorMatrix(unitaryDescriptor(m, op));
    CHECK(after.maxAbsDiff(before) <= 1e-12);
    return true;
  });
}

TEST_CASE("canonicalize works on qco form too") {
  IrModule qc;
  OpBuilder b(qc, qc.entryBlock());
  ValueId q = qc.op(b.create("qc.alloc")).results[0];
  OpId inv = b.create("qc.inv", {});
  OpBuilder body(qc, qc.region(qc.op(inv).regions[0]).front());
  body.create("qc.s", {q});
  IrModule m = qcoOf(qc);
  canonicalizeModifiersPass(m);
  requireValid(m);
  CHECK(countOps(m, "qco.inv") == 0);
  CHECK(countOps(m, "qco.sdg") == 1);
}

//===----------------------------------------------------------------------===//
// simplify-control-flow
//===----------------------------------------------------------------------===//

TEST_CASE("unroll-then-cancel leaves exactly one X") {
  DiagnosticList diags;
  auto qc = qasm::frontend("qubit q; for uint i in [0:3] { x q; }", diags);
  REQUIRE_MESSAGE(qc.has_value(), diags.str());
  IrModule m = qcoOf(*qc);
  simplifyControlFlowPass(m, kDefaultUnrollLimit, diags);
  requireValid(m);
  CHECK(countOps(m, "cf.for") == 0);
  CHECK(countOps(m, "qco.x") == 3);
  cancelInversesPass(m);
  CHECK(countOps(m, "qco.x") == 1);

  // Oracle: X^3 == X.
  IrModule expected;
  OpBuilder b(expected, expected.entryBlock());
  ValueId q = expected.op(b.create("qc.alloc")).results[0];
  b.create("qc.x", {q});
  DiagnosticList eqDiags;
  auto back = bufferize(m, eqDiags);
  REQUIRE(back.has_value());
  auto r = equivalent(expected, *back, EquivalenceMode::Unitary, eqDiags);
  CHECK(r.equivalent);
}

TEST_CASE("constant conditions inline the taken branch") {
  IrModule m;
  OpBuilder b(m, m.entryBlock());
  ValueId q = m.op(b.create("qc.alloc")).results[0];
  OpId cond = b.create("cf.const", {}, {TypeDesc::bit()},
                       {{"value", AttributeValue(int64_t(1))}});
  OpId ifOp = b.create("cf.if", {m.op(cond).results[0]});
  OpBuilder thenB(m, m.region(m.op(ifOp).regions[0]).front());
  thenB.create("qc.x", {q});
  thenB.create("cf.yield", {});
  OpBuilder elseB(m, m.region(m.op(ifOp).regions[1]).front());
  elseB.create("qc.z", {q});
  elseB.create("cf.yield", {});
  DiagnosticList diags;
  simplifyControlFlowPass(m, kDefaultUnrollLimit, diags);
  requireValid(m);
  CHECK(countOps(m, "cf.if") == 0);
  CHECK(countOps(m, "qc.x") == 1);
  CHECK(countOps(m, "qc.z") == 0);
}

TEST_CASE("trip counts over the limit are skipped with a warning") {
  DiagnosticList diags;
  auto qc = qasm::frontend("qubit q; for uint i in [0:100] { x q; }", diags);
  REQUIRE(qc.has_value());
  simplifyControlFlowPass(*qc, 64, diags);
  CHECK(countOps(*qc, "cf.for") == 1);
  bool warned = false;
  for (const auto& d : diags)
    warned |= d.severity == Severity::Warning;
  CHECK(warned);
}

TEST_CASE("while loops never unroll") {
  DiagnosticList diags;
  auto qc = qasm::frontend(
      "qubit q; bit c; c = measure q; while (c) { x q; c = measure q; }",
      diags);
  REQUIRE_MESSAGE(qc.has_value(), diags.str());
  simplifyControlFlowPass(*qc, kDefaultUnrollLimit, diags);
  CHECK(countOps(*qc, "cf.while") == 1);
}

TEST_CASE("empty conditionals and loops are erased") {
  DiagnosticList diags;
  auto qc = qasm::frontend(
      "qubit q; bit c; c = measure q; if (c) { } for uint i in [0:4] { }",
      diags);
  REQUIRE_MESSAGE(qc.has_value(), diags.str());
  simplifyControlFlowPass(*qc, kDefaultUnrollLimit, diags);
  CHECK(countOps(*qc, "cf.if") == 0);
  CHECK(countOps(*qc, "cf.for") == 0);
}

//===----------------------------------------------------------------------===//
// Cross-pass properties
//===----------------------------------------------------------------------===//

TEST_CASE("passes preserve distributions on random circuits") {
  registerAllPasses();
  const char* pipelines[] = {"cancel-inverses", "merge-rotations",
                             "canonicalize-modifiers",
                             "simplify-control-flow"};
  for (uint32_t seed = 0; seed < 20; ++seed) {
    IrModule original = randomQcModule(seed);
    for (const char* passName : pipelines) {
      CAPTURE(seed);
      CAPTURE(passName);
      DiagnosticList diags;
      IrModule m = randomQcModule(seed);
      std::string pipeline = std::string("linearize,") + passName +
                             ",bufferize";
      auto parsed = parsePipeline(pipeline, diags);
      REQUIRE(parsed.has_value());
      PassContext ctx;
      REQUIRE_MESSAGE(runPipeline(m, *parsed, ctx, diags), diags.str());
      auto r = equivalent(original, m, EquivalenceMode::Distribution, diags);
      REQUIRE_MESSAGE(diags.str().empty(), diags.str());
      CHECK_MESSAGE(r.equivalent, "deviation ", r.maxDeviation);
    }
  }
}

TEST_CASE("optimization passes are idempotent at their fixpoint") {
  for (uint32_t seed = 0; seed < 10; ++seed) {
    CAPTURE(seed);
    IrModule qc = randomQcModule(seed);
    IrModule m = qcoOf(qc);
    cancelInversesPass(m);
    mergeRotationsPass(m);
    canonicalizeModifiersPass(m);
    std::string once = printIr(m);
    cancelInversesPass(m);
    mergeRotationsPass(m);
    canonicalizeModifiersPass(m);
    CHECK(printIr(m) == once);
  }
}

TEST_CASE("cancel and merge never increase the op count") {
  for (uint32_t seed = 30; seed < 50; ++seed) {
    CAPTURE(seed);
    IrModule m = qcoOf(randomQcModule(seed));
    auto opCount = [&] {
      size_t n = 0;
      m.walk([&](OpId) {
        ++n;
        return true;
      });
      return n;
    };
    size_t before = opCount();
    cancelInversesPass(m);
    size_t afterCancel = opCount();
    CHECK(afterCancel <= before);
    mergeRotationsPass(m);
    CHECK(opCount() <= afterCancel);
    requireValid(m);
  }
}

TEST_CASE("wire count is conserved by the qco rewrites") {
  for (uint32_t seed = 60; seed < 70; ++seed) {
    CAPTURE(seed);
    IrModule m = qcoOf(randomQcModule(seed));
    size_t before = countOps(m, "qco.alloc") - countOps(m, "qco.dealloc");
    cancelInversesPass(m);
    mergeRotationsPass(m);
    canonicalizeModifiersPass(m);
    CHECK(countOps(m, "qco.alloc") - countOps(m, "qco.dealloc") == before);
  }
}
