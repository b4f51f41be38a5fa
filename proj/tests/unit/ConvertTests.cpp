//===-- ConvertTests.cpp - linearize/bufferize tests ----------------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "../support/TestUtil.hpp"
#include "qcc/dialect/QCO.hpp"
#include "qcc/emit/TextIr.hpp"
#include "qcc/frontend/Qasm.hpp"
#include "qcc/ir/Registry.hpp"
#include "qcc/ir/Verifier.hpp"
#include "qcc/sim/Simulator.hpp"
#include "qcc/transforms/Conversions.hpp"

#include <doctest.h>

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

IrModule mustLinearize(const IrModule& m) {
  DiagnosticList diags;
  auto out = linearize(m, diags);
  REQUIRE_MESSAGE(out.has_value(), diags.str());
  DiagnosticList lin;
  qcoLinearityVerify(*out, lin);
  REQUIRE_MESSAGE(lin.empty(), lin.str());
  REQUIRE_MESSAGE(verify(*out).str().empty(), verify(*out).str());
  return std::move(*out);
}

IrModule mustBufferize(const IrModule& m) {
  DiagnosticList diags;
  auto out = bufferize(m, diags);
  REQUIRE_MESSAGE(out.has_value(), diags.str());
  REQUIRE_MESSAGE(verify(*out).str().empty(), verify(*out).str());
  return std::move(*out);
}

void checkRoundTrip(const IrModule& m) {
  IrModule qco = mustLinearize(m);
  IrModule back = mustBufferize(qco);
  // Compare in the register-exploded normal form (both sides normalized).
  IrModule expected = explodeRegisters(m);
  IrModule actual = explodeRegisters(back);
  std::string why;
  CHECK_MESSAGE(structurallyEqual(expected, actual, &why), why);
}

} // namespace

TEST_CASE("Bell linearizes into the explicit dataflow form") {
  IrModule qc = buildBellQc();
  IrModule qco = mustLinearize(qc);
  // alloc and h produce fresh states; the controlled op consumes both.
  CHECK(countOps(qco, "qco.alloc") == 2);
  CHECK(countOps(qco, "qco.h") == 1);
  CHECK(countOps(qco, "qco.ctrl") == 1);
  CHECK(countOps(qco, "qco.x") == 1);
  std::string text = printIr(qco);
  CHECK(text.find("%q0_1 = qco.h(%q0_0) : !qco.qubit") != std::string::npos);
}

TEST_CASE("alloc;dealloc maps to its qco twin") {
  IrModule m;
  OpBuilder b(m, m.entryBlock());
  ValueId q = m.op(b.create("qc.alloc")).results[0];
  b.create("qc.dealloc", {q});
  IrModule qco = mustLinearize(m);
  CHECK(countOps(qco, "qco.alloc") == 1);
  CHECK(countOps(qco, "qco.dealloc") == 1);
  checkRoundTrip(m);
}

TEST_CASE("defining chain reads the wire history") {
  IrModule qco = mustLinearize(buildBellQc());
  // Find the h result and walk back to the alloc.
  qco.walk([&](OpId op) {
    if (qco.op(op).opcode != "qco.h")
      return true;
    DefiningChain chain = definingChain(qco, qco.op(op).results[0]);
    REQUIRE(chain.ops.size() == 2);
    CHECK(qco.op(chain.ops[0]).opcode == "qco.alloc");
    CHECK(qco.op(chain.ops[1]).opcode == "qco.h");
    CHECK_FALSE(chain.crossesRegionBoundary);
    return true;
  });

  // A fresh alloc's chain is just the alloc.
  IrModule m;
  OpBuilder b(m, m.entryBlock());
  OpId alloc = b.create("qco.alloc");
  DefiningChain chain = definingChain(m, m.op(alloc).results[0]);
  CHECK(chain.ops.size() == 1);
}

TEST_CASE("linearity diagnostics name reuse and leaks") {
  IrModule m;
  OpBuilder b(m, m.entryBlock());
  ValueId s = m.op(b.create("qco.alloc")).results[0];
  b.create("qco.h", {s});
  b.create("qco.x", {s});
  DiagnosticList diags;
  qcoLinearityVerify(m, diags);
  REQUIRE(diags.hasErrors());
  CHECK(diags.str().find("reused") != std::string::npos);

  // A state created inside a region but not yielded leaks.
  IrModule m2;
  OpBuilder b2(m2, m2.entryBlock());
  ValueId s2 = m2.op(b2.create("qco.alloc")).results[0];
  OpId measure = b2.create("qco.measure", {s2});
  OpId ifOp = b2.create("cf.if", {m2.op(measure).results[1],
                                  m2.op(measure).results[0]});
  for (int r = 0; r < 2; ++r) {
    BlockId block = m2.region(m2.op(ifOp).regions[size_t(r)]).front();
    ValueId arg = m2.addBlockArg(block, TypeDesc::qubitState());
    OpBuilder body(m2, block);
    if (r == 0) {
      // Consumes the arg and yields its successor: well-threaded.
      OpId x = body.create("qco.x", {arg});
      body.create("cf.yield", {m2.op(x).results[0]});
    } else {
      body.create("cf.yield", {arg});
    }
  }
  DiagnosticList ok;
  qcoLinearityVerify(m2, ok);
  CHECK(ok.empty()); // well-threaded version is fine

  // Now break the then-branch: yield the arg itself and drop the x result.
  // Built as a fresh module since rewriting in place is noisy.
  IrModule m3;
  OpBuilder b3(m3, m3.entryBlock());
  ValueId s3 = m3.op(b3.create("qco.alloc")).results[0];
  OpId measure3 = b3.create("qco.measure", {s3});
  OpId ifOp3 = b3.create("cf.if", {m3.op(measure3).results[1],
                                   m3.op(measure3).results[0]});
  {
    BlockId block = m3.region(m3.op(ifOp3).regions[0]).front();
    ValueId arg = m3.addBlockArg(block, TypeDesc::qubitState());
    OpBuilder body(m3, block);
    OpId h = body.create("qco.h", {arg});
    (void)h; // h's result is never consumed: a leak
    body.create("cf.yield", {arg});
  }
  {
    BlockId block = m3.region(m3.op(ifOp3).regions[1]).front();
    ValueId arg = m3.addBlockArg(block, TypeDesc::qubitState());
    OpBuilder body(m3, block);
    body.create("cf.yield", {arg});
  }
  DiagnosticList bad;
  qcoLinearityVerify(m3, bad);
  CHECK(bad.hasErrors());
  CHECK((bad.str().find("leaked") != std::string::npos ||
         bad.str().find("reused") != std::string::npos));
}

TEST_CASE("control flow threads states through iter args") {
  DiagnosticList diags;
  auto qc = qasm::frontend(
      "qubit q; bit c; h q; c = measure q; if (c) { x q; }", diags);
  REQUIRE_MESSAGE(qc.has_value(), diags.str());
  IrModule qco = mustLinearize(*qc);
  // The if receives the touched qubit's state and returns the new one.
  bool found = false;
  qco.walk([&](OpId op) {
    if (qco.op(op).opcode != "cf.if")
      return true;
    found = true;
    size_t states = 0;
    for (ValueId v : qco.op(op).operands)
      if (qco.typeOf(v).isQubitState())
        ++states;
    CHECK(states == 1);
    CHECK(qco.op(op).results.size() == 1);
    return true;
  });
  CHECK(found);
  checkRoundTrip(*qc);
}

TEST_CASE("registers explode one wire per extracted slot") {
  DiagnosticList diags;
  auto qc = qasm::frontend("qubit[3] q; h q[0]; cx q[0], q[2];", diags);
  REQUIRE_MESSAGE(qc.has_value(), diags.str());
  IrModule qco = mustLinearize(*qc);
  // The frontend extracts every declared slot, so all three wires exist.
  CHECK(countOps(qco, "qco.alloc") == 3);
  checkRoundTrip(*qc);

  // Hand-built partial extraction stays at extract granularity.
  IrModule partial;
  OpBuilder b(partial, partial.entryBlock());
  OpId reg = b.create("qc.alloc_reg", {}, {{"size", AttributeValue(3)}});
  OpId e0 = b.create("qc.extract", {partial.op(reg).results[0]},
                     {{"index", AttributeValue(0)}});
  b.create("qc.h", {partial.op(e0).results[0]});
  IrModule partialQco = mustLinearize(partial);
  CHECK(countOps(partialQco, "qco.alloc") == 1);
}

TEST_CASE("measure bits substitute downstream uses") {
  DiagnosticList diags;
  auto qc = qasm::frontend(
      "qubit q; bit c; h q; c = measure q; if (c) { x q; } if (c) { z q; }",
      diags);
  REQUIRE_MESSAGE(qc.has_value(), diags.str());
  IrModule qco = mustLinearize(*qc);
  CHECK(countOps(qco, "qco.measure") == 1);
  checkRoundTrip(*qc);
}

TEST_CASE("loops thread all live wires") {
  DiagnosticList diags;
  auto qc = qasm::frontend(
      "qubit[2] q; for uint i in [0:2] { h q[0]; cx q[0], q[1]; }", diags);
  REQUIRE_MESSAGE(qc.has_value(), diags.str());
  IrModule qco = mustLinearize(*qc);
  qco.walk([&](OpId op) {
    if (qco.op(op).opcode != "cf.for")
      return true;
    size_t states = 0;
    for (ValueId v : qco.op(op).operands)
      if (qco.typeOf(v).isQubitState())
        ++states;
    CHECK(states == 2);
    return true;
  });
  checkRoundTrip(*qc);
}

TEST_CASE("round trip: random corpus is structurally stable") {
  for (uint32_t seed = 0; seed < 50; ++seed) {
    CAPTURE(seed);
    IrModule m = randomQcModule(seed);
    REQUIRE_MESSAGE(verify(m).str().empty(), verify(m).str());
    checkRoundTrip(m);
  }
}

TEST_CASE("conversions preserve the outcome distribution") {
  for (uint32_t seed = 0; seed < 25; ++seed) {
    CAPTURE(seed);
    RandomCircuitOptions options;
    options.maxQubits = 4;
    options.maxOps = 18;
    IrModule m = randomQcModule(seed, options);
    IrModule back = mustBufferize(mustLinearize(m));
    DiagnosticList diags;
    auto r = equivalent(m, back, EquivalenceMode::Distribution, diags);
    REQUIRE_MESSAGE(diags.str().empty(), diags.str());
    CHECK_MESSAGE(r.equivalent, "seed ", seed, " deviation ",
                  r.maxDeviation);
  }
}

TEST_CASE("bufferize refuses non-linear input") {
  IrModule m;
  OpBuilder b(m, m.entryBlock());
  ValueId s = m.op(b.create("qco.alloc")).results[0];
  b.create("qco.h", {s});
  b.create("qco.x", {s});
  DiagnosticList diags;
  CHECK_FALSE(bufferize(m, diags).has_value());
  CHECK(diags.str().find("non-linear") != std::string::npos);
}

TEST_CASE("while-loop corpus programs convert soundly") {
  for (const char* name : {"08_while.qasm", "09_while_eq0.qasm"}) {
    CAPTURE(name);
    std::string source =
        qcctest::readFile(qcctest::testDataDir() + "/corpus/" + name);
    DiagnosticList diags;
    auto qc = qasm::frontend(source, diags, name);
    REQUIRE_MESSAGE(qc.has_value(), diags.str());
    IrModule back = mustBufferize(mustLinearize(*qc));
    auto r = equivalent(*qc, back, EquivalenceMode::Distribution, diags);
    REQUIRE_MESSAGE(diags.str().empty(), diags.str());
    CHECK_MESSAGE(r.equivalent, "deviation ", r.maxDeviation);
  }
}

TEST_CASE("defining chains stop at region boundaries") {
  DiagnosticList diags;
  auto qc = qasm::frontend("qubit q; for uint i in [0:2] { h q; x q; }",
                           diags);
  REQUIRE_MESSAGE(qc.has_value(), diags.str());
  IrModule qco = mustLinearize(*qc);
  // The x inside the loop body consumes the h result; the chain walks back
  // h <- block argument and reports the boundary.
  bool checked = false;
  qco.walk([&](OpId op) {
    if (qco.op(op).opcode != "qco.x")
      return true;
    DefiningChain chain = definingChain(qco, qco.op(op).results[0]);
    CHECK(chain.crossesRegionBoundary);
    REQUIRE(chain.ops.size() == 2);
    CHECK(qco.op(chain.ops[0]).opcode == "qco.h");
    CHECK(qco.op(chain.ops[1]).opcode == "qco.x");
    checked = true;
    return true;
  });
  CHECK(checked);
}
