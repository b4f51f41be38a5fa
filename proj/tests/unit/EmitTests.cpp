//===-- EmitTests.cpp - QASM and QIR emitter tests ------------------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "../support/TestUtil.hpp"
#include "qcc/emit/QasmEmitter.hpp"
#include "qcc/emit/QirEmitter.hpp"
#include "qcc/frontend/Qasm.hpp"
#include "qcc/ir/Registry.hpp"

#include <doctest.h>

using namespace qcc;
using qcctest::buildBellQc;

TEST_CASE("Bell emits the canonical QASM lines") {
  IrModule m = buildBellQc();
  DiagnosticList diags;
  auto text = emitQasm(m, diags);
  REQUIRE_MESSAGE(text.has_value(), diags.str());
  CHECK(text->find("h q[0];") != std::string::npos);
  CHECK(text->find("ctrl @ x q[0], q[1];") != std::string::npos);
  CHECK(text->find("qubit[2] q;") != std::string::npos);
}

TEST_CASE("empty module emits header and empty body") {
  IrModule m;
  DiagnosticList diags;
  auto text = emitQasm(m, diags);
  REQUIRE(text.has_value());
  CHECK(*text == "OPENQASM 3;\ninclude \"stdgates.inc\";\n");
}

TEST_CASE("conditionals print as if statements") {
  DiagnosticList diags;
  auto m = qasm::frontend(
      "qubit q; bit c; h q; c = measure q; if (c) { x q; }", diags);
  REQUIRE(m.has_value());
  auto text = emitQasm(*m, diags);
  REQUIRE_MESSAGE(text.has_value(), diags.str());
  CHECK(text->find("if (c[0]) {") != std::string::npos);
  CHECK(text->find("x q[0];") != std::string::npos);
}

TEST_CASE("single H emits one QIR gate call with handle 0") {
  IrModule m;
  OpBuilder b(m, m.entryBlock());
  ValueId q = m.op(b.create("qc.alloc")).results[0];
  b.create("qc.h", {q});
  DiagnosticList diags;
  auto text = emitQirFlat(m, diags);
  REQUIRE_MESSAGE(text.has_value(), diags.str());
  CHECK(text->find("call void @__quantum__qis__h__body(%Qubit* inttoptr "
                   "(i64 0 to %Qubit*))") != std::string::npos);
  CHECK(text->find("\"required_num_qubits\"=\"1\"") != std::string::npos);
}

TEST_CASE("Bell prep QIR matches the frozen golden file") {
  IrModule m = buildBellQc();
  DiagnosticList diags;
  auto text = emitQirFlat(m, diags);
  REQUIRE_MESSAGE(text.has_value(), diags.str());
  std::string golden =
      qcctest::readFile(qcctest::testDataDir() + "/golden/bell_prep.ll");
  CHECK(*text == golden);
  // Emission is deterministic: a second run is byte-identical.
  auto again = emitQirFlat(m, diags);
  REQUIRE(again.has_value());
  CHECK(*again == *text);
}

TEST_CASE("QIR line count is gate count plus the fixed frame") {
  DiagnosticList diags;
  auto m = qasm::frontend(
      "qubit[2] q; bit c; h q[0]; cx q[0], q[1]; rz(0.5) q[1]; "
      "c = measure q[0]; reset q[1];",
      diags);
  REQUIRE(m.has_value());
  auto text = emitQirFlat(*m, diags);
  REQUIRE_MESSAGE(text.has_value(), diags.str());
  size_t lines = 0;
  for (char c : *text)
    lines += c == '\n';
  CHECK(lines == 5 + 6); // five instructions + fixed prologue/epilogue
}

TEST_CASE("rotations pass double literals") {
  DiagnosticList diags;
  auto m = qasm::frontend("qubit q; rx(0.25) q;", diags);
  REQUIRE(m.has_value());
  auto text = emitQirFlat(*m, diags);
  REQUIRE(text.has_value());
  CHECK(text->find("call void @__quantum__qis__rx__body(double 0.25, "
                   "%Qubit* inttoptr (i64 0 to %Qubit*))") !=
        std::string::npos);
}

TEST_CASE("residual control flow is rejected") {
  DiagnosticList diags;
  auto m = qasm::frontend(
      "qubit q; bit c; c = measure q; while (c) { x q; c = measure q; }",
      diags);
  REQUIRE(m.has_value());
  CHECK_FALSE(emitQirFlat(*m, diags).has_value());
  CHECK(diags.str().find("residual control flow") != std::string::npos);
}

TEST_CASE("custom gate calls inline into flat QIR") {
  DiagnosticList diags;
  auto m = qasm::frontend(
      "gate prep a, b { h a; cx a, b; } qubit[2] q; prep q[0], q[1];", diags);
  REQUIRE_MESSAGE(m.has_value(), diags.str());
  auto text = emitQirFlat(*m, diags);
  REQUIRE_MESSAGE(text.has_value(), diags.str());
  CHECK(text->find("__quantum__qis__h__body") != std::string::npos);
  CHECK(text->find("__quantum__qis__cnot__body") != std::string::npos);
}
