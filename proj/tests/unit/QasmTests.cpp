//===-- QasmTests.cpp - frontend parser and lowering tests ----------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "../support/TestUtil.hpp"
#include "qcc/emit/QasmEmitter.hpp"
#include "qcc/frontend/Qasm.hpp"
#include "qcc/ir/Registry.hpp"
#include "qcc/ir/Verifier.hpp"
#include "qcc/transforms/Conversions.hpp"

#include <doctest.h>

#include <numbers>

using namespace qcc;

namespace {

IrModule mustLower(const std::string& source) {
  DiagnosticList diags;
  auto m = qasm::frontend(source, diags);
  REQUIRE_MESSAGE(m.has_value(), diags.str());
  return std::move(*m);
}

size_t countOps(const IrModule& m, const std::string& opcode) {
  size_t n = 0;
  m.walk([&](OpId op) {
    if (m.op(op).opcode == opcode)
      ++n;
    return true;
  });
  return n;
}

} // namespace

TEST_CASE("Bell program parses to declarations and gate applications") {
  DiagnosticList diags;
  auto program = qasm::parseQasm(
      "qubit[2] q; h q[0]; ctrl @ x q[0], q[1];", diags);
  REQUIRE_MESSAGE(program.has_value(), diags.str());
  REQUIRE(program->statements.size() == 3);
  CHECK(std::holds_alternative<qasm::DeclStmt>(program->statements[0].node));
  CHECK(std::holds_alternative<qasm::GateApp>(program->statements[1].node));
  const auto& cx = std::get<qasm::GateApp>(program->statements[2].node);
  REQUIRE(cx.modifiers.size() == 1);
  CHECK(cx.modifiers[0].kind == qasm::Modifier::Kind::Ctrl);
  CHECK(cx.qubits.size() == 2);
}

TEST_CASE("empty file parses to an empty program") {
  DiagnosticList diags;
  auto program = qasm::parseQasm("", diags);
  REQUIRE(program.has_value());
  CHECK(program->statements.empty());
}

TEST_CASE("conditioned correction parses as an if statement") {
  DiagnosticList diags;
  auto program = qasm::parseQasm(
      "qubit q; bit c; h q; c = measure q; if (c) { x q; }", diags);
  REQUIRE_MESSAGE(program.has_value(), diags.str());
  REQUIRE(program->statements.size() == 5);
  CHECK(std::holds_alternative<qasm::IfStmt>(program->statements[4].node));
}

TEST_CASE("OpenQASM 2 headers are rejected with a dedicated message") {
  DiagnosticList diags;
  CHECK_FALSE(qasm::parseQasm("OPENQASM 2.0;\nqreg q[1];", diags).has_value());
  CHECK(diags.str().find("OpenQASM 2") != std::string::npos);
}

TEST_CASE("unsupported constructs name the feature") {
  DiagnosticList diags;
  CHECK_FALSE(qasm::parseQasm("def f() { }", diags).has_value());
  CHECK(diags.str().find("unsupported feature: 'def'") != std::string::npos);
}

TEST_CASE("Bell lowering produces register, extracts, h and ctrl{x}") {
  IrModule m = mustLower("qubit[2] q; h q[0]; ctrl @ x q[0], q[1];");
  CHECK(countOps(m, "qc.alloc_reg") == 1);
  CHECK(countOps(m, "qc.extract") == 2);
  CHECK(countOps(m, "qc.h") == 1);
  CHECK(countOps(m, "qc.ctrl") == 1);
  CHECK(countOps(m, "qc.x") == 1);
  CHECK(verify(m).empty());
}

TEST_CASE("cx desugars to ctrl @ x") {
  IrModule m = mustLower("qubit[2] q; cx q[0], q[1];");
  CHECK(countOps(m, "qc.ctrl") == 1);
  CHECK(countOps(m, "qc.x") == 1);
  IrModule m2 = mustLower("qubit[3] q; ccx q[0], q[1], q[2];");
  CHECK(countOps(m2, "qc.ctrl") == 2);
}

TEST_CASE("for ranges lower to cf.for with exclusive upper bound") {
  IrModule m = mustLower("qubit q; for uint i in [0:3] { x q; }");
  REQUIRE(countOps(m, "cf.for") == 1);
  // lb=0, ub=3, step=1 as index constants.
  std::vector<int64_t> bounds;
  m.walk([&](OpId op) {
    if (m.op(op).opcode == "cf.const" &&
        m.typeOf(m.op(op).results[0]) == TypeDesc::index())
      bounds.push_back(m.op(op).attr("value")->asInt());
    return true;
  });
  CHECK(bounds == std::vector<int64_t>{0, 3, 1});
  CHECK(countOps(m, "qc.x") == 1);
}

TEST_CASE("reset idiom lowers to an if with an empty else") {
  IrModule m =
      mustLower("qubit q; bit c; h q; c = measure q; if (c) { x q; }");
  REQUIRE(countOps(m, "cf.if") == 1);
  CHECK(countOps(m, "qc.measure") == 1);
  m.walk([&](OpId op) {
    if (m.op(op).opcode != "cf.if")
      return true;
    BlockId elseBlock = m.region(m.op(op).regions[1]).front();
    CHECK(m.block(elseBlock).ops.size() == 1); // just the yield
    return true;
  });
}

TEST_CASE("if (c == 0) swaps the branches") {
  IrModule m = mustLower(
      "qubit q; bit c; c = measure q; if (c == 0) { x q; } else { z q; }");
  m.walk([&](OpId op) {
    if (m.op(op).opcode != "cf.if")
      return true;
    BlockId thenBlock = m.region(m.op(op).regions[0]).front();
    // Region 0 runs when c == 1: it holds the else body (z).
    CHECK(m.op(m.block(thenBlock).ops[0]).opcode == "qc.z");
    return true;
  });
}

TEST_CASE("angle expressions fold at parse time") {
  IrModule m = mustLower("qubit q; rz(pi/2) q; rz(-pi) q; rz(2*0.25) q;");
  std::vector<double> angles;
  m.walk([&](OpId op) {
    if (m.op(op).opcode == "qc.rz")
      angles.push_back(m.op(op).attr("angle")->asFloat());
    return true;
  });
  REQUIRE(angles.size() == 3);
  CHECK(angles[0] == doctest::Approx(std::numbers::pi / 2));
  CHECK(angles[1] == doctest::Approx(-std::numbers::pi));
  CHECK(angles[2] == doctest::Approx(0.5));
}

TEST_CASE("broadcast applies single-qubit gates slotwise") {
  IrModule m = mustLower("qubit[3] q; h q;");
  CHECK(countOps(m, "qc.h") == 3);
}

TEST_CASE("measure broadcast pairs register slots") {
  IrModule m = mustLower("qubit[2] q; bit[2] c; c = measure q;");
  CHECK(countOps(m, "qc.measure") == 2);
}

TEST_CASE("custom gates define and call") {
  IrModule m = mustLower(R"(
    gate myrot(a) x1 { rz(a) x1; h x1; }
    qubit q;
    myrot(0.5) q;
  )");
  CHECK(countOps(m, "qc.gate_def") == 1);
  CHECK(countOps(m, "qc.call_gate") == 1);
  // The parameter reference is carried symbolically in the body.
  bool sawParamRef = false;
  m.walk([&](OpId op) {
    if (m.op(op).opcode == "qc.rz" && m.op(op).attr("angle")->isString())
      sawParamRef = m.op(op).attr("angle")->asString() == "$0";
    return true;
  });
  CHECK(sawParamRef);
  CHECK(verify(m).empty());
}

TEST_CASE("recursive gate definitions are rejected") {
  DiagnosticList diags;
  CHECK_FALSE(
      qasm::frontend("gate g q { g q; } qubit r; g r;", diags).has_value());
  CHECK(diags.str().find("recursive") != std::string::npos);
}

TEST_CASE("undeclared identifiers are reported") {
  DiagnosticList diags;
  CHECK_FALSE(qasm::frontend("qubit q; h r;", diags).has_value());
  CHECK(diags.str().find("undeclared") != std::string::npos);
}

TEST_CASE("while loops thread the condition bit") {
  IrModule m = mustLower(
      "qubit q; bit c; c = measure q; while (c) { x q; c = measure q; }");
  CHECK(countOps(m, "cf.while") == 1);
  CHECK(verify(m).empty());
}

TEST_CASE("bits read in nested scopes thread through iter args") {
  IrModule m = mustLower(R"(
    qubit[2] q;
    bit[2] c;
    h q[0];
    c[0] = measure q[0];
    if (c[0]) {
      c[1] = measure q[1];
    }
    if (c[1]) { x q[0]; }
  )");
  CHECK(verify(m).empty());
  // The first if must yield the threaded c[1] value.
  bool sawIfWithResult = false;
  m.walk([&](OpId op) {
    if (m.op(op).opcode == "cf.if" && !m.op(op).results.empty())
      sawIfWithResult = true;
    return true;
  });
  CHECK(sawIfWithResult);
}

TEST_CASE("QASM round trip: emit then reparse is structurally identical") {
  const char* sources[] = {
      "qubit[2] q; h q[0]; ctrl @ x q[0], q[1];",
      "qubit q; bit c; h q; c = measure q; if (c) { x q; }",
      "qubit q; for uint i in [0:3] { x q; }",
      "qubit[2] q; bit[2] c; h q; c = measure q;",
      "qubit q; inv @ s q; pow(2) @ sx q; rz(0.25) q;",
      "qubit[2] q; negctrl @ x q[0], q[1];",
      "gate flip a { x a; } qubit q; flip q;",
      "qubit q; bit c; c = measure q; while (c) { x q; c = measure q; }",
      "qubit q; bit c; c = measure q; while (c == 0) { h q; c = measure q; }",
  };
  for (const char* source : sources) {
    CAPTURE(source);
    IrModule m = mustLower(source);
    DiagnosticList diags;
    auto text = emitQasm(m, diags);
    REQUIRE_MESSAGE(text.has_value(), diags.str());
    CAPTURE(*text);
    DiagnosticList diags2;
    auto reparsed = qasm::frontend(*text, diags2);
    REQUIRE_MESSAGE(reparsed.has_value(), diags2.str());
    // Identity holds in the register-exploded normal form: the emitter
    // re-groups every allocation into one register by design.
    IrModule lhs = explodeRegisters(m);
    IrModule rhs = explodeRegisters(*reparsed);
    std::string why;
    CHECK_MESSAGE(structurallyEqual(lhs, rhs, &why), why, "\n", *text);
  }
}

TEST_CASE("syntax errors carry a location inside the source") {
  DiagnosticList diags;
  CHECK_FALSE(qasm::parseQasm("qubit q;\nh q[;\n", diags).has_value());
  REQUIRE(diags.size() > 0);
  CHECK(diags[0].location.line == 2);
  CHECK(diags[0].message.find("expected") != std::string::npos);
}
