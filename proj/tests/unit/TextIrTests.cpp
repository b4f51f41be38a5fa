//===-- TextIrTests.cpp - textual IR round-trip tests ---------------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "../support/TestUtil.hpp"
#include "qcc/emit/TextIr.hpp"
#include "qcc/ir/Registry.hpp"
#include "qcc/ir/Verifier.hpp"

#include <doctest.h>

using namespace qcc;
using qcctest::buildBellQc;

TEST_CASE("Bell module prints in the frozen grammar") {
  IrModule m = buildBellQc();
  std::string text = printIr(m);
  CHECK(text.find("%q0 = qc.alloc : !qc.qubit") != std::string::npos);
  CHECK(text.find("qc.ctrl(%q0) { qc.x(%q1) }") != std::string::npos);
}

TEST_CASE("value-semantics ops print state chains") {
  IrModule m;
  OpBuilder b(m, m.entryBlock());
  OpId alloc = b.create("qco.alloc");
  b.nameResult(alloc, 0, "q0_0");
  OpId h = b.create("qco.h", {m.op(alloc).results[0]});
  b.nameResult(h, 0, "q0_1");
  std::string text = printIr(m);
  CHECK(text.find("%q0_1 = qco.h(%q0_0) : !qco.qubit") != std::string::npos);
}

TEST_CASE("empty module prints as the header line only") {
  IrModule m;
  CHECK(printIr(m) == "module\n");
  DiagnosticList diags;
  auto parsed = parseIr("module\n", diags);
  REQUIRE(parsed.has_value());
  CHECK(parsed->block(parsed->entryBlock()).ops.empty());
}

TEST_CASE("print -> parse -> print is byte-identical and structural") {
  IrModule m = buildBellQc(/*withMeasures=*/true);
  std::string text = printIr(m);
  DiagnosticList diags;
  auto parsed = parseIr(text, diags);
  REQUIRE_MESSAGE(parsed.has_value(), diags.str());
  CHECK(verify(*parsed).empty());
  std::string why;
  CHECK_MESSAGE(structurallyEqual(m, *parsed, &why), why);
  CHECK(printIr(*parsed) == text);
}

TEST_CASE("region-bearing and attribute-bearing ops round-trip") {
  const char* text = R"(module
%q0 = qc.alloc : !qc.qubit
%q1 = qc.alloc : !qc.qubit
qc.rz(%q0) { angle = 1.5707963267948966 }
qc.pow { exponent = -2 } { qc.inv { qc.t(%q0) } }
qc.ctrl(%q1) { polarity = [false] } { qc.sx(%q0) }
%c = qc.measure(%q0) : i1
cf.if(%c) {
  qc.x(%q0)
  cf.yield
} {
  cf.yield
}
)";
  DiagnosticList diags;
  auto parsed = parseIr(text, diags);
  REQUIRE_MESSAGE(parsed.has_value(), diags.str());
  CHECK_MESSAGE(verify(*parsed).str().empty(), verify(*parsed).str());
  std::string printed = printIr(*parsed);
  auto reparsed = parseIr(printed, diags);
  REQUIRE(reparsed.has_value());
  std::string why;
  CHECK_MESSAGE(structurallyEqual(*parsed, *reparsed, &why), why);
  CHECK(printIr(*reparsed) == printed);
}

TEST_CASE("qco control flow with block arguments round-trips") {
  const char* text = R"(module
%s0 = qco.alloc : !qco.qubit
%s1, %c = qco.measure(%s0) : !qco.qubit, i1
%r = cf.if(%c, %s1) : !qco.qubit {
  ^(%a0: !qco.qubit):
  %a1 = qco.x(%a0) : !qco.qubit
  cf.yield(%a1)
} {
  ^(%b0: !qco.qubit):
  cf.yield(%b0)
}
)";
  DiagnosticList diags;
  auto parsed = parseIr(text, diags);
  REQUIRE_MESSAGE(parsed.has_value(), diags.str());
  CHECK_MESSAGE(verify(*parsed).str().empty(), verify(*parsed).str());
  std::string printed = printIr(*parsed);
  auto reparsed = parseIr(printed, diags);
  REQUIRE(reparsed.has_value());
  std::string why;
  CHECK_MESSAGE(structurallyEqual(*parsed, *reparsed, &why), why);
}

TEST_CASE("parse errors carry line and column") {
  DiagnosticList diags;
  auto parsed = parseIr("module\n%x = qc.alloc\n", diags);
  CHECK_FALSE(parsed.has_value());
  REQUIRE(diags.size() > 0);
  CHECK(diags[0].location.line == 2);

  DiagnosticList diags2;
  CHECK_FALSE(parseIr("module\nqc.h(%undef)\n", diags2).has_value());
  CHECK(diags2.str().find("undefined value") != std::string::npos);

  DiagnosticList diags3;
  CHECK_FALSE(parseIr("not-a-module\n", diags3).has_value());
}

TEST_CASE("name collisions are uniqued deterministically") {
  IrModule m;
  OpBuilder b(m, m.entryBlock());
  OpId a = b.create("qc.alloc");
  b.nameResult(a, 0, "q");
  OpId c = b.create("qc.alloc");
  b.nameResult(c, 0, "q");
  std::string text = printIr(m);
  CHECK(text.find("%q = ") != std::string::npos);
  CHECK(text.find("%q_1 = ") != std::string::npos);
  DiagnosticList diags;
  auto parsed = parseIr(text, diags);
  REQUIRE(parsed.has_value());
  CHECK(printIr(*parsed) == text);
}
