//===-- IrTests.cpp - ir-core unit tests ----------------------------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "../support/TestUtil.hpp"
#include "qcc/ir/Module.hpp"
#include "qcc/ir/PassManager.hpp"
#include "qcc/ir/Patterns.hpp"
#include "qcc/ir/Registry.hpp"
#include "qcc/emit/TextIr.hpp"
#include "qcc/ir/Verifier.hpp"

#include <doctest.h>

using namespace qcc;
using qcctest::buildBellQc;

TEST_CASE("build_op mints results per the registered signature") {
  IrModule m;
  OpBuilder b(m, m.entryBlock());

  OpId alloc = b.create("qc.alloc");
  REQUIRE(m.op(alloc).results.size() == 1);
  CHECK(m.typeOf(m.op(alloc).results[0]) == TypeDesc::qubitRef());

  OpId h = b.create("qc.h", {m.op(alloc).results[0]});
  CHECK(m.op(h).results.empty());

  OpId qalloc = b.create("qco.alloc");
  OpId qh = b.create("qco.h", {m.op(qalloc).results[0]});
  REQUIRE(m.op(qh).results.size() == 1);
  CHECK(m.typeOf(m.op(qh).results[0]) == TypeDesc::qubitState());
  // Operand use lists updated.
  CHECK(m.value(m.op(qalloc).results[0]).uses.size() == 1);
}

TEST_CASE("build_op rejects bad opcodes, arity and operand types") {
  IrModule m;
  OpBuilder b(m, m.entryBlock());
  OpId alloc = b.create("qc.alloc");
  ValueId q = m.op(alloc).results[0];

  CHECK_THROWS_WITH_AS(b.create("qc.nosuch"), doctest::Contains("unknown"),
                       IrError);
  CHECK_THROWS_WITH_AS(b.create("qc.h", {q, q}),
                       doctest::Contains("expected 1"), IrError);
  // A qubit-ref operand where a state is needed: the message names the
  // offending operand index.
  CHECK_THROWS_WITH_AS(b.create("qco.h", {q}), doctest::Contains("operand 0"),
                       IrError);
}

TEST_CASE("replace_all_uses moves every use and preserves counts") {
  IrModule m;
  OpBuilder b(m, m.entryBlock());
  ValueId a = m.op(b.create("qc.alloc")).results[0];
  ValueId c = m.op(b.create("qc.alloc")).results[0];
  b.create("qc.h", {a});
  b.create("qc.x", {a});
  b.create("qc.z", {a});
  REQUIRE(m.value(a).uses.size() == 3);

  SUBCASE("three uses migrate") {
    m.replaceAllUses(a, c);
    CHECK(m.value(a).uses.empty());
    CHECK(m.value(c).uses.size() == 3);
  }
  SUBCASE("self-replacement is a no-op") {
    m.replaceAllUses(a, a);
    CHECK(m.value(a).uses.size() == 3);
  }
  SUBCASE("type mismatch is rejected") {
    ValueId s = m.op(b.create("qco.alloc")).results[0];
    CHECK_THROWS_AS(m.replaceAllUses(a, s), IrError);
  }
}

TEST_CASE("erase_op enforces use-free results") {
  IrModule m;
  OpBuilder b(m, m.entryBlock());
  OpId alloc = b.create("qc.alloc");
  ValueId q = m.op(alloc).results[0];

  SUBCASE("erasing a dealloc always succeeds") {
    OpId dealloc = b.create("qc.dealloc", {q});
    m.eraseOp(dealloc);
    CHECK(m.op(dealloc).dead);
    CHECK(m.value(q).uses.empty());
  }
  SUBCASE("erasing an alloc still in use names the user") {
    b.create("qc.measure", {q});
    CHECK_THROWS_WITH_AS(m.eraseOp(alloc), doctest::Contains("qc.measure"),
                         IrError);
  }
  SUBCASE("alloc is erasable once its only user is gone") {
    OpId dealloc = b.create("qc.dealloc", {q});
    m.eraseOp(dealloc);
    m.eraseOp(alloc);
    CHECK(m.block(m.entryBlock()).ops.empty());
  }
}

TEST_CASE("verify accepts the Bell program and is pure") {
  IrModule m = buildBellQc();
  DiagnosticList d1 = verify(m);
  CHECK(d1.empty());
  std::string before = printIr(m);
  DiagnosticList d2 = verify(m);
  CHECK(d2.empty());
  CHECK(printIr(m) == before);
}

TEST_CASE("verify reports dominance violations") {
  IrModule m;
  OpBuilder b(m, m.entryBlock());
  OpId alloc = b.create("qc.alloc");
  b.create("qc.h", {m.op(alloc).results[0]});
  // Move the alloc after its use.
  m.moveOp(alloc, m.entryBlock(), 1);
  DiagnosticList diags = verify(m);
  REQUIRE(diags.hasErrors());
  CHECK(diags.str().find("before its definition") != std::string::npos);
}

TEST_CASE("verify reports qco linearity violations") {
  IrModule m;
  OpBuilder b(m, m.entryBlock());
  ValueId s0 = m.op(b.create("qco.alloc")).results[0];
  b.create("qco.h", {s0});
  b.create("qco.x", {s0}); // second consumer of the same state
  DiagnosticList diags = verify(m);
  REQUIRE(diags.hasErrors());
  CHECK(diags.str().find("reused") != std::string::npos);
}

namespace {

/// Test-local driver pattern: cancels adjacent qco.h pairs.
struct CancelHh final : RewritePattern {
  CancelHh() : RewritePattern("qco.h", 1) {}
  bool matchAndRewrite(IrModule& m, OpId op) const override {
    ValueId in = m.op(op).operands[0];
    const ValueInfo& info = m.value(in);
    if (info.isBlockArg() || m.op(info.defOp).opcode != "qco.h")
      return false;
    OpId prev = info.defOp;
    m.replaceAllUses(m.op(op).results[0], m.op(prev).operands[0]);
    m.eraseOp(op);
    m.eraseOp(prev);
    return true;
  }
};

} // namespace

TEST_CASE("greedy driver applies patterns to a fixpoint") {
  using qcctest::cmatMaxDiff;
  using qcctest::cmatMul;
  using qcctest::refGate;

  IrModule m;
  OpBuilder b(m, m.entryBlock());
  ValueId s = m.op(b.create("qco.alloc")).results[0];
  CancelHh pattern;
  std::vector<const RewritePattern*> patterns{&pattern};

  SUBCASE("H;H cancels") {
    ValueId s1 = m.op(b.create("qco.h", {s})).results[0];
    b.create("qco.h", {s1});
    auto result = applyPatternsGreedy(m, patterns);
    CHECK(result.changed);
    CHECK(result.reachedFixpoint);
    CHECK(m.block(m.entryBlock()).ops.size() == 1); // only the alloc
    CHECK(verify(m).empty());
  }
  SUBCASE("empty pattern list changes nothing") {
    b.create("qco.h", {s});
    auto result = applyPatternsGreedy(m, {});
    CHECK_FALSE(result.changed);
  }
  SUBCASE("H;X;H stays: no legal rewrite exists") {
    // Oracle first: HXH is neither the identity nor X on the matrix level,
    // so no cancellation may fire.
    auto hxh = cmatMul(refGate("h"), cmatMul(refGate("x"), refGate("h")));
    CHECK(cmatMaxDiff(hxh, qcctest::cmatIdentity(2)) > 0.5);
    CHECK(cmatMaxDiff(hxh, refGate("x")) > 0.5);

    ValueId s1 = m.op(b.create("qco.h", {s})).results[0];
    ValueId s2 = m.op(b.create("qco.x", {s1})).results[0];
    b.create("qco.h", {s2});
    auto result = applyPatternsGreedy(m, patterns);
    CHECK_FALSE(result.changed);
    CHECK(m.block(m.entryBlock()).ops.size() == 4);
  }
}

TEST_CASE("pipeline runner rejects unknown passes and runs empty pipelines") {
  registerAllPasses();
  IrModule m = buildBellQc();
  PassContext ctx;
  DiagnosticList diags;

  SUBCASE("unknown pass") {
    CHECK_FALSE(runPipeline(m, {{"no-such-pass", PassOptions()}}, ctx, diags));
    CHECK(diags.str().find("unknown pass") != std::string::npos);
  }
  SUBCASE("empty pipeline leaves the module unchanged") {
    std::string before = printIr(m);
    CHECK(runPipeline(m, {}, ctx, diags));
    CHECK(printIr(m) == before);
  }
}

TEST_CASE("pipeline string parsing") {
  DiagnosticList diags;
  auto p = parsePipeline("linearize, cancel-inverses,"
                         "simplify-control-flow{unroll-limit=32},bufferize",
                         diags);
  REQUIRE(p.has_value());
  REQUIRE(p->size() == 4);
  CHECK((*p)[0].name == "linearize");
  CHECK((*p)[2].options.getInt("unroll-limit", 0) == 32);
  CHECK((*p)[3].name == "bufferize");

  CHECK_FALSE(parsePipeline("a{b}", diags).has_value());
}

namespace {

/// Pathological pattern that never stops rewriting: flips x <-> y.
struct FlipFlop final : RewritePattern {
  FlipFlop() : RewritePattern("", 1) {}
  bool matchAndRewrite(IrModule& m, OpId op) const override {
    if (m.op(op).opcode == "qc.x") {
      m.op(op).opcode = "qc.y";
      return true;
    }
    if (m.op(op).opcode == "qc.y") {
      m.op(op).opcode = "qc.x";
      return true;
    }
    return false;
  }
};

} // namespace

TEST_CASE("driver caps runaway pattern sets and warns") {
  IrModule m;
  OpBuilder b(m, m.entryBlock());
  ValueId q = m.op(b.create("qc.alloc")).results[0];
  b.create("qc.x", {q});
  FlipFlop pattern;
  auto result = applyPatternsGreedy(m, {&pattern}, 10);
  CHECK(result.changed);
  CHECK_FALSE(result.reachedFixpoint);
  CHECK_THROWS_AS(applyPatternsGreedy(m, {&pattern}, 0), IrError);
}

TEST_CASE("pipelines verify after each pass and abort on bad input") {
  registerAllPasses();
  IrModule m = buildBellQc(); // qc form: bufferize must refuse it
  PassContext ctx;
  DiagnosticList diags;
  CHECK_FALSE(runPipeline(m, {{"bufferize", PassOptions()}}, ctx, diags));
  CHECK(diags.hasErrors());
}

TEST_CASE("the canonical optimize pipeline runs end to end") {
  registerAllPasses();
  IrModule m = buildBellQc();
  PassContext ctx;
  DiagnosticList diags;
  auto pipeline = parsePipeline("linearize,cancel-inverses,bufferize", diags);
  REQUIRE(pipeline.has_value());
  REQUIRE_MESSAGE(runPipeline(m, *pipeline, ctx, diags), diags.str());
  CHECK(verify(m).empty());
  // Back in reference semantics: gates have no results.
  m.walk([&](OpId op) {
    if (m.op(op).opcode == "qc.h")
      CHECK(m.op(op).results.empty());
    return true;
  });
}

TEST_CASE("qc hooks flag out-of-range extracts") {
  IrModule m;
  OpBuilder b(m, m.entryBlock());
  OpId reg = b.create("qc.alloc_reg", {}, {{"size", AttributeValue(2)}});
  b.create("qc.extract", {m.op(reg).results[0]},
           {{"index", AttributeValue(2)}}); // == size: one past the end
  DiagnosticList diags = verify(m);
  REQUIRE(diags.hasErrors());
  CHECK(diags.str().find("out of range") != std::string::npos);
}

TEST_CASE("qc hooks flag non-unitary modifier bodies") {
  IrModule m;
  OpBuilder b(m, m.entryBlock());
  ValueId c = m.op(b.create("qc.alloc")).results[0];
  ValueId t = m.op(b.create("qc.alloc")).results[0];
  OpId ctrl = b.create("qc.ctrl", {c},
                       {{"polarity", AttributeValue(AttributeValue::Array{
                                         AttributeValue(true)})}});
  OpBuilder body(m, m.region(m.op(ctrl).regions[0]).front());
  body.create("qc.measure", {t});
  DiagnosticList diags = verify(m);
  REQUIRE(diags.hasErrors());
  CHECK(diags.str().find("unitary") != std::string::npos);
}
