//===-- TestUtil.cpp ------------------------------------------------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "TestUtil.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qcctest {

CMat refGate(const std::string& name, const std::vector<double>& angles) {
  const Cx i1(0.0, 1.0);
  const double pi = std::numbers::pi;
  const double s2 = 1.0 / std::sqrt(2.0);
  if (name == "i")
    return {1, 0, 0, 1};
  if (name == "h")
    return {s2, s2, s2, -s2};
  if (name == "x")
    return {0, 1, 1, 0};
  if (name == "y")
    return {0, -i1, i1, 0};
  if (name == "z")
    return {1, 0, 0, -1};
  if (name == "s")
    return {1, 0, 0, i1};
  if (name == "sdg")
    return {1, 0, 0, -i1};
  if (name == "t")
    return {1, 0, 0, std::exp(i1 * (pi / 4))};
  if (name == "tdg")
    return {1, 0, 0, std::exp(-i1 * (pi / 4))};
  if (name == "sx")
    return {0.5 * (1.0 + i1), 0.5 * (1.0 - i1), 0.5 * (1.0 - i1),
            0.5 * (1.0 + i1)};
  if (name == "sxdg")
    return {0.5 * (1.0 - i1), 0.5 * (1.0 + i1), 0.5 * (1.0 + i1),
            0.5 * (1.0 - i1)};
  if (name == "swap")
    return {1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1};
  if (name == "rx") {
    double t = angles.at(0) / 2;
    return {std::cos(t), -i1 * std::sin(t), -i1 * std::sin(t), std::cos(t)};
  }
  if (name == "ry") {
    double t = angles.at(0) / 2;
    return {std::cos(t), -std::sin(t), std::sin(t), std::cos(t)};
  }
  if (name == "rz") {
    double t = angles.at(0) / 2;
    return {std::exp(-i1 * t), 0, 0, std::exp(i1 * t)};
  }
  if (name == "p")
    return {1, 0, 0, std::exp(i1 * angles.at(0))};
  if (name == "u") {
    double t = angles.at(0) / 2, phi = angles.at(1), lam = angles.at(2);
    return {std::cos(t), -std::exp(i1 * lam) * std::sin(t),
            std::exp(i1 * phi) * std::sin(t),
            std::exp(i1 * (phi + lam)) * std::cos(t)};
  }
  throw std::runtime_error("refGate: unknown gate " + name);
}

CMat refCnotControlFirst() {
  // Basis index = target*2 + control. Control = 1 flips the target:
  // |00> -> |00>, |01> -> |11>, |10> -> |10>, |11> -> |01>.
  return {
      1, 0, 0, 0, //
      0, 0, 0, 1, //
      0, 0, 1, 0, //
      0, 1, 0, 0, //
  };
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string testDataDir() {
#ifdef QCC_TEST_DIR
  return QCC_TEST_DIR;
#else
  return "tests";
#endif
}

} // namespace qcctest

#include "qcc/ir/Registry.hpp"

namespace qcctest {

qcc::IrModule buildBellQc(bool withMeasures) {
  using namespace qcc;
  IrModule m;
  OpBuilder b(m, m.entryBlock());
  OpId a0 = b.create("qc.alloc");
  b.nameResult(a0, 0, "q0");
  OpId a1 = b.create("qc.alloc");
  b.nameResult(a1, 0, "q1");
  ValueId q0 = m.op(a0).results[0];
  ValueId q1 = m.op(a1).results[0];
  b.create("qc.h", {q0});
  OpId cx = b.create("qc.ctrl", {q0},
                     {{"polarity", AttributeValue(AttributeValue::Array{
                                       AttributeValue(true)})}});
  OpBuilder body(m, m.region(m.op(cx).regions[0]).front());
  body.create("qc.x", {q1});
  if (withMeasures) {
    b.create("qc.measure", {q0});
    b.create("qc.measure", {q1});
  }
  return m;
}

} // namespace qcctest

namespace qcctest {

namespace {

using namespace qcc;

struct Generator {
  IrModule m;
  std::mt19937 rng;
  const RandomCircuitOptions& options;
  std::vector<ValueId> qubits;
  std::vector<ValueId> bits;
  int measuresLeft;

  Generator(uint32_t seed, const RandomCircuitOptions& opts)
      : rng(seed), options(opts), measuresLeft(opts.maxMeasures) {}

  int pick(int n) { return int(rng() % uint32_t(n)); }
  double angle() {
    std::uniform_real_distribution<double> dist(-3.5, 3.5);
    return dist(rng);
  }

  ValueId qubit() { return qubits[size_t(pick(int(qubits.size())))]; }

  std::pair<ValueId, ValueId> qubitPair() {
    int a = pick(int(qubits.size()));
    int b = pick(int(qubits.size()) - 1);
    if (b >= a)
      ++b;
    return {qubits[size_t(a)], qubits[size_t(b)]};
  }

  void emitGate(OpBuilder& b) {
    static const char* oneQ[] = {"qc.h", "qc.x",  "qc.y",   "qc.z",
                                 "qc.s", "qc.sdg", "qc.t",  "qc.tdg",
                                 "qc.sx", "qc.sxdg", "qc.i"};
    static const char* rot[] = {"qc.rx", "qc.ry", "qc.rz", "qc.p"};
    int kind = pick(10);
    if (kind < 4) {
      b.create(oneQ[pick(11)], {qubit()});
    } else if (kind < 7) {
      b.create(rot[pick(4)], {qubit()}, {{"angle", AttributeValue(angle())}});
    } else if (kind == 7 && qubits.size() >= 2) {
      auto [x, y] = qubitPair();
      b.create("qc.swap", {x, y});
    } else if (kind == 8 && qubits.size() >= 2 && options.allowModifiers) {
      auto [c, t] = qubitPair();
      bool positive = pick(4) != 0;
      OpId ctrl = b.create(
          "qc.ctrl", {c},
          {{"polarity",
            AttributeValue(AttributeValue::Array{AttributeValue(positive)})}});
      OpBuilder body(m, m.region(m.op(ctrl).regions[0]).front());
      if (pick(2))
        body.create(oneQ[pick(10)], {t});
      else
        body.create(rot[pick(4)], {t}, {{"angle", AttributeValue(angle())}});
    } else if (kind == 9 && options.allowModifiers) {
      std::string opcode = pick(2) ? "qc.inv" : "qc.pow";
      AttrMap attrs;
      if (opcode == "qc.pow")
        attrs["exponent"] = AttributeValue(int64_t(pick(5) - 2));
      OpId mod = b.create(opcode, {}, std::move(attrs));
      OpBuilder body(m, m.region(m.op(mod).regions[0]).front());
      body.create(oneQ[pick(10)], {qubit()});
    } else {
      b.create("qc.u", {qubit()},
               {{"theta", AttributeValue(angle())},
                {"phi", AttributeValue(angle())},
                {"lambda", AttributeValue(angle())}});
    }
  }

  void emitBody(OpBuilder& b, int ops, int depth) {
    for (int i = 0; i < ops; ++i) {
      int roll = pick(12);
      if (roll == 0 && options.allowMeasure && measuresLeft > 0 &&
          depth == 0) {
        --measuresLeft;
        OpId measure = b.create("qc.measure", {qubit()});
        bits.push_back(m.op(measure).results[0]);
      } else if (roll == 1 && options.allowControlFlow && depth < 2 &&
                 !bits.empty()) {
        OpId ifOp = b.create("cf.if", {bits[size_t(pick(int(bits.size())))]});
        OpBuilder thenB(m, m.region(m.op(ifOp).regions[0]).front());
        emitBody(thenB, 1 + pick(3), depth + 1);
        thenB.create("cf.yield", {});
        OpBuilder elseB(m, m.region(m.op(ifOp).regions[1]).front());
        if (pick(2))
          emitBody(elseB, pick(2), depth + 1);
        elseB.create("cf.yield", {});
      } else if (roll == 2 && options.allowControlFlow && depth < 2) {
        int64_t lb = pick(2);
        int64_t ub = lb + pick(3) + 1;
        OpId lbC = b.create("cf.const", {}, {TypeDesc::index()},
                            {{"value", AttributeValue(lb)}});
        OpId ubC = b.create("cf.const", {}, {TypeDesc::index()},
                            {{"value", AttributeValue(ub)}});
        OpId stC = b.create("cf.const", {}, {TypeDesc::index()},
                            {{"value", AttributeValue(int64_t(1))}});
        OpId forOp = b.create("cf.for", {m.op(lbC).results[0],
                                         m.op(ubC).results[0],
                                         m.op(stC).results[0]});
        BlockId block = m.region(m.op(forOp).regions[0]).front();
        m.addBlockArg(block, TypeDesc::index(), "i");
        OpBuilder body(m, block);
        emitBody(body, 1 + pick(3), depth + 1);
        body.create("cf.yield", {});
      } else {
        emitGate(b);
      }
    }
  }

  IrModule run() {
    OpBuilder b(m, m.entryBlock());
    int n = 1 + pick(options.maxQubits);
    for (int i = 0; i < n; ++i) {
      OpId alloc = b.create("qc.alloc");
      b.nameResult(alloc, 0, "q" + std::to_string(i));
      qubits.push_back(m.op(alloc).results[0]);
    }
    emitBody(b, 1 + pick(options.maxOps), 0);
    return std::move(m);
  }
};

} // namespace

qcc::IrModule randomQcModule(uint32_t seed,
                             const RandomCircuitOptions& options) {
  Generator gen(seed, options);
  return gen.run();
}

} // namespace qcctest
