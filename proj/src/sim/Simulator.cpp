//===-- Simulator.cpp -----------------------------------------------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "qcc/sim/Simulator.hpp"

#include "qcc/dialect/QC.hpp"
#include "qcc/ir/Registry.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace qcc {

using std::complex;

//===----------------------------------------------------------------------===//
// StateVector
//===----------------------------------------------------------------------===//

StateVector::StateVector(int numQubits)
    : numQubits_(numQubits), amps_(size_t(1) << numQubits) {
  amps_[0] = 1.0;
}

void StateVector::applyMatrix(const Matrix& u, const std::vector<int>& wires) {
  const int k = static_cast<int>(wires.size());
  assert(u.dim() == (1 << k));
  const size_t dim = amps_.size();
  uint32_t wireMask = 0;
  for (int w : wires)
    wireMask |= 1u << w;

  std::vector<complex<double>> scratch(size_t(1) << k);
  for (size_t base = 0; base < dim; ++base) {
    if ((base & wireMask) != 0)
      continue; // visit each orbit once, at its all-zero representative
    // Gather amplitudes of the orbit.
    for (uint32_t s = 0; s < (1u << k); ++s) {
      size_t index = base;
      for (int b = 0; b < k; ++b)
        if ((s >> b) & 1u)
          index |= size_t(1) << wires[b];
      scratch[s] = amps_[index];
    }
    for (uint32_t row = 0; row < (1u << k); ++row) {
      complex<double> acc = 0.0;
      for (uint32_t col = 0; col < (1u << k); ++col)
        acc += u.at(int(row), int(col)) * scratch[col];
      size_t index = base;
      for (int b = 0; b < k; ++b)
        if ((row >> b) & 1u)
          index |= size_t(1) << wires[b];
      amps_[index] = acc;
    }
  }
}

double StateVector::probabilityOfOne(int wire) const {
  double p = 0.0;
  const size_t bit = size_t(1) << wire;
  for (size_t i = 0; i < amps_.size(); ++i)
    if (i & bit)
      p += std::norm(amps_[i]);
  return p;
}

void StateVector::collapse(int wire, bool outcome, double probability) {
  const size_t bit = size_t(1) << wire;
  const double scale = probability > 0 ? 1.0 / std::sqrt(probability) : 0.0;
  for (size_t i = 0; i < amps_.size(); ++i) {
    if (((i & bit) != 0) == outcome)
      amps_[i] *= scale;
    else
      amps_[i] = 0.0;
  }
}

double StateVector::norm() const {
  double n = 0.0;
  for (const auto& a : amps_)
    n += std::norm(a);
  return std::sqrt(n);
}

double StateVector::maxAbsDiffUpToPhase(const StateVector& other) const {
  assert(amps_.size() == other.amps_.size());
  size_t ref = 0;
  double best = -1.0;
  for (size_t i = 0; i < amps_.size(); ++i)
    if (std::abs(amps_[i]) > best) {
      best = std::abs(amps_[i]);
      ref = i;
    }
  complex<double> phase = 1.0;
  if (best > 0.0 && std::abs(other.amps_[ref]) > 0.0)
    phase = amps_[ref] / std::abs(amps_[ref]) *
            (std::abs(other.amps_[ref]) / other.amps_[ref]);
  double worst = 0.0;
  for (size_t i = 0; i < amps_.size(); ++i)
    worst = std::max(worst, std::abs(amps_[i] - phase * other.amps_[i]));
  return worst;
}

std::map<std::string, double> OutcomeDistribution::probabilities() const {
  std::map<std::string, double> out;
  for (const auto& b : branches)
    out[b.bits] += b.probability;
  return out;
}

double OutcomeDistribution::totalProbability() const {
  double p = 0.0;
  for (const auto& b : branches)
    p += b.probability;
  return p;
}

//===----------------------------------------------------------------------===//
// Wire assignment
//===----------------------------------------------------------------------===//

namespace {

struct WirePlan {
  std::map<uint32_t, int> opWire; // alloc / alloc_reg op -> first wire
  int totalWires = 0;
  bool ok = true;
};

WirePlan planWires(const IrModule& m, DiagnosticList& diags) {
  WirePlan plan;
  m.walk([&](OpId op) {
    const std::string& opcode = m.op(op).opcode;
    if (opcode == "qc.gate_def")
      return true;
    if (opcode == "qc.alloc" || opcode == "qc.alloc_reg") {
      if (m.op(op).parent != m.entryBlock()) {
        diags.error("allocation inside a control-flow region is not "
                    "supported by the simulator",
                    m.op(op).loc);
        plan.ok = false;
        return false;
      }
      plan.opWire[op.idx] = plan.totalWires;
      plan.totalWires += opcode == "qc.alloc"
                             ? 1
                             : int(m.op(op).attr("size")->asInt());
    }
    return true;
  });
  return plan;
}

} // namespace

int countWires(const IrModule& m) {
  DiagnosticList diags;
  return planWires(m, diags).totalWires;
}

//===----------------------------------------------------------------------===//
// Execution
//===----------------------------------------------------------------------===//

namespace {

struct ExecState {
  StateVector sv;
  double probability = 1.0;
  std::string record;
  std::map<uint32_t, bool> bits;
  std::map<uint32_t, int64_t> ints;
  std::map<uint32_t, double> floats;
};

struct Interpreter {
  const IrModule& m;
  const SimOptions& options;
  DiagnosticList& diags;
  WirePlan plan;
  std::map<uint32_t, int> wireOf;    // qubit-ref value -> wire
  std::map<uint32_t, int> regBase;   // register value -> first wire
  bool failed = false;

  void fail(OpId op, const std::string& msg) {
    if (!failed)
      diags.error(msg, m.op(op).loc);
    failed = true;
  }

  bool getBit(const ExecState& st, ValueId v, OpId at) {
    auto it = st.bits.find(v.idx);
    if (it == st.bits.end()) {
      fail(at, "classical bit value is unavailable");
      return false;
    }
    return it->second;
  }

  int64_t getInt(const ExecState& st, ValueId v, OpId at) {
    auto it = st.ints.find(v.idx);
    if (it == st.ints.end()) {
      fail(at, "index value is unavailable");
      return 0;
    }
    return it->second;
  }

  void copyValue(ExecState& st, ValueId from, ValueId to) {
    switch (m.typeOf(from).kind) {
    case TypeKind::Bit:
      if (auto it = st.bits.find(from.idx); it != st.bits.end())
        st.bits[to.idx] = it->second;
      break;
    case TypeKind::Index:
    case TypeKind::Int:
      if (auto it = st.ints.find(from.idx); it != st.ints.end())
        st.ints[to.idx] = it->second;
      break;
    case TypeKind::F64:
      if (auto it = st.floats.find(from.idx); it != st.floats.end())
        st.floats[to.idx] = it->second;
      break;
    default:
      break;
    }
  }

  std::vector<ExecState> runBlock(BlockId block,
                                  std::vector<ExecState> states) {
    for (OpId op : m.block(block).ops) {
      if (failed)
        return {};
      if (m.op(op).opcode == "cf.yield")
        break; // caller reads the yield operands from the env
      std::vector<ExecState> next;
      for (auto& st : states)
        execOp(op, std::move(st), next);
      states = std::move(next);
    }
    return states;
  }

  OpId blockYield(BlockId block) {
    const auto& ops = m.block(block).ops;
    if (!ops.empty() && m.op(ops.back()).opcode == "cf.yield")
      return ops.back();
    return OpId{};
  }

  void execOp(OpId opId, ExecState st, std::vector<ExecState>& out) {
    const OperationNode& node = m.op(opId);
    const OpcodeInfo& info = getOpcode(node.opcode);
    switch (info.kind) {
    case OpKind::Alloc:
      wireOf[node.results[0].idx] = plan.opWire.at(opId.idx);
      out.push_back(std::move(st));
      return;
    case OpKind::AllocReg:
      regBase[node.results[0].idx] = plan.opWire.at(opId.idx);
      out.push_back(std::move(st));
      return;
    case OpKind::Extract:
      wireOf[node.results[0].idx] =
          regBase.at(node.operands[0].idx) + int(node.attr("index")->asInt());
      out.push_back(std::move(st));
      return;
    case OpKind::Dealloc:
      out.push_back(std::move(st));
      return;
    case OpKind::Gate:
    case OpKind::Ctrl:
    case OpKind::Inv:
    case OpKind::Pow:
    case OpKind::CallGate: {
      try {
        UnitaryDescriptor d = unitaryDescriptor(m, opId);
        Matrix u = descriptorMatrix(d, &m);
        std::vector<int> wires;
        for (ValueId v : unitaryWires(m, opId))
          wires.push_back(wireOf.at(v.idx));
        st.sv.applyMatrix(u, wires);
      } catch (const IrError& e) {
        fail(opId, e.what());
        return;
      }
      out.push_back(std::move(st));
      return;
    }
    case OpKind::Measure: {
      int wire = wireOf.at(node.operands[0].idx);
      double p1 = st.sv.probabilityOfOne(wire);
      double p0 = 1.0 - p1;
      for (bool outcome : {false, true}) {
        double p = outcome ? p1 : p0;
        if (st.probability * p < options.pruneThreshold)
          continue;
        ExecState branch = st;
        branch.sv.collapse(wire, outcome, p);
        branch.probability *= p;
        branch.record += outcome ? '1' : '0';
        branch.bits[node.results[0].idx] = outcome;
        out.push_back(std::move(branch));
      }
      return;
    }
    case OpKind::Reset: {
      // Measure-then-conditional-flip; no classical record.
      int wire = wireOf.at(node.operands[0].idx);
      double p1 = st.sv.probabilityOfOne(wire);
      double p0 = 1.0 - p1;
      for (bool outcome : {false, true}) {
        double p = outcome ? p1 : p0;
        if (st.probability * p < options.pruneThreshold)
          continue;
        ExecState branch = st;
        branch.sv.collapse(wire, outcome, p);
        branch.probability *= p;
        if (outcome)
          branch.sv.applyMatrix(gateMatrix(GateKind::X, {}), {wire});
        out.push_back(std::move(branch));
      }
      return;
    }
    case OpKind::Const: {
      const AttributeValue& v = *node.attr("value");
      if (m.typeOf(node.results[0]) == TypeDesc::bit())
        st.bits[node.results[0].idx] = v.asInt() != 0;
      else if (v.isInt())
        st.ints[node.results[0].idx] = v.asInt();
      else
        st.floats[node.results[0].idx] = v.asFloat();
      out.push_back(std::move(st));
      return;
    }
    case OpKind::If: {
      bool cond = getBit(st, node.operands[0], opId);
      if (failed)
        return;
      RegionId region = cond ? node.regions[0] : node.regions[1];
      BlockId block = m.region(region).front();
      ExecState entry = std::move(st);
      const auto& args = m.block(block).args;
      for (size_t i = 0; i < args.size(); ++i)
        copyValue(entry, node.operands[i + 1], args[i]);
      auto states = runBlock(block, singleton(std::move(entry)));
      OpId yield = blockYield(block);
      for (auto& s : states) {
        if (yield.valid())
          for (size_t i = 0; i < node.results.size(); ++i)
            copyValue(s, m.op(yield).operands[i], node.results[i]);
        out.push_back(std::move(s));
      }
      return;
    }
    case OpKind::For: {
      int64_t lb = getInt(st, node.operands[0], opId);
      int64_t ub = getInt(st, node.operands[1], opId);
      int64_t step = getInt(st, node.operands[2], opId);
      if (failed)
        return;
      if (step <= 0) {
        fail(opId, "cf.for requires a positive step");
        return;
      }
      BlockId block = m.region(node.regions[0]).front();
      const auto& args = m.block(block).args;
      OpId yield = blockYield(block);
      std::vector<ValueId> current(node.operands.begin() + 3,
                                   node.operands.end());
      auto states = singleton(std::move(st));
      for (int64_t iv = lb; iv < ub; iv += step) {
        for (auto& s : states) {
          s.ints[args[0].idx] = iv;
          // Snapshot first: a permuted yield may alias the block args.
          std::vector<Slot> snap;
          snap.reserve(current.size());
          for (ValueId v : current)
            snap.push_back(readSlot(s, v));
          for (size_t i = 0; i < current.size(); ++i)
            writeSlot(s, args[i + 1], snap[i]);
        }
        states = runBlock(block, std::move(states));
        if (failed)
          return;
        if (yield.valid())
          current.assign(m.op(yield).operands.begin(),
                         m.op(yield).operands.end());
      }
      for (auto& s : states) {
        for (size_t i = 0; i < node.results.size(); ++i)
          copyValue(s, current[i], node.results[i]);
        out.push_back(std::move(s));
      }
      return;
    }
    case OpKind::While: {
      BlockId cond = m.region(node.regions[0]).front();
      BlockId body = m.region(node.regions[1]).front();
      OpId condYield = blockYield(cond);
      OpId bodyYield = blockYield(body);
      if (!condYield.valid()) {
        fail(opId, "cf.while condition region has no yield");
        return;
      }
      // Seed the condition args from the iter operands.
      {
        const auto& args = m.block(cond).args;
        for (size_t i = 0; i < args.size(); ++i)
          copyValue(st, node.operands[i], args[i]);
      }
      struct Pending {
        ExecState state;
        int iterations;
      };
      std::vector<Pending> work;
      work.push_back({std::move(st), 0});
      while (!work.empty()) {
        Pending p = std::move(work.back());
        work.pop_back();
        if (p.iterations > options.maxLoopIterations) {
          fail(opId, "cf.while exceeded the loop iteration limit (" +
                         std::to_string(options.maxLoopIterations) + ")");
          return;
        }
        auto states = runBlock(cond, singleton(std::move(p.state)));
        if (failed)
          return;
        for (auto& s : states) {
          bool flag = getBit(s, m.op(condYield).operands[0], opId);
          if (failed)
            return;
          if (!flag) {
            for (size_t i = 0; i < node.results.size(); ++i)
              copyValue(s, m.op(condYield).operands[i + 1], node.results[i]);
            out.push_back(std::move(s));
            continue;
          }
          // Run the body, then loop back into the condition.
          {
            const auto& bodyArgs = m.block(body).args;
            for (size_t i = 0; i < bodyArgs.size(); ++i)
              copyValue(s, m.op(condYield).operands[i + 1], bodyArgs[i]);
          }
          auto bodyStates = runBlock(body, singleton(std::move(s)));
          if (failed)
            return;
          for (auto& bs : bodyStates) {
            const auto& condArgs = m.block(cond).args;
            if (bodyYield.valid())
              for (size_t i = 0; i < condArgs.size(); ++i)
                copyValue(bs, m.op(bodyYield).operands[i], condArgs[i]);
            work.push_back({std::move(bs), p.iterations + 1});
          }
        }
      }
      return;
    }
    case OpKind::GateDef:
    case OpKind::Yield:
      out.push_back(std::move(st));
      return;
    }
  }

  struct Slot {
    bool hasBit = false, hasInt = false, hasFloat = false;
    bool b = false;
    int64_t i = 0;
    double f = 0.0;
  };

  static Slot readSlot(const ExecState& st, ValueId v) {
    Slot slot;
    if (auto it = st.bits.find(v.idx); it != st.bits.end()) {
      slot.hasBit = true;
      slot.b = it->second;
    }
    if (auto it = st.ints.find(v.idx); it != st.ints.end()) {
      slot.hasInt = true;
      slot.i = it->second;
    }
    if (auto it = st.floats.find(v.idx); it != st.floats.end()) {
      slot.hasFloat = true;
      slot.f = it->second;
    }
    return slot;
  }

  static void writeSlot(ExecState& st, ValueId v, const Slot& slot) {
    if (slot.hasBit)
      st.bits[v.idx] = slot.b;
    if (slot.hasInt)
      st.ints[v.idx] = slot.i;
    if (slot.hasFloat)
      st.floats[v.idx] = slot.f;
  }

  static std::vector<ExecState> singleton(ExecState st) {
    std::vector<ExecState> v;
    v.push_back(std::move(st));
    return v;
  }
};

} // namespace

OutcomeDistribution simulate(const IrModule& m, DiagnosticList& diags,
                             const SimOptions& options) {
  OutcomeDistribution dist;
  WirePlan plan = planWires(m, diags);
  if (!plan.ok)
    return dist;
  if (plan.totalWires > options.maxQubits) {
    diags.error("program uses " + std::to_string(plan.totalWires) +
                " qubits; the simulator supports at most " +
                std::to_string(options.maxQubits));
    return dist;
  }
  Interpreter interp{m, options, diags, std::move(plan), {}, {}, false};
  ExecState initial;
  initial.sv = StateVector(std::max(interp.plan.totalWires, 0));
  auto states = interp.runBlock(m.entryBlock(), Interpreter::singleton(
                                                    std::move(initial)));
  if (interp.failed)
    return OutcomeDistribution{};
  for (auto& st : states)
    dist.branches.push_back(
        OutcomeBranch{std::move(st.record), st.probability, std::move(st.sv)});
  return dist;
}

std::optional<Matrix> circuitUnitary(const IrModule& m,
                                     DiagnosticList& diags) {
  WirePlan plan = planWires(m, diags);
  if (!plan.ok)
    return std::nullopt;
  if (plan.totalWires > kMaxUnitaryQubits) {
    diags.error("circuit_unitary supports at most " +
                std::to_string(kMaxUnitaryQubits) + " qubits");
    return std::nullopt;
  }
  const int n = plan.totalWires;
  Matrix u = Matrix::identity(1 << n);
  std::map<uint32_t, int> wireOf;
  std::map<uint32_t, int> regBase;
  bool ok = true;
  for (OpId opId : m.block(m.entryBlock()).ops) {
    const OperationNode& node = m.op(opId);
    const OpcodeInfo& info = getOpcode(node.opcode);
    switch (info.kind) {
    case OpKind::Alloc:
      wireOf[node.results[0].idx] = plan.opWire.at(opId.idx);
      break;
    case OpKind::AllocReg:
      regBase[node.results[0].idx] = plan.opWire.at(opId.idx);
      break;
    case OpKind::Extract:
      wireOf[node.results[0].idx] =
          regBase.at(node.operands[0].idx) + int(node.attr("index")->asInt());
      break;
    case OpKind::Dealloc:
    case OpKind::GateDef:
    case OpKind::Const:
      break;
    case OpKind::Gate:
    case OpKind::Ctrl:
    case OpKind::Inv:
    case OpKind::Pow:
    case OpKind::CallGate: {
      try {
        UnitaryDescriptor d = unitaryDescriptor(m, opId);
        Matrix gate = descriptorMatrix(d, &m);
        std::vector<int> wires;
        for (ValueId v : unitaryWires(m, opId))
          wires.push_back(wireOf.at(v.idx));
        u = embedMatrix(gate, wires, n) * u;
      } catch (const IrError& e) {
        diags.error(e.what(), node.loc);
        ok = false;
      }
      break;
    }
    default:
      diags.error("'" + node.opcode +
                      "' is not unitary; circuit_unitary requires a "
                      "measurement-free, control-flow-free module",
                  node.loc);
      ok = false;
      break;
    }
    if (!ok)
      return std::nullopt;
  }
  return u;
}

EquivalenceResult equivalent(const IrModule& a, const IrModule& b,
                             EquivalenceMode mode, DiagnosticList& diags,
                             const std::vector<int>* outputPermutation,
                             double tolerance) {
  EquivalenceResult result;
  switch (mode) {
  case EquivalenceMode::Unitary: {
    auto ua = circuitUnitary(a, diags);
    auto ub = circuitUnitary(b, diags);
    if (!ua || !ub)
      return result;
    // Extend the smaller unitary with identity wires.
    auto extend = [](const Matrix& u, int from, int to) {
      if (from == to)
        return u;
      std::vector<int> wires(static_cast<size_t>(from), 0);
      for (int i = 0; i < from; ++i)
        wires[static_cast<size_t>(i)] = i;
      return embedMatrix(u, wires, to);
    };
    int na = countWires(a);
    int nb = countWires(b);
    int n = std::max(na, nb);
    Matrix ma = extend(*ua, na, n);
    Matrix mb = extend(*ub, nb, n);
    if (outputPermutation) {
      if (int(outputPermutation->size()) != n) {
        diags.error("permutation size does not match the wire count");
        return result;
      }
      mb = permutationMatrix(*outputPermutation) * mb;
    }
    result.maxDeviation = ma.maxAbsDiffUpToPhase(mb);
    result.equivalent = result.maxDeviation <= tolerance;
    return result;
  }
  case EquivalenceMode::State: {
    if (countWires(a) != countWires(b)) {
      diags.error("state comparison requires equal wire counts");
      return result;
    }
    auto da = simulate(a, diags);
    auto db = simulate(b, diags);
    if (diags.hasErrors())
      return result;
    if (da.branches.size() != 1 || db.branches.size() != 1) {
      diags.error("state mode requires measurement-free programs; use "
                  "distribution mode instead");
      return result;
    }
    result.maxDeviation =
        da.branches[0].state.maxAbsDiffUpToPhase(db.branches[0].state);
    result.equivalent = result.maxDeviation <= tolerance;
    return result;
  }
  case EquivalenceMode::Distribution: {
    auto da = simulate(a, diags);
    auto db = simulate(b, diags);
    if (diags.hasErrors())
      return result;
    auto pa = da.probabilities();
    auto pb = db.probabilities();
    double worst = 0.0;
    for (const auto& [bits, p] : pa) {
      auto it = pb.find(bits);
      worst = std::max(worst, std::abs(p - (it == pb.end() ? 0.0 : it->second)));
    }
    for (const auto& [bits, p] : pb)
      if (!pa.count(bits))
        worst = std::max(worst, p);
    result.maxDeviation = worst;
    result.equivalent = worst <= tolerance;
    return result;
  }
  }
  return result;
}

} // namespace qcc
