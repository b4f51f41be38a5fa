//===-- main.cpp - qcc driver ---------------------------------------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// The full pipeline as a command: parse a .qasm or .qcir input, run a named
// pass pipeline with verification between passes, then emit textual IR,
// OpenQASM or flat QIR, or simulate and print the outcome distribution.
//
//===----------------------------------------------------------------------===//

#include "qcc/emit/QasmEmitter.hpp"
#include "qcc/emit/QirEmitter.hpp"
#include "qcc/emit/TextIr.hpp"
#include "qcc/frontend/Qasm.hpp"
#include "qcc/ir/PassManager.hpp"
#include "qcc/ir/Verifier.hpp"
#include "qcc/sim/Simulator.hpp"
#include "qcc/transforms/Routing.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <unistd.h>

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitDiagnostics = 1;
constexpr int kExitUsage = 2;

bool useColor(const std::ostream& os) {
  const char* env = std::getenv("QCC_COLOR");
  std::string mode = env ? env : "auto";
  if (mode == "always")
    return true;
  if (mode == "never")
    return false;
  return &os == &std::cerr && isatty(fileno(stderr)) != 0;
}

void printDiags(const qcc::DiagnosticList& diags) {
  diags.print(std::cerr, useColor(std::cerr));
}

std::optional<std::string> readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool looksLikeQasm(const std::string& path, const std::string& text) {
  if (path.size() > 5 && path.substr(path.size() - 5) == ".qasm")
    return true;
  if (path.size() > 5 && path.substr(path.size() - 5) == ".qcir")
    return false;
  // Header sniff: textual IR starts with "module".
  size_t i = text.find_first_not_of(" \t\r\n");
  if (i == std::string::npos)
    return false;
  return text.compare(i, 6, "module") != 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcc - a dual-dialect quantum-classical circuit compiler"};

  std::string inputPath;
  std::string passes;
  std::string emitKind;
  std::string couplingMapPath;
  std::string outputPath;
  bool simulate = false;
  bool verifyEach = true;
  bool printAfterAll = false;
  int seed = 0;

  app.add_option("input", inputPath, "Input file (.qasm or .qcir)")
      ->required();
  app.add_option("--passes", passes,
                 "Comma-separated pass pipeline, e.g. "
                 "\"linearize,cancel-inverses,bufferize\"; options attach as "
                 "name{key=value}");
  app.add_option("--emit", emitKind, "Output format: qcir, qasm, or qir")
      ->check(CLI::IsMember({"qcir", "qasm", "qir"}));
  app.add_option("--coupling-map", couplingMapPath,
                 "Device connectivity JSON ({\"qubits\": n, \"edges\": "
                 "[[a,b],...]}) enabling the route pass");
  app.add_flag("--simulate", simulate,
               "Run the statevector simulator and print the outcome "
               "distribution");
  app.add_flag("--verify-each,!--no-verify-each", verifyEach,
               "Verify the module after every pass (default on)");
  app.add_flag("--print-ir-after-all", printAfterAll,
               "Dump the IR to stderr after every pass");
  app.add_option("--seed", seed, "Reserved for sampling modes (unused)");
  app.add_option("-o,--output", outputPath, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? kExitUsage : kExitSuccess;
  }

  qcc::registerAllPasses();
  qcc::DiagnosticList diags;

  auto source = readFile(inputPath);
  if (!source) {
    std::cerr << "qcc: cannot open '" << inputPath << "'\n";
    return kExitUsage;
  }

  // Frontend.
  std::optional<qcc::IrModule> module;
  if (looksLikeQasm(inputPath, *source)) {
    module = qcc::qasm::frontend(*source, diags, inputPath);
  } else {
    module = qcc::parseIr(*source, diags, inputPath);
    if (module) {
      qcc::DiagnosticList vd = qcc::verify(*module);
      if (vd.hasErrors()) {
        diags.append(vd);
        module.reset();
      }
    }
  }
  if (!module) {
    printDiags(diags);
    return kExitDiagnostics;
  }

  // Coupling map.
  std::optional<qcc::CouplingMap> couplingMap;
  if (!couplingMapPath.empty()) {
    auto text = readFile(couplingMapPath);
    if (!text) {
      std::cerr << "qcc: cannot open '" << couplingMapPath << "'\n";
      return kExitUsage;
    }
    couplingMap = qcc::CouplingMap::fromJson(*text, diags);
    if (!couplingMap) {
      printDiags(diags);
      return kExitDiagnostics;
    }
  }

  // Pipeline.
  auto pipeline = qcc::parsePipeline(passes, diags);
  if (!pipeline) {
    printDiags(diags);
    return kExitUsage;
  }
  // --emit qir requires straight-line code; make that actionable by
  // appending the unroller rather than failing inside the emitter.
  if (emitKind == "qir") {
    bool hasSimplify = false;
    for (const auto& inv : *pipeline)
      hasSimplify |= inv.name == "simplify-control-flow";
    if (!hasSimplify)
      pipeline->push_back({"simplify-control-flow", qcc::PassOptions()});
  }

  qcc::PassContext ctx;
  qcc::RouteReport routeReport;
  ctx.routeReport = &routeReport;
  if (couplingMap)
    ctx.couplingMap = &*couplingMap;
  if (printAfterAll)
    ctx.printAfterAll = &std::cerr;

  if (!qcc::runPipeline(*module, *pipeline, ctx, diags, verifyEach)) {
    printDiags(diags);
    return kExitDiagnostics;
  }

  // Output.
  std::ostringstream out;
  if (simulate) {
    qcc::OutcomeDistribution dist = qcc::simulate(*module, diags);
    if (diags.hasErrors()) {
      printDiags(diags);
      return kExitDiagnostics;
    }
    char buf[32];
    for (const auto& [bitstring, probability] : dist.probabilities()) {
      std::snprintf(buf, sizeof buf, "%.12g", probability);
      out << (bitstring.empty() ? "-" : bitstring) << " " << buf << "\n";
    }
  } else if (emitKind == "qasm") {
    auto text = qcc::emitQasm(*module, diags);
    if (!text) {
      printDiags(diags);
      return kExitDiagnostics;
    }
    out << *text;
  } else if (emitKind == "qir") {
    auto text = qcc::emitQirFlat(*module, diags);
    if (!text) {
      printDiags(diags);
      return kExitDiagnostics;
    }
    out << *text;
  } else {
    out << qcc::printIr(*module);
  }
  if (diags.size() > 0)
    printDiags(diags); // warnings

  if (outputPath.empty()) {
    std::cout << out.str();
  } else {
    std::ofstream file(outputPath, std::ios::binary);
    if (!file) {
      std::cerr << "qcc: cannot write '" << outputPath << "'\n";
      return kExitUsage;
    }
    file << out.str();
  }
  return kExitSuccess;
}
