//===-- PassManager.hpp - Named passes and pipelines ------------*- C++ -*-===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include "qcc/ir/Diagnostics.hpp"
#include "qcc/ir/Module.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qcc {

class CouplingMap;
struct RouteReport;

/// Key=value options attached to one pipeline entry,
/// e.g. simplify-control-flow{unroll-limit=32}.
class PassOptions {
public:
  PassOptions() = default;
  explicit PassOptions(std::map<std::string, std::string> raw)
      : raw_(std::move(raw)) {}

  [[nodiscard]] std::optional<std::string> get(const std::string& key) const {
    auto it = raw_.find(key);
    return it == raw_.end() ? std::nullopt
                            : std::optional<std::string>(it->second);
  }
  [[nodiscard]] int64_t getInt(const std::string& key,
                               int64_t defaultValue) const;
  [[nodiscard]] std::string getString(const std::string& key,
                                      std::string defaultValue) const;
  [[nodiscard]] const std::map<std::string, std::string>& raw() const {
    return raw_;
  }

private:
  std::map<std::string, std::string> raw_;
};

/// Cross-pass state a pipeline can carry: the coupling map for `route` and
/// an out-slot for its layout report.
struct PassContext {
  const CouplingMap* couplingMap = nullptr;
  RouteReport* routeReport = nullptr;
  /// When set, each pass dumps the IR here after running.
  std::ostream* printAfterAll = nullptr;
};

using PassFn = std::function<void(IrModule&, const PassOptions&, PassContext&,
                                  DiagnosticList&)>;

/// Registers a pass under a pipeline name. Called once at startup by
/// registerAllPasses(); re-registration of a name throws.
void registerPass(const std::string& name, PassFn fn);

[[nodiscard]] bool isRegisteredPass(const std::string& name);
[[nodiscard]] std::vector<std::string> registeredPassNames();

/// Registers the shipped passes (linearize, bufferize, remove-dead-alloc,
/// cancel-inverses, merge-rotations, canonicalize-modifiers,
/// simplify-control-flow, route). Safe to call more than once.
void registerAllPasses();

struct PassInvocation {
  std::string name;
  PassOptions options;
};

/// Parses "name{key=value,...},name2,..." into invocations.
/// Returns std::nullopt and reports a diagnostic on malformed syntax.
std::optional<std::vector<PassInvocation>>
parsePipeline(const std::string& text, DiagnosticList& diags);

/// Runs the pipeline in order. With verifyEach (the default), verification
/// runs after every pass; the first failure aborts the pipeline with a
/// "verification failed after pass ..." diagnostic. Returns true when
/// every pass ran and no error was reported.
bool runPipeline(IrModule& m, const std::vector<PassInvocation>& pipeline,
                 PassContext& ctx, DiagnosticList& diags,
                 bool verifyEach = true);

} // namespace qcc
