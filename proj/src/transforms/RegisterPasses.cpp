//===-- RegisterPasses.cpp - Pipeline name bindings -----------------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "qcc/ir/PassManager.hpp"
#include "qcc/transforms/Conversions.hpp"
#include "qcc/transforms/Optimizations.hpp"
#include "qcc/transforms/Routing.hpp"

namespace qcc {

void registerAllPasses() {
  static bool done = false;
  if (done)
    return;
  done = true;

  registerPass("linearize", [](IrModule& m, const PassOptions&, PassContext&,
                               DiagnosticList& diags) {
    if (auto converted = linearize(m, diags))
      m = std::move(*converted);
  });

  registerPass("bufferize", [](IrModule& m, const PassOptions&, PassContext&,
                               DiagnosticList& diags) {
    if (auto converted = bufferize(m, diags))
      m = std::move(*converted);
  });

  auto warnIfCapped = [](const char* pass, const GreedyResult& result,
                         DiagnosticList& diags) {
    if (!result.reachedFixpoint)
      diags.warning(std::string(pass) +
                    ": pattern fixpoint not reached within the sweep limit");
  };

  registerPass("remove-dead-alloc",
               [warnIfCapped](IrModule& m, const PassOptions&, PassContext&,
                              DiagnosticList& diags) {
                 warnIfCapped("remove-dead-alloc", removeDeadAllocPass(m),
                              diags);
               });

  registerPass("cancel-inverses",
               [warnIfCapped](IrModule& m, const PassOptions&, PassContext&,
                              DiagnosticList& diags) {
                 warnIfCapped("cancel-inverses", cancelInversesPass(m),
                              diags);
               });

  registerPass("merge-rotations",
               [warnIfCapped](IrModule& m, const PassOptions&, PassContext&,
                              DiagnosticList& diags) {
                 warnIfCapped("merge-rotations", mergeRotationsPass(m),
                              diags);
               });

  registerPass("canonicalize-modifiers",
               [warnIfCapped](IrModule& m, const PassOptions&, PassContext&,
                              DiagnosticList& diags) {
                 warnIfCapped("canonicalize-modifiers",
                              canonicalizeModifiersPass(m), diags);
               });

  registerPass("simplify-control-flow",
               [warnIfCapped](IrModule& m, const PassOptions& options,
                              PassContext&, DiagnosticList& diags) {
                 int limit = int(options.getInt("unroll-limit",
                                                kDefaultUnrollLimit));
                 warnIfCapped("simplify-control-flow",
                              simplifyControlFlowPass(m, limit, diags),
                              diags);
               });

  registerPass("route", [](IrModule& m, const PassOptions& options,
                           PassContext& ctx, DiagnosticList& diags) {
    if (!ctx.couplingMap) {
      diags.error("route: no coupling map provided (use --coupling-map)");
      return;
    }
    RouteOptions ro;
    std::string layout = options.getString("layout", "identity");
    if (layout == "greedy")
      ro.layout = InitialLayoutPolicy::Greedy;
    else if (layout != "identity") {
      diags.error("route: unknown layout policy '" + layout + "'");
      return;
    }
    ro.lookahead = int(options.getInt("lookahead", 5));
    if (auto routed = route(m, *ctx.couplingMap, ro, diags, ctx.routeReport))
      m = std::move(*routed);
  });
}

} // namespace qcc
