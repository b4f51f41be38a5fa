//===-- PassManager.cpp ---------------------------------------------------===//
//
// Part of the QCC project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "qcc/ir/PassManager.hpp"

#include "qcc/emit/TextIr.hpp"
#include "qcc/ir/Verifier.hpp"

#include <cstdlib>
#include <map>
#include <ostream>

namespace qcc {

int64_t PassOptions::getInt(const std::string& key,
                            int64_t defaultValue) const {
  auto v = get(key);
  if (!v)
    return defaultValue;
  try {
    return std::stoll(*v);
  } catch (...) {
    throw IrError("pass option '" + key + "' expects an integer, got '" + *v +
                  "'");
  }
}

std::string PassOptions::getString(const std::string& key,
                                   std::string defaultValue) const {
  auto v = get(key);
  return v ? *v : std::move(defaultValue);
}

namespace {
std::map<std::string, PassFn>& passTable() {
  static std::map<std::string, PassFn> table;
  return table;
}
} // namespace

void registerPass(const std::string& name, PassFn fn) {
  auto [it, inserted] = passTable().emplace(name, std::move(fn));
  if (!inserted)
    throw IrError("pass '" + name + "' is already registered");
}

bool isRegisteredPass(const std::string& name) {
  return passTable().count(name) > 0;
}

std::vector<std::string> registeredPassNames() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : passTable())
    out.push_back(name);
  return out;
}

std::optional<std::vector<PassInvocation>>
parsePipeline(const std::string& text, DiagnosticList& diags) {
  std::vector<PassInvocation> out;
  size_t i = 0;
  auto skipSpace = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
  };
  while (true) {
    skipSpace();
    if (i >= text.size())
      break;
    size_t start = i;
    while (i < text.size() && text[i] != ',' && text[i] != '{')
      ++i;
    std::string name = text.substr(start, i - start);
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back())))
      name.pop_back();
    if (name.empty()) {
      diags.error("empty pass name in pipeline string");
      return std::nullopt;
    }
    std::map<std::string, std::string> opts;
    if (i < text.size() && text[i] == '{') {
      ++i;
      while (true) {
        skipSpace();
        if (i < text.size() && text[i] == '}') {
          ++i;
          break;
        }
        size_t keyStart = i;
        while (i < text.size() && text[i] != '=' && text[i] != '}' &&
               text[i] != ',')
          ++i;
        if (i >= text.size() || text[i] != '=') {
          diags.error("expected key=value inside '{...}' of pass '" + name +
                      "'");
          return std::nullopt;
        }
        std::string key = text.substr(keyStart, i - keyStart);
        ++i;
        size_t valStart = i;
        while (i < text.size() && text[i] != ',' && text[i] != '}')
          ++i;
        if (i >= text.size()) {
          diags.error("unterminated option list for pass '" + name + "'");
          return std::nullopt;
        }
        opts[key] = text.substr(valStart, i - valStart);
        if (text[i] == ',')
          ++i;
      }
    }
    out.push_back(PassInvocation{name, PassOptions(std::move(opts))});
    skipSpace();
    if (i < text.size()) {
      if (text[i] != ',') {
        diags.error(std::string("expected ',' between passes, found '") +
                    text[i] + "'");
        return std::nullopt;
      }
      ++i;
    }
  }
  return out;
}

bool runPipeline(IrModule& m, const std::vector<PassInvocation>& pipeline,
                 PassContext& ctx, DiagnosticList& diags, bool verifyEach) {
  for (const auto& inv : pipeline) {
    if (!isRegisteredPass(inv.name)) {
      diags.error("unknown pass '" + inv.name + "'");
      return false;
    }
  }
  for (const auto& inv : pipeline) {
    size_t before = diags.size();
    passTable().at(inv.name)(m, inv.options, ctx, diags);
    if (ctx.printAfterAll) {
      *ctx.printAfterAll << "// ----- IR after pass '" << inv.name
                         << "' -----\n"
                         << printIr(m);
    }
    bool passErrored = false;
    for (size_t i = before; i < diags.size(); ++i)
      passErrored |= diags[i].severity == Severity::Error;
    if (passErrored)
      return false;
    if (verifyEach) {
      DiagnosticList vd = verify(m);
      if (vd.hasErrors()) {
        diags.error("verification failed after pass '" + inv.name + "'");
        diags.append(vd);
        return false;
      }
    }
  }
  return true;
}

} // namespace qcc
