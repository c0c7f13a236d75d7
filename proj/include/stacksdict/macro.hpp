#pragma once

#include <map>
#include <string>
#include <vector>

#include "stacksdict/doctree.hpp"

namespace stacksdict {

struct MacroDef {
  int arity = 0;
  std::vector<Token> replacement;
};

// Macro name (without backslash) -> definition. Cyclic definitions are
// rejected at harvest time; the expansion depth cap backstops anything
// the static check misses.
class MacroTable {
 public:
  void define(const std::string& name, MacroDef def) { defs_[name] = std::move(def); }
  const MacroDef* find(const std::string& name) const {
    auto it = defs_.find(name);
    return it == defs_.end() ? nullptr : &it->second;
  }
  bool empty() const { return defs_.empty(); }
  size_t size() const { return defs_.size(); }
  const std::map<std::string, MacroDef>& defs() const { return defs_; }

 private:
  std::map<std::string, MacroDef> defs_;
};

// Scans a token stream for \newcommand / \renewcommand / \providecommand /
// \def and records the simple positional-argument ones. Conditionals,
// \expandafter and friends produce a diagnostic and are skipped.
void harvest_macros(const std::vector<Token>& tokens, MacroTable& table, DiagnosticSink& sink,
                    const std::string& path = "");

// Token-level expansion. Spans of spliced tokens point at the call site.
// strict: throw ArityMismatch / ExpansionDepthExceeded; otherwise diagnose
// and leave the offending command in place.
std::vector<Token> expand_tokens(const std::vector<Token>& tokens, const MacroTable& table,
                                 DiagnosticSink& sink, const std::string& path = "",
                                 bool strict = true);

// Expands every known macro in the tree and reparses. Idempotent.
DocTree expand_macros(const DocTree& tree, const MacroTable& table, DiagnosticSink& sink,
                      bool strict = true);

}  // namespace stacksdict
