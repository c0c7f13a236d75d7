#include "stacksdict/macro.hpp"

#include <cctype>
#include <cstdlib>
#include <set>

namespace stacksdict {

namespace {

const std::set<std::string> kDefiningCommands = {"newcommand", "renewcommand", "providecommand",
                                                 "def"};

// TeX machinery we refuse to emulate; harvesting skips the definition.
const std::set<std::string> kRejectedMachinery = {"expandafter", "csname",  "ifx",
                                                  "ifdefined",   "catcode", "futurelet"};

size_t skip_ws(const std::vector<Token>& toks, size_t i) {
  while (i < toks.size() && toks[i].is(TokenKind::Whitespace)) ++i;
  return i;
}

// Balanced {...} capture starting at a GroupOpen; returns inner tokens.
bool capture_group(const std::vector<Token>& toks, size_t& i, std::vector<Token>& inner) {
  if (i >= toks.size() || !toks[i].is(TokenKind::GroupOpen)) return false;
  int depth = 1;
  ++i;
  while (i < toks.size()) {
    const Token& t = toks[i];
    if (t.is(TokenKind::GroupOpen)) ++depth;
    if (t.is(TokenKind::GroupClose)) {
      if (--depth == 0) {
        ++i;
        return true;
      }
    }
    inner.push_back(t);
    ++i;
  }
  return false;
}

bool replacement_uses_rejected_machinery(const std::vector<Token>& repl) {
  for (const auto& t : repl) {
    if (t.is(TokenKind::Command) && kRejectedMachinery.count(t.value)) return true;
  }
  return false;
}

// Names of known macros referenced by a replacement, for the cycle check.
std::vector<std::string> referenced_macros(const MacroDef& def, const MacroTable& table) {
  std::vector<std::string> out;
  for (const auto& t : def.replacement) {
    if (t.is(TokenKind::Command) && table.find(t.value)) out.push_back(t.value);
  }
  return out;
}

bool reaches(const std::string& from, const std::string& target, const MacroTable& table,
             std::set<std::string>& seen) {
  if (!seen.insert(from).second) return false;
  const MacroDef* def = table.find(from);
  if (!def) return false;
  for (const auto& name : referenced_macros(*def, table)) {
    if (name == target || reaches(name, target, table, seen)) return true;
  }
  return false;
}

struct Expander {
  const MacroTable& table;
  DiagnosticSink& sink;
  std::string path;
  bool strict;

  void problem(const std::string& code, const std::string& msg, const Token& at) {
    Diagnostic d{Severity::Error, path, at.span.line, 0, code, msg};
    if (strict) throw PipelineError(std::move(d));
    sink.add(std::move(d));
  }

  // Grabs `arity` arguments after position i (i points past the command).
  bool grab_args(const std::vector<Token>& toks, size_t& i, int arity,
                 std::vector<std::vector<Token>>& args, const Token& cmd) {
    for (int a = 0; a < arity; ++a) {
      i = skip_ws(toks, i);
      if (i >= toks.size()) {
        problem("ArityMismatch",
                "\\" + cmd.value + " expects " + std::to_string(arity) + " arguments", cmd);
        return false;
      }
      if (toks[i].is(TokenKind::GroupOpen)) {
        std::vector<Token> inner;
        if (!capture_group(toks, i, inner)) {
          problem("ArityMismatch", "unterminated argument of \\" + cmd.value, cmd);
          return false;
        }
        args.push_back(std::move(inner));
      } else if (toks[i].is(TokenKind::Word) || toks[i].is(TokenKind::Symbol) ||
                 toks[i].is(TokenKind::Command)) {
        // TeX's single-token argument; words count as one argument whole
        args.push_back({toks[i]});
        ++i;
      } else {
        problem("ArityMismatch",
                "\\" + cmd.value + " expects " + std::to_string(arity) + " arguments", cmd);
        return false;
      }
    }
    return true;
  }

  // Replacement with #k substituted and spans rewritten to the call site.
  std::vector<Token> instantiate(const MacroDef& def, const std::vector<std::vector<Token>>& args,
                                 const Token& call) {
    std::vector<Token> out;
    const auto& repl = def.replacement;
    for (size_t i = 0; i < repl.size(); ++i) {
      if (repl[i].is(TokenKind::Symbol) && repl[i].value == "#" && i + 1 < repl.size() &&
          repl[i + 1].is(TokenKind::Word) && !repl[i + 1].value.empty() &&
          isdigit(static_cast<unsigned char>(repl[i + 1].value[0]))) {
        int idx = repl[i + 1].value[0] - '0';
        if (idx >= 1 && idx <= static_cast<int>(args.size())) {
          for (Token t : args[static_cast<size_t>(idx - 1)]) {
            out.push_back(std::move(t));
          }
        }
        std::string rest = repl[i + 1].value.substr(1);
        if (!rest.empty()) {
          Token t = repl[i + 1];
          t.raw = rest;
          t.value = rest;
          t.span = call.span;
          out.push_back(std::move(t));
        }
        ++i;
        continue;
      }
      Token t = repl[i];
      t.span = call.span;
      out.push_back(std::move(t));
    }
    return out;
  }

  std::vector<Token> expand(const std::vector<Token>& toks, int depth) {
    if (depth > 64) {
      Token at = toks.empty() ? Token{} : toks.front();
      problem("ExpansionDepthExceeded", "macro expansion exceeded depth 64", at);
      return toks;
    }
    std::vector<Token> out;
    out.reserve(toks.size());
    size_t i = 0;
    while (i < toks.size()) {
      const Token& t = toks[i];
      const MacroDef* def =
          t.is(TokenKind::Command) && !kDefiningCommands.count(t.value) ? table.find(t.value) : nullptr;
      if (!def) {
        out.push_back(t);
        ++i;
        continue;
      }
      Token call = t;
      size_t j = i + 1;
      std::vector<std::vector<Token>> args;
      if (!grab_args(toks, j, def->arity, args, call)) {
        out.push_back(t);
        ++i;
        continue;
      }
      std::vector<Token> body = instantiate(*def, args, call);
      std::vector<Token> expanded = expand(body, depth + 1);
      for (auto& e : expanded) out.push_back(std::move(e));
      i = j;
    }
    return out;
  }
};

}  // namespace

void harvest_macros(const std::vector<Token>& tokens, MacroTable& table, DiagnosticSink& sink,
                    const std::string& path) {
  for (size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (!t.is(TokenKind::Command) || !kDefiningCommands.count(t.value)) continue;

    size_t j = skip_ws(tokens, i + 1);
    std::string name;
    if (t.value == "def") {
      if (j < tokens.size() && tokens[j].is(TokenKind::Command)) {
        name = tokens[j].value;
        ++j;
      }
    } else {
      // \newcommand{\name} or \newcommand\name
      if (j < tokens.size() && tokens[j].is(TokenKind::GroupOpen)) {
        std::vector<Token> inner;
        if (capture_group(tokens, j, inner) && inner.size() == 1 &&
            inner[0].is(TokenKind::Command)) {
          name = inner[0].value;
        }
      } else if (j < tokens.size() && tokens[j].is(TokenKind::Command)) {
        name = tokens[j].value;
        ++j;
      }
    }
    if (name.empty()) {
      sink.add(Severity::Warning, path, t.span.line, 0, "UnsupportedMacro",
               "could not read macro name after \\" + t.value);
      continue;
    }

    int arity = 0;
    j = skip_ws(tokens, j);
    if (t.value == "def") {
      // parameter text like #1#2 before the body
      while (j + 1 < tokens.size() && tokens[j].is(TokenKind::Symbol) && tokens[j].value == "#" &&
             tokens[j + 1].is(TokenKind::Word)) {
        ++arity;
        j += 2;
      }
    } else if (j + 2 < tokens.size() && tokens[j].is(TokenKind::Symbol) &&
               tokens[j].value == "[" && tokens[j + 1].is(TokenKind::Word) &&
               tokens[j + 2].is(TokenKind::Symbol) && tokens[j + 2].value == "]") {
      arity = std::atoi(tokens[j + 1].value.c_str());
      j = skip_ws(tokens, j + 3);
    }

    std::vector<Token> repl;
    if (!capture_group(tokens, j, repl)) {
      sink.add(Severity::Warning, path, t.span.line, 0, "UnsupportedMacro",
               "\\" + name + ": could not read replacement body");
      continue;
    }
    if (replacement_uses_rejected_machinery(repl)) {
      sink.add(Severity::Warning, path, t.span.line, 0, "UnsupportedMacro",
               "\\" + name + " uses TeX machinery outside the supported subset");
      continue;
    }
    table.define(name, MacroDef{arity, std::move(repl)});
    i = j - 1;
  }

  // static cycle check: drop any macro that can reach itself
  std::vector<std::string> cyclic;
  for (const auto& [name, def] : table.defs()) {
    std::set<std::string> seen;
    for (const auto& target : referenced_macros(def, table)) {
      std::set<std::string> inner_seen;
      if (target == name || reaches(target, name, table, inner_seen)) {
        cyclic.push_back(name);
        break;
      }
    }
  }
  for (const auto& name : cyclic) {
    sink.add(Severity::Error, path, 0, 0, "CyclicMacro",
             "\\" + name + " participates in a recursive definition; dropped");
    MacroTable rebuilt;
    for (const auto& [n, d] : table.defs()) {
      if (n != name) rebuilt.define(n, d);
    }
    table = rebuilt;
  }
}

std::vector<Token> expand_tokens(const std::vector<Token>& tokens, const MacroTable& table,
                                 DiagnosticSink& sink, const std::string& path, bool strict) {
  Expander ex{table, sink, path, strict};
  return ex.expand(tokens, 0);
}

DocTree expand_macros(const DocTree& tree, const MacroTable& table, DiagnosticSink& sink,
                      bool strict) {
  if (table.empty()) return tree;
  std::vector<Token> tokens = collect_tokens(tree);
  std::vector<Token> expanded = expand_tokens(tokens, table, sink, tree.path, strict);
  return parse(expanded, tree.file, tree.path);
}

}  // namespace stacksdict
