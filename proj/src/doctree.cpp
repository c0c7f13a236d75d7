#include "stacksdict/doctree.hpp"

namespace stacksdict {

namespace {

bool is_equation_env(const std::string& name) {
  return name == "equation" || name == "equation*";
}

// commands whose braced argument should stay raw text (keys, not prose)
bool takes_key_argument(const std::string& name) { return name == "label" || name == "ref"; }

struct Parser {
  const std::vector<Token>& toks;
  FileId file;
  std::string path;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& code, const std::string& msg, const Token& at) {
    throw PipelineError(Diagnostic{Severity::Error, path, at.span.line, 0, code, msg});
  }

  bool done() const { return pos >= toks.size(); }
  const Token& peek(size_t off = 0) const { return toks[pos + off]; }
  bool have(size_t off = 0) const { return pos + off < toks.size(); }

  // Extracts \label{key} occurrences from a raw math token list.
  static std::optional<std::string> find_label(const std::vector<Token>& math) {
    for (size_t i = 0; i < math.size(); ++i) {
      if (!math[i].is_command("label")) continue;
      size_t j = i + 1;
      while (j < math.size() && math[j].is(TokenKind::Whitespace)) ++j;
      if (j < math.size() && math[j].is(TokenKind::GroupOpen)) {
        std::string key;
        for (++j; j < math.size() && !math[j].is(TokenKind::GroupClose); ++j) key += math[j].raw;
        return key;
      }
    }
    return std::nullopt;
  }

  void flush_text(std::vector<Token>& run, std::vector<DocNode>& out) {
    if (run.empty()) return;
    DocNode n;
    n.kind = NodeKind::Text;
    n.span = cover(run.front().span, run.back().span);
    n.text = std::move(run);
    run.clear();
    out.push_back(std::move(n));
  }

  // Collects raw tokens until the math segment closes.
  DocNode parse_math(Token open) {
    DocNode n;
    n.kind = NodeKind::Math;
    n.display = open.display;
    n.open_tok = open;
    std::vector<Token> inner;
    while (!done()) {
      const Token& t = peek();
      if (t.is(TokenKind::MathShift)) {
        n.close_tok = t;
        ++pos;
        n.math = std::move(inner);
        n.label = find_label(n.math);
        n.span = cover(n.open_tok.span, n.close_tok.span);
        return n;
      }
      inner.push_back(t);
      ++pos;
    }
    fail("UnterminatedMath", "math segment not closed", open);
  }

  // An equation environment normalizes to a display math segment.
  DocNode parse_equation_env(Token begin) {
    DocNode n;
    n.kind = NodeKind::Math;
    n.display = true;
    n.open_tok = begin;
    std::vector<Token> inner;
    while (!done()) {
      const Token& t = peek();
      if (t.is(TokenKind::EndEnv)) {
        if (t.value != begin.value)
          fail("EnvMismatch",
               "\\begin{" + begin.value + "} at line " + std::to_string(begin.span.line) +
                   " closed by \\end{" + t.value + "}",
               t);
        n.close_tok = t;
        ++pos;
        n.math = std::move(inner);
        n.label = find_label(n.math);
        n.span = cover(n.open_tok.span, n.close_tok.span);
        return n;
      }
      if (t.is(TokenKind::BeginEnv))
        fail("EnvMismatch", "environment nested inside \\begin{" + begin.value + "}", t);
      inner.push_back(t);
      ++pos;
    }
    fail("EnvMismatch", "\\begin{" + begin.value + "} never closed", begin);
  }

  // Brace groups following a command, with intervening whitespace kept.
  std::vector<ArgGroup> parse_args() {
    std::vector<ArgGroup> args;
    while (true) {
      size_t mark = pos;
      std::vector<Token> lead;
      while (have() && peek().is(TokenKind::Whitespace)) {
        lead.push_back(peek());
        ++pos;
      }
      if (!have() || !peek().is(TokenKind::GroupOpen)) {
        pos = mark;
        break;
      }
      ArgGroup g;
      g.lead = std::move(lead);
      g.open = peek();
      ++pos;
      g.children = parse_nodes(StopAt::GroupClose);
      if (done()) fail("UnbalancedGroup", "argument group never closed", g.open);
      g.close = peek();
      ++pos;
      args.push_back(std::move(g));
    }
    return args;
  }

  DocNode parse_command(Token cmd) {
    if (takes_key_argument(cmd.value)) {
      size_t mark = pos;
      std::vector<Token> group;
      while (have() && peek().is(TokenKind::Whitespace)) {
        group.push_back(peek());
        ++pos;
      }
      if (have() && peek().is(TokenKind::GroupOpen)) {
        group.push_back(peek());
        ++pos;
        std::string key;
        while (have() && !peek().is(TokenKind::GroupClose)) {
          key += peek().raw;
          group.push_back(peek());
          ++pos;
        }
        if (done()) fail("UnbalancedGroup", "key group never closed", cmd);
        group.push_back(peek());
        ++pos;
        DocNode n;
        n.kind = cmd.value == "label" ? NodeKind::Label : NodeKind::Ref;
        n.name = cmd.value;
        n.cmd_tok = cmd;
        n.key = key;
        n.key_tokens = std::move(group);
        n.span = cover(cmd.span, n.key_tokens.back().span);
        return n;
      }
      pos = mark;  // no group: fall through to a plain command
    }
    DocNode n;
    n.kind = NodeKind::Command;
    n.name = cmd.value;
    n.cmd_tok = cmd;
    n.args = parse_args();
    n.span = cmd.span;
    if (!n.args.empty()) n.span = cover(n.span, n.args.back().close.span);
    return n;
  }

  DocNode parse_environment(Token begin) {
    DocNode n;
    n.kind = NodeKind::Environment;
    n.name = begin.value;
    n.begin_tok = begin;
    // optional [title] directly after \begin{...}
    size_t mark = pos;
    std::vector<Token> lead;
    while (have() && peek().is(TokenKind::Whitespace)) {
      lead.push_back(peek());
      ++pos;
    }
    if (have() && peek().is(TokenKind::Symbol) && peek().value == "[") {
      ArgGroup g;
      g.lead = std::move(lead);
      g.open = peek();
      ++pos;
      g.children = parse_nodes(StopAt::BracketClose);
      if (done()) fail("EnvMismatch", "environment title bracket never closed", begin);
      g.close = peek();
      ++pos;
      n.bracket = std::move(g);
    } else {
      pos = mark;
    }
    n.children = parse_nodes(StopAt::EndEnv, begin.value);
    if (done()) fail("EnvMismatch", "\\begin{" + begin.value + "} never closed", begin);
    const Token& end = peek();
    if (end.value != begin.value)
      fail("EnvMismatch",
           "\\begin{" + begin.value + "} at line " + std::to_string(begin.span.line) +
               " closed by \\end{" + end.value + "} at line " + std::to_string(end.span.line),
           end);
    n.end_tok = end;
    ++pos;
    n.span = cover(begin.span, end.span);
    return n;
  }

  enum class StopAt { Eof, EndEnv, GroupClose, BracketClose };

  std::vector<DocNode> parse_nodes(StopAt stop, const std::string& env_name = "") {
    std::vector<DocNode> out;
    std::vector<Token> run;
    int inert_depth = 0;  // bare braces flowing through text
    while (!done()) {
      const Token& t = peek();
      switch (t.kind) {
        case TokenKind::BeginEnv: {
          flush_text(run, out);
          Token begin = t;
          ++pos;
          out.push_back(is_equation_env(begin.value) ? parse_equation_env(begin)
                                                     : parse_environment(begin));
          break;
        }
        case TokenKind::EndEnv: {
          if (stop == StopAt::EndEnv) {
            flush_text(run, out);
            return out;
          }
          fail("StrayEnd", "\\end{" + t.value + "} without matching \\begin", t);
        }
        case TokenKind::MathShift: {
          flush_text(run, out);
          Token open = t;
          ++pos;
          out.push_back(parse_math(open));
          break;
        }
        case TokenKind::Command: {
          flush_text(run, out);
          Token cmd = t;
          ++pos;
          out.push_back(parse_command(cmd));
          break;
        }
        case TokenKind::GroupOpen:
          ++inert_depth;
          run.push_back(t);
          ++pos;
          break;
        case TokenKind::GroupClose:
          if (inert_depth > 0) {
            --inert_depth;
            run.push_back(t);
            ++pos;
            break;
          }
          if (stop == StopAt::GroupClose) {
            flush_text(run, out);
            return out;
          }
          fail("UnbalancedGroup", "unexpected closing brace", t);
        case TokenKind::Symbol:
          if (t.value == "]" && stop == StopAt::BracketClose) {
            flush_text(run, out);
            return out;
          }
          run.push_back(t);
          ++pos;
          break;
        default:
          run.push_back(t);
          ++pos;
          break;
      }
    }
    flush_text(run, out);
    if (stop == StopAt::EndEnv)
      fail("EnvMismatch", "\\begin{" + env_name + "} never closed",
           toks.empty() ? Token{} : toks.back());
    if (stop == StopAt::GroupClose || stop == StopAt::BracketClose)
      fail("UnbalancedGroup", "group never closed", toks.empty() ? Token{} : toks.back());
    return out;
  }
};

void serialize_node(const DocNode& n, std::string& out);

void serialize_nodes(const std::vector<DocNode>& nodes, std::string& out) {
  for (const auto& n : nodes) serialize_node(n, out);
}

void serialize_group(const ArgGroup& g, std::string& out) {
  for (const auto& t : g.lead) out += t.raw;
  out += g.open.raw;
  serialize_nodes(g.children, out);
  out += g.close.raw;
}

void serialize_node(const DocNode& n, std::string& out) {
  switch (n.kind) {
    case NodeKind::Environment:
      out += n.begin_tok.raw;
      if (n.bracket) serialize_group(*n.bracket, out);
      serialize_nodes(n.children, out);
      out += n.end_tok.raw;
      break;
    case NodeKind::Math:
      out += n.open_tok.raw;
      for (const auto& t : n.math) out += t.raw;
      out += n.close_tok.raw;
      break;
    case NodeKind::Command:
      out += n.cmd_tok.raw;
      for (const auto& g : n.args) serialize_group(g, out);
      break;
    case NodeKind::Text:
      for (const auto& t : n.text) out += t.raw;
      break;
    case NodeKind::Label:
    case NodeKind::Ref:
      out += n.cmd_tok.raw;
      for (const auto& t : n.key_tokens) out += t.raw;
      break;
  }
}

void collect_group(const ArgGroup& g, std::vector<Token>& out) {
  for (const auto& t : g.lead) out.push_back(t);
  out.push_back(g.open);
  for (const auto& c : g.children) collect_tokens(c, out);
  out.push_back(g.close);
}

}  // namespace

DocTree parse(const std::vector<Token>& tokens, FileId file, const std::string& path) {
  Parser p{tokens, file, path};
  DocTree tree;
  tree.file = file;
  tree.path = path;
  tree.nodes = p.parse_nodes(Parser::StopAt::Eof);
  return tree;
}

std::string serialize(const DocTree& tree) { return serialize(tree.nodes); }

std::string serialize(const std::vector<DocNode>& nodes) {
  std::string out;
  serialize_nodes(nodes, out);
  return out;
}

void collect_tokens(const DocNode& n, std::vector<Token>& out) {
  switch (n.kind) {
    case NodeKind::Environment:
      out.push_back(n.begin_tok);
      if (n.bracket) collect_group(*n.bracket, out);
      for (const auto& c : n.children) collect_tokens(c, out);
      out.push_back(n.end_tok);
      break;
    case NodeKind::Math:
      out.push_back(n.open_tok);
      for (const auto& t : n.math) out.push_back(t);
      out.push_back(n.close_tok);
      break;
    case NodeKind::Command:
      out.push_back(n.cmd_tok);
      for (const auto& g : n.args) collect_group(g, out);
      break;
    case NodeKind::Text:
      for (const auto& t : n.text) out.push_back(t);
      break;
    case NodeKind::Label:
    case NodeKind::Ref:
      out.push_back(n.cmd_tok);
      for (const auto& t : n.key_tokens) out.push_back(t);
      break;
  }
}

std::vector<Token> collect_tokens(const std::vector<DocNode>& nodes) {
  std::vector<Token> out;
  for (const auto& n : nodes) collect_tokens(n, out);
  return out;
}

std::vector<Token> collect_tokens(const DocTree& tree) { return collect_tokens(tree.nodes); }

std::string arg_group_text(const ArgGroup& g) {
  return tokens_to_text(collect_tokens(g.children));
}

}  // namespace stacksdict
