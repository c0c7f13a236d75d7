#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "stacksdict/doctree.hpp"
#include "stacksdict/macro.hpp"
#include "stacksdict/token.hpp"

using namespace stacksdict;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string testdata(const std::string& rel) { return std::string(STACKSDICT_TESTDATA) + "/" + rel; }

// Compact signature for hand-written expectations: whitespace content is
// checked via the span-coverage invariant, not here.
std::string signature(const Token& t) {
  switch (t.kind) {
    case TokenKind::Whitespace: return "WS";
    case TokenKind::ParagraphBreak: return "PAR";
    case TokenKind::MathShift: return t.display ? "Math$$" : "Math$";
    case TokenKind::GroupOpen: return "{";
    case TokenKind::GroupClose: return "}";
    default:
      return std::string(token_kind_name(t.kind)) + "(" + t.value + ")";
  }
}

std::vector<std::string> signatures(const std::vector<Token>& toks) {
  std::vector<std::string> out;
  for (const auto& t : toks) out.push_back(signature(t));
  return out;
}

void check_token_invariants(const std::string& src, const std::vector<Token>& toks) {
  uint32_t cursor = 0;
  std::string rebuilt;
  for (const auto& t : toks) {
    CHECK(t.span.begin == cursor);
    CHECK(t.span.end > t.span.begin);
    CHECK(t.raw == src.substr(t.span.begin, t.span.length()));
    cursor = t.span.end;
    rebuilt += t.raw;
  }
  CHECK(cursor == src.size());
  CHECK(rebuilt == src);
}

}  // namespace

TEST_CASE("lex: paper phrase") {
  auto toks = lex("Let $X$ be", 0);
  CHECK(signatures(toks) == std::vector<std::string>{"Word(Let)", "WS", "Math$", "Word(X)",
                                                     "Math$", "WS", "Word(be)"});
}

TEST_CASE("lex: comment swallows its newline") {
  auto toks = lex("% note\nA", 0);
  REQUIRE(toks.size() == 2);
  CHECK(toks[0].kind == TokenKind::Comment);
  CHECK(toks[0].value == " note");
  CHECK(toks[0].raw == "% note\n");
  CHECK(toks[1].kind == TokenKind::Word);
  CHECK(toks[1].value == "A");
  check_token_invariants("% note\nA", toks);
}

TEST_CASE("lex: environment delimiters") {
  auto toks = lex("\\begin{lemma}\\label{l1}\\end{lemma}", 0);
  CHECK(signatures(toks) == std::vector<std::string>{"BeginEnv(lemma)", "Command(label)", "{",
                                                     "Word(l1)", "}", "EndEnv(lemma)"});
}

TEST_CASE("lex: hand-tokenized 20-line fixture") {
  std::string src = read_file(testdata("fixtures/lex_fixture.tex"));
  auto toks = lex(src, 0, "lex_fixture.tex");
  check_token_invariants(src, toks);

  std::vector<std::string> expected = {
      // line 1-2
      "Comment( Lexer fixture: hand-tokenized in test_latex.cpp.)",
      "Comment( Do not edit without updating the expected list.)",
      // definition block
      "BeginEnv(definition)", "WS",
      "Command(label)", "{", "Word(deffix)", "}", "WS",
      "Word(A)", "WS", "{", "Command(it)", "WS", "Word(torsor)", "}", "WS", "Word(is)", "WS",
      "Word(a)", "WS", "Word(set)", "WS", "Math$", "Word(T)", "Math$", "Symbol(.)", "WS",
      "EndEnv(definition)", "PAR",
      // lemma block
      "BeginEnv(lemma)", "Symbol([)", "Word(Existence)", "Symbol(])", "WS",
      "Command(label)", "{", "Word(lemfix)", "}", "WS",
      "Word(Let)", "WS", "Math$", "Word(X)", "Math$", "WS", "Word(be)", "WS", "Word(a)", "WS",
      "Word(scheme)", "Symbol(.)", "WS",
      "Word(If)", "WS", "Math$", "Word(x)", "WS", "Command(in)", "WS", "Word(X)", "Math$",
      "Symbol(,)", "WS", "Word(then)", "WS", "Math$", "Word(2)", "WS", "Symbol(+)", "WS",
      "Word(2)", "WS", "Symbol(=)", "WS", "Word(4)", "Math$", "Symbol(.)", "WS",
      "EndEnv(lemma)", "PAR",
      // proof block
      "BeginEnv(proof)", "WS",
      "Word(By)", "WS", "Word(Definition)", "WS", "Command(ref)", "{", "Word(deffix)", "}", "WS",
      "Word(we)", "WS", "Word(see)", "WS", "Math$", "Word(T)", "WS", "Command(neq)", "WS",
      "Command(emptyset)", "Math$", "Symbol(.)", "WS",
      "Word(The)", "WS", "Word(equation)", "WS",
      "Math$$", "Word(E)", "WS", "Symbol(=)", "WS", "Word(K)", "Math$$", "WS",
      "Word(holds)", "Symbol(.)", "WS",
      "Word(This)", "WS", "Word(finishes)", "WS", "Word(the)", "WS", "Word(proof)", "Symbol(.)",
      "WS",
      "EndEnv(proof)", "WS",
  };
  CHECK(signatures(toks) == expected);
}

TEST_CASE("lex: error cases") {
  CHECK_THROWS_WITH_AS(lex("a { b", 0), doctest::Contains("UnbalancedGroup"), PipelineError);
  CHECK_THROWS_WITH_AS(lex("a } b", 0), doctest::Contains("UnbalancedGroup"), PipelineError);
  CHECK_THROWS_WITH_AS(lex("so $x", 0), doctest::Contains("UnterminatedMath"), PipelineError);
  CHECK_THROWS_WITH_AS(lex("a $$x$$ $y", 0), doctest::Contains("UnterminatedMath"), PipelineError);
  CHECK_THROWS_WITH_AS(lex(std::string("ab\xff" "cd"), 0), doctest::Contains("EncodingError"),
                       PipelineError);
}

TEST_CASE("lex: inline math closes on single dollar") {
  auto toks = lex("$a$$b$", 0);
  CHECK(signatures(toks) ==
        std::vector<std::string>{"Math$", "Word(a)", "Math$", "Math$", "Word(b)", "Math$"});
}

TEST_CASE("parse: inline math segment") {
  auto tree = parse(lex("$f = g$", 0), 0);
  REQUIRE(tree.nodes.size() == 1);
  const DocNode& m = tree.nodes[0];
  CHECK(m.kind == NodeKind::Math);
  CHECK_FALSE(m.display);
  CHECK(tokens_to_text(m.math) == "f = g");
}

TEST_CASE("parse: proof environment with text") {
  auto tree = parse(lex("\\begin{proof} Done. \\end{proof}", 0), 0);
  REQUIRE(tree.nodes.size() == 1);
  const DocNode& env = tree.nodes[0];
  CHECK(env.kind == NodeKind::Environment);
  CHECK(env.name == "proof");
  REQUIRE(env.children.size() == 1);
  CHECK(env.children[0].kind == NodeKind::Text);
}

TEST_CASE("parse: nested environment gives two-level tree") {
  std::string src =
      "\\begin{lemma}\nBefore\n\\begin{equation}\n\\label{eq1}\nx = y\n\\end{equation}\nAfter\n"
      "\\end{lemma}";
  auto tree = parse(lex(src, 0), 0);
  REQUIRE(tree.nodes.size() == 1);
  const DocNode& lemma = tree.nodes[0];
  CHECK(lemma.kind == NodeKind::Environment);
  CHECK(lemma.name == "lemma");
  // text, equation (normalized to display math), text
  REQUIRE(lemma.children.size() == 3);
  CHECK(lemma.children[0].kind == NodeKind::Text);
  CHECK(lemma.children[1].kind == NodeKind::Math);
  CHECK(lemma.children[1].display);
  CHECK(lemma.children[1].label == std::optional<std::string>("eq1"));
  CHECK(lemma.children[2].kind == NodeKind::Text);
  CHECK(serialize(tree) == src);
}

TEST_CASE("parse: label and ref become dedicated nodes") {
  auto tree = parse(lex("\\label{l1} and \\ref{l2}", 0), 0);
  REQUIRE(tree.nodes.size() == 3);
  CHECK(tree.nodes[0].kind == NodeKind::Label);
  CHECK(tree.nodes[0].key == "l1");
  CHECK(tree.nodes[1].kind == NodeKind::Text);
  CHECK(tree.nodes[2].kind == NodeKind::Ref);
  CHECK(tree.nodes[2].key == "l2");
}

TEST_CASE("parse: error cases") {
  CHECK_THROWS_WITH_AS(parse(lex("\\begin{lemma}x\\end{proof}", 0), 0),
                       doctest::Contains("EnvMismatch"), PipelineError);
  CHECK_THROWS_WITH_AS(parse(lex("x\\end{proof}", 0), 0), doctest::Contains("StrayEnd"),
                       PipelineError);
}

TEST_CASE("serialize: byte-exact round trip") {
  std::string src = read_file(testdata("fixtures/lex_fixture.tex"));
  auto tree = parse(lex(src, 0), 0);
  CHECK(serialize(tree) == src);

  CHECK(serialize(parse(lex("", 0), 0)).empty());

  std::string mixed =
      "Intro text % with a comment\nwith $m = 1$ math and \\emph{commands}.\n\n"
      "\\begin{remark}[Why]\nBare {group} text, \\[d = 2\\] display.\n\\end{remark}\n";
  CHECK(serialize(parse(lex(mixed, 0), 0)) == mixed);
}

TEST_CASE("lex/parse: determinism") {
  std::string src = read_file(testdata("fixtures/lex_fixture.tex"));
  auto a = lex(src, 0);
  auto b = lex(src, 0);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].kind == b[i].kind);
    CHECK(a[i].raw == b[i].raw);
    CHECK(a[i].span == b[i].span);
  }
  CHECK(serialize(parse(a, 0)) == serialize(parse(b, 0)));
}

TEST_CASE("macros: harvest and expand") {
  DiagnosticSink sink;
  MacroTable table;
  std::string preamble = "\\newcommand{\\Sch}{\\mathit{Sch}}\n\\def\\Spec{\\operatorname{Spec}}\n"
                         "\\newcommand{\\pair}[2]{(#1, #2)}\n";
  harvest_macros(lex(preamble, 0), table, sink, "preamble.tex");
  CHECK(table.size() == 3);
  REQUIRE(table.find("Sch") != nullptr);
  CHECK(table.find("Sch")->arity == 0);
  CHECK(table.find("pair")->arity == 2);

  SUBCASE("zero-arg substitution") {
    auto tree = expand_macros(parse(lex("$\\Sch$", 0), 0), table, sink);
    REQUIRE(tree.nodes.size() == 1);
    CHECK(tokens_to_text(tree.nodes[0].math) == "\\mathit{Sch}");
  }

  SUBCASE("empty table is the identity") {
    MacroTable empty;
    std::string src = "Some $\\Sch$ text.";
    auto tree = parse(lex(src, 0), 0);
    auto out = expand_macros(tree, empty, sink);
    CHECK(serialize(out) == src);
  }

  SUBCASE("arguments splice in call-site order") {
    auto tree = expand_macros(parse(lex("$\\pair{a}{b}$", 0), 0), table, sink);
    CHECK(tokens_to_text(tree.nodes[0].math) == "(a, b)");
  }

  SUBCASE("two-level macro flattens fully") {
    MacroTable two;
    DiagnosticSink s2;
    harvest_macros(lex("\\newcommand{\\inner}{x}\\newcommand{\\outer}{\\inner + \\inner}", 0),
                   two, s2);
    auto tree = expand_macros(parse(lex("$\\outer$", 0), 0), two, s2);
    CHECK(tokens_to_text(tree.nodes[0].math) == "x + x");
  }

  SUBCASE("expansion is idempotent") {
    auto once = expand_macros(parse(lex("Text $\\pair{\\Sch}{y}$.", 0), 0), table, sink);
    auto twice = expand_macros(once, table, sink);
    CHECK(serialize(once) == serialize(twice));
  }

  SUBCASE("arity mismatch reported") {
    CHECK_THROWS_WITH_AS(expand_macros(parse(lex("$\\pair{a}$", 0), 0), table, sink),
                         doctest::Contains("ArityMismatch"), PipelineError);
  }

  SUBCASE("expanded spans point at the call site") {
    auto toks = expand_tokens(lex("line one\n$\\Sch$", 0), table, sink);
    for (const auto& t : toks) {
      if (t.value == "mathit") CHECK(t.span.line == 2);
    }
  }
}

TEST_CASE("macros: cycle rejected statically") {
  DiagnosticSink sink;
  MacroTable table;
  harvest_macros(lex("\\newcommand{\\aa}{\\bb}\\newcommand{\\bb}{\\aa}", 0), table, sink);
  CHECK(table.size() == 0);
  CHECK(sink.has_errors());
}
