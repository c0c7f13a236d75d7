#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stacksdict/token.hpp"

namespace stacksdict {

enum class NodeKind { Environment, Math, Command, Text, Label, Ref };

struct DocNode;

// One braced or bracketed argument group, with any whitespace that
// separated it from the command kept for lossless serialization.
struct ArgGroup {
  std::vector<Token> lead;
  Token open;
  std::vector<DocNode> children;
  Token close;
};

struct DocNode {
  NodeKind kind = NodeKind::Text;

  // Environment / Command / Label / Ref name (env or command name)
  std::string name;

  // Environment
  Token begin_tok, end_tok;
  std::optional<ArgGroup> bracket;  // \begin{lemma}[Title]
  std::vector<DocNode> children;

  // Math (also holds equation environments normalized to display math)
  bool display = false;
  Token open_tok, close_tok;
  std::vector<Token> math;
  std::optional<std::string> label;  // \label{...} found inside the segment

  // Command
  Token cmd_tok;
  std::vector<ArgGroup> args;

  // Text
  std::vector<Token> text;

  // Label / Ref
  std::string key;
  std::vector<Token> key_tokens;  // group tokens after \label / \ref, raw

  SourceSpan span;
};

struct DocTree {
  FileId file = -1;
  std::string path;
  std::vector<DocNode> nodes;
};

// Builds a DocTree. Throws PipelineError with codes EnvMismatch, StrayEnd.
DocTree parse(const std::vector<Token>& tokens, FileId file, const std::string& path = "");

// Byte-exact reconstruction of the source of an unexpanded tree.
std::string serialize(const DocTree& tree);
std::string serialize(const std::vector<DocNode>& nodes);

// In-order token stream of a tree (the lex stream for unexpanded trees).
std::vector<Token> collect_tokens(const DocTree& tree);
std::vector<Token> collect_tokens(const std::vector<DocNode>& nodes);
void collect_tokens(const DocNode& node, std::vector<Token>& out);

// Plain-text rendering of a bracket argument (environment title).
std::string arg_group_text(const ArgGroup& g);

}  // namespace stacksdict
