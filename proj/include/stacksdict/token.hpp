#pragma once

#include <string>
#include <vector>

#include "stacksdict/diagnostics.hpp"
#include "stacksdict/source.hpp"

namespace stacksdict {

enum class TokenKind {
  Command,         // \foo or control symbol \;  (value = name without backslash)
  BeginEnv,        // \begin{name}               (value = name)
  EndEnv,          // \end{name}                 (value = name)
  MathShift,       // $, $$, \[, \], \(, \)      (display flag distinguishes)
  GroupOpen,       // {
  GroupClose,      // }
  Word,            // run of letters/digits (UTF-8 letters included)
  Symbol,          // any other single character
  Whitespace,      // spaces/tabs/single newline run
  Comment,         // % ... end of line          (value = text after %)
  ParagraphBreak,  // whitespace run with a blank line
};

const char* token_kind_name(TokenKind k);

struct Token {
  TokenKind kind = TokenKind::Symbol;
  std::string raw;    // exact source bytes covered by the span
  std::string value;  // decoded payload (name, word text, comment text, ...)
  bool display = false;  // MathShift only
  SourceSpan span;

  bool is(TokenKind k) const { return kind == k; }
  bool is_command(std::string_view name) const {
    return kind == TokenKind::Command && value == name;
  }
};

// Lexes one UTF-8 LaTeX source file. Throws PipelineError with codes
// EncodingError, UnbalancedGroup, UnterminatedMath.
std::vector<Token> lex(std::string_view source, FileId file, const std::string& path = "");

// Concatenated raw bytes of a token slice; equals the source for a full stream.
std::string tokens_to_bytes(const std::vector<Token>& tokens);

// Raw text with whitespace runs collapsed to single spaces and comments
// dropped; used to render math token lists for display and symbol keys.
std::string tokens_to_text(const std::vector<Token>& tokens);

}  // namespace stacksdict
