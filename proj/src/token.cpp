#include "stacksdict/token.hpp"

#include <cctype>

namespace stacksdict {

namespace {

bool is_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

// Length of a valid UTF-8 sequence starting at s[i], or 0 if invalid.
size_t utf8_len(std::string_view s, size_t i) {
  unsigned char c = static_cast<unsigned char>(s[i]);
  size_t n = 0;
  if (c < 0x80) return 1;
  if ((c & 0xe0) == 0xc0) n = 2;
  else if ((c & 0xf0) == 0xe0) n = 3;
  else if ((c & 0xf8) == 0xf0) n = 4;
  else return 0;
  if (i + n > s.size()) return 0;
  for (size_t k = 1; k < n; ++k) {
    if ((static_cast<unsigned char>(s[i + k]) & 0xc0) != 0x80) return 0;
  }
  return n;
}

enum class MathState { None, Inline, Display };

struct Lexer {
  std::string_view src;
  FileId file;
  std::string path;
  size_t pos = 0;
  uint32_t line = 1;
  std::vector<Token> out;
  int group_depth = 0;
  MathState math = MathState::None;
  uint32_t math_open_line = 0;

  [[noreturn]] void fail(const std::string& code, const std::string& msg, uint32_t at_line) {
    throw PipelineError(Diagnostic{Severity::Error, path, at_line, 0, code, msg});
  }

  char peek(size_t off = 0) const {
    return pos + off < src.size() ? src[pos + off] : '\0';
  }

  void push(TokenKind kind, size_t begin, size_t end, std::string value,
            bool display = false, uint32_t tline = 0) {
    Token t;
    t.kind = kind;
    t.raw = std::string(src.substr(begin, end - begin));
    t.value = std::move(value);
    t.display = display;
    t.span = SourceSpan{file, static_cast<uint32_t>(begin), static_cast<uint32_t>(end),
                        tline ? tline : line};
    out.push_back(std::move(t));
  }

  void count_lines(size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      if (src[i] == '\n') ++line;
    }
  }

  // At '\': lex a command, env delimiter, or math bracket.
  void lex_backslash() {
    size_t begin = pos;
    uint32_t tline = line;
    ++pos;
    if (pos >= src.size()) {
      push(TokenKind::Symbol, begin, pos, "\\", false, tline);
      return;
    }
    if (is_letter(peek())) {
      size_t name_begin = pos;
      while (pos < src.size() && is_letter(peek())) ++pos;
      std::string name(src.substr(name_begin, pos - name_begin));
      if ((name == "begin" || name == "end") && try_env_delimiter(begin, name, tline)) return;
      push(TokenKind::Command, begin, pos, std::move(name), false, tline);
      return;
    }
    char c = peek();
    ++pos;
    if (c == '[' || c == ']') {
      handle_math_shift(begin, pos, /*display=*/true, c == '[', tline);
      return;
    }
    if (c == '(' || c == ')') {
      handle_math_shift(begin, pos, /*display=*/false, c == '(', tline);
      return;
    }
    if (c == '\n') ++line;
    push(TokenKind::Command, begin, pos, std::string(1, c), false, tline);
  }

  // \begin{name} / \end{name}; pos is just past the command letters.
  bool try_env_delimiter(size_t begin, const std::string& which, uint32_t tline) {
    size_t p = pos;
    while (p < src.size() && (src[p] == ' ' || src[p] == '\t')) ++p;
    if (p >= src.size() || src[p] != '{') return false;
    size_t name_begin = p + 1;
    size_t q = name_begin;
    while (q < src.size() && src[q] != '}' && src[q] != '\n') ++q;
    if (q >= src.size() || src[q] != '}') return false;
    std::string name(src.substr(name_begin, q - name_begin));
    pos = q + 1;
    push(which == "begin" ? TokenKind::BeginEnv : TokenKind::EndEnv, begin, pos,
         std::move(name), false, tline);
    return true;
  }

  void handle_math_shift(size_t begin, size_t end, bool display, bool opening, uint32_t tline) {
    if (opening) {
      if (math != MathState::None)
        fail("UnterminatedMath", "math opened inside math mode", tline);
      math = display ? MathState::Display : MathState::Inline;
      math_open_line = tline;
    } else {
      MathState want = display ? MathState::Display : MathState::Inline;
      if (math != want)
        fail("UnterminatedMath", "mismatched math delimiter", tline);
      math = MathState::None;
    }
    push(TokenKind::MathShift, begin, end, display ? "$$" : "$", display, tline);
  }

  void lex_dollar() {
    size_t begin = pos;
    uint32_t tline = line;
    if (math == MathState::Inline) {
      // a single $ closes inline math even when another follows ($a$$b$)
      ++pos;
      math = MathState::None;
      push(TokenKind::MathShift, begin, pos, "$", false, tline);
      return;
    }
    bool dd = peek(1) == '$';
    if (math == MathState::Display) {
      if (!dd) fail("UnterminatedMath", "single $ inside display math", tline);
      pos += 2;
      math = MathState::None;
      push(TokenKind::MathShift, begin, pos, "$$", true, tline);
      return;
    }
    pos += dd ? 2 : 1;
    math = dd ? MathState::Display : MathState::Inline;
    math_open_line = tline;
    push(TokenKind::MathShift, begin, pos, dd ? "$$" : "$", dd, tline);
  }

  void lex_comment() {
    size_t begin = pos;
    uint32_t tline = line;
    ++pos;
    size_t text_begin = pos;
    while (pos < src.size() && src[pos] != '\n') ++pos;
    std::string text(src.substr(text_begin, pos - text_begin));
    if (pos < src.size()) {
      ++pos;  // the newline belongs to the comment
      ++line;
    }
    push(TokenKind::Comment, begin, pos, std::move(text), false, tline);
  }

  void lex_whitespace() {
    size_t begin = pos;
    uint32_t tline = line;
    int newlines = 0;
    while (pos < src.size() && is_space(peek())) {
      if (peek() == '\n') {
        ++newlines;
        ++line;
      }
      ++pos;
    }
    push(newlines >= 2 ? TokenKind::ParagraphBreak : TokenKind::Whitespace, begin, pos,
         std::string(src.substr(begin, pos - begin)), false, tline);
  }

  void lex_word() {
    size_t begin = pos;
    uint32_t tline = line;
    while (pos < src.size()) {
      char c = peek();
      if (is_letter(c) || is_digit(c)) {
        ++pos;
        continue;
      }
      unsigned char uc = static_cast<unsigned char>(c);
      if (uc >= 0x80) {
        size_t n = utf8_len(src, pos);
        if (n == 0) fail("EncodingError", "invalid UTF-8 byte sequence", line);
        pos += n;
        continue;
      }
      break;
    }
    push(TokenKind::Word, begin, pos, std::string(src.substr(begin, pos - begin)), false, tline);
  }

  std::vector<Token> run() {
    while (pos < src.size()) {
      char c = peek();
      unsigned char uc = static_cast<unsigned char>(c);
      if (c == '%') {
        lex_comment();
      } else if (c == '\\') {
        lex_backslash();
      } else if (c == '$') {
        lex_dollar();
      } else if (c == '{') {
        ++group_depth;
        push(TokenKind::GroupOpen, pos, pos + 1, "{");
        ++pos;
      } else if (c == '}') {
        if (--group_depth < 0) fail("UnbalancedGroup", "unmatched closing brace", line);
        push(TokenKind::GroupClose, pos, pos + 1, "}");
        ++pos;
      } else if (is_space(c)) {
        lex_whitespace();
      } else if (is_letter(c) || is_digit(c) || uc >= 0x80) {
        lex_word();
      } else {
        push(TokenKind::Symbol, pos, pos + 1, std::string(1, c));
        ++pos;
      }
    }
    if (group_depth != 0) fail("UnbalancedGroup", "unmatched opening brace at end of file", line);
    if (math != MathState::None)
      fail("UnterminatedMath", "math mode still open at end of file", math_open_line);
    return std::move(out);
  }
};

}  // namespace

const char* token_kind_name(TokenKind k) {
  switch (k) {
    case TokenKind::Command: return "Command";
    case TokenKind::BeginEnv: return "BeginEnv";
    case TokenKind::EndEnv: return "EndEnv";
    case TokenKind::MathShift: return "MathShift";
    case TokenKind::GroupOpen: return "GroupOpen";
    case TokenKind::GroupClose: return "GroupClose";
    case TokenKind::Word: return "Word";
    case TokenKind::Symbol: return "Symbol";
    case TokenKind::Whitespace: return "Whitespace";
    case TokenKind::Comment: return "Comment";
    case TokenKind::ParagraphBreak: return "ParagraphBreak";
  }
  return "?";
}

std::vector<Token> lex(std::string_view source, FileId file, const std::string& path) {
  // validate encoding up front so later stages can assume well-formed UTF-8
  for (size_t i = 0; i < source.size();) {
    size_t n = utf8_len(source, i);
    if (n == 0) {
      uint32_t line = 1;
      for (size_t k = 0; k < i; ++k)
        if (source[k] == '\n') ++line;
      throw PipelineError(
          Diagnostic{Severity::Error, path, line, 0, "EncodingError", "invalid UTF-8 input"});
    }
    i += n;
  }
  Lexer lx{source, file, path, 0, 1, {}, 0, MathState::None, 0};
  return lx.run();
}

std::string tokens_to_bytes(const std::vector<Token>& tokens) {
  std::string out;
  for (const auto& t : tokens) out += t.raw;
  return out;
}

std::string tokens_to_text(const std::vector<Token>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    switch (t.kind) {
      case TokenKind::Whitespace:
      case TokenKind::ParagraphBreak:
        if (!out.empty() && out.back() != ' ') out += ' ';
        break;
      case TokenKind::Comment:
        break;
      default:
        out += t.raw;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  size_t i = 0;
  while (i < out.size() && out[i] == ' ') ++i;
  return out.substr(i);
}

}  // namespace stacksdict
