#include "implicitml/lexer.hpp"

#include <cctype>
#include <unordered_set>

namespace implicitml {

namespace {

const std::unordered_set<std::string> kKeywords = {
    "let", "rec", "in", "module", "implicit", "open", "type", "sig",
    "struct", "end", "val", "with", "fun", "match", "if", "then",
    "else", "true", "false", "of", "and",
};

// Longest-match symbol table, ordered by length.
const char* kSymbols3[] = {">>="};
const char* kSymbols2[] = {"->", "::", ";;", "&&", "||", "<=", ">=",
                           "<>", "+.", "-.", "*.", "/."};
const char* kSymbols1[] = {"(", ")", "{", "}", "[", "]", ";", ",", ".",
                           ":", "|", "_", "=", "<", ">", "+", "-", "*",
                           "/", "^"};

bool ident_start(char c) { return std::islower(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_part(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

}  // namespace

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  size_t i = 0;
  int line = 1, col = 1;

  auto peek = [&](size_t k = 0) -> char { return i + k < src.size() ? src[i + k] : '\0'; };
  auto advance = [&]() -> char {
    char c = src[i++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  };
  auto here = [&]() { return Span{line, col, line, col}; };

  while (i < src.size()) {
    char c = peek();
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance();
      continue;
    }
    // Nested comments.
    if (c == '(' && peek(1) == '*') {
      Span start = here();
      advance();
      advance();
      int depth = 1;
      while (depth > 0) {
        if (i >= src.size())
          fail(Code::Syntax, start, "unterminated comment");
        if (peek() == '(' && peek(1) == '*') {
          advance();
          advance();
          ++depth;
        } else if (peek() == '*' && peek(1) == ')') {
          advance();
          advance();
          --depth;
        } else {
          advance();
        }
      }
      continue;
    }

    Span sp = here();
    // Type variable 'a.
    if (c == '\'' && ident_start(peek(1))) {
      advance();
      std::string name;
      while (i < src.size() && ident_part(peek())) name += advance();
      sp.end_line = line;
      sp.end_col = col;
      out.push_back({Token::TyVar, name, 0, 0, sp});
      continue;
    }
    // Numbers.
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string text;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(peek()))) text += advance();
      bool is_float = false;
      if (peek() == '.' && !ident_start(peek(1))) {
        is_float = true;
        text += advance();
        while (i < src.size() && std::isdigit(static_cast<unsigned char>(peek()))) text += advance();
      }
      sp.end_line = line;
      sp.end_col = col;
      if (is_float)
        out.push_back({Token::FloatLit, text, 0, std::stod(text), sp});
      else
        out.push_back({Token::IntLit, text, std::stoll(text), 0, sp});
      continue;
    }
    // Strings.
    if (c == '"') {
      advance();
      std::string text;
      while (true) {
        if (i >= src.size()) fail(Code::Syntax, sp, "unterminated string literal");
        char d = advance();
        if (d == '"') break;
        if (d == '\\') {
          if (i >= src.size()) fail(Code::Syntax, sp, "unterminated string escape");
          char e = advance();
          switch (e) {
            case 'n': text += '\n'; break;
            case 't': text += '\t'; break;
            case '\\': text += '\\'; break;
            case '"': text += '"'; break;
            default: fail(Code::Syntax, sp, std::string("unknown escape \\") + e);
          }
        } else {
          text += d;
        }
      }
      sp.end_line = line;
      sp.end_col = col;
      out.push_back({Token::StringLit, text, 0, 0, sp});
      continue;
    }
    // Identifiers and keywords.
    if (ident_start(c) && !(c == '_' && !ident_part(peek(1)))) {
      std::string text;
      while (i < src.size() && ident_part(peek())) text += advance();
      sp.end_line = line;
      sp.end_col = col;
      if (kKeywords.count(text))
        out.push_back({Token::Keyword, text, 0, 0, sp});
      else
        out.push_back({Token::Ident, text, 0, 0, sp});
      continue;
    }
    if (std::isupper(static_cast<unsigned char>(c))) {
      std::string text;
      while (i < src.size() && ident_part(peek())) text += advance();
      sp.end_line = line;
      sp.end_col = col;
      out.push_back({Token::UIdent, text, 0, 0, sp});
      continue;
    }
    // Symbols, longest match first.
    auto try_sym = [&](const char* s) -> bool {
      size_t n = std::string(s).size();
      if (src.compare(i, n, s) != 0) return false;
      for (size_t k = 0; k < n; ++k) advance();
      sp.end_line = line;
      sp.end_col = col;
      out.push_back({Token::Sym, s, 0, 0, sp});
      return true;
    };
    bool matched = false;
    for (const char* s : kSymbols3)
      if ((matched = try_sym(s))) break;
    if (!matched)
      for (const char* s : kSymbols2)
        if ((matched = try_sym(s))) break;
    if (!matched)
      for (const char* s : kSymbols1)
        if ((matched = try_sym(s))) break;
    if (!matched)
      fail(Code::Syntax, sp, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Token::Eof, "", 0, 0, Span{line, col, line, col}});
  return out;
}

}  // namespace implicitml
