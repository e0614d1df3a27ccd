#ifndef IMPLICITML_LEXER_HPP
#define IMPLICITML_LEXER_HPP

#include <string>
#include <vector>

#include "implicitml/diagnostics.hpp"

namespace implicitml {

struct Token {
  enum Kind { Ident, UIdent, TyVar, IntLit, FloatLit, StringLit, Sym, Keyword, Eof };
  Kind kind;
  std::string text;
  long long int_val = 0;
  double float_val = 0;
  Span span;
};

std::vector<Token> lex(const std::string& source);

}  // namespace implicitml

#endif
