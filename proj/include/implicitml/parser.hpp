#ifndef IMPLICITML_PARSER_HPP
#define IMPLICITML_PARSER_HPP

#include <string>

#include "implicitml/ast.hpp"

namespace implicitml {

// Parses a whole compilation unit. Throws CompileError with code E-SYNTAX
// (carrying line/column and the expected-token set) on malformed input.
ast::Program parse(const std::string& source);

// Helpers used by tests and by the signature elaborator.
ast::ExprPtr parse_expression(const std::string& source);
ast::TypeAstPtr parse_type(const std::string& source);
ast::ModTypePtr parse_module_type(const std::string& source);

}  // namespace implicitml

#endif
