#ifndef IMPLICITML_PRETTY_HPP
#define IMPLICITML_PRETTY_HPP

#include <string>

#include "implicitml/ast.hpp"

namespace implicitml {

// Source-level printers. Output re-parses to a structurally equal tree.
std::string pretty(const ast::Program& p);
std::string pretty(const ast::Expr& e);
std::string pretty(const ast::TypeAst& t);
std::string pretty(const ast::ModType& t);
std::string pretty(const ast::ModExpr& m);
std::string pretty(const ast::Pattern& p);

}  // namespace implicitml

#endif
