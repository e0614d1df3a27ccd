#ifndef IMPLICITML_SIGELAB_HPP
#define IMPLICITML_SIGELAB_HPP

#include <map>
#include <string>

#include "implicitml/ast.hpp"
#include "implicitml/env.hpp"
#include "implicitml/types.hpp"

namespace implicitml {

// Elaborates surface types and module types into semantic form. One instance
// carries the lexical context: named type variables, module renamings
// (implicit parameters and signature self projections), and local type
// aliases from enclosing struct bodies.
class TypeElab {
 public:
  // What to do with a type variable name seen for the first time.
  enum VarPolicy {
    Scheme,  // fresh negative scheme variable (signatures, ascriptions)
    Store,   // fresh store unification variable
    Reject,  // error (type declaration manifests)
  };

  struct LocalAlias {
    std::vector<int> params;  // rigid placeholder ids
    types::TypePtr body;
  };

  TypeElab(const env::Env& e, types::TypeStore& store) : env_(e), store_(store) {}

  VarPolicy policy = Scheme;
  std::map<std::string, types::TypePtr> tyvars;
  std::map<std::string, types::ModPathPtr> renames;
  std::map<std::string, LocalAlias> locals;

  types::TypePtr type(const ast::TypeAst& t);
  types::SigPtr modtype(const ast::ModType& mt);

  // Renames a surface path through `renames` and normalizes it through the
  // environment when its root is known there.
  types::ModPathPtr path(const std::vector<std::string>& p, Span span);

  // Collected scheme variables (negative ids) since the last reset, in first
  // occurrence order.
  std::vector<int> take_scheme_vars();

 private:
  const env::Env& env_;
  types::TypeStore& store_;
  std::vector<int> scheme_vars_;

  types::TypePtr named(const std::string& name, std::vector<types::TypePtr> args, Span span);
};

}  // namespace implicitml

#endif
