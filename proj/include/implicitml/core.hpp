#ifndef IMPLICITML_CORE_HPP
#define IMPLICITML_CORE_HPP

#include <memory>
#include <string>
#include <vector>

#include "implicitml/ast.hpp"
#include "implicitml/types.hpp"

namespace implicitml::core {

struct CExpr;
struct CModExpr;
struct CDecl;
using CExprPtr = std::shared_ptr<CExpr>;
using CModExprPtr = std::shared_ptr<CModExpr>;
using CDeclPtr = std::shared_ptr<CDecl>;

// Implicit-free core expressions. Functions over modules are explicit:
// Pack introduces a functor-as-value, Unpack applies one to module
// arguments and projects its value.
struct CExpr {
  enum Kind {
    Int, Float, String, Bool, Unit,
    Var,       // local value
    Member,    // value member of a module path
    Lambda,    // value parameters only
    App,
    Let,       // let [rec] name = bound in body
    LocalMod,  // let module N = ME in body
    Tuple, ListLit, Ctor,
    If, Seq, Match,
    Pack,      // functor (M : S) ... -> body, as a value
    Unpack,    // apply a packed functor to module arguments, project value
  };

  struct MParam {
    std::string name;       // runtime binding name (source-level)
    std::string internal;   // unique name the signature's types refer to
    types::SigPtr sig;      // annotation for the core checker
    std::string sig_text;   // source-level rendering for printing
  };
  struct Case {
    ast::PatternPtr pat;
    CExprPtr body;
  };

  Kind kind;
  Span span;

  long long int_val = 0;
  double float_val = 0;
  std::string str_val;
  bool bool_val = false;

  std::string name;          // Var / Ctor / Let / LocalMod binding
  types::ModPathPtr path;    // Member

  std::vector<std::string> params;  // Lambda value parameters
  std::vector<ast::TypeAstPtr> param_annots;  // per-param ascription, may be null
  CExprPtr body;                    // Lambda / Let / LocalMod / Pack body

  CExprPtr fn;
  std::vector<CExprPtr> args;

  bool is_rec = false;
  CExprPtr bound;  // Let / Seq lhs

  std::vector<CExprPtr> items;  // Tuple / ListLit / Ctor

  CExprPtr cond, then_e, else_e;
  CExprPtr rhs;  // Seq

  CExprPtr scrutinee;
  std::vector<Case> cases;

  std::vector<MParam> mparams;         // Pack
  std::vector<CModExprPtr> margs;      // Unpack
  CModExprPtr mod;                     // LocalMod

  // Inference annotations used by the core checker.
  types::TypePtr ann;  // Lambda parameter/overall types where recorded
};

struct CModExpr {
  enum Kind { Path, Struct, Functor };
  Kind kind;
  Span span;
  types::ModPathPtr path;              // Path (may contain applications)
  std::vector<CDeclPtr> decls;         // Struct
  types::SigPtr sig;                   // Struct: signature from inference
  std::vector<CExpr::MParam> mparams;  // Functor
  CModExprPtr body;                    // Functor
};

struct CDecl {
  enum Kind { Let, Mod, ModType, Stmt };
  Kind kind;
  Span span;
  bool is_rec = false;
  std::string name;
  CExprPtr expr;              // Let / Stmt
  CModExprPtr mod;            // Mod
  ast::ModTypePtr sig_ast;    // ModType: surface signature, re-elaborated by
                              // the core checker and used for printing
};

struct CoreProgram {
  std::vector<CDeclPtr> decls;
};

// True when the program contains no implicit constructs (it always should;
// the scan backs the elaboration tests).
bool implicit_free(const CoreProgram& p);

std::string print_core(const CoreProgram& p);
std::string print_core(const CExpr& e);

}  // namespace implicitml::core

#endif
