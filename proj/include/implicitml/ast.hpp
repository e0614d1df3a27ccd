#ifndef IMPLICITML_AST_HPP
#define IMPLICITML_AST_HPP

#include <memory>
#include <string>
#include <vector>

#include "implicitml/diagnostics.hpp"

namespace implicitml::ast {

struct Expr;
struct ModExpr;
struct ModType;
struct TypeAst;
struct Decl;
struct Pattern;

using ExprPtr = std::shared_ptr<Expr>;
using ModExprPtr = std::shared_ptr<ModExpr>;
using ModTypePtr = std::shared_ptr<ModType>;
using TypeAstPtr = std::shared_ptr<TypeAst>;
using DeclPtr = std::shared_ptr<Decl>;
using PatternPtr = std::shared_ptr<Pattern>;

// ---------------------------------------------------------------------------
// Types as written in the source.

struct TypeAst {
  enum Kind {
    Var,            // 'a
    Name,           // ctor application: int, bool, 'a list, S.t list, ...
    Member,         // S.t, 'a M.t -- path + member + args
    Tuple,          // t1 * t2 * ...
    Arrow,          // t1 -> t2
    ImplicitArrow,  // {M : T} -> t
  };
  Kind kind;
  Span span;
  std::string name;                // Var name / ctor name / member name
  std::vector<TypeAstPtr> args;    // ctor args, member args, tuple components
  std::vector<std::string> path;   // Member: module path
  TypeAstPtr a, b;                 // Arrow domain/codomain; ImplicitArrow codomain in b
  std::string param_name;          // ImplicitArrow module parameter name
  ModTypePtr param_type;           // ImplicitArrow parameter module type
};

// ---------------------------------------------------------------------------
// Module types (signatures).

struct Param {  // function or functor parameter
  enum Kind { Value, Implicit };
  Kind kind = Value;
  Span span;
  std::string name;       // value name or module name; "()" for a unit pattern
  TypeAstPtr ascription;  // optional, Value only
  ModTypePtr sig;         // Implicit only
};

struct SigItem {
  enum Kind { Type, Val, Module, ModuleAlias, ImplicitModule };
  Kind kind;
  Span span;
  std::string name;
  std::vector<std::string> type_params;  // Type: parameter names
  TypeAstPtr manifest;                   // Type: optional manifest
  TypeAstPtr val_type;                   // Val
  ModTypePtr mod_type;                   // Module / ImplicitModule ": T" form
  std::vector<Param> iparams;            // ImplicitModule functor params
  std::vector<std::string> alias_path;   // ModuleAlias / ImplicitModule "= path" form
};

struct ModType {
  enum Kind { Name, Sig, With };
  Kind kind;
  Span span;
  std::vector<std::string> path;         // Name
  std::vector<SigItem> items;            // Sig
  ModTypePtr base;                       // With
  std::string with_name;                 // With: constrained type item
  std::vector<std::string> with_params;  // With: its parameters
  TypeAstPtr with_type;                  // With: manifest
};

// ---------------------------------------------------------------------------
// Patterns (tuple/option/list constructor patterns only).

struct Pattern {
  enum Kind { Var, Wildcard, Unit, Int, Bool, String, Tuple, Nil, Cons, NoneP, SomeP };
  Kind kind;
  Span span;
  std::string name;  // Var name / literal spelling for Int/Bool/String
  long long int_val = 0;
  bool bool_val = false;
  std::string str_val;
  std::vector<PatternPtr> args;  // Tuple components, Cons [head;tail], SomeP [arg]
};

// ---------------------------------------------------------------------------
// Expressions.

struct Expr {
  enum Kind {
    Int, Float, String, Bool, Unit,
    Var,              // possibly qualified: List.map, A.( + ), S.show
    Lambda,           // fun params -> body
    App,              // fn arg... (args may be explicit module args {M})
    Let,              // let [rec] name params [: t] = bound in body
    LetImplicitMod,   // let implicit module M iparams = ME in body
    LetOpenImplicit,  // let open implicit P in body
    Tuple, ListLit,
    Ctor,             // Some e | None | e :: e | []
    If, Seq, Ascribe, Match,
  };

  struct Arg {
    ExprPtr expr;    // ordinary argument
    ModExprPtr mod;  // explicit module argument {M}; exactly one of the two is set
    Span span;
  };
  struct Case {
    PatternPtr pat;
    ExprPtr body;
  };

  Kind kind;
  int node_id = 0;
  Span span;

  long long int_val = 0;
  double float_val = 0;
  std::string str_val;
  bool bool_val = false;

  std::vector<std::string> path;  // Var qualifier
  std::string name;               // Var name / Ctor name

  std::vector<Param> params;  // Lambda / Let
  ExprPtr body;               // Lambda body; Let/LetImplicitMod/LetOpenImplicit continuation

  ExprPtr fn;
  std::vector<Arg> args;

  bool is_rec = false;
  bool unit_pat = false;       // let () = ...
  TypeAstPtr ascription;       // Let return ascription / Ascribe type
  ExprPtr bound;               // Let bound expr; Ascribe subject; Seq lhs

  std::string mod_name;          // LetImplicitMod
  std::vector<Param> mod_params;
  ModExprPtr mod_expr;

  std::vector<ExprPtr> items;  // Tuple / ListLit / Ctor args

  ExprPtr cond, then_e, else_e;  // If
  ExprPtr rhs;                   // Seq rhs

  ExprPtr scrutinee;  // Match
  std::vector<Case> cases;
};

// ---------------------------------------------------------------------------
// Module expressions and declarations.

struct ModExpr {
  enum Kind { Path, Struct, Apply };
  Kind kind;
  int node_id = 0;
  Span span;
  std::vector<std::string> path;
  std::vector<DeclPtr> decls;  // Struct
  ModExprPtr fn;               // Apply
  std::vector<ModExprPtr> args;
  bool implicit_style = false;  // F{M} rather than F(M)
};

struct Decl {
  enum Kind { Let, Module, ModuleType, OpenImplicit, ExprStmt, Type };
  Kind kind;
  int node_id = 0;
  Span span;

  bool is_rec = false;
  bool unit_pat = false;
  std::string name;
  std::vector<Param> params;  // Let value params; Module functor params
  TypeAstPtr ascription;      // Let return ascription
  ExprPtr expr;               // Let body / ExprStmt

  bool is_implicit = false;   // Module
  ModTypePtr mod_ascription;  // Module ": T"
  ModExprPtr mod_expr;        // Module body (may be null for an assumed module)

  ModTypePtr mod_type;  // ModuleType

  std::vector<std::string> path;  // OpenImplicit

  std::vector<std::string> type_params;  // Type (struct-local only)
  TypeAstPtr manifest;
};

struct Program {
  std::vector<DeclPtr> decls;
};

// Structural equality modulo spans and node ids (round-trip testing).
bool equal(const Program& a, const Program& b);
bool equal(const Expr& a, const Expr& b);

}  // namespace implicitml::ast

#endif
