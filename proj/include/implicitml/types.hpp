#ifndef IMPLICITML_TYPES_HPP
#define IMPLICITML_TYPES_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "implicitml/diagnostics.hpp"

namespace implicitml::types {

struct Type;
struct Signature;
struct ModPath;
using TypePtr = std::shared_ptr<Type>;
using SigPtr = std::shared_ptr<Signature>;
using ModPathPtr = std::shared_ptr<ModPath>;

// ---------------------------------------------------------------------------
// Module paths as trees: a root name, member projections, functor
// applications. Used for member types (S.t), candidate normal forms and
// alias templates.

struct ModPath {
  enum Kind { Name, Proj, App };
  Kind kind;
  std::string name;               // Name: identifier; Proj: member name
  ModPathPtr base;                // Proj / App functor head
  std::vector<ModPathPtr> args;   // App arguments

  static ModPathPtr mk_name(std::string n);
  static ModPathPtr mk_proj(ModPathPtr base, std::string member);
  static ModPathPtr mk_app(ModPathPtr fn, std::vector<ModPathPtr> args);
};

bool path_equal(const ModPath& a, const ModPath& b);
std::string path_str(const ModPath& p);
// Replaces every occurrence of root name `from` with path `to`.
ModPathPtr path_subst(const ModPathPtr& p, const std::string& from, const ModPathPtr& to);
// Number of Name/Proj/App nodes.
int path_size(const ModPath& p);

// ---------------------------------------------------------------------------
// Semantic types.

struct Type {
  enum Kind {
    Var,            // unification variable
    Rigid,          // skolem constant ('a in a signature, or during inclusion)
    Ctor,           // int, bool, string, float, unit, 'a list, 'a option
    Member,         // P.t possibly applied: 'a M.t
    Tuple,          // t1 * t2 * ...
    Arrow,          // t1 -> t2
    ImplicitArrow,  // {M : S} -> t
  };
  Kind kind;
  int id = 0;                  // Var / Rigid
  std::string name;            // Ctor name; Member member name; Rigid display hint
  std::vector<TypePtr> args;   // Ctor args, Member args, Tuple components
  ModPathPtr path;             // Member
  TypePtr a, b;                // Arrow domain / codomain
  std::string param_name;      // ImplicitArrow: unique internal parameter name
  std::string param_display;   // ImplicitArrow: source-level parameter name
  SigPtr param_sig;            // ImplicitArrow parameter signature
  // ImplicitArrow codomain lives in b.
};

TypePtr mk_var(int id);
TypePtr mk_rigid(int id, std::string display = "");
TypePtr mk_ctor(std::string name, std::vector<TypePtr> args = {});
TypePtr mk_member(ModPathPtr path, std::string member, std::vector<TypePtr> args = {});
TypePtr mk_tuple(std::vector<TypePtr> comps);
TypePtr mk_arrow(TypePtr dom, TypePtr cod);
TypePtr mk_implicit_arrow(std::string internal, std::string display, SigPtr sig, TypePtr cod);

// ---------------------------------------------------------------------------
// Type schemes: quantified unification variable ids plus a body that may
// mention them (they stay unbound in the store).

struct Scheme {
  std::vector<int> vars;
  TypePtr body;
};

// Fresh negative id for scheme-quantified variables; negative ids never
// collide with store variables and are never bound.
int fresh_scheme_var();

// ---------------------------------------------------------------------------
// Signatures. Self-references inside a signature use Member types whose path
// root is the signature's unique `self` name.

struct TypeItem {
  std::vector<int> params;  // Rigid ids standing for the declared parameters
  TypePtr manifest;         // null for an abstract type
};

struct ModItem {
  SigPtr sig;
  ModPathPtr alias;  // alias template, possibly referencing the self name
  bool implicit = false;
};

struct SigEntry {
  enum Kind { Type, Val, Module };
  Kind kind;
  std::string name;
  TypeItem type;
  Scheme val;
  ModItem mod;
};

struct Signature {
  std::string self;  // unique, e.g. "*7"
  std::string name;  // display hint: the module type name this came from
  std::vector<SigEntry> items;

  const SigEntry* find(SigEntry::Kind kind, const std::string& name) const;
};

int fresh_self_id();
std::string fresh_self();

// Rewrites self-rooted member paths in a type or signature to a concrete path.
TypePtr subst_path(const TypePtr& t, const std::string& from, const ModPathPtr& to);
SigPtr subst_path_sig(const SigPtr& s, const std::string& from, const ModPathPtr& to);

// Applies a variable substitution (used by instantiation).
TypePtr subst_vars(const TypePtr& t, const std::map<int, TypePtr>& sub);

// ---------------------------------------------------------------------------
// Unification variable store with a trail for backtracking.

class TypeStore {
 public:
  int fresh();
  int fresh_rigid();
  TypePtr fresh_var() { return mk_var(fresh()); }

  bool bound(int id) const;
  const TypePtr& binding(int id) const;
  void bind(int id, TypePtr t);

  // Follows Var bindings at the root only.
  TypePtr shorten(TypePtr t) const;
  // Recursively substitutes all bound variables.
  TypePtr resolve(const TypePtr& t) const;

  size_t checkpoint() const { return trail_.size(); }
  void undo(size_t mark);
  // Bindings made since `mark`, for replaying a committed branch.
  std::vector<std::pair<int, TypePtr>> delta(size_t mark) const;

  bool occurs(int id, const TypePtr& t) const;

 private:
  std::vector<TypePtr> bindings_;
  std::vector<int> trail_;
  int next_rigid_ = 0;
};

// ---------------------------------------------------------------------------
// Printing. `debug_str` gives an s-expression with store-resolved bindings;
// `user_str` is the surface-style rendering used in diagnostics and by the
// `check` command, with variables renamed to 'a, 'b, ... in first-occurrence
// order.

std::string debug_str(const TypePtr& t, const TypeStore& store);
std::string user_str(const TypePtr& t, const TypeStore& store);
std::string user_str_scheme(const Scheme& s, const TypeStore& store);
std::string sig_str(const Signature& s, const TypeStore& store);

}  // namespace implicitml::types

#endif
