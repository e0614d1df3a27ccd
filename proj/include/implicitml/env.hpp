#ifndef IMPLICITML_ENV_HPP
#define IMPLICITML_ENV_HPP

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "implicitml/types.hpp"

namespace implicitml::env {

using types::ModPath;
using types::ModPathPtr;
using types::Scheme;
using types::SigPtr;
using types::TypePtr;

// A module binding: either a ground module or a functor. Ground modules carry
// their signature (with an abstract self name) and an alias-expanded normal
// form path. Functors carry parameter signatures, a result signature that
// refers to the parameters by unique internal names, and optionally an alias
// template when the body is itself a path or application.
struct ModuleInfo {
  SigPtr sig;    // ground module signature
  ModPathPtr nf; // ground module normal form

  bool is_functor = false;
  std::vector<std::pair<std::string, SigPtr>> params;  // internal name -> signature
  SigPtr result;
  ModPathPtr alias;     // template over the internal parameter names
  ModPathPtr self_path; // un-expanded head path (source name), used in traces

  bool implicit = false;
  std::string display;
  // How this binding is addressed at its binding site; used to build the
  // module expressions substituted for resolved implicit arguments.
  ModPathPtr access;
  // Functor submodule members of a struct (signatures cannot express them).
  std::map<std::string, std::shared_ptr<ModuleInfo>> submodules;
};
using ModuleInfoPtr = std::shared_ptr<ModuleInfo>;

struct Env {
  std::map<std::string, Scheme> values;
  std::map<std::string, ModuleInfoPtr> modules;  // source names and internal names
  std::map<std::string, SigPtr> module_types;
  // Implicit scope in binding order; later entries shadow earlier ones of the
  // same name.
  std::vector<std::pair<std::string, ModuleInfoPtr>> implicits;

  const Scheme* find_value(const std::string& name) const;
  ModuleInfoPtr find_module(const std::string& name) const;
  SigPtr find_module_type(const std::string& name) const;
  void add_implicit(const std::string& name, ModuleInfoPtr info);
  // Shadowing-resolved implicit scope, oldest first.
  std::vector<std::pair<std::string, ModuleInfoPtr>> implicit_scope() const;
};

// Alias-expands a path to its normal form. Raises E-ALIAS-CYCLE if expansion
// does not terminate within a fixed depth.
ModPathPtr normalize_path(const Env& e, const ModPathPtr& p, Span span);

// Looks up the module denoted by a (source or normal form) path. The result
// has `sig` and `nf` filled in for ground modules; functors are only valid at
// the root of an application. Raises E-UNBOUND for unknown names or members.
ModuleInfoPtr resolve_module(const Env& e, const ModPathPtr& p, Span span);

// Applies a functor (given directly, not by name) to argument paths that
// resolve in `e`. Returns the resulting ground module with its normal form
// computed through the functor's alias template, if any.
ModuleInfoPtr apply_functor(const Env& e, const ModuleInfoPtr& fn,
                            const std::vector<ModPathPtr>& args, Span span);

// Scheme of a value member, with the signature self name replaced by the
// module's normal form path.
Scheme project_value(const Env& e, const ModPathPtr& p, const std::string& name, Span span);

// Expands `args P.t` when P's signature gives t a manifest. Returns null for
// an abstract member. The path must already be in normal form.
TypePtr expand_member(const Env& e, const ModPathPtr& p, const std::string& member,
                      const std::vector<TypePtr>& args, Span span);

// Substitutes rigid type parameters (used when instantiating manifests).
TypePtr subst_rigids(const TypePtr& t, const std::map<int, TypePtr>& sub);

}  // namespace implicitml::env

#endif
