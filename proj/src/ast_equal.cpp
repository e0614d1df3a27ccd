#include "implicitml/ast.hpp"

namespace implicitml::ast {

namespace {

bool eq(const TypeAstPtr& a, const TypeAstPtr& b);
bool eq(const ModTypePtr& a, const ModTypePtr& b);
bool eq(const ExprPtr& a, const ExprPtr& b);
bool eq(const ModExprPtr& a, const ModExprPtr& b);
bool eq(const DeclPtr& a, const DeclPtr& b);
bool eq(const PatternPtr& a, const PatternPtr& b);

template <typename T>
bool eq_vec(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!eq(a[i], b[i])) return false;
  return true;
}

bool eq(const Param& a, const Param& b) {
  return a.kind == b.kind && a.name == b.name && eq(a.ascription, b.ascription) &&
         eq(a.sig, b.sig);
}
bool eq_params(const std::vector<Param>& a, const std::vector<Param>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!eq(a[i], b[i])) return false;
  return true;
}

bool eq(const TypeAstPtr& a, const TypeAstPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind || a->name != b->name || a->path != b->path) return false;
  if (!eq_vec(a->args, b->args)) return false;
  if (!eq(a->a, b->a) || !eq(a->b, b->b)) return false;
  if (a->param_name != b->param_name) return false;
  return eq(a->param_type, b->param_type);
}

bool eq(const SigItem& a, const SigItem& b) {
  return a.kind == b.kind && a.name == b.name && a.type_params == b.type_params &&
         eq(a.manifest, b.manifest) && eq(a.val_type, b.val_type) &&
         eq(a.mod_type, b.mod_type) && eq_params(a.iparams, b.iparams) &&
         a.alias_path == b.alias_path;
}

bool eq(const ModTypePtr& a, const ModTypePtr& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind || a->path != b->path) return false;
  if (a->items.size() != b->items.size()) return false;
  for (size_t i = 0; i < a->items.size(); ++i)
    if (!eq(a->items[i], b->items[i])) return false;
  return eq(a->base, b->base) && a->with_name == b->with_name &&
         a->with_params == b->with_params && eq(a->with_type, b->with_type);
}

bool eq(const PatternPtr& a, const PatternPtr& b) {
  if (!a || !b) return !a && !b;
  return a->kind == b->kind && a->name == b->name && a->int_val == b->int_val &&
         a->bool_val == b->bool_val && a->str_val == b->str_val && eq_vec(a->args, b->args);
}

bool eq(const ModExprPtr& a, const ModExprPtr& b) {
  if (!a || !b) return !a && !b;
  return a->kind == b->kind && a->path == b->path && eq_vec(a->decls, b->decls) &&
         eq(a->fn, b->fn) && eq_vec(a->args, b->args) && a->implicit_style == b->implicit_style;
}

bool eq(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind) return false;
  if (a->int_val != b->int_val || a->float_val != b->float_val || a->str_val != b->str_val ||
      a->bool_val != b->bool_val)
    return false;
  if (a->path != b->path || a->name != b->name) return false;
  if (!eq_params(a->params, b->params) || !eq(a->body, b->body)) return false;
  if (!eq(a->fn, b->fn)) return false;
  if (a->args.size() != b->args.size()) return false;
  for (size_t i = 0; i < a->args.size(); ++i) {
    if (!eq(a->args[i].expr, b->args[i].expr)) return false;
    if (!eq(a->args[i].mod, b->args[i].mod)) return false;
  }
  if (a->is_rec != b->is_rec || a->unit_pat != b->unit_pat) return false;
  if (!eq(a->ascription, b->ascription) || !eq(a->bound, b->bound)) return false;
  if (a->mod_name != b->mod_name || !eq_params(a->mod_params, b->mod_params) ||
      !eq(a->mod_expr, b->mod_expr))
    return false;
  if (!eq_vec(a->items, b->items)) return false;
  if (!eq(a->cond, b->cond) || !eq(a->then_e, b->then_e) || !eq(a->else_e, b->else_e))
    return false;
  if (!eq(a->rhs, b->rhs)) return false;
  if (!eq(a->scrutinee, b->scrutinee)) return false;
  if (a->cases.size() != b->cases.size()) return false;
  for (size_t i = 0; i < a->cases.size(); ++i) {
    if (!eq(a->cases[i].pat, b->cases[i].pat)) return false;
    if (!eq(a->cases[i].body, b->cases[i].body)) return false;
  }
  return true;
}

bool eq(const DeclPtr& a, const DeclPtr& b) {
  if (!a || !b) return !a && !b;
  return a->kind == b->kind && a->is_rec == b->is_rec && a->unit_pat == b->unit_pat &&
         a->name == b->name && eq_params(a->params, b->params) &&
         eq(a->ascription, b->ascription) && eq(a->expr, b->expr) &&
         a->is_implicit == b->is_implicit && eq(a->mod_ascription, b->mod_ascription) &&
         eq(a->mod_expr, b->mod_expr) && eq(a->mod_type, b->mod_type) && a->path == b->path &&
         a->type_params == b->type_params && eq(a->manifest, b->manifest);
}

}  // namespace

bool equal(const Program& a, const Program& b) { return eq_vec(a.decls, b.decls); }
bool equal(const Expr& a, const Expr& b) {
  auto pa = std::make_shared<Expr>(a);
  auto pb = std::make_shared<Expr>(b);
  return eq(pa, pb);
}

}  // namespace implicitml::ast
