#include "implicitml/env.hpp"

#include <algorithm>
#include <unordered_set>

namespace implicitml::env {

using namespace types;

namespace {
constexpr int kAliasDepthLimit = 64;

ModuleInfoPtr resolve_rec(const Env& e, const ModPathPtr& p, Span span, int depth);
ModuleInfoPtr apply_rec(const Env& e, const ModuleInfoPtr& fn,
                        const std::vector<ModuleInfoPtr>& args, Span span, int depth);

ModPathPtr normalize_rec(const Env& e, const ModPathPtr& p, Span span, int depth) {
  return resolve_rec(e, p, span, depth)->nf;
}

[[noreturn]] void alias_cycle(const ModPathPtr& p, Span span) {
  fail(Code::AliasCycle, span,
       "module alias expansion did not terminate at '" + path_str(*p) + "'",
       {{"path", path_str(*p)}});
}

ModuleInfoPtr resolve_rec(const Env& e, const ModPathPtr& p, Span span, int depth) {
  if (depth > kAliasDepthLimit) alias_cycle(p, span);
  switch (p->kind) {
    case ModPath::Name: {
      auto info = e.find_module(p->name);
      if (!info) fail(Code::Unbound, span, "unbound module '" + p->name + "'");
      return info;
    }
    case ModPath::Proj: {
      auto base = resolve_rec(e, p->base, span, depth + 1);
      if (base->is_functor)
        fail(Code::Type, span, "functor '" + path_str(*p->base) + "' used as a module");
      auto sit = base->submodules.find(p->name);
      if (sit != base->submodules.end()) return sit->second;
      auto* item = base->sig->find(SigEntry::Module, p->name);
      if (!item)
        fail(Code::Unbound, span,
             "module '" + path_str(*p->base) + "' has no submodule '" + p->name + "'");
      auto out = std::make_shared<ModuleInfo>();
      out->display = p->name;
      out->implicit = item->mod.implicit;
      out->sig = subst_path_sig(item->mod.sig, base->sig->self, base->nf);
      if (item->mod.alias) {
        auto target = path_subst(item->mod.alias, base->sig->self, base->nf);
        auto resolved = resolve_rec(e, target, span, depth + 1);
        out->sig = resolved->sig ? resolved->sig : out->sig;
        out->nf = resolved->nf;
        out->is_functor = resolved->is_functor;
        out->params = resolved->params;
        out->result = resolved->result;
        out->alias = resolved->alias;
      } else {
        out->nf = ModPath::mk_proj(base->nf, p->name);
      }
      return out;
    }
    case ModPath::App: {
      auto fn = resolve_rec(e, p->base, span, depth + 1);
      if (!fn->is_functor)
        fail(Code::Type, span, "module '" + path_str(*p->base) + "' is not a functor");
      std::vector<ModuleInfoPtr> args;
      for (auto& a : p->args) {
        auto ai = resolve_rec(e, a, span, depth + 1);
        if (ai->is_functor)
          fail(Code::Type, span, "functor '" + path_str(*a) + "' used as a module");
        args.push_back(ai);
      }
      return apply_rec(e, fn, args, span, depth);
    }
  }
  fail(Code::Unbound, span, "malformed module path");
}

ModuleInfoPtr apply_rec(const Env& e, const ModuleInfoPtr& fn,
                        const std::vector<ModuleInfoPtr>& args, Span span, int depth) {
  if (fn->params.size() != args.size())
    fail(Code::Type, span,
         "functor '" + fn->display + "' expects " + std::to_string(fn->params.size()) +
             " argument(s), got " + std::to_string(args.size()));
  auto out = std::make_shared<ModuleInfo>();
  out->display = fn->display;
  SigPtr res = fn->result;
  for (size_t i = 0; i < args.size(); ++i)
    res = subst_path_sig(res, fn->params[i].first, args[i]->nf);
  out->sig = res;
  if (fn->alias) {
    ModPathPtr target = fn->alias;
    for (size_t i = 0; i < args.size(); ++i)
      target = path_subst(target, fn->params[i].first, args[i]->nf);
    auto resolved = resolve_rec(e, target, span, depth + 1);
    out->nf = resolved->nf;
    if (resolved->sig) out->sig = resolved->sig;
  } else {
    std::vector<ModPathPtr> arg_nfs;
    for (auto& a : args) arg_nfs.push_back(a->nf);
    out->nf = ModPath::mk_app(ModPath::mk_name(fn->display), std::move(arg_nfs));
  }
  return out;
}

}  // namespace

const Scheme* Env::find_value(const std::string& name) const {
  auto it = values.find(name);
  return it == values.end() ? nullptr : &it->second;
}
ModuleInfoPtr Env::find_module(const std::string& name) const {
  auto it = modules.find(name);
  return it == modules.end() ? nullptr : it->second;
}
SigPtr Env::find_module_type(const std::string& name) const {
  auto it = module_types.find(name);
  return it == module_types.end() ? nullptr : it->second;
}
void Env::add_implicit(const std::string& name, ModuleInfoPtr info) {
  implicits.push_back({name, std::move(info)});
}

std::vector<std::pair<std::string, ModuleInfoPtr>> Env::implicit_scope() const {
  std::vector<std::pair<std::string, ModuleInfoPtr>> out;
  std::unordered_set<std::string> seen;
  for (auto it = implicits.rbegin(); it != implicits.rend(); ++it) {
    if (seen.count(it->first)) continue;
    seen.insert(it->first);
    out.push_back(*it);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

ModPathPtr normalize_path(const Env& e, const ModPathPtr& p, Span span) {
  return normalize_rec(e, p, span, 0);
}

ModuleInfoPtr resolve_module(const Env& e, const ModPathPtr& p, Span span) {
  return resolve_rec(e, p, span, 0);
}

ModuleInfoPtr apply_functor(const Env& e, const ModuleInfoPtr& fn,
                            const std::vector<ModPathPtr>& args, Span span) {
  std::vector<ModuleInfoPtr> infos;
  for (auto& a : args) {
    auto ai = resolve_rec(e, a, span, 0);
    if (ai->is_functor)
      fail(Code::Type, span, "functor '" + path_str(*a) + "' used as a module");
    infos.push_back(ai);
  }
  return apply_rec(e, fn, infos, span, 0);
}

Scheme project_value(const Env& e, const ModPathPtr& p, const std::string& name, Span span) {
  auto info = resolve_module(e, p, span);
  if (info->is_functor)
    fail(Code::Type, span, "functor '" + path_str(*p) + "' used as a module");
  auto* item = info->sig->find(SigEntry::Val, name);
  if (!item)
    fail(Code::Unbound, span,
         "module '" + path_str(*p) + "' has no value member '" + name + "'");
  Scheme s = item->val;
  s.body = subst_path(s.body, info->sig->self, info->nf);
  return s;
}

TypePtr subst_rigids(const TypePtr& t, const std::map<int, TypePtr>& sub) {
  if (!t) return t;
  switch (t->kind) {
    case Type::Rigid: {
      auto it = sub.find(t->id);
      return it == sub.end() ? t : it->second;
    }
    case Type::Var:
      return t;
    case Type::Ctor:
    case Type::Tuple:
    case Type::Member: {
      auto n = std::make_shared<Type>(*t);
      for (auto& a : n->args) a = subst_rigids(a, sub);
      return n;
    }
    case Type::Arrow: {
      auto n = std::make_shared<Type>(*t);
      n->a = subst_rigids(n->a, sub);
      n->b = subst_rigids(n->b, sub);
      return n;
    }
    case Type::ImplicitArrow: {
      auto n = std::make_shared<Type>(*t);
      n->b = subst_rigids(n->b, sub);
      return n;
    }
  }
  return t;
}

TypePtr expand_member(const Env& e, const ModPathPtr& p, const std::string& member,
                      const std::vector<TypePtr>& args, Span span) {
  ModuleInfoPtr info;
  try {
    info = resolve_module(e, p, span);
  } catch (const CompileError&) {
    // Paths rooted at out-of-scope names (skolemized parameters) stay rigid.
    return nullptr;
  }
  if (info->is_functor || !info->sig) return nullptr;
  auto* item = info->sig->find(SigEntry::Type, member);
  if (!item) return nullptr;
  if (!item->type.manifest) return nullptr;
  if (item->type.params.size() != args.size()) return nullptr;
  std::map<int, TypePtr> sub;
  for (size_t i = 0; i < args.size(); ++i) sub[item->type.params[i]] = args[i];
  auto t = subst_rigids(item->type.manifest, sub);
  return subst_path(t, info->sig->self, info->nf);
}

}  // namespace implicitml::env
