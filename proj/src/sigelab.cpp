#include "implicitml/sigelab.hpp"

namespace implicitml {

using namespace types;

namespace {

struct Builtin {
  const char* name;
  int arity;
};
const Builtin kBuiltins[] = {{"unit", 0}, {"int", 0},    {"bool", 0},  {"string", 0},
                             {"float", 0}, {"list", 1},   {"option", 1}};

const Builtin* builtin(const std::string& name) {
  for (auto& b : kBuiltins)
    if (name == b.name) return &b;
  return nullptr;
}

}  // namespace

ModPathPtr TypeElab::path(const std::vector<std::string>& p, Span span) {
  ModPathPtr out;
  auto it = renames.find(p[0]);
  out = it != renames.end() ? it->second : ModPath::mk_name(p[0]);
  for (size_t i = 1; i < p.size(); ++i) out = ModPath::mk_proj(out, p[i]);
  try {
    return env::resolve_module(env_, out, span)->nf;
  } catch (const CompileError& e) {
    if (e.diag().code == Code::AliasCycle) throw;
    // Roots that are not environment modules (signature selfs, implicit
    // parameters being introduced) stay syntactic.
    return out;
  }
}

std::vector<int> TypeElab::take_scheme_vars() {
  auto out = std::move(scheme_vars_);
  scheme_vars_.clear();
  return out;
}

TypePtr TypeElab::named(const std::string& name, std::vector<TypePtr> args, Span span) {
  auto lit = locals.find(name);
  if (lit != locals.end()) {
    if (lit->second.params.size() != args.size())
      fail(Code::Type, span,
           "type '" + name + "' expects " + std::to_string(lit->second.params.size()) +
               " argument(s), got " + std::to_string(args.size()));
    std::map<int, TypePtr> sub;
    for (size_t i = 0; i < args.size(); ++i) sub[lit->second.params[i]] = args[i];
    return env::subst_rigids(lit->second.body, sub);
  }
  if (auto* b = builtin(name)) {
    if (b->arity != static_cast<int>(args.size()))
      fail(Code::Type, span,
           "type '" + name + "' expects " + std::to_string(b->arity) + " argument(s), got " +
               std::to_string(args.size()));
    return mk_ctor(name, std::move(args));
  }
  fail(Code::Unbound, span, "unbound type constructor '" + name + "'");
}

TypePtr TypeElab::type(const ast::TypeAst& t) {
  switch (t.kind) {
    case ast::TypeAst::Var: {
      auto it = tyvars.find(t.name);
      if (it != tyvars.end()) return it->second;
      switch (policy) {
        case Scheme: {
          int id = fresh_scheme_var();
          scheme_vars_.push_back(id);
          return tyvars[t.name] = mk_var(id);
        }
        case Store:
          return tyvars[t.name] = store_.fresh_var();
        case Reject:
          fail(Code::Unbound, t.span, "unbound type variable '" + t.name + "'");
      }
      break;
    }
    case ast::TypeAst::Name: {
      std::vector<TypePtr> args;
      for (auto& a : t.args) args.push_back(type(*a));
      return named(t.name, std::move(args), t.span);
    }
    case ast::TypeAst::Member: {
      std::vector<TypePtr> args;
      for (auto& a : t.args) args.push_back(type(*a));
      auto p = path(t.path, t.span);
      // Validate the member when the module is known in the environment.
      env::ModuleInfoPtr info;
      try {
        info = env::resolve_module(env_, p, t.span);
      } catch (const CompileError& e) {
        if (e.diag().code == Code::AliasCycle) throw;
      }
      if (info && !info->is_functor && info->sig) {
        auto* item = info->sig->find(SigEntry::Type, t.name);
        if (!item)
          fail(Code::Unbound, t.span,
               "module '" + path_str(*p) + "' has no type member '" + t.name + "'");
        if (item->type.params.size() != args.size())
          fail(Code::Type, t.span,
               "type '" + path_str(*p) + "." + t.name + "' expects " +
                   std::to_string(item->type.params.size()) + " argument(s), got " +
                   std::to_string(args.size()));
      }
      return mk_member(p, t.name, std::move(args));
    }
    case ast::TypeAst::Tuple: {
      std::vector<TypePtr> comps;
      for (auto& a : t.args) comps.push_back(type(*a));
      return mk_tuple(std::move(comps));
    }
    case ast::TypeAst::Arrow:
      return mk_arrow(type(*t.a), type(*t.b));
    case ast::TypeAst::ImplicitArrow: {
      auto sig = modtype(*t.param_type);
      std::string internal = t.param_name + "@" + std::to_string(fresh_self_id());
      auto saved = renames;
      renames[t.param_name] = ModPath::mk_name(internal);
      auto cod = type(*t.b);
      renames = saved;
      return mk_implicit_arrow(internal, t.param_name, sig, cod);
    }
  }
  fail(Code::Type, t.span, "malformed type");
}

SigPtr TypeElab::modtype(const ast::ModType& mt) {
  switch (mt.kind) {
    case ast::ModType::Name: {
      if (mt.path.size() == 1) {
        auto s = env_.find_module_type(mt.path[0]);
        if (s) return s;
      }
      fail(Code::Unbound, mt.span, "unbound module type '" + mt.path[0] + "'");
    }
    case ast::ModType::Sig: {
      auto sig = std::make_shared<Signature>();
      sig->self = fresh_self();
      auto saved_locals = locals;
      auto saved_renames = renames;
      for (auto& item : mt.items) {
        SigEntry entry;
        entry.name = item.name;
        switch (item.kind) {
          case ast::SigItem::Type: {
            entry.kind = SigEntry::Type;
            std::vector<int> params;
            std::vector<TypePtr> placeholders;
            auto saved_tyvars = tyvars;
            auto saved_policy = policy;
            for (auto& p : item.type_params) {
              int r = store_.fresh_rigid();
              params.push_back(r);
              placeholders.push_back(mk_rigid(r, p));
              tyvars[p] = placeholders.back();
            }
            entry.type.params = params;
            if (item.manifest) {
              policy = Reject;
              entry.type.manifest = type(*item.manifest);
            }
            tyvars = saved_tyvars;
            policy = saved_policy;
            locals[item.name] = {params,
                                 mk_member(ModPath::mk_name(sig->self), item.name, placeholders)};
            break;
          }
          case ast::SigItem::Val: {
            entry.kind = SigEntry::Val;
            auto saved_tyvars = tyvars;
            auto saved_policy = policy;
            tyvars.clear();
            policy = Scheme;
            auto saved_vars = std::move(scheme_vars_);
            scheme_vars_.clear();
            entry.val.body = type(*item.val_type);
            entry.val.vars = take_scheme_vars();
            scheme_vars_ = std::move(saved_vars);
            tyvars = saved_tyvars;
            policy = saved_policy;
            break;
          }
          case ast::SigItem::Module:
          case ast::SigItem::ImplicitModule: {
            entry.kind = SigEntry::Module;
            entry.mod.implicit = item.kind == ast::SigItem::ImplicitModule;
            if (item.mod_type) {
              entry.mod.sig = modtype(*item.mod_type);
            } else {
              auto p = path(item.alias_path, item.span);
              entry.mod.alias = p;
              try {
                auto info = env::resolve_module(env_, p, item.span);
                if (!info->is_functor) entry.mod.sig = info->sig;
              } catch (const CompileError&) {
              }
            }
            renames[item.name] = ModPath::mk_proj(ModPath::mk_name(sig->self), item.name);
            break;
          }
          case ast::SigItem::ModuleAlias: {
            entry.kind = SigEntry::Module;
            auto p = path(item.alias_path, item.span);
            entry.mod.alias = p;
            try {
              auto info = env::resolve_module(env_, p, item.span);
              if (!info->is_functor) entry.mod.sig = info->sig;
            } catch (const CompileError&) {
            }
            renames[item.name] = ModPath::mk_proj(ModPath::mk_name(sig->self), item.name);
            break;
          }
        }
        sig->items.push_back(std::move(entry));
      }
      locals = saved_locals;
      renames = saved_renames;
      return sig;
    }
    case ast::ModType::With: {
      auto base = modtype(*mt.base);
      auto sig = std::make_shared<Signature>(*base);
      sig->name.clear();  // the constraint makes it a different module type
      SigEntry* target = nullptr;
      for (auto& it : sig->items)
        if (it.kind == SigEntry::Type && it.name == mt.with_name) target = &it;
      if (!target)
        fail(Code::Type, mt.span,
             "module type has no type member '" + mt.with_name + "' to constrain");
      if (target->type.params.size() != mt.with_params.size())
        fail(Code::Type, mt.span,
             "with-constraint arity mismatch on '" + mt.with_name + "'");
      std::vector<std::pair<std::string, TypePtr>> saved;
      for (size_t i = 0; i < mt.with_params.size(); ++i) {
        auto& name = mt.with_params[i];
        saved.push_back({name, tyvars.count(name) ? tyvars[name] : nullptr});
        tyvars[name] = mk_rigid(target->type.params[i], name);
      }
      target->type.manifest = type(*mt.with_type);
      for (auto& [name, old] : saved) {
        if (old)
          tyvars[name] = old;
        else
          tyvars.erase(name);
      }
      return sig;
    }
  }
  fail(Code::Type, mt.span, "malformed module type");
}

}  // namespace implicitml
