#include "implicitml/unify.hpp"

namespace implicitml {

using namespace types;

TypePtr Unifier::expand(const TypePtr& m) {
  auto t = env::expand_member(env_, m->path, m->name, m->args, Span{});
  if (t) return t;
  // Abstract member rooted at a module variable under active resolution:
  // replace it with a variable and record the equation as a constraint.
  if (obs_) {
    auto ob = obs_->find(path_root(*m->path));
    if (ob) {
      if (m->args.empty()) {
        for (auto& c : ob->constraints)
          if (c.args.empty() && c.member == m->name && path_equal(*c.rel, *m->path))
            return mk_var(c.var);
      }
      int v = store_.fresh();
      obs_->record(ob, m->path, m->name, m->args, v);
      return mk_var(v);
    }
  }
  return nullptr;
}

bool Unifier::unify(TypePtr a, TypePtr b) {
  a = store_.shorten(a);
  b = store_.shorten(b);
  if (a == b) return true;

  // Head-normalize members through their manifests.
  while (a->kind == Type::Member) {
    auto e = expand(a);
    if (!e) break;
    a = store_.shorten(e);
  }
  while (b->kind == Type::Member) {
    auto e = expand(b);
    if (!e) break;
    b = store_.shorten(e);
  }

  if (a->kind == Type::Var) {
    if (b->kind == Type::Var && a->id == b->id) return true;
    if (store_.occurs(a->id, b)) return false;
    store_.bind(a->id, b);
    return true;
  }
  if (b->kind == Type::Var) {
    if (store_.occurs(b->id, a)) return false;
    store_.bind(b->id, a);
    return true;
  }
  if (a->kind != b->kind) return false;

  switch (a->kind) {
    case Type::Rigid:
      return a->id == b->id;
    case Type::Ctor: {
      if (a->name != b->name || a->args.size() != b->args.size()) return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!unify(a->args[i], b->args[i])) return false;
      return true;
    }
    case Type::Member: {
      // Both abstract here. Abstract constructors are injective, but only
      // identical paths may be decomposed.
      if (a->name != b->name || !path_equal(*a->path, *b->path) ||
          a->args.size() != b->args.size())
        return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!unify(a->args[i], b->args[i])) return false;
      return true;
    }
    case Type::Tuple: {
      if (a->args.size() != b->args.size()) return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!unify(a->args[i], b->args[i])) return false;
      return true;
    }
    case Type::Arrow:
      return unify(a->a, b->a) && unify(a->b, b->b);
    case Type::ImplicitArrow: {
      if (!sig_equal(*a->param_sig, *b->param_sig)) return false;
      auto bcod = subst_path(b->b, b->param_name, ModPath::mk_name(a->param_name));
      return unify(a->b, bcod);
    }
    default:
      return false;
  }
}

TypePtr Unifier::instantiate(const Scheme& s) {
  std::map<int, TypePtr> sub;
  for (int v : s.vars) sub[v] = store_.fresh_var();
  return subst_vars(s.body, sub);
}

TypePtr Unifier::skolemize(const Scheme& s) {
  std::map<int, TypePtr> sub;
  for (int v : s.vars) sub[v] = mk_rigid(store_.fresh_rigid());
  return subst_vars(s.body, sub);
}

// -- structural signature equivalence --------------------------------------

namespace {

struct EqCtx {
  std::map<int, int> vars;    // a var id -> b var id (bijective)
  std::map<int, int> rigids;  // a rigid id -> b rigid id
};

bool map_bijective(std::map<int, int>& m, int a, int b) {
  auto it = m.find(a);
  if (it != m.end()) return it->second == b;
  for (auto& kv : m)
    if (kv.second == b) return false;
  m[a] = b;
  return true;
}

bool type_eq(const TypePtr& a, const TypePtr& b, EqCtx& ctx);
bool sig_eq(const Signature& a, const Signature& b, EqCtx& ctx);

bool type_eq(const TypePtr& a, const TypePtr& b, EqCtx& ctx) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Type::Var:
      return map_bijective(ctx.vars, a->id, b->id);
    case Type::Rigid:
      return map_bijective(ctx.rigids, a->id, b->id);
    case Type::Ctor:
      if (a->name != b->name || a->args.size() != b->args.size()) return false;
      break;
    case Type::Member:
      if (a->name != b->name || !path_equal(*a->path, *b->path) ||
          a->args.size() != b->args.size())
        return false;
      break;
    case Type::Tuple:
      if (a->args.size() != b->args.size()) return false;
      break;
    case Type::Arrow:
      return type_eq(a->a, b->a, ctx) && type_eq(a->b, b->b, ctx);
    case Type::ImplicitArrow: {
      if (!sig_eq(*a->param_sig, *b->param_sig, ctx)) return false;
      auto bcod = subst_path(b->b, b->param_name, ModPath::mk_name(a->param_name));
      return type_eq(a->b, bcod, ctx);
    }
  }
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!type_eq(a->args[i], b->args[i], ctx)) return false;
  return true;
}

bool sig_eq(const Signature& a, const Signature& b, EqCtx& ctx) {
  if (a.items.size() != b.items.size()) return false;
  // Align b's self references with a's.
  auto bp = std::make_shared<Signature>(b);
  if (a.self != b.self)
    bp = subst_path_sig(bp, b.self, ModPath::mk_name(a.self));
  for (auto& ia : a.items) {
    const SigEntry* ib = bp->find(ia.kind, ia.name);
    if (!ib) return false;
    switch (ia.kind) {
      case SigEntry::Type: {
        if (ia.type.params.size() != ib->type.params.size()) return false;
        for (size_t i = 0; i < ia.type.params.size(); ++i)
          if (!map_bijective(ctx.rigids, ia.type.params[i], ib->type.params[i])) return false;
        if (!type_eq(ia.type.manifest, ib->type.manifest, ctx)) return false;
        break;
      }
      case SigEntry::Val: {
        if (ia.val.vars.size() != ib->val.vars.size()) return false;
        EqCtx inner = ctx;
        if (!type_eq(ia.val.body, ib->val.body, inner)) return false;
        ctx.rigids = inner.rigids;
        break;
      }
      case SigEntry::Module: {
        if (ia.mod.implicit != ib->mod.implicit) return false;
        if (!ia.mod.alias != !ib->mod.alias) return false;
        if (ia.mod.alias && !path_equal(*ia.mod.alias, *ib->mod.alias)) return false;
        if (!ia.mod.sig != !ib->mod.sig) return false;
        if (ia.mod.sig && !sig_eq(*ia.mod.sig, *ib->mod.sig, ctx)) return false;
        break;
      }
    }
  }
  return true;
}

}  // namespace

bool sig_equal(const Signature& a, const Signature& b) {
  EqCtx ctx;
  return sig_eq(a, b, ctx);
}

}  // namespace implicitml
