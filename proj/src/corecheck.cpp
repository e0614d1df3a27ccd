#include "implicitml/corecheck.hpp"

#include <set>

#include "implicitml/builtins.hpp"
#include "implicitml/inclusion.hpp"
#include "implicitml/sigelab.hpp"
#include "implicitml/unify.hpp"

namespace implicitml {

using namespace types;
using namespace core;

namespace {

class CoreChecker {
 public:
  explicit CoreChecker(const TypeStore& seed) : store_(seed) {}

  void run(const CoreProgram& p) {
    env::Env e = builtin_env(store_);
    for (auto& d : p.decls) decl(e, *d, nullptr);
  }

 private:
  TypeStore store_;

  void unify_or_fail(const env::Env& e, const TypePtr& a, const TypePtr& b, Span span) {
    Unifier u(store_, e, nullptr);
    if (!u.unify(a, b))
      fail(Code::Type, span,
           "core check: this expression has type " + user_str(store_.resolve(a), store_) +
               " but " + user_str(store_.resolve(b), store_) + " was expected");
  }

  // -- generalization (same algorithm as inference, minus obligations) ------

  void collect_free(const TypePtr& t, std::vector<int>& out, std::set<int>& seen) const {
    if (!t) return;
    if (t->kind == Type::Var && t->id >= 0 && !store_.bound(t->id)) {
      if (seen.insert(t->id).second) out.push_back(t->id);
      return;
    }
    for (auto& a : t->args) collect_free(a, out, seen);
    if (t->a) collect_free(t->a, out, seen);
    if (t->b) collect_free(t->b, out, seen);
  }

  void env_free_vars(const env::Env& e, std::set<int>& out) const {
    std::vector<int> tmp;
    for (auto& [name, s] : e.values) collect_free(store_.resolve(s.body), tmp, out);
  }

  Scheme generalize(const env::Env& e, const TypePtr& t0) {
    TypePtr t = store_.resolve(t0);
    std::vector<int> free;
    std::set<int> seen;
    collect_free(t, free, seen);
    if (free.empty()) return Scheme{{}, t};
    std::set<int> envfree;
    env_free_vars(e, envfree);
    Scheme s;
    for (int id : free) {
      if (envfree.count(id)) continue;
      int neg = fresh_scheme_var();
      store_.bind(id, mk_var(neg));
      s.vars.push_back(neg);
    }
    s.body = store_.resolve(t);
    return s;
  }

  // -- patterns -------------------------------------------------------------

  TypePtr pattern(env::Env& e, const ast::Pattern& p) {
    switch (p.kind) {
      case ast::Pattern::Var: {
        auto v = store_.fresh_var();
        e.values[p.name] = Scheme{{}, v};
        return v;
      }
      case ast::Pattern::Wildcard:
        return store_.fresh_var();
      case ast::Pattern::Unit:
        return mk_ctor("unit");
      case ast::Pattern::Int:
        return mk_ctor("int");
      case ast::Pattern::Bool:
        return mk_ctor("bool");
      case ast::Pattern::String:
        return mk_ctor("string");
      case ast::Pattern::Tuple: {
        std::vector<TypePtr> comps;
        for (auto& a : p.args) comps.push_back(pattern(e, *a));
        return mk_tuple(std::move(comps));
      }
      case ast::Pattern::Nil:
        return mk_ctor("list", {store_.fresh_var()});
      case ast::Pattern::Cons: {
        auto th = pattern(e, *p.args[0]);
        auto tt = pattern(e, *p.args[1]);
        unify_or_fail(e, tt, mk_ctor("list", {th}), p.span);
        return tt;
      }
      case ast::Pattern::NoneP:
        return mk_ctor("option", {store_.fresh_var()});
      case ast::Pattern::SomeP:
        return mk_ctor("option", {pattern(e, *p.args[0])});
    }
    fail(Code::Type, p.span, "malformed pattern");
  }

  // -- expressions ----------------------------------------------------------

  TypePtr expr(const env::Env& e, const CExpr& ex) {
    switch (ex.kind) {
      case CExpr::Int:
        return mk_ctor("int");
      case CExpr::Float:
        return mk_ctor("float");
      case CExpr::String:
        return mk_ctor("string");
      case CExpr::Bool:
        return mk_ctor("bool");
      case CExpr::Unit:
        return mk_ctor("unit");

      case CExpr::Var: {
        auto* s = e.find_value(ex.name);
        if (!s) fail(Code::Unbound, ex.span, "core check: unbound value '" + ex.name + "'");
        Unifier u(store_, e, nullptr);
        return u.instantiate(*s);
      }
      case CExpr::Member: {
        Unifier u(store_, e, nullptr);
        return u.instantiate(env::project_value(e, ex.path, ex.name, ex.span));
      }

      case CExpr::Lambda: {
        env::Env e2 = e;
        std::vector<TypePtr> doms;
        for (size_t i = 0; i < ex.params.size(); ++i) {
          auto& p = ex.params[i];
          auto annot = i < ex.param_annots.size() ? ex.param_annots[i] : nullptr;
          if (p == "()") {
            doms.push_back(mk_ctor("unit"));
          } else {
            TypePtr v;
            if (annot) {
              TypeElab te(e2, store_);
              te.policy = TypeElab::Store;
              v = te.type(*annot);
            } else {
              v = store_.fresh_var();
            }
            e2.values[p] = Scheme{{}, v};
            doms.push_back(v);
          }
        }
        TypePtr t = expr(e2, *ex.body);
        for (auto it = doms.rbegin(); it != doms.rend(); ++it) t = mk_arrow(*it, t);
        return t;
      }

      case CExpr::App: {
        TypePtr tf = expr(e, *ex.fn);
        for (auto& a : ex.args) {
          tf = store_.shorten(tf);
          if (tf->kind == Type::ImplicitArrow)
            fail(Code::Type, ex.span,
                 "core check: a packed functor must be applied to a module argument");
          auto ta = expr(e, *a);
          auto r = store_.fresh_var();
          unify_or_fail(e, tf, mk_arrow(ta, r), a->span);
          tf = r;
        }
        return tf;
      }

      case CExpr::Let: {
        env::Env e2 = e;
        TypePtr bt;
        if (ex.is_rec) {
          auto fv = store_.fresh_var();
          env::Env erec = e;
          erec.values[ex.name] = Scheme{{}, fv};
          bt = expr(erec, *ex.bound);
          unify_or_fail(e, fv, bt, ex.span);
        } else {
          bt = expr(e, *ex.bound);
        }
        if (ex.name.empty())
          unify_or_fail(e, bt, mk_ctor("unit"), ex.bound->span);
        else
          e2.values[ex.name] = generalize(e, bt);
        return expr(e2, *ex.body);
      }

      case CExpr::LocalMod: {
        env::Env e2 = e;
        auto info = modexpr(e2, *ex.mod, ModPath::mk_name(ex.name), ex.name);
        e2.modules[ex.name] = info;
        return expr(e2, *ex.body);
      }

      case CExpr::Tuple: {
        std::vector<TypePtr> comps;
        for (auto& it : ex.items) comps.push_back(expr(e, *it));
        return mk_tuple(std::move(comps));
      }
      case CExpr::ListLit: {
        auto elem = store_.fresh_var();
        for (auto& it : ex.items) unify_or_fail(e, expr(e, *it), elem, it->span);
        return mk_ctor("list", {elem});
      }
      case CExpr::Ctor: {
        if (ex.name == "None") return mk_ctor("option", {store_.fresh_var()});
        if (ex.name == "Some") return mk_ctor("option", {expr(e, *ex.items[0])});
        auto th = expr(e, *ex.items[0]);
        auto tt = expr(e, *ex.items[1]);
        unify_or_fail(e, tt, mk_ctor("list", {th}), ex.items[1]->span);
        return store_.resolve(tt);
      }

      case CExpr::If: {
        unify_or_fail(e, expr(e, *ex.cond), mk_ctor("bool"), ex.cond->span);
        auto tt = expr(e, *ex.then_e);
        unify_or_fail(e, expr(e, *ex.else_e), tt, ex.else_e->span);
        return tt;
      }
      case CExpr::Seq: {
        expr(e, *ex.bound);
        return expr(e, *ex.rhs);
      }
      case CExpr::Match: {
        auto ts = expr(e, *ex.scrutinee);
        auto tr = store_.fresh_var();
        for (auto& c : ex.cases) {
          env::Env ec = e;
          auto tp = pattern(ec, *c.pat);
          unify_or_fail(e, ts, tp, c.pat->span);
          unify_or_fail(ec, expr(ec, *c.body), tr, c.body->span);
        }
        return store_.resolve(tr);
      }

      case CExpr::Pack: {
        env::Env e2 = e;
        for (auto& p : ex.mparams) {
          if (!p.sig) fail(Code::Type, ex.span, "core check: unannotated module parameter");
          auto info = std::make_shared<env::ModuleInfo>();
          info->sig = p.sig;
          info->nf = ModPath::mk_name(p.internal);
          info->display = p.name;
          info->access = ModPath::mk_name(p.name);
          e2.modules[p.name] = info;
          e2.modules[p.internal] = info;
        }
        TypePtr t = expr(e2, *ex.body);
        for (auto it = ex.mparams.rbegin(); it != ex.mparams.rend(); ++it)
          t = mk_implicit_arrow(it->internal, it->name, it->sig, t);
        return t;
      }

      case CExpr::Unpack: {
        TypePtr tf = expr(e, *ex.fn);
        for (auto& m : ex.margs) {
          tf = store_.shorten(tf);
          if (tf->kind != Type::ImplicitArrow)
            fail(Code::Type, ex.span,
                 "core check: module argument supplied to a non-functor value");
          if (m->kind != CModExpr::Path)
            fail(Code::Type, m->span, "core check: module arguments must be paths");
          auto info = env::resolve_module(e, m->path, m->span);
          if (info->is_functor)
            fail(Code::Type, m->span, "core check: functor used as a module argument");
          std::string why;
          if (!signature_includes(e, store_, nullptr, info, *tf->param_sig, &why))
            fail(Code::SigMismatch, m->span,
                 "core check: module '" + path_str(*m->path) +
                     "' does not match the expected signature: " + why);
          tf = subst_path(tf->b, tf->param_name, info->nf);
        }
        return tf;
      }
    }
    fail(Code::Type, ex.span, "core check: malformed expression");
  }

  // -- modules --------------------------------------------------------------

  // Checks a module expression. Structures are checked against their recorded
  // signature: the module is registered up front so member types referring to
  // it expand, then every binding's body is verified against the signature's
  // scheme for it.
  env::ModuleInfoPtr modexpr(env::Env& e, const CModExpr& me, const ModPathPtr& self_nf,
                             const std::string& display) {
    switch (me.kind) {
      case CModExpr::Path: {
        auto resolved = env::resolve_module(e, me.path, me.span);
        return std::make_shared<env::ModuleInfo>(*resolved);
      }
      case CModExpr::Struct:
        return strct(e, me, self_nf, display);
      case CModExpr::Functor: {
        auto info = std::make_shared<env::ModuleInfo>();
        info->is_functor = true;
        info->display = display;
        env::Env eb = e;
        std::vector<ModPathPtr> internals;
        for (auto& p : me.mparams) {
          auto pinfo = std::make_shared<env::ModuleInfo>();
          pinfo->sig = p.sig;
          pinfo->nf = ModPath::mk_name(p.internal);
          pinfo->display = p.name;
          eb.modules[p.name] = pinfo;
          eb.modules[p.internal] = pinfo;
          info->params.push_back({p.internal, p.sig});
          internals.push_back(pinfo->nf);
        }
        if (me.body->kind == CModExpr::Path) {
          auto resolved = env::resolve_module(eb, me.body->path, me.body->span);
          if (resolved->is_functor)
            fail(Code::Type, me.body->span, "core check: a functor body must be ground");
          info->result = resolved->sig;
          info->alias = resolved->nf;
        } else {
          auto body = modexpr(eb, *me.body, ModPath::mk_app(self_nf, internals), display);
          info->result = body->sig;
          info->submodules = body->submodules;
        }
        return info;
      }
    }
    fail(Code::Type, me.span, "core check: malformed module expression");
  }

  env::ModuleInfoPtr strct(const env::Env& e0, const CModExpr& me, const ModPathPtr& self_nf,
                           const std::string& display) {
    if (!me.sig) fail(Code::Type, me.span, "core check: structure lacks a signature");
    auto info = std::make_shared<env::ModuleInfo>();
    info->sig = me.sig;
    info->nf = self_nf;
    info->display = display;

    env::Env e = e0;
    // Register under the root of the self path so member expansion works
    // while the bindings are being verified.
    if (self_nf->kind == ModPath::Name) e.modules[self_nf->name] = info;

    for (auto& d : me.decls) {
      switch (d->kind) {
        case CDecl::Let: {
          TypePtr bt;
          if (d->is_rec) {
            auto fv = store_.fresh_var();
            env::Env erec = e;
            erec.values[d->name] = Scheme{{}, fv};
            bt = expr(erec, *d->expr);
            unify_or_fail(e, fv, bt, d->span);
          } else {
            bt = expr(e, *d->expr);
          }
          Scheme got = generalize(e, bt);
          e.values[d->name] = got;
          // Verify against the declared scheme, skolemized.
          auto* entry = me.sig->find(SigEntry::Val, d->name);
          if (entry) {
            auto want = subst_path(
                store_.resolve(Unifier(store_, e, nullptr).skolemize(entry->val)),
                me.sig->self, self_nf);
            Unifier u(store_, e, nullptr);
            if (!u.unify(u.instantiate(got), want))
              fail(Code::Type, d->span,
                   "core check: '" + d->name + "' has type " + user_str_scheme(got, store_) +
                       " but its signature declares " + user_str(want, store_));
          }
          break;
        }
        case CDecl::Stmt:
          expr(e, *d->expr);
          break;
        case CDecl::Mod: {
          auto sub = modexpr(e, *d->mod, ModPath::mk_proj(self_nf, d->name), d->name);
          e.modules[d->name] = sub;
          info->submodules[d->name] = sub;
          break;
        }
        case CDecl::ModType: {
          TypeElab te(e, store_);
          auto s = te.modtype(*d->sig_ast);
          s->name = d->name;
          e.module_types[d->name] = s;
          break;
        }
      }
    }
    return info;
  }

 public:
  void decl(env::Env& e, const CDecl& d, const ModPathPtr&) {
    switch (d.kind) {
      case CDecl::Let: {
        TypePtr bt;
        if (d.is_rec) {
          auto fv = store_.fresh_var();
          env::Env erec = e;
          erec.values[d.name] = Scheme{{}, fv};
          bt = expr(erec, *d.expr);
          unify_or_fail(e, fv, bt, d.span);
        } else {
          bt = expr(e, *d.expr);
        }
        e.values[d.name] = generalize(e, bt);
        break;
      }
      case CDecl::Stmt:
        expr(e, *d.expr);
        break;
      case CDecl::Mod: {
        auto info = modexpr(e, *d.mod, ModPath::mk_name(d.name), d.name);
        e.modules[d.name] = info;
        break;
      }
      case CDecl::ModType: {
        TypeElab te(e, store_);
        auto s = te.modtype(*d.sig_ast);
        s->name = d.name;
        e.module_types[d.name] = s;
        break;
      }
    }
  }
};

}  // namespace

void check_core(const CoreProgram& p, const TypeStore& seed) {
  CoreChecker c(seed);
  c.run(p);
}

}  // namespace implicitml
