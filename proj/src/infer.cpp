#include "implicitml/infer.hpp"

#include <algorithm>
#include <set>

#include "implicitml/builtins.hpp"
#include "implicitml/inclusion.hpp"
#include "implicitml/obligations.hpp"
#include "implicitml/resolve.hpp"
#include "implicitml/sigelab.hpp"
#include "implicitml/unify.hpp"

namespace implicitml {

using namespace types;

namespace {

ModPathPtr path_of(const std::vector<std::string>& p) {
  ModPathPtr out = ModPath::mk_name(p[0]);
  for (size_t i = 1; i < p.size(); ++i) out = ModPath::mk_proj(out, p[i]);
  return out;
}

// Module expressions in argument and binding positions must be paths or
// applications of paths; structures only appear as binding bodies.
ModPathPtr path_of_modexpr(const ast::ModExpr& me) {
  switch (me.kind) {
    case ast::ModExpr::Path:
      return path_of(me.path);
    case ast::ModExpr::Apply: {
      auto fn = path_of_modexpr(*me.fn);
      std::vector<ModPathPtr> args;
      for (auto& a : me.args) args.push_back(path_of_modexpr(*a));
      return ModPath::mk_app(fn, std::move(args));
    }
    case ast::ModExpr::Struct:
      fail(Code::Type, me.span, "a module path is required here, not a structure");
  }
  fail(Code::Type, me.span, "malformed module expression");
}

bool syntactic_value(const ast::Expr& e) {
  switch (e.kind) {
    case ast::Expr::Int:
    case ast::Expr::Float:
    case ast::Expr::String:
    case ast::Expr::Bool:
    case ast::Expr::Unit:
    case ast::Expr::Var:
    case ast::Expr::Lambda:
      return true;
    case ast::Expr::Tuple:
    case ast::Expr::ListLit:
    case ast::Expr::Ctor:
      for (auto& it : e.items)
        if (!syntactic_value(*it)) return false;
      return true;
    case ast::Expr::Ascribe:
      return syntactic_value(*e.bound);
    default:
      return false;
  }
}

class Inferencer {
 public:
  explicit Inferencer(const InferOptions& opts) : opts_(opts) {
    res_.store = std::make_shared<TypeStore>();
    store_ = res_.store.get();
  }

  InferResult run(const ast::Program& p) {
    env::Env e = builtin_env(*store_);
    for (auto& d : p.decls) top_decl(e, *d);
    res_.top = e;
    return std::move(res_);
  }

 private:
  const InferOptions& opts_;
  InferResult res_;
  TypeStore* store_;
  ObligationSet obs_;
  std::vector<PendingObligationPtr> pending_;
  std::map<int, env::Env> ob_envs_;
  std::map<std::string, Span> unannotated_;  // parameters bound without a type
  std::map<std::string, TypeElab::LocalAlias> locals_;  // struct-local type decls

  // -- helpers ------------------------------------------------------------

  TypePtr elab_type(const env::Env& e, const ast::TypeAst& t, TypeElab::VarPolicy pol) {
    TypeElab te(e, *store_);
    te.policy = pol;
    te.locals = locals_;
    return te.type(t);
  }

  SigPtr elab_modtype(const env::Env& e, const ast::ModType& mt) {
    TypeElab te(e, *store_);
    te.locals = locals_;
    return te.modtype(mt);
  }

  void unify_or_fail(const env::Env& e, const TypePtr& a, const TypePtr& b, Span span) {
    Unifier u(*store_, e, &obs_);
    if (!u.unify(a, b))
      fail(Code::Type, span,
           "this expression has type " + user_str(store_->resolve(a), *store_) +
               " but " + user_str(store_->resolve(b), *store_) + " was expected");
  }

  // -- obligations ---------------------------------------------------------

  // Replaces every member application rooted at the obligation's module
  // variable by a fresh unification variable, recording the equation. Nullary
  // members share one variable; parameterised members get one per site.
  TypePtr abstract_members(const TypePtr& t, const PendingObligationPtr& ob) {
    if (!t) return t;
    switch (t->kind) {
      case Type::Var:
      case Type::Rigid:
        return t;
      case Type::Member: {
        std::vector<TypePtr> args;
        for (auto& a : t->args) args.push_back(abstract_members(a, ob));
        if (path_root(*t->path) == ob->internal) {
          if (args.empty()) {
            for (auto& c : ob->constraints)
              if (c.args.empty() && c.member == t->name && path_equal(*c.rel, *t->path))
                return mk_var(c.var);
          }
          int v = store_->fresh();
          obs_.record(ob, t->path, t->name, args, v);
          return mk_var(v);
        }
        auto n = std::make_shared<Type>(*t);
        n->args = std::move(args);
        return n;
      }
      case Type::Ctor:
      case Type::Tuple: {
        auto n = std::make_shared<Type>(*t);
        for (auto& a : n->args) a = abstract_members(a, ob);
        return n;
      }
      case Type::Arrow: {
        auto n = std::make_shared<Type>(*t);
        n->a = abstract_members(n->a, ob);
        n->b = abstract_members(n->b, ob);
        return n;
      }
      case Type::ImplicitArrow: {
        auto n = std::make_shared<Type>(*t);
        n->b = abstract_members(n->b, ob);
        return n;
      }
    }
    return t;
  }

  // Eliminates one implicit arrow at an application site, queueing an
  // obligation for later resolution.
  TypePtr open_obligation(const env::Env& e, const TypePtr& ia, Span span, int node_id,
                          AppPlan* plan) {
    auto ob = std::make_shared<PendingObligation>();
    ob->id = obs_.next_id++;
    ob->internal = ia->param_display + "#" + std::to_string(ob->id);
    ob->display = ia->param_display;
    ob->sig = ia->param_sig;
    ob->span = span;
    ob->node_id = node_id;
    obs_.add(ob);
    pending_.push_back(ob);
    ob_envs_.emplace(ob->id, e);
    auto cod = subst_path(ia->b, ia->param_name, ModPath::mk_name(ob->internal));
    cod = abstract_members(cod, ob);
    if (plan) {
      ArgStep st;
      st.kind = ArgStep::Implicit;
      st.ob_id = ob->id;
      plan->steps.push_back(st);
    }
    return cod;
  }

  void flush() {
    while (!pending_.empty()) {
      auto ob = pending_.front();
      pending_.erase(pending_.begin());
      auto it = ob_envs_.find(ob->id);
      ResolverOptions ro;
      ro.max_depth = opts_.max_depth;
      ro.trace = opts_.trace;
      auto r = resolve(it->second, *store_, obs_, ob, ro);
      if (r.outcome == Outcome::Unique) {
        // Commit the winner's bindings so later obligations see them.
        for (auto& [id, t] : r.solutions[0].bindings) store_->bind(id, t);
        res_.resolutions[ob->id] = r.solutions[0].expr;
        obs_.by_internal.erase(ob->internal);
        ob_envs_.erase(it);
        continue;
      }
      switch (r.outcome) {
        case Outcome::None:
          fail(Code::NoSolution, ob->span,
               "no implicit module in scope matches parameter '" + ob->display + "'",
               r.payload);
        case Outcome::Ambiguous:
          fail(Code::Ambiguous, ob->span,
               "ambiguous implicit argument for parameter '" + ob->display + "'", r.payload);
        case Outcome::Termination:
          fail(Code::Termination, ob->span,
               "implicit argument resolution for parameter '" + ob->display +
                   "' does not terminate",
               r.payload);
        case Outcome::DepthCap:
          fail(Code::DepthCap, ob->span,
               "implicit argument resolution for parameter '" + ob->display +
                   "' exceeded the search depth cap",
               r.payload);
        default:
          break;
      }
    }
  }

  // -- generalization ------------------------------------------------------

  void collect_free(const TypePtr& t, std::vector<int>& out, std::set<int>& seen) const {
    if (!t) return;
    if (t->kind == Type::Var && t->id >= 0 && !store_->bound(t->id)) {
      if (seen.insert(t->id).second) out.push_back(t->id);
      return;
    }
    for (auto& a : t->args) collect_free(a, out, seen);
    if (t->a) collect_free(t->a, out, seen);
    if (t->b) collect_free(t->b, out, seen);
  }

  void env_free_vars(const env::Env& e, std::set<int>& out) const {
    std::vector<int> tmp;
    for (auto& [name, s] : e.values) collect_free(store_->resolve(s.body), tmp, out);
    std::set<const env::ModuleInfo*> visited;
    for (auto& [name, info] : e.modules) module_free_vars(info, out, visited);
  }

  void module_free_vars(const env::ModuleInfoPtr& info, std::set<int>& out,
                        std::set<const env::ModuleInfo*>& visited) const {
    if (!info || !visited.insert(info.get()).second) return;
    std::vector<int> tmp;
    auto scan_sig = [&](const SigPtr& s, auto&& self) -> void {
      if (!s) return;
      for (auto& item : s->items) {
        if (item.kind == SigEntry::Val) collect_free(store_->resolve(item.val.body), tmp, out);
        if (item.kind == SigEntry::Type && item.type.manifest)
          collect_free(store_->resolve(item.type.manifest), tmp, out);
        if (item.kind == SigEntry::Module) self(item.mod.sig, self);
      }
    };
    scan_sig(info->sig, scan_sig);
    scan_sig(info->result, scan_sig);
    for (auto& [pn, ps] : info->params) scan_sig(ps, scan_sig);
    for (auto& [sn, sub] : info->submodules) module_free_vars(sub, out, visited);
  }

  Scheme generalize_and_flush(const env::Env& e, const TypePtr& t0) {
    flush();
    TypePtr t = store_->resolve(t0);
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
      store_->bind(id, mk_var(neg));
      s.vars.push_back(neg);
    }
    s.body = store_->resolve(t);
    return s;
  }

  // -- implicit parameters -------------------------------------------------

  env::ModuleInfoPtr bind_implicit_param(env::Env& e, const ast::Param& p, int owner_node) {
    if (!p.sig) fail(Code::Syntax, p.span, "module parameter needs a signature");
    auto sig = elab_modtype(e, *p.sig);
    std::string internal = p.name + "@" + std::to_string(fresh_self_id());
    auto info = std::make_shared<env::ModuleInfo>();
    info->sig = sig;
    info->nf = ModPath::mk_name(internal);
    info->display = p.name;
    info->access = ModPath::mk_name(p.name);
    info->implicit = true;
    e.modules[p.name] = info;
    e.modules[internal] = info;
    e.add_implicit(p.name, info);
    res_.params[owner_node].push_back({p.name, internal, sig, p.sig});
    return info;
  }

  // Shared by lambdas and let bindings with parameters.
  TypePtr infer_function(const env::Env& e0, const std::vector<ast::Param>& params,
                         const ast::TypeAstPtr& ret, const ast::Expr& body, int owner_node,
                         Span span) {
    env::Env e = e0;
    auto saved_unann = unannotated_;
    struct Piece {
      bool implicit;
      TypePtr vt;
      std::string internal, name;
      SigPtr sig;
    };
    std::vector<Piece> pieces;
    for (auto& p : params) {
      if (p.kind == ast::Param::Implicit) {
        auto info = bind_implicit_param(e, p, owner_node);
        pieces.push_back({true, nullptr, path_root(*info->nf), p.name, info->sig});
      } else {
        TypePtr vt;
        if (p.name == "()") {
          vt = mk_ctor("unit");
        } else if (p.ascription) {
          vt = elab_type(e, *p.ascription, TypeElab::Store);
          e.values[p.name] = Scheme{{}, vt};
          unannotated_.erase(p.name);
        } else {
          vt = store_->fresh_var();
          e.values[p.name] = Scheme{{}, vt};
          unannotated_[p.name] = p.span;
        }
        pieces.push_back({false, vt, "", p.name, nullptr});
      }
    }
    TypePtr t = infer(e, body);
    if (ret) {
      auto at = elab_type(e, *ret, TypeElab::Store);
      unify_or_fail(e, t, at, body.span);
      t = at;
    }
    for (auto it = pieces.rbegin(); it != pieces.rend(); ++it)
      t = it->implicit ? mk_implicit_arrow(it->internal, it->name, it->sig, t)
                       : mk_arrow(it->vt, t);
    unannotated_ = saved_unann;
    return t;
  }

  // Adds the implicit-marked members of a module to the implicit scope.
  void open_implicit(env::Env& e, const std::vector<std::string>& path, Span span) {
    auto p = path_of(path);
    auto info = env::resolve_module(e, p, span);
    if (info->is_functor) fail(Code::Type, span, "cannot open a functor");
    for (auto& item : info->sig->items) {
      if (item.kind != SigEntry::Module || !item.mod.implicit) continue;
      auto sub = env::resolve_module(e, ModPath::mk_proj(p, item.name), span);
      auto entry = std::make_shared<env::ModuleInfo>(*sub);
      entry->access = ModPath::mk_proj(p, item.name);
      entry->implicit = true;
      e.add_implicit(item.name, entry);
    }
    for (auto& [name, sub] : info->submodules) {
      if (!sub->implicit) continue;
      auto entry = std::make_shared<env::ModuleInfo>(*sub);
      entry->access = ModPath::mk_proj(p, name);
      entry->implicit = true;
      e.add_implicit(name, entry);
    }
  }

  // -- patterns ------------------------------------------------------------

  TypePtr infer_pattern(env::Env& e, const ast::Pattern& p) {
    switch (p.kind) {
      case ast::Pattern::Var: {
        auto v = store_->fresh_var();
        e.values[p.name] = Scheme{{}, v};
        return v;
      }
      case ast::Pattern::Wildcard:
        return store_->fresh_var();
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
        for (auto& a : p.args) comps.push_back(infer_pattern(e, *a));
        return mk_tuple(std::move(comps));
      }
      case ast::Pattern::Nil:
        return mk_ctor("list", {store_->fresh_var()});
      case ast::Pattern::Cons: {
        auto th = infer_pattern(e, *p.args[0]);
        auto tt = infer_pattern(e, *p.args[1]);
        unify_or_fail(e, tt, mk_ctor("list", {th}), p.span);
        return tt;
      }
      case ast::Pattern::NoneP:
        return mk_ctor("option", {store_->fresh_var()});
      case ast::Pattern::SomeP:
        return mk_ctor("option", {infer_pattern(e, *p.args[0])});
    }
    fail(Code::Type, p.span, "malformed pattern");
  }

  // -- expressions ---------------------------------------------------------

  TypePtr infer(const env::Env& e, const ast::Expr& ex) {
    switch (ex.kind) {
      case ast::Expr::Int:
        return mk_ctor("int");
      case ast::Expr::Float:
        return mk_ctor("float");
      case ast::Expr::String:
        return mk_ctor("string");
      case ast::Expr::Bool:
        return mk_ctor("bool");
      case ast::Expr::Unit:
        return mk_ctor("unit");

      case ast::Expr::Var: {
        Unifier u(*store_, e, &obs_);
        if (!ex.path.empty()) {
          auto p = path_of(ex.path);
          return u.instantiate(env::project_value(e, p, ex.name, ex.span));
        }
        auto* s = e.find_value(ex.name);
        if (!s) fail(Code::Unbound, ex.span, "unbound value '" + ex.name + "'");
        return u.instantiate(*s);
      }

      case ast::Expr::Lambda:
        return infer_function(e, ex.params, nullptr, *ex.body, ex.node_id, ex.span);

      case ast::Expr::App:
        return infer_app(e, ex);

      case ast::Expr::Let: {
        TypePtr bt;
        if (!ex.is_rec) {
          bt = infer_function(e, ex.params, ex.ascription, *ex.bound, ex.node_id, ex.span);
        } else {
          bool has_implicit = std::any_of(ex.params.begin(), ex.params.end(), [](auto& p) {
            return p.kind == ast::Param::Implicit;
          });
          if (has_implicit && !ex.ascription)
            fail(Code::MissingAnnot, ex.span,
                 "recursive definitions with implicit parameters need a result type annotation");
          auto fv = store_->fresh_var();
          env::Env erec = e;
          erec.values[ex.name] = Scheme{{}, fv};
          bt = infer_function(erec, ex.params, ex.ascription, *ex.bound, ex.node_id, ex.span);
          unify_or_fail(e, fv, bt, ex.span);
        }
        env::Env e2 = e;
        if (ex.unit_pat) {
          unify_or_fail(e, bt, mk_ctor("unit"), ex.bound->span);
          flush();
        } else {
          e2.values[ex.name] = generalize_and_flush(e, bt);
        }
        return infer(e2, *ex.body);
      }

      case ast::Expr::LetImplicitMod: {
        env::Env e2 = e;
        auto info = check_functor_or_module(e2, ex.mod_name, ex.mod_params, true, nullptr,
                                            *ex.mod_expr, ex.node_id, ex.span, nullptr);
        e2.modules[ex.mod_name] = info;
        e2.add_implicit(ex.mod_name, info);
        res_.mod_infos[ex.node_id] = info;
        flush();
        return infer(e2, *ex.body);
      }

      case ast::Expr::LetOpenImplicit: {
        env::Env e2 = e;
        open_implicit(e2, ex.path, ex.span);
        return infer(e2, *ex.body);
      }

      case ast::Expr::Tuple: {
        std::vector<TypePtr> comps;
        for (auto& it : ex.items) comps.push_back(infer(e, *it));
        return mk_tuple(std::move(comps));
      }
      case ast::Expr::ListLit: {
        auto elem = store_->fresh_var();
        for (auto& it : ex.items) unify_or_fail(e, infer(e, *it), elem, it->span);
        return mk_ctor("list", {elem});
      }
      case ast::Expr::Ctor: {
        if (ex.name == "None") return mk_ctor("option", {store_->fresh_var()});
        if (ex.name == "Some") return mk_ctor("option", {infer(e, *ex.items[0])});
        if (ex.name == "::") {
          auto th = infer(e, *ex.items[0]);
          auto tt = infer(e, *ex.items[1]);
          unify_or_fail(e, tt, mk_ctor("list", {th}), ex.items[1]->span);
          return store_->resolve(tt);
        }
        fail(Code::Unbound, ex.span, "unknown constructor '" + ex.name + "'");
      }

      case ast::Expr::If: {
        unify_or_fail(e, infer(e, *ex.cond), mk_ctor("bool"), ex.cond->span);
        auto tt = infer(e, *ex.then_e);
        unify_or_fail(e, infer(e, *ex.else_e), tt, ex.else_e->span);
        return tt;
      }
      case ast::Expr::Seq: {
        infer(e, *ex.bound);
        return infer(e, *ex.rhs);
      }
      case ast::Expr::Ascribe: {
        auto t = infer(e, *ex.bound);
        auto at = elab_type(e, *ex.ascription, TypeElab::Store);
        unify_or_fail(e, t, at, ex.span);
        return at;
      }
      case ast::Expr::Match: {
        auto ts = infer(e, *ex.scrutinee);
        auto tr = store_->fresh_var();
        for (auto& c : ex.cases) {
          env::Env ec = e;
          auto tp = infer_pattern(ec, *c.pat);
          unify_or_fail(e, ts, tp, c.pat->span);
          unify_or_fail(ec, infer(ec, *c.body), tr, c.body->span);
        }
        return store_->resolve(tr);
      }
    }
    fail(Code::Type, ex.span, "malformed expression");
  }

  TypePtr infer_app(const env::Env& e, const ast::Expr& ex) {
    TypePtr tf = infer(e, *ex.fn);
    AppPlan plan;
    for (size_t i = 0; i < ex.args.size(); ++i) {
      auto& arg = ex.args[i];
      tf = store_->shorten(tf);
      if (arg.mod) {
        if (tf->kind == Type::Var && ex.fn->kind == ast::Expr::Var && ex.fn->path.empty()) {
          auto it = unannotated_.find(ex.fn->name);
          if (it != unannotated_.end())
            fail(Code::MissingAnnot, it->second,
                 "parameter '" + ex.fn->name +
                     "' needs a type annotation to take an explicit module argument");
        }
        if (tf->kind != Type::ImplicitArrow)
          fail(Code::Type, arg.span,
               "this function does not expect an explicit module argument");
        auto mp = path_of_modexpr(*arg.mod);
        auto info = env::resolve_module(e, mp, arg.span);
        if (info->is_functor)
          fail(Code::Type, arg.span,
               "functor '" + path_str(*mp) + "' used as a module argument");
        std::string why;
        if (!signature_includes(e, *store_, &obs_, info, *tf->param_sig, &why))
          fail(Code::SigMismatch, arg.span,
               "module '" + path_str(*mp) + "' does not match the expected signature: " + why);
        ArgStep st;
        st.kind = ArgStep::ExplicitMod;
        st.mod_path = mp;
        st.surface_index = i;
        plan.steps.push_back(st);
        tf = subst_path(tf->b, tf->param_name, info->nf);
        continue;
      }
      // Elide any leading implicit parameters, then consume one value arrow.
      while (tf && tf->kind == Type::ImplicitArrow)
        tf = store_->shorten(open_obligation(e, tf, ex.fn->span, ex.node_id, &plan));
      TypePtr ta = infer(e, *arg.expr);
      if (tf->kind == Type::Arrow) {
        Unifier u(*store_, e, &obs_);
        if (!u.unify(ta, tf->a))
          fail(Code::Type, arg.expr->span,
               "this argument has type " + user_str(store_->resolve(ta), *store_) + " but " +
                   user_str(store_->resolve(tf->a), *store_) + " was expected");
        tf = tf->b;
      } else {
        auto r = store_->fresh_var();
        Unifier u(*store_, e, &obs_);
        if (!u.unify(tf, mk_arrow(ta, r)))
          fail(Code::Type, arg.span,
               "this expression has type " + user_str(store_->resolve(tf), *store_) +
                   "; it cannot be applied to an argument of type " +
                   user_str(store_->resolve(ta), *store_));
        tf = r;
      }
      ArgStep st;
      st.kind = ArgStep::Value;
      st.surface_index = i;
      plan.steps.push_back(st);
    }
    res_.app_plans[ex.node_id] = std::move(plan);
    return tf;
  }

  // -- modules -------------------------------------------------------------

  env::ModuleInfoPtr check_struct(const env::Env& e0, const std::vector<ast::DeclPtr>& decls,
                                  const ModPathPtr& self_nf, const std::string& display) {
    env::Env e = e0;
    auto saved_locals = locals_;
    auto out = std::make_shared<env::ModuleInfo>();
    out->nf = self_nf;
    out->display = display;
    auto sig = std::make_shared<Signature>();
    sig->self = fresh_self();

    for (auto& d : decls) {
      switch (d->kind) {
        case ast::Decl::Type: {
          SigEntry entry;
          entry.kind = SigEntry::Type;
          entry.name = d->name;
          TypeElab te(e, *store_);
          te.locals = locals_;
          te.policy = TypeElab::Reject;
          std::vector<TypePtr> placeholders;
          for (auto& pn : d->type_params) {
            int r = store_->fresh_rigid();
            entry.type.params.push_back(r);
            placeholders.push_back(mk_rigid(r, pn));
            te.tyvars[pn] = placeholders.back();
          }
          if (d->manifest) entry.type.manifest = te.type(*d->manifest);
          locals_[d->name] = {entry.type.params,
                              entry.type.manifest
                                  ? entry.type.manifest
                                  : mk_member(ModPath::mk_name(sig->self), d->name,
                                              placeholders)};
          sig->items.push_back(std::move(entry));
          break;
        }
        case ast::Decl::Let: {
          TypePtr bt = infer_let_decl(e, *d);
          if (d->unit_pat) {
            unify_or_fail(e, bt, mk_ctor("unit"), d->expr->span);
            flush();
            break;
          }
          Scheme s = generalize_and_flush(e, bt);
          e.values[d->name] = s;
          SigEntry entry;
          entry.kind = SigEntry::Val;
          entry.name = d->name;
          entry.val = s;
          sig->items.push_back(std::move(entry));
          break;
        }
        case ast::Decl::Module: {
          bool body_is_path =
              d->mod_expr && d->mod_expr->kind != ast::ModExpr::Struct && d->params.empty();
          auto info = module_decl(e, *d, self_nf);
          if (info->is_functor) {
            out->submodules[d->name] = info;
          } else {
            SigEntry entry;
            entry.kind = SigEntry::Module;
            entry.name = d->name;
            entry.mod.implicit = info->implicit;
            entry.mod.sig = info->sig;
            if (body_is_path) entry.mod.alias = info->nf;
            sig->items.push_back(std::move(entry));
            out->submodules[d->name] = info;
          }
          break;
        }
        case ast::Decl::ModuleType: {
          auto s = elab_modtype(e, *d->mod_type);
          s->name = d->name;
          e.module_types[d->name] = s;
          break;
        }
        case ast::Decl::OpenImplicit:
          open_implicit(e, d->path, d->span);
          break;
        case ast::Decl::ExprStmt:
          infer(e, *d->expr);
          flush();
          break;
      }
    }
    out->sig = sig;
    locals_ = saved_locals;
    return out;
  }

  // The body type of a let declaration (either form), before generalization.
  TypePtr infer_let_decl(const env::Env& e, const ast::Decl& d) {
    if (!d.is_rec)
      return infer_function(e, d.params, d.ascription, *d.expr, d.node_id, d.span);
    bool has_implicit = std::any_of(d.params.begin(), d.params.end(), [](auto& p) {
      return p.kind == ast::Param::Implicit;
    });
    if (has_implicit && !d.ascription)
      fail(Code::MissingAnnot, d.span,
           "recursive definitions with implicit parameters need a result type annotation");
    auto fv = store_->fresh_var();
    env::Env erec = e;
    erec.values[d.name] = Scheme{{}, fv};
    auto bt = infer_function(erec, d.params, d.ascription, *d.expr, d.node_id, d.span);
    unify_or_fail(e, fv, bt, d.span);
    return bt;
  }

  void value_restriction_check(const ast::ModExpr& body) {
    if (body.kind != ast::ModExpr::Struct) return;  // paths and applications are values
    for (auto& d : body.decls) {
      if (d->kind == ast::Decl::ExprStmt)
        fail(Code::ImpureFunctor, d->span,
             "the body of an implicit functor must not evaluate expressions");
      if (d->kind != ast::Decl::Let) continue;
      if (!d->params.empty()) continue;  // function definitions are values
      if (d->unit_pat || !syntactic_value(*d->expr))
        fail(Code::ImpureFunctor, d->expr->span,
             "the body of an implicit functor must bind only syntactic values");
    }
  }

  env::ModuleInfoPtr check_functor_or_module(env::Env& e, const std::string& name,
                                             const std::vector<ast::Param>& params,
                                             bool is_implicit, const ast::ModTypePtr& ascription,
                                             const ast::ModExpr& body, int owner_node, Span span,
                                             const ModPathPtr& prefix) {
    auto self_nf = prefix ? ModPath::mk_proj(prefix, name) : ModPath::mk_name(name);
    env::ModuleInfoPtr info;
    if (params.empty()) {
      if (body.kind == ast::ModExpr::Struct) {
        info = check_struct(e, body.decls, self_nf, name);
        res_.mod_infos[body.node_id] = info;
      } else {
        auto mp = path_of_modexpr(body);
        auto resolved = env::resolve_module(e, mp, body.span);
        info = std::make_shared<env::ModuleInfo>(*resolved);
      }
    } else {
      env::Env eb = e;
      std::vector<std::pair<std::string, SigPtr>> fparams;
      std::vector<ModPathPtr> internals;
      for (auto& p : params) {
        auto pinfo = bind_implicit_param(eb, p, owner_node);
        fparams.push_back({path_root(*pinfo->nf), pinfo->sig});
        internals.push_back(pinfo->nf);
      }
      if (is_implicit) value_restriction_check(body);
      info = std::make_shared<env::ModuleInfo>();
      info->is_functor = true;
      info->params = fparams;
      info->display = name;
      env::ModuleInfoPtr resultinfo;
      if (body.kind == ast::ModExpr::Struct) {
        resultinfo = check_struct(eb, body.decls, ModPath::mk_app(self_nf, internals), name);
        res_.mod_infos[body.node_id] = resultinfo;
        info->result = resultinfo->sig;
        info->submodules = resultinfo->submodules;
      } else {
        auto mp = path_of_modexpr(body);
        resultinfo = env::resolve_module(eb, mp, body.span);
        if (resultinfo->is_functor)
          fail(Code::Type, body.span, "a functor body must be a structure or a ground module");
        info->result = resultinfo->sig;
        info->alias = resultinfo->nf;  // template over the parameter internals
      }
      if (ascription) {
        // The result signature, stated over the parameters.
        auto target = elab_modtype(eb, *ascription);
        env::Env e2 = eb;
        auto probe = std::make_shared<env::ModuleInfo>(*resultinfo);
        std::string tmp = "*seal" + std::to_string(fresh_self_id());
        probe->nf = ModPath::mk_name(tmp);
        e2.modules[tmp] = probe;
        std::string why;
        if (!signature_includes(e2, *store_, &obs_, probe, *target, &why))
          fail(Code::SigMismatch, span,
               "functor '" + name + "' does not match its result signature: " + why);
        info->result = target;
      }
    }
    info->implicit = is_implicit;
    info->access = self_nf;
    if (ascription && !info->is_functor) {
      auto target = elab_modtype(e, *ascription);
      // The module is not in the environment yet, so member expansion through
      // its normal form would fail. Check against a probe registration under
      // a temporary name instead.
      env::Env e2 = e;
      auto probe = std::make_shared<env::ModuleInfo>(*info);
      std::string tmp = "*seal" + std::to_string(fresh_self_id());
      probe->nf = ModPath::mk_name(tmp);
      e2.modules[tmp] = probe;
      std::string why;
      if (!signature_includes(e2, *store_, &obs_, probe, *target, &why))
        fail(Code::SigMismatch, span,
             "module '" + name + "' does not match its signature: " + why);
      auto sealed = std::make_shared<env::ModuleInfo>(*info);
      sealed->sig = target;
      info = sealed;
    }
    return info;
  }

  // Handles a module declaration (top-level or inside a struct): checks it,
  // registers it in `e`, and returns its info.
  env::ModuleInfoPtr module_decl(env::Env& e, const ast::Decl& d, const ModPathPtr& prefix) {
    env::ModuleInfoPtr info;
    if (!d.mod_expr) {
      // Assumed module: a binding with a signature but no body; checked
      // against uses only, not runnable.
      if (!d.mod_ascription)
        fail(Code::Syntax, d.span, "module binding needs a body or a signature");
      auto self_nf = prefix ? ModPath::mk_proj(prefix, d.name) : ModPath::mk_name(d.name);
      info = std::make_shared<env::ModuleInfo>();
      info->sig = elab_modtype(e, *d.mod_ascription);
      info->nf = self_nf;
      info->display = d.name;
      info->access = self_nf;
      info->implicit = d.is_implicit;
    } else {
      info = check_functor_or_module(e, d.name, d.params, d.is_implicit, d.mod_ascription,
                                     *d.mod_expr, d.node_id, d.span, prefix);
    }
    e.modules[d.name] = info;
    if (d.is_implicit) e.add_implicit(d.name, info);
    res_.mod_infos[d.node_id] = info;
    return info;
  }

  // -- top level -----------------------------------------------------------

  void top_decl(env::Env& e, const ast::Decl& d) {
    switch (d.kind) {
      case ast::Decl::Let: {
        TypePtr bt = infer_let_decl(e, d);
        if (d.unit_pat) {
          unify_or_fail(e, bt, mk_ctor("unit"), d.expr->span);
          flush();
          return;
        }
        Scheme s = generalize_and_flush(e, bt);
        e.values[d.name] = s;
        bool word = !d.name.empty() && (std::isalpha(static_cast<unsigned char>(d.name[0])) ||
                                        d.name[0] == '_');
        std::string shown = word ? d.name : "( " + d.name + " )";
        res_.top_items.push_back({"val " + shown + " : " + user_str_scheme(s, *store_)});
        return;
      }
      case ast::Decl::Module: {
        module_decl(e, d, nullptr);
        flush();
        res_.top_items.push_back(
            {(d.is_implicit ? std::string("implicit module ") : std::string("module ")) +
             d.name});
        return;
      }
      case ast::Decl::ModuleType: {
        auto s = elab_modtype(e, *d.mod_type);
        s->name = d.name;
        e.module_types[d.name] = s;
        res_.top_items.push_back({"module type " + d.name});
        return;
      }
      case ast::Decl::OpenImplicit:
        open_implicit(e, d.path, d.span);
        return;
      case ast::Decl::ExprStmt: {
        auto t = infer(e, *d.expr);
        flush();
        res_.top_items.push_back({"- : " + user_str(store_->resolve(t), *store_)});
        return;
      }
      case ast::Decl::Type:
        fail(Code::Syntax, d.span, "type declarations are only allowed inside structures");
    }
  }
};

}  // namespace

InferResult infer_program(const ast::Program& p, const InferOptions& opts) {
  Inferencer inf(opts);
  return inf.run(p);
}

}  // namespace implicitml
