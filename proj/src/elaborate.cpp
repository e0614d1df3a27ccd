#include "implicitml/elaborate.hpp"

#include "implicitml/pretty.hpp"

namespace implicitml {

using namespace core;
using types::ModPath;
using types::ModPathPtr;

namespace {

ModPathPtr path_of(const std::vector<std::string>& p) {
  ModPathPtr out = ModPath::mk_name(p[0]);
  for (size_t i = 1; i < p.size(); ++i) out = ModPath::mk_proj(out, p[i]);
  return out;
}

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
      break;
  }
  fail(Code::Type, me.span, "a module path is required here, not a structure");
}

CExprPtr mk(CExpr::Kind k, Span span) {
  auto e = std::make_shared<CExpr>();
  e->kind = k;
  e->span = span;
  return e;
}

class Elaborator {
 public:
  explicit Elaborator(const InferResult& r) : r_(r) {}

  CoreProgram program(const ast::Program& p) {
    CoreProgram out;
    for (auto& d : p.decls) {
      auto cd = decl(*d);
      if (cd) out.decls.push_back(cd);
    }
    return out;
  }

 private:
  const InferResult& r_;

  CExpr::MParam mparam(const ImplicitParamInfo& info) {
    CExpr::MParam mp;
    mp.name = info.name;
    mp.internal = info.internal;
    mp.sig = info.sig;
    mp.sig_text = pretty(*info.sig_ast);
    return mp;
  }

  const std::vector<ImplicitParamInfo>& params_of(int owner) {
    static const std::vector<ImplicitParamInfo> none;
    auto it = r_.params.find(owner);
    return it == r_.params.end() ? none : it->second;
  }

  // Parameter lists become a chain of Packs (one per implicit parameter) and
  // Lambdas (runs of value parameters).
  CExprPtr function(const std::vector<ast::Param>& params, const ast::Expr& body, int owner,
                    Span span) {
    auto& infos = params_of(owner);
    size_t next_implicit = 0;
    std::function<CExprPtr(size_t)> build = [&](size_t i) -> CExprPtr {
      if (i == params.size()) return expr(body);
      if (params[i].kind == ast::Param::Implicit) {
        auto pk = mk(CExpr::Pack, span);
        pk->mparams.push_back(mparam(infos.at(next_implicit++)));
        pk->body = build(i + 1);
        return pk;
      }
      auto lam = mk(CExpr::Lambda, span);
      size_t j = i;
      while (j < params.size() && params[j].kind == ast::Param::Value) {
        lam->params.push_back(params[j].name);
        lam->param_annots.push_back(params[j++].ascription);
      }
      lam->body = build(j);
      return lam;
    };
    return build(0);
  }

  CExprPtr unpack(CExprPtr fn, const ModPathPtr& arg, Span span) {
    auto up = mk(CExpr::Unpack, span);
    up->fn = std::move(fn);
    auto m = std::make_shared<CModExpr>();
    m->kind = CModExpr::Path;
    m->span = span;
    m->path = arg;
    up->margs.push_back(m);
    return up;
  }

  CExprPtr app(const ast::Expr& ex) {
    auto it = r_.app_plans.find(ex.node_id);
    if (it == r_.app_plans.end())
      fail(Code::Type, ex.span, "internal error: application without a plan");
    CExprPtr cur = expr(*ex.fn);
    bool open_app = false;  // cur is an App this loop built; merge value args
    for (auto& st : it->second.steps) {
      switch (st.kind) {
        case ArgStep::Implicit: {
          auto res = r_.resolutions.find(st.ob_id);
          if (res == r_.resolutions.end())
            fail(Code::Type, ex.span, "internal error: unresolved implicit argument");
          cur = unpack(std::move(cur), res->second, ex.span);
          open_app = false;
          break;
        }
        case ArgStep::ExplicitMod:
          cur = unpack(std::move(cur), st.mod_path, ex.args[st.surface_index].span);
          open_app = false;
          break;
        case ArgStep::Value: {
          auto a = expr(*ex.args[st.surface_index].expr);
          if (!open_app) {
            auto ap = mk(CExpr::App, ex.span);
            ap->fn = std::move(cur);
            cur = std::move(ap);
            open_app = true;
          }
          cur->args.push_back(std::move(a));
          break;
        }
      }
    }
    return cur;
  }

  CExprPtr expr(const ast::Expr& ex) {
    switch (ex.kind) {
      case ast::Expr::Int: {
        auto e = mk(CExpr::Int, ex.span);
        e->int_val = ex.int_val;
        return e;
      }
      case ast::Expr::Float: {
        auto e = mk(CExpr::Float, ex.span);
        e->float_val = ex.float_val;
        return e;
      }
      case ast::Expr::String: {
        auto e = mk(CExpr::String, ex.span);
        e->str_val = ex.str_val;
        return e;
      }
      case ast::Expr::Bool: {
        auto e = mk(CExpr::Bool, ex.span);
        e->bool_val = ex.bool_val;
        return e;
      }
      case ast::Expr::Unit:
        return mk(CExpr::Unit, ex.span);

      case ast::Expr::Var: {
        if (ex.path.empty()) {
          auto e = mk(CExpr::Var, ex.span);
          e->name = ex.name;
          return e;
        }
        auto e = mk(CExpr::Member, ex.span);
        e->path = path_of(ex.path);
        e->name = ex.name;
        return e;
      }

      case ast::Expr::Lambda:
        return function(ex.params, *ex.body, ex.node_id, ex.span);

      case ast::Expr::App:
        return app(ex);

      case ast::Expr::Let: {
        auto e = mk(CExpr::Let, ex.span);
        e->is_rec = ex.is_rec;
        e->name = ex.unit_pat ? "" : ex.name;
        e->bound = function(ex.params, *ex.bound, ex.node_id, ex.span);
        e->body = expr(*ex.body);
        return e;
      }

      case ast::Expr::LetImplicitMod: {
        auto e = mk(CExpr::LocalMod, ex.span);
        e->name = ex.mod_name;
        e->mod = modbinding(ex.mod_params, *ex.mod_expr, ex.node_id);
        e->body = expr(*ex.body);
        return e;
      }

      case ast::Expr::LetOpenImplicit:
        // Scope-only construct; nothing remains after resolution.
        return expr(*ex.body);

      case ast::Expr::Tuple:
      case ast::Expr::ListLit: {
        auto e = mk(ex.kind == ast::Expr::Tuple ? CExpr::Tuple : CExpr::ListLit, ex.span);
        for (auto& it : ex.items) e->items.push_back(expr(*it));
        return e;
      }
      case ast::Expr::Ctor: {
        auto e = mk(CExpr::Ctor, ex.span);
        e->name = ex.name;
        for (auto& it : ex.items) e->items.push_back(expr(*it));
        return e;
      }
      case ast::Expr::If: {
        auto e = mk(CExpr::If, ex.span);
        e->cond = expr(*ex.cond);
        e->then_e = expr(*ex.then_e);
        e->else_e = expr(*ex.else_e);
        return e;
      }
      case ast::Expr::Seq: {
        auto e = mk(CExpr::Seq, ex.span);
        e->bound = expr(*ex.bound);
        e->rhs = expr(*ex.rhs);
        return e;
      }
      case ast::Expr::Ascribe:
        // Checked during inference; the core keeps only the subject.
        return expr(*ex.bound);
      case ast::Expr::Match: {
        auto e = mk(CExpr::Match, ex.span);
        e->scrutinee = expr(*ex.scrutinee);
        for (auto& c : ex.cases) e->cases.push_back({c.pat, expr(*c.body)});
        return e;
      }
    }
    fail(Code::Type, ex.span, "malformed expression");
  }

  CModExprPtr modexpr(const ast::ModExpr& me) {
    auto out = std::make_shared<CModExpr>();
    out->span = me.span;
    if (me.kind == ast::ModExpr::Struct) {
      out->kind = CModExpr::Struct;
      auto it = r_.mod_infos.find(me.node_id);
      if (it != r_.mod_infos.end()) out->sig = it->second->sig;
      for (auto& d : me.decls) {
        auto cd = decl(*d);
        if (cd) out->decls.push_back(cd);
      }
    } else {
      out->kind = CModExpr::Path;
      out->path = path_of_modexpr(me);
    }
    return out;
  }

  CModExprPtr modbinding(const std::vector<ast::Param>& params, const ast::ModExpr& body,
                         int owner) {
    if (params.empty()) return modexpr(body);
    auto out = std::make_shared<CModExpr>();
    out->kind = CModExpr::Functor;
    out->span = body.span;
    for (auto& info : params_of(owner)) out->mparams.push_back(mparam(info));
    out->body = modexpr(body);
    return out;
  }

  CDeclPtr decl(const ast::Decl& d) {
    switch (d.kind) {
      case ast::Decl::Let: {
        auto out = std::make_shared<CDecl>();
        out->span = d.span;
        if (d.unit_pat) {
          out->kind = CDecl::Stmt;
          out->expr = expr(*d.expr);
        } else {
          out->kind = CDecl::Let;
          out->is_rec = d.is_rec;
          out->name = d.name;
          out->expr = function(d.params, *d.expr, d.node_id, d.span);
        }
        return out;
      }
      case ast::Decl::Module: {
        if (!d.mod_expr) return nullptr;  // assumed module, nothing to run
        auto out = std::make_shared<CDecl>();
        out->span = d.span;
        out->kind = CDecl::Mod;
        out->name = d.name;
        out->mod = modbinding(d.params, *d.mod_expr, d.node_id);
        return out;
      }
      case ast::Decl::ExprStmt: {
        auto out = std::make_shared<CDecl>();
        out->span = d.span;
        out->kind = CDecl::Stmt;
        out->expr = expr(*d.expr);
        return out;
      }
      case ast::Decl::ModuleType: {
        // Kept so the core checker can elaborate surface annotations that
        // name this signature.
        auto out = std::make_shared<CDecl>();
        out->span = d.span;
        out->kind = CDecl::ModType;
        out->name = d.name;
        out->sig_ast = d.mod_type;
        return out;
      }
      case ast::Decl::OpenImplicit:
      case ast::Decl::Type:
        return nullptr;  // static-only declarations
    }
    return nullptr;
  }
};

}  // namespace

CoreProgram elaborate_program(const ast::Program& p, const InferResult& r) {
  Elaborator el(r);
  return el.program(p);
}

}  // namespace implicitml
