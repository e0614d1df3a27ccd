#include "implicitml/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <sstream>
#include <vector>

namespace implicitml {

using namespace core;
using types::ModPath;
using types::ModPathPtr;

namespace {

struct Value;
using ValuePtr = std::shared_ptr<Value>;

struct EnvV {
  std::map<std::string, ValuePtr> vals;
  std::map<std::string, ValuePtr> mods;
};

struct Value {
  enum Kind { Int, Float, String, Bool, Unit, Tuple, List, Option, Closure, Prim, Module, Functor, Packed };
  Kind kind;

  long long i = 0;
  double f = 0;
  std::string s;
  bool b = false;

  std::vector<ValuePtr> items;  // Tuple / List
  ValuePtr some;                // Option payload; null means None

  // Closure
  std::vector<std::string> params;
  CExprPtr body;
  EnvV env;

  // Prim
  std::string prim;
  int arity = 0;
  std::vector<ValuePtr> applied;

  // Module
  std::map<std::string, ValuePtr> fields;
  std::map<std::string, ValuePtr> mods;

  // Functor / Packed
  std::vector<std::string> mnames;
  CModExprPtr mbody;
  CExprPtr vbody;  // Packed
};

ValuePtr mkv(Value::Kind k) {
  auto v = std::make_shared<Value>();
  v->kind = k;
  return v;
}
ValuePtr mk_int(long long i) { auto v = mkv(Value::Int); v->i = i; return v; }
ValuePtr mk_float(double f) { auto v = mkv(Value::Float); v->f = f; return v; }
ValuePtr mk_string(std::string s) { auto v = mkv(Value::String); v->s = std::move(s); return v; }
ValuePtr mk_bool(bool b) { auto v = mkv(Value::Bool); v->b = b; return v; }
ValuePtr mk_unit() { return mkv(Value::Unit); }

std::string float_str(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  std::string out = buf;
  if (out.find('.') == std::string::npos && out.find('e') == std::string::npos &&
      out.find("inf") == std::string::npos && out.find("nan") == std::string::npos)
    out += ".";
  return out;
}

int compare_values(const ValuePtr& a, const ValuePtr& b, Span span) {
  if (a->kind != b->kind)
    throw RuntimeError(span, "compare: values of different shapes");
  auto cmp = [](auto x, auto y) { return x < y ? -1 : x > y ? 1 : 0; };
  switch (a->kind) {
    case Value::Int: return cmp(a->i, b->i);
    case Value::Float: return cmp(a->f, b->f);
    case Value::String: return a->s.compare(b->s) < 0 ? -1 : a->s == b->s ? 0 : 1;
    case Value::Bool: return cmp(a->b, b->b);
    case Value::Unit: return 0;
    case Value::Tuple:
    case Value::List: {
      size_t n = std::min(a->items.size(), b->items.size());
      for (size_t i = 0; i < n; ++i) {
        int c = compare_values(a->items[i], b->items[i], span);
        if (c) return c;
      }
      return cmp(a->items.size(), b->items.size());
    }
    case Value::Option:
      if (!a->some && !b->some) return 0;
      if (!a->some) return -1;
      if (!b->some) return 1;
      return compare_values(a->some, b->some, span);
    default:
      throw RuntimeError(span, "compare: functional values are not comparable");
  }
}

struct PrimDef {
  const char* name;
  int arity;
};

const PrimDef kPrims[] = {
    {"+", 2}, {"-", 2}, {"*", 2}, {"/", 2}, {"mod", 2},
    {"+.", 2}, {"-.", 2}, {"*.", 2}, {"/.", 2},
    {"=", 2}, {"<>", 2}, {"<", 2}, {">", 2}, {"<=", 2}, {">=", 2},
    {"compare", 2}, {"^", 2}, {"not", 1},
    {"string_of_int", 1}, {"string_of_float", 1}, {"string_of_bool", 1},
    {"print_string", 1}, {"print_endline", 1}, {"print_int", 1},
    {"sqrt", 1}, {"float", 1}, {"float_of_int", 1},
    {"fst", 1}, {"snd", 1}, {"ignore", 1},
    {"List.map", 2}, {"List.map2", 3}, {"List.fold_left", 3}, {"List.concat", 1},
    {"List.append", 2}, {"List.length", 1}, {"List.rev", 1}, {"List.sort", 2},
    {"String.concat", 2}, {"String.length", 1},
};

class Evaluator {
 public:
  explicit Evaluator(std::ostream& out) : out_(out) {}

  void program(const CoreProgram& p) {
    EnvV e = initial_env();
    for (auto& d : p.decls) decl(e, *d);
  }

 private:
  std::ostream& out_;

  EnvV initial_env() {
    EnvV e;
    for (auto& p : kPrims) {
      std::string n = p.name;
      auto dot = n.find('.');
      auto v = mkv(Value::Prim);
      v->prim = n;
      v->arity = p.arity;
      if (dot == std::string::npos || !std::isupper(static_cast<unsigned char>(n[0]))) {
        e.vals[n] = v;
      } else {
        auto modname = n.substr(0, dot);
        auto& m = e.mods[modname];
        if (!m) m = mkv(Value::Module);
        m->fields[n.substr(dot + 1)] = v;
      }
    }
    return e;
  }

  ValuePtr apply(ValuePtr fn, ValuePtr arg, Span span) {
    if (fn->kind == Value::Closure) {
      EnvV e = fn->env;
      if (fn->params[0] != "()") e.vals[fn->params[0]] = arg;
      if (fn->params.size() == 1) return expr(e, *fn->body);
      auto rest = mkv(Value::Closure);
      rest->params.assign(fn->params.begin() + 1, fn->params.end());
      rest->body = fn->body;
      rest->env = std::move(e);
      return rest;
    }
    if (fn->kind == Value::Prim) {
      auto next = std::make_shared<Value>(*fn);
      next->applied.push_back(std::move(arg));
      if (static_cast<int>(next->applied.size()) < next->arity) return next;
      return prim(next->prim, next->applied, span);
    }
    throw RuntimeError(span, "value is not a function");
  }

  ValuePtr prim(const std::string& name, std::vector<ValuePtr>& a, Span span) {
    if (name == "+") return mk_int(a[0]->i + a[1]->i);
    if (name == "-") return mk_int(a[0]->i - a[1]->i);
    if (name == "*") return mk_int(a[0]->i * a[1]->i);
    if (name == "/") {
      if (a[1]->i == 0) throw RuntimeError(span, "division by zero");
      return mk_int(a[0]->i / a[1]->i);
    }
    if (name == "mod") {
      if (a[1]->i == 0) throw RuntimeError(span, "division by zero");
      return mk_int(a[0]->i % a[1]->i);
    }
    if (name == "+.") return mk_float(a[0]->f + a[1]->f);
    if (name == "-.") return mk_float(a[0]->f - a[1]->f);
    if (name == "*.") return mk_float(a[0]->f * a[1]->f);
    if (name == "/.") return mk_float(a[0]->f / a[1]->f);
    if (name == "=") return mk_bool(compare_values(a[0], a[1], span) == 0);
    if (name == "<>") return mk_bool(compare_values(a[0], a[1], span) != 0);
    if (name == "<") return mk_bool(compare_values(a[0], a[1], span) < 0);
    if (name == ">") return mk_bool(compare_values(a[0], a[1], span) > 0);
    if (name == "<=") return mk_bool(compare_values(a[0], a[1], span) <= 0);
    if (name == ">=") return mk_bool(compare_values(a[0], a[1], span) >= 0);
    if (name == "compare") return mk_int(compare_values(a[0], a[1], span));
    if (name == "^") return mk_string(a[0]->s + a[1]->s);
    if (name == "not") return mk_bool(!a[0]->b);
    if (name == "string_of_int") return mk_string(std::to_string(a[0]->i));
    if (name == "string_of_float") return mk_string(float_str(a[0]->f));
    if (name == "string_of_bool") return mk_string(a[0]->b ? "true" : "false");
    if (name == "print_string") { out_ << a[0]->s; return mk_unit(); }
    if (name == "print_endline") { out_ << a[0]->s << "\n"; return mk_unit(); }
    if (name == "print_int") { out_ << a[0]->i; return mk_unit(); }
    if (name == "sqrt") return mk_float(std::sqrt(a[0]->f));
    if (name == "float" || name == "float_of_int")
      return mk_float(static_cast<double>(a[0]->i));
    if (name == "fst") return a[0]->items[0];
    if (name == "snd") return a[0]->items[1];
    if (name == "ignore") return mk_unit();

    if (name == "List.map") {
      auto out = mkv(Value::List);
      for (auto& x : a[1]->items) out->items.push_back(apply(a[0], x, span));
      return out;
    }
    if (name == "List.map2") {
      if (a[1]->items.size() != a[2]->items.size())
        throw RuntimeError(span, "List.map2: lists of different lengths");
      auto out = mkv(Value::List);
      for (size_t i = 0; i < a[1]->items.size(); ++i)
        out->items.push_back(apply(apply(a[0], a[1]->items[i], span), a[2]->items[i], span));
      return out;
    }
    if (name == "List.fold_left") {
      auto acc = a[1];
      for (auto& x : a[2]->items) acc = apply(apply(a[0], acc, span), x, span);
      return acc;
    }
    if (name == "List.concat") {
      auto out = mkv(Value::List);
      for (auto& l : a[0]->items)
        out->items.insert(out->items.end(), l->items.begin(), l->items.end());
      return out;
    }
    if (name == "List.append") {
      auto out = mkv(Value::List);
      out->items = a[0]->items;
      out->items.insert(out->items.end(), a[1]->items.begin(), a[1]->items.end());
      return out;
    }
    if (name == "List.length") return mk_int(static_cast<long long>(a[0]->items.size()));
    if (name == "List.rev") {
      auto out = mkv(Value::List);
      out->items.assign(a[0]->items.rbegin(), a[0]->items.rend());
      return out;
    }
    if (name == "List.sort") {
      auto out = mkv(Value::List);
      out->items = a[1]->items;
      std::stable_sort(out->items.begin(), out->items.end(),
                       [&](const ValuePtr& x, const ValuePtr& y) {
                         auto r = apply(apply(a[0], x, span), y, span);
                         return r->i < 0;
                       });
      return out;
    }
    if (name == "String.concat") {
      std::string out;
      for (size_t i = 0; i < a[1]->items.size(); ++i) {
        if (i) out += a[0]->s;
        out += a[1]->items[i]->s;
      }
      return mk_string(out);
    }
    if (name == "String.length") return mk_int(static_cast<long long>(a[0]->s.size()));
    throw RuntimeError(span, "unknown primitive '" + name + "'");
  }

  // -- modules --------------------------------------------------------------

  ValuePtr module_path(const EnvV& e, const ModPath& p, Span span) {
    switch (p.kind) {
      case ModPath::Name: {
        auto it = e.mods.find(p.name);
        if (it == e.mods.end())
          throw RuntimeError(span, "module '" + p.name + "' has no implementation");
        return it->second;
      }
      case ModPath::Proj: {
        auto base = module_path(e, *p.base, span);
        auto it = base->mods.find(p.name);
        if (it == base->mods.end())
          throw RuntimeError(span, "module member '" + p.name + "' has no implementation");
        return it->second;
      }
      case ModPath::App: {
        auto fn = module_path(e, *p.base, span);
        std::vector<ValuePtr> args;
        for (auto& a : p.args) args.push_back(module_path(e, *a, span));
        return apply_functor(fn, args, span);
      }
    }
    throw RuntimeError(span, "malformed module path");
  }

  ValuePtr apply_functor(const ValuePtr& fn, const std::vector<ValuePtr>& args, Span span) {
    if (fn->kind != Value::Functor)
      throw RuntimeError(span, "value applied as a functor is not one");
    if (args.size() != fn->mnames.size())
      throw RuntimeError(span, "functor applied to the wrong number of arguments");
    EnvV e = fn->env;
    for (size_t i = 0; i < args.size(); ++i) e.mods[fn->mnames[i]] = args[i];
    return modexpr(e, *fn->mbody);
  }

  ValuePtr modexpr(EnvV& e, const CModExpr& me) {
    switch (me.kind) {
      case CModExpr::Path:
        return module_path(e, *me.path, me.span);
      case CModExpr::Struct: {
        EnvV inner = e;
        auto out = mkv(Value::Module);
        for (auto& d : me.decls) {
          decl(inner, *d);
          if (d->kind == CDecl::Let)
            out->fields[d->name] = inner.vals[d->name];
          else if (d->kind == CDecl::Mod)
            out->mods[d->name] = inner.mods[d->name];
        }
        return out;
      }
      case CModExpr::Functor: {
        auto fv = mkv(Value::Functor);
        for (auto& p : me.mparams) fv->mnames.push_back(p.name);
        fv->mbody = me.body;
        fv->env = e;
        return fv;
      }
    }
    throw RuntimeError(me.span, "malformed module expression");
  }

  // -- patterns -------------------------------------------------------------

  bool match(EnvV& e, const ast::Pattern& p, const ValuePtr& v) {
    switch (p.kind) {
      case ast::Pattern::Var:
        e.vals[p.name] = v;
        return true;
      case ast::Pattern::Wildcard:
      case ast::Pattern::Unit:
        return true;
      case ast::Pattern::Int:
        return v->i == p.int_val;
      case ast::Pattern::Bool:
        return v->b == p.bool_val;
      case ast::Pattern::String:
        return v->s == p.str_val;
      case ast::Pattern::Tuple:
        for (size_t i = 0; i < p.args.size(); ++i)
          if (!match(e, *p.args[i], v->items[i])) return false;
        return true;
      case ast::Pattern::Nil:
        return v->items.empty();
      case ast::Pattern::Cons: {
        if (v->items.empty()) return false;
        auto tail = mkv(Value::List);
        tail->items.assign(v->items.begin() + 1, v->items.end());
        return match(e, *p.args[0], v->items[0]) && match(e, *p.args[1], tail);
      }
      case ast::Pattern::NoneP:
        return !v->some;
      case ast::Pattern::SomeP:
        return v->some && match(e, *p.args[0], v->some);
    }
    return false;
  }

  // -- expressions ----------------------------------------------------------

  ValuePtr expr(const EnvV& e, const CExpr& ex) {
    switch (ex.kind) {
      case CExpr::Int: return mk_int(ex.int_val);
      case CExpr::Float: return mk_float(ex.float_val);
      case CExpr::String: return mk_string(ex.str_val);
      case CExpr::Bool: return mk_bool(ex.bool_val);
      case CExpr::Unit: return mk_unit();

      case CExpr::Var: {
        auto it = e.vals.find(ex.name);
        if (it == e.vals.end())
          throw RuntimeError(ex.span, "unbound value '" + ex.name + "' at runtime");
        return it->second;
      }
      case CExpr::Member: {
        auto m = module_path(e, *ex.path, ex.span);
        auto it = m->fields.find(ex.name);
        if (it == m->fields.end())
          throw RuntimeError(ex.span, "member '" + ex.name + "' has no implementation");
        return it->second;
      }

      case CExpr::Lambda: {
        auto c = mkv(Value::Closure);
        c->params = ex.params;
        c->body = ex.body;
        c->env = e;
        return c;
      }
      case CExpr::App: {
        auto fn = expr(e, *ex.fn);
        for (auto& a : ex.args) fn = apply(std::move(fn), expr(e, *a), ex.span);
        return fn;
      }

      case CExpr::Let: {
        auto v = bind_rec(e, ex.is_rec, ex.name, *ex.bound);
        EnvV e2 = e;
        if (!ex.name.empty()) e2.vals[ex.name] = v;
        return expr(e2, *ex.body);
      }
      case CExpr::LocalMod: {
        EnvV e2 = e;
        e2.mods[ex.name] = modexpr(e2, *ex.mod);
        return expr(e2, *ex.body);
      }

      case CExpr::Tuple:
      case CExpr::ListLit: {
        auto v = mkv(ex.kind == CExpr::Tuple ? Value::Tuple : Value::List);
        for (auto& it : ex.items) v->items.push_back(expr(e, *it));
        return v;
      }
      case CExpr::Ctor: {
        if (ex.name == "None") return mkv(Value::Option);
        if (ex.name == "Some") {
          auto v = mkv(Value::Option);
          v->some = expr(e, *ex.items[0]);
          return v;
        }
        auto head = expr(e, *ex.items[0]);
        auto tail = expr(e, *ex.items[1]);
        auto v = mkv(Value::List);
        v->items.push_back(std::move(head));
        v->items.insert(v->items.end(), tail->items.begin(), tail->items.end());
        return v;
      }

      case CExpr::If:
        return expr(e, *ex.cond)->b ? expr(e, *ex.then_e) : expr(e, *ex.else_e);
      case CExpr::Seq:
        expr(e, *ex.bound);
        return expr(e, *ex.rhs);
      case CExpr::Match: {
        auto v = expr(e, *ex.scrutinee);
        for (auto& c : ex.cases) {
          EnvV ec = e;
          if (match(ec, *c.pat, v)) return expr(ec, *c.body);
        }
        throw RuntimeError(ex.span, "no pattern matched");
      }

      case CExpr::Pack: {
        auto pk = mkv(Value::Packed);
        for (auto& p : ex.mparams) pk->mnames.push_back(p.name);
        pk->vbody = ex.body;
        pk->env = e;
        return pk;
      }
      case CExpr::Unpack: {
        auto fn = expr(e, *ex.fn);
        for (auto& m : ex.margs) {
          if (fn->kind != Value::Packed)
            throw RuntimeError(ex.span, "module argument supplied to a non-functor value");
          // The argument path resolves in the use-site environment; the body
          // runs in the closure's environment extended with the binding.
          EnvV use = e;
          auto arg = modexpr(use, *m);
          EnvV e2 = fn->env;
          e2.mods[fn->mnames[0]] = std::move(arg);
          if (fn->mnames.size() == 1) {
            fn = expr(e2, *fn->vbody);
          } else {
            auto rest = std::make_shared<Value>(*fn);
            rest->mnames.erase(rest->mnames.begin());
            rest->env = std::move(e2);
            fn = rest;
          }
        }
        return fn;
      }
    }
    throw RuntimeError(ex.span, "malformed expression");
  }

  ValuePtr bind_rec(const EnvV& e, bool is_rec, const std::string& name, const CExpr& bound) {
    auto v = expr(e, bound);
    if (is_rec && !name.empty() &&
        (v->kind == Value::Closure || v->kind == Value::Packed))
      v->env.vals[name] = v;  // backpatch: the closure sees itself
    return v;
  }

  void decl(EnvV& e, const CDecl& d) {
    switch (d.kind) {
      case CDecl::Let:
        e.vals[d.name] = bind_rec(e, d.is_rec, d.name, *d.expr);
        break;
      case CDecl::Stmt:
        expr(e, *d.expr);
        break;
      case CDecl::Mod:
        e.mods[d.name] = modexpr(e, *d.mod);
        break;
      case CDecl::ModType:
        break;  // no runtime content
    }
  }
};

}  // namespace

void eval_program(const CoreProgram& p, std::ostream& out) {
  Evaluator ev(out);
  ev.program(p);
}

std::string eval_to_string(const CoreProgram& p) {
  std::ostringstream os;
  eval_program(p, os);
  return os.str();
}

}  // namespace implicitml
