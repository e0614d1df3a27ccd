#include "implicitml/types.hpp"

#include <atomic>
#include <sstream>

namespace implicitml::types {

// -- paths ----------------------------------------------------------------

ModPathPtr ModPath::mk_name(std::string n) {
  auto p = std::make_shared<ModPath>();
  p->kind = Name;
  p->name = std::move(n);
  return p;
}
ModPathPtr ModPath::mk_proj(ModPathPtr base, std::string member) {
  auto p = std::make_shared<ModPath>();
  p->kind = Proj;
  p->base = std::move(base);
  p->name = std::move(member);
  return p;
}
ModPathPtr ModPath::mk_app(ModPathPtr fn, std::vector<ModPathPtr> args) {
  auto p = std::make_shared<ModPath>();
  p->kind = App;
  p->base = std::move(fn);
  p->args = std::move(args);
  return p;
}

bool path_equal(const ModPath& a, const ModPath& b) {
  if (a.kind != b.kind || a.name != b.name) return false;
  if (!a.base != !b.base) return false;
  if (a.base && !path_equal(*a.base, *b.base)) return false;
  if (a.args.size() != b.args.size()) return false;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!path_equal(*a.args[i], *b.args[i])) return false;
  return true;
}

std::string path_str(const ModPath& p) {
  switch (p.kind) {
    case ModPath::Name:
      return p.name;
    case ModPath::Proj:
      return path_str(*p.base) + "." + p.name;
    case ModPath::App: {
      std::string s = path_str(*p.base);
      for (auto& a : p.args) s += "(" + path_str(*a) + ")";
      return s;
    }
  }
  return "?";
}

ModPathPtr path_subst(const ModPathPtr& p, const std::string& from, const ModPathPtr& to) {
  if (!p) return p;
  switch (p->kind) {
    case ModPath::Name:
      return p->name == from ? to : p;
    case ModPath::Proj: {
      auto base = path_subst(p->base, from, to);
      if (base == p->base) return p;
      return ModPath::mk_proj(base, p->name);
    }
    case ModPath::App: {
      auto base = path_subst(p->base, from, to);
      std::vector<ModPathPtr> args;
      bool changed = base != p->base;
      for (auto& a : p->args) {
        auto na = path_subst(a, from, to);
        changed = changed || na != a;
        args.push_back(na);
      }
      if (!changed) return p;
      return ModPath::mk_app(base, std::move(args));
    }
  }
  return p;
}

int path_size(const ModPath& p) {
  int n = 1;
  if (p.base) n += path_size(*p.base);
  for (auto& a : p.args) n += path_size(*a);
  return n;
}

// -- constructors ---------------------------------------------------------

TypePtr mk_var(int id) {
  auto t = std::make_shared<Type>();
  t->kind = Type::Var;
  t->id = id;
  return t;
}
TypePtr mk_rigid(int id, std::string display) {
  auto t = std::make_shared<Type>();
  t->kind = Type::Rigid;
  t->id = id;
  t->name = std::move(display);
  return t;
}
TypePtr mk_ctor(std::string name, std::vector<TypePtr> args) {
  auto t = std::make_shared<Type>();
  t->kind = Type::Ctor;
  t->name = std::move(name);
  t->args = std::move(args);
  return t;
}
TypePtr mk_member(ModPathPtr path, std::string member, std::vector<TypePtr> args) {
  auto t = std::make_shared<Type>();
  t->kind = Type::Member;
  t->path = std::move(path);
  t->name = std::move(member);
  t->args = std::move(args);
  return t;
}
TypePtr mk_tuple(std::vector<TypePtr> comps) {
  auto t = std::make_shared<Type>();
  t->kind = Type::Tuple;
  t->args = std::move(comps);
  return t;
}
TypePtr mk_arrow(TypePtr dom, TypePtr cod) {
  auto t = std::make_shared<Type>();
  t->kind = Type::Arrow;
  t->a = std::move(dom);
  t->b = std::move(cod);
  return t;
}
TypePtr mk_implicit_arrow(std::string internal, std::string display, SigPtr sig, TypePtr cod) {
  auto t = std::make_shared<Type>();
  t->kind = Type::ImplicitArrow;
  t->param_name = std::move(internal);
  t->param_display = std::move(display);
  t->param_sig = std::move(sig);
  t->b = std::move(cod);
  return t;
}

// -- signatures -----------------------------------------------------------

const SigEntry* Signature::find(SigEntry::Kind kind, const std::string& name) const {
  for (auto& it : items)
    if (it.kind == kind && it.name == name) return &it;
  return nullptr;
}

int fresh_scheme_var() {
  static std::atomic<int> next{0};
  return --next;
}

int fresh_self_id() {
  static std::atomic<int> next{0};
  return ++next;
}
std::string fresh_self() { return "*" + std::to_string(fresh_self_id()); }

// -- substitution ---------------------------------------------------------

TypePtr subst_path(const TypePtr& t, const std::string& from, const ModPathPtr& to) {
  if (!t) return t;
  switch (t->kind) {
    case Type::Var:
    case Type::Rigid:
      return t;
    case Type::Ctor:
    case Type::Tuple: {
      auto n = std::make_shared<Type>(*t);
      for (auto& a : n->args) a = subst_path(a, from, to);
      return n;
    }
    case Type::Member: {
      auto n = std::make_shared<Type>(*t);
      n->path = path_subst(n->path, from, to);
      for (auto& a : n->args) a = subst_path(a, from, to);
      return n;
    }
    case Type::Arrow: {
      auto n = std::make_shared<Type>(*t);
      n->a = subst_path(n->a, from, to);
      n->b = subst_path(n->b, from, to);
      return n;
    }
    case Type::ImplicitArrow: {
      auto n = std::make_shared<Type>(*t);
      n->param_sig = subst_path_sig(n->param_sig, from, to);
      n->b = subst_path(n->b, from, to);
      return n;
    }
  }
  return t;
}

SigPtr subst_path_sig(const SigPtr& s, const std::string& from, const ModPathPtr& to) {
  if (!s) return s;
  auto n = std::make_shared<Signature>(*s);
  for (auto& it : n->items) {
    switch (it.kind) {
      case SigEntry::Type:
        it.type.manifest = subst_path(it.type.manifest, from, to);
        break;
      case SigEntry::Val:
        it.val.body = subst_path(it.val.body, from, to);
        break;
      case SigEntry::Module:
        it.mod.sig = subst_path_sig(it.mod.sig, from, to);
        it.mod.alias = path_subst(it.mod.alias, from, to);
        break;
    }
  }
  return n;
}

TypePtr subst_vars(const TypePtr& t, const std::map<int, TypePtr>& sub) {
  if (!t) return t;
  switch (t->kind) {
    case Type::Var: {
      auto it = sub.find(t->id);
      return it == sub.end() ? t : it->second;
    }
    case Type::Rigid:
      return t;
    case Type::Ctor:
    case Type::Tuple:
    case Type::Member: {
      auto n = std::make_shared<Type>(*t);
      for (auto& a : n->args) a = subst_vars(a, sub);
      return n;
    }
    case Type::Arrow: {
      auto n = std::make_shared<Type>(*t);
      n->a = subst_vars(n->a, sub);
      n->b = subst_vars(n->b, sub);
      return n;
    }
    case Type::ImplicitArrow: {
      auto n = std::make_shared<Type>(*t);
      n->b = subst_vars(n->b, sub);
      return n;
    }
  }
  return t;
}

// -- store ----------------------------------------------------------------

int TypeStore::fresh() {
  bindings_.push_back(nullptr);
  return static_cast<int>(bindings_.size()) - 1;
}
int TypeStore::fresh_rigid() { return ++next_rigid_; }

bool TypeStore::bound(int id) const {
  return id >= 0 && id < static_cast<int>(bindings_.size()) && bindings_[id] != nullptr;
}
const TypePtr& TypeStore::binding(int id) const { return bindings_[id]; }

void TypeStore::bind(int id, TypePtr t) {
  bindings_[id] = std::move(t);
  trail_.push_back(id);
}

TypePtr TypeStore::shorten(TypePtr t) const {
  while (t && t->kind == Type::Var && bound(t->id)) t = bindings_[t->id];
  return t;
}

TypePtr TypeStore::resolve(const TypePtr& t0) const {
  TypePtr t = shorten(t0);
  if (!t) return t;
  switch (t->kind) {
    case Type::Var:
    case Type::Rigid:
      return t;
    case Type::Ctor:
    case Type::Tuple:
    case Type::Member: {
      auto n = std::make_shared<Type>(*t);
      for (auto& a : n->args) a = resolve(a);
      return n;
    }
    case Type::Arrow: {
      auto n = std::make_shared<Type>(*t);
      n->a = resolve(n->a);
      n->b = resolve(n->b);
      return n;
    }
    case Type::ImplicitArrow: {
      auto n = std::make_shared<Type>(*t);
      n->b = resolve(n->b);
      return n;
    }
  }
  return t;
}

void TypeStore::undo(size_t mark) {
  while (trail_.size() > mark) {
    bindings_[trail_.back()] = nullptr;
    trail_.pop_back();
  }
}

std::vector<std::pair<int, TypePtr>> TypeStore::delta(size_t mark) const {
  std::vector<std::pair<int, TypePtr>> out;
  for (size_t i = mark; i < trail_.size(); ++i)
    out.push_back({trail_[i], bindings_[trail_[i]]});
  return out;
}

bool TypeStore::occurs(int id, const TypePtr& t0) const {
  TypePtr t = shorten(t0);
  if (!t) return false;
  switch (t->kind) {
    case Type::Var:
      return t->id == id;
    case Type::Rigid:
      return false;
    case Type::Ctor:
    case Type::Tuple:
    case Type::Member:
      for (auto& a : t->args)
        if (occurs(id, a)) return true;
      return false;
    case Type::Arrow:
      return occurs(id, t->a) || occurs(id, t->b);
    case Type::ImplicitArrow:
      return occurs(id, t->b);
  }
  return false;
}

// -- printing -------------------------------------------------------------

namespace {

void debug_rec(const TypePtr& t0, const TypeStore& store, std::ostringstream& os) {
  TypePtr t = store.shorten(t0);
  if (!t) {
    os << "(null)";
    return;
  }
  switch (t->kind) {
    case Type::Var:
      os << "?" << t->id;
      return;
    case Type::Rigid:
      os << "!" << t->id;
      return;
    case Type::Ctor:
      if (t->args.empty()) {
        os << t->name;
        return;
      }
      os << "(" << t->name;
      for (auto& a : t->args) {
        os << " ";
        debug_rec(a, store, os);
      }
      os << ")";
      return;
    case Type::Member:
      os << "(member " << path_str(*t->path) << "." << t->name;
      for (auto& a : t->args) {
        os << " ";
        debug_rec(a, store, os);
      }
      os << ")";
      return;
    case Type::Tuple:
      os << "(tuple";
      for (auto& a : t->args) {
        os << " ";
        debug_rec(a, store, os);
      }
      os << ")";
      return;
    case Type::Arrow:
      os << "(-> ";
      debug_rec(t->a, store, os);
      os << " ";
      debug_rec(t->b, store, os);
      os << ")";
      return;
    case Type::ImplicitArrow:
      os << "({" << t->param_display << "} ";
      debug_rec(t->b, store, os);
      os << ")";
      return;
  }
}

struct Namer {
  std::map<int, std::string> vars;    // Var id -> 'a
  std::map<int, std::string> rigids;  // Rigid id -> 'a (display hint wins)
  int next = 0;

  std::string alloc() {
    int n = next++;
    std::string s;
    do {
      s = char('a' + n % 26) + s;
      n = n / 26 - 1;
    } while (n >= 0);
    return "'" + s;
  }
  std::string var(int id) {
    auto it = vars.find(id);
    if (it != vars.end()) return it->second;
    return vars[id] = alloc();
  }
  std::string rigid(int id, const std::string& hint) {
    auto it = rigids.find(id);
    if (it != rigids.end()) return it->second;
    if (!hint.empty()) return rigids[id] = "'" + hint;
    return rigids[id] = alloc();
  }
};

std::string sig_str_n(const Signature& s, const TypeStore& store, Namer& names);

// prec: 0 arrow position, 1 tuple component, 2 ctor argument
std::string user_rec(const TypePtr& t0, const TypeStore& store, Namer& names, int prec) {
  TypePtr t = store.shorten(t0);
  if (!t) return "_";
  switch (t->kind) {
    case Type::Var:
      return names.var(t->id);
    case Type::Rigid:
      return names.rigid(t->id, t->name);
    case Type::Ctor: {
      if (t->args.empty()) return t->name;
      std::string s = user_rec(t->args[0], store, names, 2) + " " + t->name;
      return s;
    }
    case Type::Member: {
      std::string head = path_str(*t->path) + "." + t->name;
      if (t->args.empty()) return head;
      return user_rec(t->args[0], store, names, 2) + " " + head;
    }
    case Type::Tuple: {
      std::string s;
      for (size_t i = 0; i < t->args.size(); ++i) {
        if (i) s += " * ";
        s += user_rec(t->args[i], store, names, 2);
      }
      return prec >= 1 ? "(" + s + ")" : s;
    }
    case Type::Arrow: {
      std::string s =
          user_rec(t->a, store, names, 1) + " -> " + user_rec(t->b, store, names, 0);
      return prec >= 1 ? "(" + s + ")" : s;
    }
    case Type::ImplicitArrow: {
      std::string sig_text;
      if (!t->param_sig->name.empty()) {
        sig_text = t->param_sig->name;
      } else {
        auto sig = subst_path_sig(t->param_sig, t->param_sig->self,
                                  ModPath::mk_name(t->param_display));
        sig_text = sig_str_n(*sig, store, names);
      }
      std::string s = "{" + t->param_display + " : " + sig_text + "} -> " +
                      user_rec(subst_path(t->b, t->param_name, ModPath::mk_name(t->param_display)),
                               store, names, 0);
      return prec >= 1 ? "(" + s + ")" : s;
    }
  }
  return "?";
}

std::string sig_str_n(const Signature& s, const TypeStore& store, Namer& names) {
  std::string out = "sig";
  for (auto& it : s.items) {
    switch (it.kind) {
      case SigEntry::Type: {
        out += " type ";
        for (int p : it.type.params) out += names.rigid(p, "") + " ";
        out += it.name;
        if (it.type.manifest)
          out += " = " + user_rec(it.type.manifest, store, names, 0);
        break;
      }
      case SigEntry::Val: {
        out += " val " + it.name + " : " + user_rec(it.val.body, store, names, 0);
        break;
      }
      case SigEntry::Module: {
        out += it.mod.implicit ? " implicit module " : " module ";
        out += it.name;
        if (it.mod.alias)
          out += " = " + path_str(*it.mod.alias);
        else
          out += " : " + sig_str_n(*it.mod.sig, store, names);
        break;
      }
    }
  }
  return out + " end";
}

}  // namespace

std::string debug_str(const TypePtr& t, const TypeStore& store) {
  std::ostringstream os;
  debug_rec(t, store, os);
  return os.str();
}

std::string user_str(const TypePtr& t, const TypeStore& store) {
  Namer names;
  return user_rec(t, store, names, 0);
}

std::string user_str_scheme(const Scheme& s, const TypeStore& store) {
  return user_str(s.body, store);
}

std::string sig_str(const Signature& s, const TypeStore& store) {
  Namer names;
  return sig_str_n(s, store, names);
}

}  // namespace implicitml::types
