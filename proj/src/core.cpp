#include "implicitml/core.hpp"

#include <cctype>
#include <sstream>

#include "implicitml/pretty.hpp"

namespace implicitml::core {

namespace {

// -- implicit-freeness scan -------------------------------------------------
// The IR cannot represent implicit constructs, so the scan checks shape
// invariants instead: every Pack introduces at least one annotated module
// parameter and every Unpack supplies at least one module argument.

bool scan_mod(const CModExprPtr& m);

bool scan(const CExprPtr& e) {
  if (!e) return true;
  switch (e->kind) {
    case CExpr::Pack:
      if (e->mparams.empty()) return false;
      for (auto& p : e->mparams)
        if (!p.sig) return false;
      return scan(e->body);
    case CExpr::Unpack:
      if (e->margs.empty()) return false;
      for (auto& m : e->margs)
        if (!scan_mod(m)) return false;
      return scan(e->fn);
    default:
      break;
  }
  for (auto& a : e->args)
    if (!scan(a)) return false;
  for (auto& it : e->items)
    if (!scan(it)) return false;
  for (auto& c : e->cases)
    if (!scan(c.body)) return false;
  return scan(e->body) && scan(e->fn) && scan(e->bound) && scan(e->cond) &&
         scan(e->then_e) && scan(e->else_e) && scan(e->rhs) && scan(e->scrutinee) &&
         (e->kind != CExpr::LocalMod || scan_mod(e->mod));
}

bool scan_decl(const CDeclPtr& d);

bool scan_mod(const CModExprPtr& m) {
  if (!m) return true;
  switch (m->kind) {
    case CModExpr::Path:
      return true;
    case CModExpr::Struct:
      for (auto& d : m->decls)
        if (!scan_decl(d)) return false;
      return true;
    case CModExpr::Functor:
      for (auto& p : m->mparams)
        if (!p.sig) return false;
      return scan_mod(m->body);
  }
  return true;
}

bool scan_decl(const CDeclPtr& d) {
  if (!d) return true;
  switch (d->kind) {
    case CDecl::Let:
    case CDecl::Stmt:
      return scan(d->expr);
    case CDecl::Mod:
      return scan_mod(d->mod);
    case CDecl::ModType:
      return true;
  }
  return true;
}

// -- printing ---------------------------------------------------------------

struct Printer {
  std::ostringstream os;
  int fresh = 0;
  int indent = 0;

  void nl() {
    os << "\n";
    for (int i = 0; i < indent; ++i) os << "  ";
  }

  static std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
      }
    }
    return out;
  }

  static std::string float_lit(double v) {
    std::ostringstream s;
    s << v;
    auto out = s.str();
    if (out.find('.') == std::string::npos && out.find('e') == std::string::npos &&
        out.find("inf") == std::string::npos && out.find("nan") == std::string::npos)
      out += ".";
    return out;
  }

  bool atomic(const CExpr& e) {
    switch (e.kind) {
      case CExpr::Int:
        return e.int_val >= 0;
      case CExpr::Float:
        return e.float_val >= 0;
      case CExpr::String:
      case CExpr::Bool:
      case CExpr::Unit:
      case CExpr::Var:
      case CExpr::Member:
      case CExpr::Tuple:
      case CExpr::ListLit:
        return true;
      default:
        return false;
    }
  }

  void atom(const CExpr& e) {
    if (atomic(e)) {
      expr(e);
    } else {
      os << "(";
      expr(e);
      os << ")";
    }
  }

  void expr(const CExpr& e) {
    switch (e.kind) {
      case CExpr::Int:
        os << e.int_val;
        return;
      case CExpr::Float:
        os << float_lit(e.float_val);
        return;
      case CExpr::String:
        os << '"' << escape(e.str_val) << '"';
        return;
      case CExpr::Bool:
        os << (e.bool_val ? "true" : "false");
        return;
      case CExpr::Unit:
        os << "()";
        return;
      case CExpr::Var: {
        bool word = !e.name.empty() &&
                    (std::isalpha(static_cast<unsigned char>(e.name[0])) || e.name[0] == '_');
        if (word)
          os << e.name;
        else
          os << "( " << e.name << " )";
        return;
      }
      case CExpr::Member: {
        bool word = !e.name.empty() &&
                    (std::isalpha(static_cast<unsigned char>(e.name[0])) || e.name[0] == '_');
        os << types::path_str(*e.path) << ".";
        if (word)
          os << e.name;
        else
          os << "( " << e.name << " )";
        return;
      }
      case CExpr::Lambda:
        os << "fun";
        for (size_t i = 0; i < e.params.size(); ++i) {
          auto annot = i < e.param_annots.size() ? e.param_annots[i] : nullptr;
          if (annot)
            os << " (" << e.params[i] << " : " << pretty(*annot) << ")";
          else
            os << " " << e.params[i];
        }
        os << " -> ";
        expr(*e.body);
        return;
      case CExpr::App:
        atom(*e.fn);
        for (auto& a : e.args) {
          os << " ";
          atom(*a);
        }
        return;
      case CExpr::Let:
        os << "let " << (e.is_rec ? "rec " : "") << (e.name.empty() ? "()" : e.name) << " = ";
        expr(*e.bound);
        os << " in ";
        expr(*e.body);
        return;
      case CExpr::LocalMod:
        os << "let module " << e.name << " = ";
        modexpr(*e.mod);
        os << " in ";
        expr(*e.body);
        return;
      case CExpr::Tuple: {
        os << "(";
        for (size_t i = 0; i < e.items.size(); ++i) {
          if (i) os << ", ";
          expr(*e.items[i]);
        }
        os << ")";
        return;
      }
      case CExpr::ListLit: {
        os << "[";
        for (size_t i = 0; i < e.items.size(); ++i) {
          if (i) os << "; ";
          atom(*e.items[i]);
        }
        os << "]";
        return;
      }
      case CExpr::Ctor:
        if (e.name == "None") {
          os << "None";
        } else if (e.name == "Some") {
          os << "Some ";
          atom(*e.items[0]);
        } else {  // ::
          atom(*e.items[0]);
          os << " :: ";
          atom(*e.items[1]);
        }
        return;
      case CExpr::If:
        os << "if ";
        expr(*e.cond);
        os << " then ";
        atom(*e.then_e);
        os << " else ";
        atom(*e.else_e);
        return;
      case CExpr::Seq:
        atom(*e.bound);
        os << "; ";
        expr(*e.rhs);
        return;
      case CExpr::Match:
        os << "match ";
        expr(*e.scrutinee);
        os << " with";
        for (auto& c : e.cases) {
          os << " | " << pretty(*c.pat) << " -> ";
          atom(*c.body);
        }
        return;
      case CExpr::Pack: {
        os << "functor";
        for (auto& p : e.mparams) os << " (" << p.name << " : " << p.sig_text << ")";
        os << " -> struct let value = ";
        expr(*e.body);
        os << " end";
        return;
      }
      case CExpr::Unpack: {
        int n = ++fresh;
        os << "let module F" << n << " = (val ";
        expr(*e.fn);
        os << ") in let module R" << n << " = F" << n;
        for (auto& m : e.margs) {
          os << "(";
          modexpr(*m);
          os << ")";
        }
        os << " in R" << n << ".value";
        return;
      }
    }
  }

  void modexpr(const CModExpr& m) {
    switch (m.kind) {
      case CModExpr::Path:
        os << types::path_str(*m.path);
        return;
      case CModExpr::Struct: {
        os << "struct";
        indent++;
        for (auto& d : m.decls) {
          nl();
          decl(*d, false);
        }
        indent--;
        nl();
        os << "end";
        return;
      }
      case CModExpr::Functor:
        os << "functor";
        for (auto& p : m.mparams) os << " (" << p.name << " : " << p.sig_text << ")";
        os << " -> ";
        modexpr(*m.body);
        return;
    }
  }

  void decl(const CDecl& d, bool top) {
    switch (d.kind) {
      case CDecl::Let:
        os << "let " << (d.is_rec ? "rec " : "");
        if (d.name.empty()) {
          os << "()";
        } else {
          bool word = std::isalpha(static_cast<unsigned char>(d.name[0])) || d.name[0] == '_';
          os << (word ? d.name : "( " + d.name + " )");
        }
        os << " = ";
        expr(*d.expr);
        break;
      case CDecl::Stmt:
        os << "let () = ";
        expr(*d.expr);
        break;
      case CDecl::Mod:
        os << "module " << d.name << " = ";
        modexpr(*d.mod);
        break;
      case CDecl::ModType:
        os << "module type " << d.name << " = " << pretty(*d.sig_ast);
        break;
    }
    if (top) os << ";;";
  }
};

}  // namespace

bool implicit_free(const CoreProgram& p) {
  for (auto& d : p.decls)
    if (!scan_decl(d)) return false;
  return true;
}

std::string print_core(const CoreProgram& p) {
  Printer pr;
  for (auto& d : p.decls) {
    pr.decl(*d, true);
    pr.os << "\n";
  }
  return pr.os.str();
}

std::string print_core(const CExpr& e) {
  Printer pr;
  pr.expr(e);
  return pr.os.str();
}

}  // namespace implicitml::core
