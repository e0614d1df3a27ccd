#include "implicitml/pretty.hpp"

#include <sstream>
#include <unordered_set>

namespace implicitml {

using namespace ast;

namespace {

const std::unordered_set<std::string> kOperatorNames = {
    "=", "<>", "<", ">", "<=", ">=", ">>=", "+", "-", "+.", "-.",
    "*", "/", "*.", "/.", "^", "&&", "||", "::"};

bool is_operator_name(const std::string& s) { return kOperatorNames.count(s) > 0; }

std::string value_name(const std::string& s) {
  return is_operator_name(s) ? "( " + s + " )" : s;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string quote_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      default: out += c;
    }
  }
  out += "\"";
  return out;
}

std::string float_literal(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  std::string s = os.str();
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".";
  return s;
}

// -- types ----------------------------------------------------------------

std::string type_str(const TypeAst& t);

std::string type_atom(const TypeAst& t) {
  std::string s = type_str(t);
  if (t.kind == TypeAst::Arrow || t.kind == TypeAst::ImplicitArrow || t.kind == TypeAst::Tuple)
    return "(" + s + ")";
  return s;
}

std::string modtype_str(const ModType& t);

std::string type_str(const TypeAst& t) {
  switch (t.kind) {
    case TypeAst::Var:
      return "'" + t.name;
    case TypeAst::Name:
      if (t.args.empty()) return t.name;
      return type_atom(*t.args[0]) + " " + t.name;
    case TypeAst::Member: {
      std::string head = join(t.path, ".") + "." + t.name;
      if (t.args.empty()) return head;
      return type_atom(*t.args[0]) + " " + head;
    }
    case TypeAst::Tuple: {
      std::vector<std::string> parts;
      for (auto& a : t.args) parts.push_back(type_atom(*a));
      return join(parts, " * ");
    }
    case TypeAst::Arrow: {
      std::string dom = type_str(*t.a);
      if (t.a->kind == TypeAst::Arrow || t.a->kind == TypeAst::ImplicitArrow)
        dom = "(" + dom + ")";
      return dom + " -> " + type_str(*t.b);
    }
    case TypeAst::ImplicitArrow:
      return "{" + t.param_name + " : " + modtype_str(*t.param_type) + "} -> " + type_str(*t.b);
  }
  return "?";
}

// -- module types ---------------------------------------------------------

std::string param_str(const Param& p) {
  if (p.kind == Param::Implicit) return "{" + p.name + " : " + modtype_str(*p.sig) + "}";
  if (p.ascription) return "(" + p.name + " : " + type_str(*p.ascription) + ")";
  return p.name;
}

std::string sig_item_str(const SigItem& it) {
  switch (it.kind) {
    case SigItem::Type: {
      std::string s = "type ";
      for (auto& tp : it.type_params) s += "'" + tp + " ";
      s += it.name;
      if (it.manifest) s += " = " + type_str(*it.manifest);
      return s;
    }
    case SigItem::Val:
      return "val " + value_name(it.name) + " : " + type_str(*it.val_type);
    case SigItem::Module:
      return "module " + it.name + " : " + modtype_str(*it.mod_type);
    case SigItem::ModuleAlias:
      return "module " + it.name + " = " + join(it.alias_path, ".");
    case SigItem::ImplicitModule: {
      std::string s = "implicit module " + it.name;
      for (auto& p : it.iparams) s += " " + param_str(p);
      if (it.mod_type)
        s += " : " + modtype_str(*it.mod_type);
      else
        s += " = " + join(it.alias_path, ".");
      return s;
    }
  }
  return "?";
}

std::string modtype_str(const ModType& t) {
  switch (t.kind) {
    case ModType::Name:
      return join(t.path, ".");
    case ModType::Sig: {
      std::string s = "sig";
      for (auto& it : t.items) s += " " + sig_item_str(it);
      s += " end";
      return s;
    }
    case ModType::With: {
      std::string s = modtype_str(*t.base) + " with type ";
      for (auto& tp : t.with_params) s += "'" + tp + " ";
      s += t.with_name + " = " + type_str(*t.with_type);
      return s;
    }
  }
  return "?";
}

// -- patterns -------------------------------------------------------------

std::string pattern_str(const Pattern& p) {
  switch (p.kind) {
    case Pattern::Var: return p.name;
    case Pattern::Wildcard: return "_";
    case Pattern::Unit: return "()";
    case Pattern::Int:
      return p.int_val < 0 ? "(" + std::to_string(p.int_val) + ")" : std::to_string(p.int_val);
    case Pattern::Bool: return p.bool_val ? "true" : "false";
    case Pattern::String: return quote_string(p.str_val);
    case Pattern::Tuple: {
      std::vector<std::string> parts;
      for (auto& a : p.args) parts.push_back(pattern_str(*a));
      return "(" + join(parts, ", ") + ")";
    }
    case Pattern::Nil: return "[]";
    case Pattern::Cons:
      return "(" + pattern_str(*p.args[0]) + " :: " + pattern_str(*p.args[1]) + ")";
    case Pattern::NoneP: return "None";
    case Pattern::SomeP: return "(Some " + pattern_str(*p.args[0]) + ")";
  }
  return "?";
}

// -- module expressions and declarations ----------------------------------

std::string expr_str(const Expr& e);
std::string decl_str(const Decl& d);

std::string modexpr_str(const ModExpr& m) {
  switch (m.kind) {
    case ModExpr::Path:
      return join(m.path, ".");
    case ModExpr::Struct: {
      std::string s = "struct";
      for (auto& d : m.decls) s += " " + decl_str(*d);
      s += " end";
      return s;
    }
    case ModExpr::Apply: {
      std::string s = modexpr_str(*m.fn);
      for (auto& a : m.args) {
        if (m.implicit_style)
          s += "{" + modexpr_str(*a) + "}";
        else
          s += "(" + modexpr_str(*a) + ")";
      }
      return s;
    }
  }
  return "?";
}

// -- expressions ----------------------------------------------------------

std::string expr_atom(const Expr& e) {
  std::string s = expr_str(e);
  switch (e.kind) {
    case Expr::Int:
      return e.int_val < 0 ? "(" + s + ")" : s;
    case Expr::Float:
      return e.float_val < 0 ? "(" + s + ")" : s;
    case Expr::String:
    case Expr::Bool:
    case Expr::Unit:
    case Expr::Var:
    case Expr::ListLit:
      return s;
    case Expr::Ctor:
      return e.items.empty() ? s : "(" + s + ")";
    default:
      return "(" + s + ")";
  }
}

std::string expr_str(const Expr& e) {
  switch (e.kind) {
    case Expr::Int: return std::to_string(e.int_val);
    case Expr::Float:
      return e.float_val < 0 ? "-." + float_literal(-e.float_val) : float_literal(e.float_val);
    case Expr::String: return quote_string(e.str_val);
    case Expr::Bool: return e.bool_val ? "true" : "false";
    case Expr::Unit: return "()";
    case Expr::Var: {
      std::string n = value_name(e.name);
      if (e.path.empty()) return n;
      return join(e.path, ".") + "." + n;
    }
    case Expr::Lambda: {
      std::string s = "fun";
      for (auto& p : e.params) s += " " + param_str(p);
      return s + " -> " + expr_str(*e.body);
    }
    case Expr::App: {
      std::string s = expr_atom(*e.fn);
      for (auto& a : e.args) {
        if (a.mod)
          s += " {" + modexpr_str(*a.mod) + "}";
        else
          s += " " + expr_atom(*a.expr);
      }
      return s;
    }
    case Expr::Let: {
      std::string s = "let ";
      if (e.is_rec) s += "rec ";
      s += e.unit_pat ? "()" : value_name(e.name);
      for (auto& p : e.params) s += " " + param_str(p);
      if (e.ascription) s += " : " + type_str(*e.ascription);
      s += " = " + expr_str(*e.bound) + " in " + expr_str(*e.body);
      return s;
    }
    case Expr::LetImplicitMod: {
      std::string s = "let implicit module " + e.mod_name;
      for (auto& p : e.mod_params) s += " " + param_str(p);
      s += " = " + modexpr_str(*e.mod_expr) + " in " + expr_str(*e.body);
      return s;
    }
    case Expr::LetOpenImplicit:
      return "let open implicit " + join(e.path, ".") + " in " + expr_str(*e.body);
    case Expr::Tuple: {
      std::vector<std::string> parts;
      for (auto& it : e.items) parts.push_back(expr_atom(*it));
      return join(parts, ", ");
    }
    case Expr::ListLit: {
      std::vector<std::string> parts;
      for (auto& it : e.items) parts.push_back(expr_atom(*it));
      return "[" + join(parts, "; ") + "]";
    }
    case Expr::Ctor: {
      if (e.name == "::")
        return expr_atom(*e.items[0]) + " :: " + expr_atom(*e.items[1]);
      if (e.name == "None") return "None";
      if (e.items.empty()) return e.name;
      return e.name + " " + expr_atom(*e.items[0]);
    }
    case Expr::If:
      return "if " + expr_str(*e.cond) + " then " + expr_str(*e.then_e) + " else " +
             expr_str(*e.else_e);
    case Expr::Seq: {
      // The left part must not swallow the ';' when reparsed.
      std::string lhs =
          e.bound->kind == Expr::Seq ? expr_str(*e.bound) : expr_atom(*e.bound);
      return lhs + "; " + expr_str(*e.rhs);
    }
    case Expr::Ascribe:
      return "(" + expr_str(*e.bound) + " : " + type_str(*e.ascription) + ")";
    case Expr::Match: {
      std::string s = "match " + expr_str(*e.scrutinee) + " with";
      for (auto& c : e.cases) s += " | " + pattern_str(*c.pat) + " -> " + expr_atom(*c.body);
      return s;
    }
  }
  return "?";
}

std::string decl_str(const Decl& d) {
  switch (d.kind) {
    case Decl::Let: {
      std::string s = "let ";
      if (d.is_rec) s += "rec ";
      s += d.unit_pat ? "()" : value_name(d.name);
      for (auto& p : d.params) s += " " + param_str(p);
      if (d.ascription) s += " : " + type_str(*d.ascription);
      s += " = " + expr_str(*d.expr);
      return s;
    }
    case Decl::Module: {
      std::string s = d.is_implicit ? "implicit module " : "module ";
      s += d.name;
      for (auto& p : d.params) s += " " + param_str(p);
      if (d.mod_ascription) s += " : " + modtype_str(*d.mod_ascription);
      if (d.mod_expr) s += " = " + modexpr_str(*d.mod_expr);
      return s;
    }
    case Decl::ModuleType:
      return "module type " + d.name + " = " + modtype_str(*d.mod_type);
    case Decl::OpenImplicit:
      return "open implicit " + join(d.path, ".");
    case Decl::ExprStmt:
      return expr_str(*d.expr);
    case Decl::Type: {
      std::string s = "type ";
      for (auto& tp : d.type_params) s += "'" + tp + " ";
      return s + d.name + " = " + type_str(*d.manifest);
    }
  }
  return "?";
}

}  // namespace

std::string pretty(const Program& p) {
  std::string out;
  for (auto& d : p.decls) {
    out += decl_str(*d);
    out += ";;\n";
  }
  return out;
}
std::string pretty(const Expr& e) { return expr_str(e); }
std::string pretty(const TypeAst& t) { return type_str(t); }
std::string pretty(const ModType& t) { return modtype_str(t); }
std::string pretty(const ModExpr& m) { return modexpr_str(m); }
std::string pretty(const Pattern& p) { return pattern_str(p); }

}  // namespace implicitml
