#include "implicitml/parser.hpp"

#include <algorithm>
#include <unordered_set>

#include "implicitml/lexer.hpp"

namespace implicitml {

using namespace ast;

namespace {

// Infix operator precedence levels, loosest first. `::` and tuple `,` are
// handled structurally, not through this table.
const std::unordered_set<std::string> kCmpOps = {"=", "<>", "<", ">", "<=", ">=", ">>="};
const std::unordered_set<std::string> kAddOps = {"+", "-", "+.", "-."};
const std::unordered_set<std::string> kMulOps = {"*", "/", "*.", "/."};
const std::unordered_set<std::string> kAllOps = {
    "=", "<>", "<", ">", "<=", ">=", ">>=", "+", "-", "+.", "-.",
    "*", "/", "*.", "/.", "^", "&&", "||", "::"};

class Parser {
 public:
  explicit Parser(const std::string& source) : toks_(lex(source)) {}

  Program parse_program() {
    Program p;
    skip_sep();
    while (!at(Token::Eof)) {
      p.decls.push_back(parse_decl(false));
      skip_sep();
    }
    return p;
  }

  ExprPtr parse_expr_entry() {
    auto e = parse_expr();
    expect_eof();
    return e;
  }
  TypeAstPtr parse_type_entry() {
    auto t = parse_type();
    expect_eof();
    return t;
  }
  ModTypePtr parse_modtype_entry() {
    auto t = parse_modtype();
    expect_eof();
    return t;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  int next_node_id_ = 1;

  const Token& cur(size_t k = 0) const {
    size_t i = std::min(pos_ + k, toks_.size() - 1);
    return toks_[i];
  }
  bool at(Token::Kind k) const { return cur().kind == k; }
  bool at_sym(const std::string& s) const { return cur().kind == Token::Sym && cur().text == s; }
  bool at_kw(const std::string& s) const { return cur().kind == Token::Keyword && cur().text == s; }
  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  void expect_sym(const std::string& s) {
    if (!at_sym(s)) err("expected '" + s + "'", {s});
    take();
  }
  void expect_kw(const std::string& s) {
    if (!at_kw(s)) err("expected '" + s + "'", {s});
    take();
  }
  void expect_eof() {
    if (!at(Token::Eof)) err("expected end of input", {"<eof>"});
  }
  [[noreturn]] void err(const std::string& msg, std::vector<std::string> expected = {}) {
    nlohmann::json payload;
    payload["expected"] = expected;
    payload["got"] = cur().text.empty() ? "<eof>" : cur().text;
    fail(Code::Syntax, cur().span, msg + " (got '" + (cur().text.empty() ? "<eof>" : cur().text) + "')",
         payload);
  }

  void skip_sep() {
    while (at_sym(";;")) take();
  }

  Span span_from(const Span& start) const {
    Span s = start;
    const Span& prev = toks_[pos_ > 0 ? pos_ - 1 : 0].span;
    s.end_line = prev.end_line;
    s.end_col = prev.end_col;
    return s;
  }

  template <typename T>
  std::shared_ptr<T> node(typename T::Kind k, const Span& start) {
    auto n = std::make_shared<T>();
    n->kind = k;
    n->span = start;
    if constexpr (requires { n->node_id; }) n->node_id = next_node_id_++;
    return n;
  }
  void close(Span& sp, const Span& start) { sp = span_from(start); }

  // -- paths ---------------------------------------------------------------

  // UIdent ('.' UIdent)*  -- stops before a trailing '.' that is not
  // followed by an upper identifier.
  std::vector<std::string> parse_upath() {
    if (!at(Token::UIdent)) err("expected module name");
    std::vector<std::string> path{take().text};
    while (at_sym(".") && cur(1).kind == Token::UIdent) {
      take();
      path.push_back(take().text);
    }
    return path;
  }

  bool at_operator_section() const {
    // '(' op ')' with op a known operator symbol.
    return at_sym("(") && cur(1).kind == Token::Sym && kAllOps.count(cur(1).text) &&
           cur(2).kind == Token::Sym && cur(2).text == ")";
  }

  std::string parse_operator_section() {
    expect_sym("(");
    std::string op = take().text;
    expect_sym(")");
    return op;
  }

  // -- types ---------------------------------------------------------------

  TypeAstPtr parse_type() { return parse_type_arrow(); }

  TypeAstPtr parse_type_arrow() {
    Span start = cur().span;
    if (at_sym("{")) {
      take();
      if (!at(Token::UIdent)) err("expected module name in implicit arrow type");
      std::string mname = take().text;
      expect_sym(":");
      auto sig = parse_modtype();
      expect_sym("}");
      expect_sym("->");
      auto cod = parse_type_arrow();
      auto t = node<TypeAst>(TypeAst::ImplicitArrow, start);
      t->param_name = mname;
      t->param_type = sig;
      t->b = cod;
      close(t->span, start);
      return t;
    }
    auto dom = parse_type_tuple();
    if (at_sym("->")) {
      take();
      auto cod = parse_type_arrow();
      auto t = node<TypeAst>(TypeAst::Arrow, start);
      t->a = dom;
      t->b = cod;
      close(t->span, start);
      return t;
    }
    return dom;
  }

  TypeAstPtr parse_type_tuple() {
    Span start = cur().span;
    auto first = parse_type_post();
    if (!at_sym("*")) return first;
    auto t = node<TypeAst>(TypeAst::Tuple, start);
    t->args.push_back(first);
    while (at_sym("*")) {
      take();
      t->args.push_back(parse_type_post());
    }
    close(t->span, start);
    return t;
  }

  TypeAstPtr parse_type_post() {
    Span start = cur().span;
    auto t = parse_type_atom();
    // Postfix constructor application: 'a list, S.t list, 'a M.t ...
    while (true) {
      if (at(Token::Ident)) {
        auto n = node<TypeAst>(TypeAst::Name, start);
        n->name = take().text;
        n->args.push_back(t);
        close(n->span, start);
        t = n;
      } else if (at(Token::UIdent)) {
        auto path = parse_upath();
        expect_sym(".");
        if (!at(Token::Ident)) err("expected type member name");
        auto n = node<TypeAst>(TypeAst::Member, start);
        n->path = path;
        n->name = take().text;
        n->args.push_back(t);
        close(n->span, start);
        t = n;
      } else {
        break;
      }
    }
    return t;
  }

  TypeAstPtr parse_type_atom() {
    Span start = cur().span;
    if (at(Token::TyVar)) {
      auto t = node<TypeAst>(TypeAst::Var, start);
      t->name = take().text;
      return t;
    }
    if (at(Token::Ident)) {
      auto t = node<TypeAst>(TypeAst::Name, start);
      t->name = take().text;
      return t;
    }
    if (at(Token::UIdent)) {
      auto path = parse_upath();
      expect_sym(".");
      if (!at(Token::Ident)) err("expected type member name");
      auto t = node<TypeAst>(TypeAst::Member, start);
      t->path = path;
      t->name = take().text;
      close(t->span, start);
      return t;
    }
    if (at_sym("(")) {
      take();
      auto t = parse_type();
      expect_sym(")");
      return t;
    }
    err("expected a type");
  }

  // -- module types --------------------------------------------------------

  ModTypePtr parse_modtype() {
    Span start = cur().span;
    ModTypePtr base;
    if (at_kw("sig")) {
      take();
      auto t = node<ModType>(ModType::Sig, start);
      while (!at_kw("end")) {
        if (at(Token::Eof)) err("unterminated signature, expected 'end'", {"end"});
        t->items.push_back(parse_sig_item());
      }
      take();  // end
      close(t->span, start);
      base = t;
    } else if (at(Token::UIdent)) {
      auto t = node<ModType>(ModType::Name, start);
      t->path = parse_upath();
      close(t->span, start);
      base = t;
    } else {
      err("expected a module type", {"sig", "<module type name>"});
    }
    while (at_kw("with")) {
      take();
      expect_kw("type");
      auto t = node<ModType>(ModType::With, start);
      t->base = base;
      t->with_params = parse_type_params();
      if (!at(Token::Ident)) err("expected type name in with-constraint");
      t->with_name = take().text;
      expect_sym("=");
      t->with_type = parse_type();
      close(t->span, start);
      base = t;
    }
    return base;
  }

  std::vector<std::string> parse_type_params() {
    std::vector<std::string> params;
    // Optional variance markers are accepted and discarded.
    if (at_sym("+") || at_sym("-")) take();
    if (at(Token::TyVar)) params.push_back(take().text);
    return params;
  }

  SigItem parse_sig_item() {
    Span start = cur().span;
    SigItem item;
    item.span = start;
    if (at_kw("type")) {
      take();
      item.kind = SigItem::Type;
      item.type_params = parse_type_params();
      if (!at(Token::Ident)) err("expected type name");
      item.name = take().text;
      if (at_sym("=")) {
        take();
        item.manifest = parse_type();
      }
    } else if (at_kw("val")) {
      take();
      item.kind = SigItem::Val;
      if (at(Token::Ident))
        item.name = take().text;
      else if (at_operator_section())
        item.name = parse_operator_section();
      else
        err("expected value name");
      expect_sym(":");
      item.val_type = parse_type();
    } else if (at_kw("module") || at_kw("implicit")) {
      bool implicit = at_kw("implicit");
      if (implicit) {
        take();
        expect_kw("module");
      } else {
        take();
      }
      if (!at(Token::UIdent)) err("expected module name");
      item.name = take().text;
      item.iparams = parse_implicit_params();
      if (at_sym(":")) {
        take();
        item.kind = implicit ? SigItem::ImplicitModule : SigItem::Module;
        item.mod_type = parse_modtype();
      } else if (at_sym("=")) {
        take();
        item.kind = implicit ? SigItem::ImplicitModule : SigItem::ModuleAlias;
        item.alias_path = parse_upath();
      } else {
        err("expected ':' or '=' in module description", {":", "="});
      }
    } else {
      err("expected a signature item", {"type", "val", "module", "implicit"});
    }
    item.span = span_from(start);
    return item;
  }

  std::vector<Param> parse_implicit_params() {
    std::vector<Param> params;
    while (at_sym("{")) {
      Span start = cur().span;
      take();
      Param p;
      p.kind = Param::Implicit;
      p.span = start;
      if (!at(Token::UIdent)) err("expected module parameter name");
      p.name = take().text;
      expect_sym(":");
      p.sig = parse_modtype();
      expect_sym("}");
      p.span = span_from(start);
      params.push_back(std::move(p));
    }
    return params;
  }

  // -- patterns ------------------------------------------------------------

  PatternPtr parse_pattern() {
    Span start = cur().span;
    auto first = parse_pattern_cons();
    if (!at_sym(",")) return first;
    auto p = node<Pattern>(Pattern::Tuple, start);
    p->args.push_back(first);
    while (at_sym(",")) {
      take();
      p->args.push_back(parse_pattern_cons());
    }
    close(p->span, start);
    return p;
  }

  PatternPtr parse_pattern_cons() {
    Span start = cur().span;
    auto head = parse_pattern_atom();
    if (!at_sym("::")) return head;
    take();
    auto p = node<Pattern>(Pattern::Cons, start);
    p->args.push_back(head);
    p->args.push_back(parse_pattern_cons());
    close(p->span, start);
    return p;
  }

  PatternPtr parse_pattern_atom() {
    Span start = cur().span;
    if (at_sym("_")) {
      take();
      return node<Pattern>(Pattern::Wildcard, start);
    }
    if (at(Token::Ident)) {
      auto p = node<Pattern>(Pattern::Var, start);
      p->name = take().text;
      return p;
    }
    if (at(Token::IntLit)) {
      auto p = node<Pattern>(Pattern::Int, start);
      p->int_val = take().int_val;
      return p;
    }
    if (at(Token::StringLit)) {
      auto p = node<Pattern>(Pattern::String, start);
      p->str_val = take().text;
      return p;
    }
    if (at_kw("true") || at_kw("false")) {
      auto p = node<Pattern>(Pattern::Bool, start);
      p->bool_val = take().text == "true";
      return p;
    }
    if (at(Token::UIdent)) {
      std::string name = take().text;
      if (name == "None") return node<Pattern>(Pattern::NoneP, start);
      if (name == "Some") {
        auto p = node<Pattern>(Pattern::SomeP, start);
        p->args.push_back(parse_pattern_atom());
        close(p->span, start);
        return p;
      }
      err("unknown constructor pattern '" + name + "'");
    }
    if (at_sym("[")) {
      take();
      expect_sym("]");
      return node<Pattern>(Pattern::Nil, start);
    }
    if (at_sym("(")) {
      take();
      if (at_sym(")")) {
        take();
        return node<Pattern>(Pattern::Unit, start);
      }
      auto p = parse_pattern();
      expect_sym(")");
      return p;
    }
    err("expected a pattern");
  }

  // -- function parameters -------------------------------------------------

  bool at_param_start() const {
    if (at(Token::Ident)) return true;
    if (at_sym("{") && cur(1).kind == Token::UIdent && cur(2).kind == Token::Sym &&
        cur(2).text == ":")
      return true;
    if (at_sym("(") && cur(1).kind == Token::Sym && cur(1).text == ")") return true;
    if (at_sym("(") && cur(1).kind == Token::Ident && cur(2).kind == Token::Sym &&
        cur(2).text == ":")
      return true;
    return false;
  }

  Param parse_param() {
    Span start = cur().span;
    Param p;
    p.span = start;
    if (at(Token::Ident)) {
      p.kind = Param::Value;
      p.name = take().text;
    } else if (at_sym("{")) {
      take();
      p.kind = Param::Implicit;
      p.name = take().text;
      expect_sym(":");
      p.sig = parse_modtype();
      expect_sym("}");
    } else if (at_sym("(")) {
      take();
      if (at_sym(")")) {
        take();
        p.kind = Param::Value;
        p.name = "()";
      } else {
        p.kind = Param::Value;
        p.name = take().text;
        expect_sym(":");
        p.ascription = parse_type();
        expect_sym(")");
      }
    } else {
      err("expected a parameter");
    }
    p.span = span_from(start);
    return p;
  }

  // -- module expressions --------------------------------------------------

  ModExprPtr parse_modexpr() {
    Span start = cur().span;
    ModExprPtr base;
    if (at_kw("struct")) {
      take();
      auto m = node<ModExpr>(ModExpr::Struct, start);
      skip_sep();
      while (!at_kw("end")) {
        if (at(Token::Eof)) err("unterminated struct, expected 'end'", {"end"});
        m->decls.push_back(parse_decl(true));
        skip_sep();
      }
      take();
      close(m->span, start);
      base = m;
    } else if (at(Token::UIdent)) {
      auto m = node<ModExpr>(ModExpr::Path, start);
      m->path = parse_upath();
      close(m->span, start);
      base = m;
    } else {
      err("expected a module expression", {"struct", "<module path>"});
    }
    // Functor application chains: F(A)(B), F{A}.
    if (at_sym("(") || at_sym("{")) {
      auto app = node<ModExpr>(ModExpr::Apply, start);
      app->fn = base;
      while (at_sym("(") || at_sym("{")) {
        bool braces = at_sym("{");
        take();
        if (braces) app->implicit_style = true;
        app->args.push_back(parse_modexpr());
        expect_sym(braces ? "}" : ")");
      }
      close(app->span, start);
      base = app;
    }
    return base;
  }

  // -- expressions ---------------------------------------------------------

  ExprPtr parse_expr() {
    Span start = cur().span;
    auto e = parse_nonseq();
    while (at_sym(";")) {
      take();
      auto s = node<Expr>(Expr::Seq, start);
      s->bound = e;
      s->rhs = parse_nonseq();
      close(s->span, start);
      e = s;
    }
    return e;
  }

  bool at_expr_prefix_kw() const {
    return at_kw("fun") || at_kw("if") || at_kw("match") || at_kw("let");
  }

  ExprPtr parse_nonseq() {
    Span start = cur().span;
    if (at_kw("fun")) {
      take();
      auto e = node<Expr>(Expr::Lambda, start);
      while (at_param_start()) e->params.push_back(parse_param());
      if (e->params.empty()) err("expected at least one parameter after 'fun'");
      expect_sym("->");
      e->body = parse_nonseq();
      close(e->span, start);
      return e;
    }
    if (at_kw("if")) {
      take();
      auto e = node<Expr>(Expr::If, start);
      e->cond = parse_nonseq();
      expect_kw("then");
      e->then_e = parse_nonseq();
      expect_kw("else");
      e->else_e = parse_nonseq();
      close(e->span, start);
      return e;
    }
    if (at_kw("match")) {
      take();
      auto e = node<Expr>(Expr::Match, start);
      e->scrutinee = parse_expr();
      expect_kw("with");
      if (at_sym("|")) take();
      while (true) {
        Expr::Case c;
        c.pat = parse_pattern();
        expect_sym("->");
        c.body = parse_nonseq();
        e->cases.push_back(std::move(c));
        if (at_sym("|"))
          take();
        else
          break;
      }
      close(e->span, start);
      return e;
    }
    if (at_kw("let")) return parse_let_expr();
    return parse_tuple();
  }

  ExprPtr parse_let_expr() {
    Span start = cur().span;
    expect_kw("let");
    if (at_kw("open")) {
      take();
      expect_kw("implicit");
      auto e = node<Expr>(Expr::LetOpenImplicit, start);
      e->path = parse_upath();
      expect_kw("in");
      e->body = parse_expr();
      close(e->span, start);
      return e;
    }
    if (at_kw("implicit")) {
      take();
      expect_kw("module");
      auto e = node<Expr>(Expr::LetImplicitMod, start);
      e->mod_name = take().text;
      e->mod_params = parse_implicit_params();
      expect_sym("=");
      e->mod_expr = parse_modexpr();
      expect_kw("in");
      e->body = parse_expr();
      close(e->span, start);
      return e;
    }
    auto e = node<Expr>(Expr::Let, start);
    if (at_kw("rec")) {
      take();
      e->is_rec = true;
    }
    if (at_sym("(") && cur(1).kind == Token::Sym && cur(1).text == ")") {
      take();
      take();
      e->unit_pat = true;
    } else if (at_operator_section()) {
      e->name = parse_operator_section();
    } else if (at(Token::Ident)) {
      e->name = take().text;
    } else {
      err("expected a binding name");
    }
    while (at_param_start()) e->params.push_back(parse_param());
    if (at_sym(":")) {
      take();
      e->ascription = parse_type();
    }
    expect_sym("=");
    e->bound = parse_expr();
    expect_kw("in");
    e->body = parse_expr();
    close(e->span, start);
    return e;
  }

  ExprPtr parse_tuple() {
    Span start = cur().span;
    auto first = parse_binary(0);
    if (!at_sym(",")) return first;
    auto e = node<Expr>(Expr::Tuple, start);
    e->items.push_back(first);
    while (at_sym(",")) {
      take();
      e->items.push_back(parse_binary(0));
    }
    close(e->span, start);
    return e;
  }

  // Levels: 0 = || ; 1 = && ; 2 = comparisons and >>= ; 3 = ^ (right);
  // 4 = :: (right) ; 5 = + - ; 6 = * /.
  ExprPtr parse_binary(int level) {
    Span start = cur().span;
    if (level > 6) return parse_unary();
    auto is_op_here = [&](int lv) -> bool {
      if (cur().kind != Token::Sym) return false;
      const std::string& t = cur().text;
      switch (lv) {
        case 0: return t == "||";
        case 1: return t == "&&";
        case 2: return kCmpOps.count(t) > 0;
        case 3: return t == "^";
        case 4: return t == "::";
        case 5: return kAddOps.count(t) > 0;
        case 6: return kMulOps.count(t) > 0;
      }
      return false;
    };
    auto rhs_operand = [&](int lv) -> ExprPtr {
      // Trailing fun/if/match/let extends to the right, OCaml style.
      if (at_expr_prefix_kw()) return parse_nonseq();
      return parse_binary(lv);
    };

    auto lhs = parse_binary(level + 1);
    if (level == 3 || level == 4) {  // right associative
      if (!is_op_here(level)) return lhs;
      std::string op = take().text;
      auto rhs = rhs_operand(level);
      close(start, start);
      return make_binop(op, lhs, rhs, start);
    }
    while (is_op_here(level)) {
      std::string op = take().text;
      ExprPtr rhs;
      if (at_expr_prefix_kw())
        rhs = parse_nonseq();
      else
        rhs = parse_binary(level + 1);
      lhs = make_binop(op, lhs, rhs, start);
    }
    return lhs;
  }

  ExprPtr make_binop(const std::string& op, ExprPtr lhs, ExprPtr rhs, const Span& start) {
    if (op == "::") {
      auto e = node<Expr>(Expr::Ctor, start);
      e->name = "::";
      e->items = {lhs, rhs};
      close(e->span, start);
      return e;
    }
    if (op == "&&" || op == "||") {
      // Short-circuit forms desugar to conditionals.
      auto e = node<Expr>(Expr::If, start);
      e->cond = lhs;
      auto lit = node<Expr>(Expr::Bool, start);
      lit->bool_val = op == "||";
      if (op == "&&") {
        e->then_e = rhs;
        e->else_e = lit;
      } else {
        e->then_e = lit;
        e->else_e = rhs;
      }
      close(e->span, start);
      return e;
    }
    auto f = node<Expr>(Expr::Var, start);
    f->name = op;
    auto e = node<Expr>(Expr::App, start);
    e->fn = f;
    e->args.push_back({lhs, nullptr, lhs->span});
    e->args.push_back({rhs, nullptr, rhs->span});
    close(e->span, start);
    return e;
  }

  ExprPtr parse_unary() {
    Span start = cur().span;
    if (at_sym("-") || at_sym("-.")) {
      std::string op = take().text;
      auto operand = parse_unary();
      if (op == "-" && operand->kind == Expr::Int) {
        operand->int_val = -operand->int_val;
        return operand;
      }
      if (op == "-." && operand->kind == Expr::Float) {
        operand->float_val = -operand->float_val;
        return operand;
      }
      // 0 - e / 0.0 -. e
      auto zero = node<Expr>(op == "-" ? Expr::Int : Expr::Float, start);
      return make_binop(op, zero, operand, start);
    }
    return parse_app();
  }

  bool at_atom_start() const {
    switch (cur().kind) {
      case Token::IntLit:
      case Token::FloatLit:
      case Token::StringLit:
      case Token::Ident:
      case Token::UIdent:
        return true;
      case Token::Keyword:
        return cur().text == "true" || cur().text == "false";
      case Token::Sym:
        return cur().text == "(" || cur().text == "[";
      default:
        return false;
    }
  }

  ExprPtr parse_app() {
    Span start = cur().span;
    auto fn = parse_atom();
    std::vector<Expr::Arg> args;
    while (true) {
      if (at_sym("{")) {  // explicit module argument
        Span asp = cur().span;
        take();
        auto m = parse_modexpr();
        expect_sym("}");
        args.push_back({nullptr, m, span_from(asp)});
        continue;
      }
      if (at_atom_start()) {
        auto a = parse_atom();
        args.push_back({a, nullptr, a->span});
        continue;
      }
      break;
    }
    if (args.empty()) return fn;
    // `Some e` is a constructor application, not a function call.
    if (fn->kind == Expr::Ctor && fn->name == "Some") {
      if (args.size() != 1 || !args[0].expr) err("Some expects exactly one argument");
      fn->items.push_back(args[0].expr);
      close(fn->span, start);
      return fn;
    }
    auto e = node<Expr>(Expr::App, start);
    e->fn = fn;
    e->args = std::move(args);
    close(e->span, start);
    return e;
  }

  ExprPtr parse_atom() {
    Span start = cur().span;
    switch (cur().kind) {
      case Token::IntLit: {
        auto e = node<Expr>(Expr::Int, start);
        e->int_val = take().int_val;
        return e;
      }
      case Token::FloatLit: {
        auto e = node<Expr>(Expr::Float, start);
        e->float_val = take().float_val;
        return e;
      }
      case Token::StringLit: {
        auto e = node<Expr>(Expr::String, start);
        e->str_val = take().text;
        return e;
      }
      case Token::Keyword:
        if (cur().text == "true" || cur().text == "false") {
          auto e = node<Expr>(Expr::Bool, start);
          e->bool_val = take().text == "true";
          return e;
        }
        err("unexpected keyword in expression");
      case Token::Ident: {
        auto e = node<Expr>(Expr::Var, start);
        e->name = take().text;
        return e;
      }
      case Token::UIdent:
        return parse_qualified();
      case Token::Sym:
        if (cur().text == "(") return parse_paren();
        if (cur().text == "[") return parse_list();
        err("unexpected symbol in expression");
      default:
        err("expected an expression");
    }
  }

  ExprPtr parse_qualified() {
    Span start = cur().span;
    std::vector<std::string> path{take().text};
    while (at_sym(".") && cur(1).kind == Token::UIdent) {
      take();
      path.push_back(take().text);
    }
    if (at_sym(".")) {
      take();
      auto e = node<Expr>(Expr::Var, start);
      e->path = std::move(path);
      if (at(Token::Ident))
        e->name = take().text;
      else if (at_operator_section())
        e->name = parse_operator_section();
      else
        err("expected a value member name");
      close(e->span, start);
      return e;
    }
    if (path.size() == 1 && (path[0] == "Some" || path[0] == "None")) {
      auto e = node<Expr>(Expr::Ctor, start);
      e->name = path[0];
      return e;
    }
    err("module path '" + path.back() + "' used as a value");
  }

  ExprPtr parse_paren() {
    Span start = cur().span;
    if (at_operator_section()) {
      auto e = node<Expr>(Expr::Var, start);
      e->name = parse_operator_section();
      close(e->span, start);
      return e;
    }
    expect_sym("(");
    if (at_sym(")")) {
      take();
      return node<Expr>(Expr::Unit, start);
    }
    auto inner = parse_expr();
    if (at_sym(":")) {
      take();
      auto e = node<Expr>(Expr::Ascribe, start);
      e->bound = inner;
      e->ascription = parse_type();
      expect_sym(")");
      close(e->span, start);
      return e;
    }
    expect_sym(")");
    return inner;
  }

  ExprPtr parse_list() {
    Span start = cur().span;
    expect_sym("[");
    auto e = node<Expr>(Expr::ListLit, start);
    if (!at_sym("]")) {
      e->items.push_back(parse_nonseq());
      while (at_sym(";")) {
        take();
        e->items.push_back(parse_nonseq());
      }
    }
    expect_sym("]");
    close(e->span, start);
    return e;
  }

  // -- declarations --------------------------------------------------------

  DeclPtr parse_decl(bool in_struct) {
    Span start = cur().span;
    if (at_kw("open")) {
      take();
      expect_kw("implicit");
      auto d = node<Decl>(Decl::OpenImplicit, start);
      d->path = parse_upath();
      close(d->span, start);
      return d;
    }
    if (at_kw("type")) {
      if (!in_struct)
        err("type declarations are only supported inside struct bodies");
      take();
      auto d = node<Decl>(Decl::Type, start);
      d->type_params = parse_type_params();
      if (!at(Token::Ident)) err("expected type name");
      d->name = take().text;
      expect_sym("=");
      d->manifest = parse_type();
      close(d->span, start);
      return d;
    }
    if (at_kw("implicit")) {
      take();
      expect_kw("module");
      return parse_module_decl(start, /*implicit=*/true);
    }
    if (at_kw("module")) {
      take();
      if (at_kw("type")) {
        take();
        auto d = node<Decl>(Decl::ModuleType, start);
        if (!at(Token::UIdent)) err("expected module type name");
        d->name = take().text;
        expect_sym("=");
        d->mod_type = parse_modtype();
        close(d->span, start);
        return d;
      }
      return parse_module_decl(start, /*implicit=*/false);
    }
    if (at_kw("let")) {
      if (cur(1).kind == Token::Keyword &&
          (cur(1).text == "implicit" || cur(1).text == "open")) {
        // let implicit module / let open implicit are expression forms.
        auto d = node<Decl>(Decl::ExprStmt, start);
        d->expr = parse_expr();
        close(d->span, start);
        return d;
      }
      take();
      return parse_let_decl(start);
    }
    // Top-level expression statement.
    auto d = node<Decl>(Decl::ExprStmt, start);
    d->expr = parse_expr();
    close(d->span, start);
    return d;
  }

  DeclPtr parse_module_decl(const Span& start, bool implicit) {
    auto d = node<Decl>(Decl::Module, start);
    d->is_implicit = implicit;
    if (!at(Token::UIdent)) err("expected module name");
    d->name = take().text;
    // Implicit functor params in braces; explicit functor params in parens.
    while (at_sym("{") || (at_sym("(") && cur(1).kind == Token::UIdent)) {
      bool braces = at_sym("{");
      take();
      Param p;
      p.kind = Param::Implicit;
      p.span = cur().span;
      p.name = take().text;
      expect_sym(":");
      p.sig = parse_modtype();
      expect_sym(braces ? "}" : ")");
      d->params.push_back(std::move(p));
    }
    if (at_sym(":")) {
      take();
      d->mod_ascription = parse_modtype();
    }
    if (at_sym("=")) {
      take();
      d->mod_expr = parse_modexpr();
    } else if (!d->mod_ascription) {
      err("expected '=' or ':' in module binding", {"=", ":"});
    }
    close(d->span, start);
    return d;
  }

  DeclPtr parse_let_decl(const Span& start) {
    auto d = node<Decl>(Decl::Let, start);
    if (at_kw("rec")) {
      take();
      d->is_rec = true;
    }
    if (at_sym("(") && cur(1).kind == Token::Sym && cur(1).text == ")") {
      take();
      take();
      d->unit_pat = true;
    } else if (at_operator_section()) {
      d->name = parse_operator_section();
    } else if (at(Token::Ident)) {
      d->name = take().text;
    } else {
      err("expected a binding name");
    }
    while (at_param_start()) d->params.push_back(parse_param());
    if (at_sym(":")) {
      take();
      d->ascription = parse_type();
    }
    expect_sym("=");
    d->expr = parse_expr();
    if (at_kw("in")) {
      // This was actually a let-in expression statement.
      take();
      auto let = node<Expr>(Expr::Let, start);
      let->is_rec = d->is_rec;
      let->unit_pat = d->unit_pat;
      let->name = d->name;
      let->params = d->params;
      let->ascription = d->ascription;
      let->bound = d->expr;
      let->body = parse_expr();
      close(let->span, start);
      auto stmt = node<Decl>(Decl::ExprStmt, start);
      stmt->expr = let;
      close(stmt->span, start);
      return stmt;
    }
    close(d->span, start);
    return d;
  }
};

}  // namespace

ast::Program parse(const std::string& source) { return Parser(source).parse_program(); }
ast::ExprPtr parse_expression(const std::string& source) {
  return Parser(source).parse_expr_entry();
}
ast::TypeAstPtr parse_type(const std::string& source) {
  return Parser(source).parse_type_entry();
}
ast::ModTypePtr parse_module_type(const std::string& source) {
  return Parser(source).parse_modtype_entry();
}

}  // namespace implicitml
