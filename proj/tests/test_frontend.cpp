#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "implicitml/lexer.hpp"
#include "implicitml/parser.hpp"
#include "implicitml/pretty.hpp"

using namespace implicitml;

TEST_CASE("lexer basics") {
  auto toks = lex("let x = 3 in x +. 1.5");
  REQUIRE(toks.size() == 9);
  CHECK(toks[0].kind == Token::Keyword);
  CHECK(toks[0].text == "let");
  CHECK(toks[1].kind == Token::Ident);
  CHECK(toks[3].kind == Token::IntLit);
  CHECK(toks[3].int_val == 3);
  CHECK(toks[6].kind == Token::Sym);
  CHECK(toks[6].text == "+.");
  CHECK(toks[7].kind == Token::FloatLit);
  CHECK(toks[7].float_val == doctest::Approx(1.5));
  CHECK(toks[8].kind == Token::Eof);
}

TEST_CASE("lexer distinguishes float dot from path dot") {
  auto toks = lex("3.0 S.t 3. List.map");
  CHECK(toks[0].kind == Token::FloatLit);
  CHECK(toks[1].kind == Token::UIdent);
  CHECK(toks[2].kind == Token::Sym);
  CHECK(toks[2].text == ".");
  CHECK(toks[3].kind == Token::Ident);
  CHECK(toks[4].kind == Token::FloatLit);
  CHECK(toks[4].float_val == doctest::Approx(3.0));
  CHECK(toks[5].kind == Token::UIdent);
}

TEST_CASE("lexer nested comments and strings") {
  auto toks = lex("(* outer (* inner *) still *) \"a\\nb\\\"c\"");
  REQUIRE(toks.size() == 2);
  CHECK(toks[0].kind == Token::StringLit);
  CHECK(toks[0].text == "a\nb\"c");
}

TEST_CASE("lexer rejects stray characters") {
  CHECK_THROWS_AS(lex("let x = #"), CompileError);
  try {
    lex("@");
  } catch (const CompileError& e) {
    CHECK(e.diag().code == Code::Syntax);
  }
}

TEST_CASE("lexer spans are 1-based") {
  auto toks = lex("let\n  x");
  CHECK(toks[0].span.line == 1);
  CHECK(toks[0].span.col == 1);
  CHECK(toks[1].span.line == 2);
  CHECK(toks[1].span.col == 3);
}

TEST_CASE("parse simple application and precedence") {
  auto e = parse_expression("f x + g y * 2");
  // (+) (f x) (( * ) (g y) 2)
  REQUIRE(e->kind == ast::Expr::App);
  REQUIRE(e->fn->kind == ast::Expr::Var);
  CHECK(e->fn->name == "+");
  REQUIRE(e->args.size() == 2);
  CHECK(e->args[0].expr->kind == ast::Expr::App);
  auto rhs = e->args[1].expr;
  REQUIRE(rhs->kind == ast::Expr::App);
  CHECK(rhs->fn->name == "*");
}

TEST_CASE("cons is right associative, cmp is non-chaining level") {
  auto e = parse_expression("1 :: 2 :: []");
  REQUIRE(e->kind == ast::Expr::Ctor);
  CHECK(e->name == "::");
  REQUIRE(e->items[1]->kind == ast::Expr::Ctor);
  CHECK(e->items[1]->items[1]->kind == ast::Expr::ListLit);
}

TEST_CASE("carat is right associative") {
  auto e = parse_expression("\"a\" ^ \"b\" ^ \"c\"");
  REQUIRE(e->kind == ast::Expr::App);
  CHECK(e->fn->name == "^");
  auto r = e->args[1].expr;
  REQUIRE(r->kind == ast::Expr::App);
  CHECK(r->fn->name == "^");
}

TEST_CASE("boolean operators desugar to conditionals") {
  auto e = parse_expression("a && b");
  REQUIRE(e->kind == ast::Expr::If);
  CHECK(e->then_e->kind == ast::Expr::Var);
  CHECK(e->else_e->kind == ast::Expr::Bool);
  CHECK(e->else_e->bool_val == false);

  auto o = parse_expression("a || b");
  REQUIRE(o->kind == ast::Expr::If);
  CHECK(o->then_e->kind == ast::Expr::Bool);
  CHECK(o->then_e->bool_val == true);
  CHECK(o->else_e->kind == ast::Expr::Var);
}

TEST_CASE("explicit module arguments in application position") {
  auto e = parse_expression("show {Show_int} 3");
  REQUIRE(e->kind == ast::Expr::App);
  REQUIRE(e->args.size() == 2);
  CHECK(e->args[0].mod != nullptr);
  CHECK(e->args[0].mod->kind == ast::ModExpr::Path);
  CHECK(e->args[0].mod->path == std::vector<std::string>{"Show_int"});
  CHECK(e->args[1].expr->kind == ast::Expr::Int);
}

TEST_CASE("implicit function parameter") {
  auto e = parse_expression("fun {S : Show} x -> S.show x");
  REQUIRE(e->kind == ast::Expr::Lambda);
  REQUIRE(e->params.size() == 2);
  CHECK(e->params[0].kind == ast::Param::Implicit);
  CHECK(e->params[0].name == "S");
  CHECK(e->params[1].kind == ast::Param::Value);
  auto body = e->body;
  REQUIRE(body->kind == ast::Expr::App);
  CHECK(body->fn->path == std::vector<std::string>{"S"});
  CHECK(body->fn->name == "show");
}

TEST_CASE("qualified operator reference") {
  auto e = parse_expression("A.( + ) x y");
  REQUIRE(e->kind == ast::Expr::App);
  CHECK(e->fn->path == std::vector<std::string>{"A"});
  CHECK(e->fn->name == "+");
}

TEST_CASE("implicit arrow type") {
  auto t = parse_type("{S : Show} -> S.t -> string");
  REQUIRE(t->kind == ast::TypeAst::ImplicitArrow);
  CHECK(t->param_name == "S");
  REQUIRE(t->b->kind == ast::TypeAst::Arrow);
  CHECK(t->b->a->kind == ast::TypeAst::Member);
  CHECK(t->b->a->path == std::vector<std::string>{"S"});
  CHECK(t->b->a->name == "t");
}

TEST_CASE("postfix type constructor application") {
  auto t = parse_type("'a M.t list");
  REQUIRE(t->kind == ast::TypeAst::Name);
  CHECK(t->name == "list");
  REQUIRE(t->args.size() == 1);
  CHECK(t->args[0]->kind == ast::TypeAst::Member);
  CHECK(t->args[0]->name == "t");
  CHECK(t->args[0]->args[0]->kind == ast::TypeAst::Var);
}

TEST_CASE("with-constraint chains") {
  auto t = parse_module_type("Show with type t = int");
  REQUIRE(t->kind == ast::ModType::With);
  CHECK(t->base->kind == ast::ModType::Name);
  CHECK(t->with_name == "t");
  CHECK(t->with_type->name == "int");

  auto u = parse_module_type("Monad with type 'a t = 'a list");
  REQUIRE(u->kind == ast::ModType::With);
  CHECK(u->with_params == std::vector<std::string>{"a"});
}

TEST_CASE("signature items") {
  auto t = parse_module_type(
      "sig type t val show : t -> string module Eq : sig type t val equal : t -> t -> bool end "
      "end");
  REQUIRE(t->kind == ast::ModType::Sig);
  REQUIRE(t->items.size() == 3);
  CHECK(t->items[0].kind == ast::SigItem::Type);
  CHECK(t->items[1].kind == ast::SigItem::Val);
  CHECK(t->items[2].kind == ast::SigItem::Module);
}

TEST_CASE("program with module declarations") {
  auto p = parse(
      "module type Show = sig type t val show : t -> string end\n"
      "implicit module Show_int = struct type t = int let show x = string_of_int x end\n"
      "let show {S : Show} (x : S.t) = S.show x\n"
      "let () = print_endline (show 5)\n");
  REQUIRE(p.decls.size() == 4);
  CHECK(p.decls[0]->kind == ast::Decl::ModuleType);
  CHECK(p.decls[1]->kind == ast::Decl::Module);
  CHECK(p.decls[1]->is_implicit);
  CHECK(p.decls[2]->kind == ast::Decl::Let);
  REQUIRE(p.decls[2]->params.size() == 2);
  CHECK(p.decls[2]->params[0].kind == ast::Param::Implicit);
  CHECK(p.decls[3]->kind == ast::Decl::Let);
  CHECK(p.decls[3]->unit_pat);
}

TEST_CASE("implicit functor declaration") {
  auto p = parse(
      "implicit module Show_list {S : Show} = struct type t = S.t list let show x = \"\" end");
  REQUIRE(p.decls.size() == 1);
  auto& d = *p.decls[0];
  CHECK(d.is_implicit);
  REQUIRE(d.params.size() == 1);
  CHECK(d.params[0].name == "S");
  REQUIRE(d.mod_expr->kind == ast::ModExpr::Struct);
}

TEST_CASE("assumed module declaration without a body") {
  auto p = parse("implicit module M : Monad");
  REQUIRE(p.decls.size() == 1);
  CHECK(p.decls[0]->mod_expr == nullptr);
  REQUIRE(p.decls[0]->mod_ascription != nullptr);
}

TEST_CASE("top level let-in becomes an expression statement") {
  auto p = parse("let x = 1 in x + 1");
  REQUIRE(p.decls.size() == 1);
  CHECK(p.decls[0]->kind == ast::Decl::ExprStmt);
  CHECK(p.decls[0]->expr->kind == ast::Expr::Let);
}

TEST_CASE("let implicit module and let open implicit expressions") {
  auto e = parse_expression("let implicit module M = Show_int in show 3");
  REQUIRE(e->kind == ast::Expr::LetImplicitMod);
  CHECK(e->mod_name == "M");

  auto o = parse_expression("let open implicit Instances in show 3");
  REQUIRE(o->kind == ast::Expr::LetOpenImplicit);
  CHECK(o->path == std::vector<std::string>{"Instances"});

  auto p = parse("let implicit module M = Show_int in show 3");
  REQUIRE(p.decls.size() == 1);
  CHECK(p.decls[0]->kind == ast::Decl::ExprStmt);
}

TEST_CASE("match expression") {
  auto e = parse_expression(
      "match xs with | [] -> 0 | x :: rest -> 1 | (a, b) -> 2 | Some v -> 3 | None -> 4");
  REQUIRE(e->kind == ast::Expr::Match);
  REQUIRE(e->cases.size() == 5);
  CHECK(e->cases[0].pat->kind == ast::Pattern::Nil);
  CHECK(e->cases[1].pat->kind == ast::Pattern::Cons);
  CHECK(e->cases[2].pat->kind == ast::Pattern::Tuple);
  CHECK(e->cases[3].pat->kind == ast::Pattern::SomeP);
  CHECK(e->cases[4].pat->kind == ast::Pattern::NoneP);
}

TEST_CASE("functor application module expressions") {
  auto p = parse("module E = Eq_ord(Ord_int)\nmodule F = Eq_ord{Ord_int}");
  REQUIRE(p.decls.size() == 2);
  auto m = p.decls[0]->mod_expr;
  REQUIRE(m->kind == ast::ModExpr::Apply);
  CHECK_FALSE(m->implicit_style);
  CHECK(m->fn->path == std::vector<std::string>{"Eq_ord"});
  CHECK(p.decls[1]->mod_expr->implicit_style);
}

TEST_CASE("syntax errors carry E-SYNTAX and a position") {
  try {
    parse("let = 3");
    FAIL("expected a syntax error");
  } catch (const CompileError& e) {
    CHECK(e.diag().code == Code::Syntax);
    CHECK(e.diag().span.line == 1);
    CHECK(e.diag().payload.contains("expected"));
  }
  CHECK_THROWS_AS(parse("module = struct end"), CompileError);
  CHECK_THROWS_AS(parse("let x = (1"), CompileError);
  CHECK_THROWS_AS(parse_expression("1 2 3 +"), CompileError);
}

TEST_CASE("negative literals") {
  auto e = parse_expression("-3");
  CHECK(e->kind == ast::Expr::Int);
  CHECK(e->int_val == -3);
  auto f = parse_expression("-.2.5");
  CHECK(f->kind == ast::Expr::Float);
  CHECK(f->float_val == doctest::Approx(-2.5));
  // Binary minus with a literal on the right stays an application.
  auto g = parse_expression("x - 3");
  REQUIRE(g->kind == ast::Expr::App);
  CHECK(g->fn->name == "-");
}

static void check_roundtrip(const std::string& src) {
  CAPTURE(src);
  auto p1 = parse(src);
  auto printed = pretty(p1);
  CAPTURE(printed);
  auto p2 = parse(printed);
  CHECK(ast::equal(p1, p2));
  // Printing is a fixpoint after one round.
  CHECK(pretty(p2) == printed);
}

TEST_CASE("pretty print round trip on realistic programs") {
  check_roundtrip("let f x = x + 1\nlet () = print_endline (string_of_int (f 2))");
  check_roundtrip(
      "module type Show = sig type t val show : t -> string end\n"
      "implicit module Show_int : Show with type t = int = struct\n"
      "  type t = int\n  let show x = string_of_int x\nend\n"
      "let show {S : Show} (x : S.t) = S.show x\n"
      "implicit module Show_list {S : Show} : Show with type t = S.t list = struct\n"
      "  type t = S.t list\n"
      "  let show xs = \"[\" ^ String.concat \"; \" (List.map S.show xs) ^ \"]\"\n"
      "end\n"
      "let () = print_endline (show [1; 2; 3])");
  check_roundtrip(
      "let sum {N : Num} (l : N.t list) = List.fold_left N.( + ) N.zero l\n"
      "let x = match Some (1, 2) with | Some (a, b) -> a :: b :: [] | None -> []\n"
      "let y = if true && false then 1 else -1\n"
      "let z = fun {M : Monad} x -> M.return x >>= fun v -> M.return v");
  check_roundtrip(
      "module F (X : S) : T = struct let v = X.v end\n"
      "module G = F(A)\n"
      "implicit module H {X : S} = F{X}\n"
      "open implicit Instances\n"
      "let open implicit More in show 3");
  check_roundtrip("let a = 1.5 +. -.0.5\nlet b = \"a\\nb\\\"\\\\\"");
}

// Small generator for random expressions; printing then reparsing must give
// back a structurally equal tree.
namespace gen {

std::mt19937 rng(20260824);
int ri(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

ast::ExprPtr expr(int depth);

ast::ExprPtr leaf() {
  auto e = std::make_shared<ast::Expr>();
  switch (ri(6)) {
    case 0:
      e->kind = ast::Expr::Int;
      e->int_val = ri(201) - 100;
      break;
    case 1:
      e->kind = ast::Expr::Float;
      e->float_val = (ri(1001) - 500) / 8.0;
      break;
    case 2:
      e->kind = ast::Expr::Bool;
      e->bool_val = ri(2) == 0;
      break;
    case 3:
      e->kind = ast::Expr::Unit;
      break;
    case 4:
      e->kind = ast::Expr::Var;
      e->name = std::string(1, char('a' + ri(4)));
      break;
    default:
      e->kind = ast::Expr::String;
      e->str_val = ri(2) ? "hi\nthere" : "x";
      break;
  }
  return e;
}

ast::ExprPtr expr(int depth) {
  if (depth <= 0) return leaf();
  auto e = std::make_shared<ast::Expr>();
  switch (ri(8)) {
    case 0: {
      e->kind = ast::Expr::App;
      e->fn = std::make_shared<ast::Expr>();
      e->fn->kind = ast::Expr::Var;
      e->fn->name = "f";
      int n = 1 + ri(2);
      for (int i = 0; i < n; ++i) e->args.push_back({expr(depth - 1), nullptr, {}});
      break;
    }
    case 1: {
      static const char* ops[] = {"+", "-", "*", "^", "=", "<", ">=", ">>="};
      e->kind = ast::Expr::App;
      e->fn = std::make_shared<ast::Expr>();
      e->fn->kind = ast::Expr::Var;
      e->fn->name = ops[ri(8)];
      e->args.push_back({expr(depth - 1), nullptr, {}});
      e->args.push_back({expr(depth - 1), nullptr, {}});
      break;
    }
    case 2:
      e->kind = ast::Expr::If;
      e->cond = expr(depth - 1);
      e->then_e = expr(depth - 1);
      e->else_e = expr(depth - 1);
      break;
    case 3: {
      e->kind = ast::Expr::Tuple;
      int n = 2 + ri(2);
      for (int i = 0; i < n; ++i) e->items.push_back(expr(depth - 1));
      break;
    }
    case 4: {
      e->kind = ast::Expr::ListLit;
      int n = ri(3);
      for (int i = 0; i < n; ++i) e->items.push_back(expr(depth - 1));
      break;
    }
    case 5: {
      e->kind = ast::Expr::Let;
      e->name = "v";
      e->bound = expr(depth - 1);
      e->body = expr(depth - 1);
      break;
    }
    case 6: {
      e->kind = ast::Expr::Lambda;
      ast::Param p;
      p.kind = ast::Param::Value;
      p.name = "w";
      e->params.push_back(p);
      e->body = expr(depth - 1);
      break;
    }
    default: {
      e->kind = ast::Expr::Ctor;
      if (ri(2)) {
        e->name = "::";
        e->items.push_back(expr(depth - 1));
        e->items.push_back(expr(depth - 1));
      } else {
        e->name = "Some";
        e->items.push_back(expr(depth - 1));
      }
      break;
    }
  }
  return e;
}

}  // namespace gen

TEST_CASE("pretty print round trip on random expressions") {
  for (int trial = 0; trial < 500; ++trial) {
    auto e = gen::expr(4);
    auto printed = pretty(*e);
    CAPTURE(trial);
    CAPTURE(printed);
    ast::ExprPtr back;
    REQUIRE_NOTHROW(back = parse_expression(printed));
    CHECK(ast::equal(*e, *back));
  }
}
