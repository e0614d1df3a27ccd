#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "implicitml/diagnostics.hpp"
#include "implicitml/pipeline.hpp"
#include "implicitml/types.hpp"
#include "implicitml/unify.hpp"

using namespace implicitml;
namespace ty = implicitml::types;

namespace {

std::vector<std::string> items(const std::string& src) {
  auto checked = check_source(src);
  std::vector<std::string> out;
  for (auto& it : checked.infer.top_items) out.push_back(it.text);
  return out;
}

Code diag_of(const std::string& src) {
  try {
    check_source(src);
  } catch (const CompileError& e) {
    return e.diag().code;
  }
  FAIL("expected a diagnostic");
  return Code::Type;
}

bool has_item(const std::vector<std::string>& v, const std::string& line) {
  for (auto& s : v)
    if (s == line) return true;
  return false;
}

}  // namespace

TEST_CASE("unify ground constructors") {
  ty::TypeStore store;
  env::Env e;
  Unifier u(store, e);
  CHECK(u.unify(ty::mk_ctor("int"), ty::mk_ctor("int")));
  CHECK_FALSE(u.unify(ty::mk_ctor("int"), ty::mk_ctor("float")));
  CHECK(u.unify(ty::mk_ctor("list", {ty::mk_ctor("int")}),
                ty::mk_ctor("list", {ty::mk_ctor("int")})));
  CHECK_FALSE(u.unify(ty::mk_ctor("list", {ty::mk_ctor("int")}),
                      ty::mk_ctor("list", {ty::mk_ctor("bool")})));
}

TEST_CASE("unify binds variables through the store") {
  ty::TypeStore store;
  env::Env e;
  Unifier u(store, e);
  auto v = store.fresh_var();
  CHECK(u.unify(v, ty::mk_ctor("int")));
  CHECK(ty::user_str(v, store) == "int");
  auto w = store.fresh_var();
  CHECK(u.unify(ty::mk_arrow(w, w), ty::mk_arrow(ty::mk_ctor("bool"), w)));
  CHECK(ty::user_str(w, store) == "bool");
}

TEST_CASE("occurs check rejects infinite types") {
  ty::TypeStore store;
  env::Env e;
  Unifier u(store, e);
  auto v = store.fresh_var();
  CHECK_FALSE(u.unify(v, ty::mk_arrow(v, ty::mk_ctor("int"))));
}

TEST_CASE("member types with equal abstract paths decompose") {
  ty::TypeStore store;
  env::Env e;
  Unifier u(store, e);
  auto p = ty::ModPath::mk_name("M");
  auto v = store.fresh_var();
  CHECK(u.unify(ty::mk_member(p, "t", {v}), ty::mk_member(p, "t", {ty::mk_ctor("int")})));
  CHECK(ty::user_str(v, store) == "int");
  auto q = ty::ModPath::mk_name("N");
  CHECK_FALSE(u.unify(ty::mk_member(p, "t"), ty::mk_member(q, "t")));
}

TEST_CASE("store trail undo discards speculative bindings") {
  ty::TypeStore store;
  env::Env e;
  Unifier u(store, e);
  auto v = store.fresh_var();
  auto mark = store.checkpoint();
  CHECK(u.unify(v, ty::mk_ctor("int")));
  store.undo(mark);
  CHECK(u.unify(v, ty::mk_ctor("string")));
  CHECK(ty::user_str(v, store) == "string");
}

TEST_CASE("module path printing and substitution") {
  auto f = ty::ModPath::mk_name("F");
  auto x = ty::ModPath::mk_name("X");
  auto app = ty::ModPath::mk_app(f, {x});
  auto proj = ty::ModPath::mk_proj(app, "Eq");
  CHECK(ty::path_str(*proj) == "F(X).Eq");
  CHECK(ty::path_size(*proj) == 4);
  auto sub = ty::path_subst(proj, "X", ty::ModPath::mk_name("Y"));
  CHECK(ty::path_str(*sub) == "F(Y).Eq");
  CHECK(ty::path_equal(*proj, *proj));
  CHECK_FALSE(ty::path_equal(*proj, *sub));
}

TEST_CASE("polymorphic let generalizes") {
  auto v = items("let id x = x;; let pair x y = (x, y);;");
  CHECK(has_item(v, "val id : 'a -> 'a"));
  CHECK(has_item(v, "val pair : 'a -> 'b -> 'a * 'b"));
}

TEST_CASE("implicit parameter scheme mentions the module member") {
  auto v = items(
      "module type Show = sig type t val show : t -> string end;;"
      "let show {S : Show} x = S.show x;;");
  CHECK(has_item(v, "val show : {S : Show} -> S.t -> string"));
}

TEST_CASE("monad combinator schemes") {
  auto v = items(
      "module type Monad = sig\n"
      "  type 'a t\n"
      "  val return : 'a -> 'a t\n"
      "  val ( >>= ) : 'a t -> ('a -> 'b t) -> 'b t\n"
      "end;;\n"
      "let return {M : Monad} (x : 'a) : 'a M.t = M.return x;;\n"
      "let ( >>= ) {M : Monad} (m : 'a M.t) (k : 'a -> 'b M.t) : 'b M.t = M.( >>= ) m k;;\n"
      "let map {M : Monad} (m : 'a M.t) (f : 'a -> 'b) = m >>= fun x -> return (f x);;\n"
      "let join {M : Monad} (m : 'a M.t M.t) : 'a M.t = m >>= fun x -> x;;\n");
  CHECK(has_item(v, "val map : {M : Monad} -> 'b M.t -> ('b -> 'a) -> 'a M.t"));
  CHECK(has_item(v, "val join : {M : Monad} -> 'a M.t M.t -> 'a M.t"));
}

TEST_CASE("signature inclusion permits extra members") {
  auto v = items(
      "module type Small = sig type t val x : t end;;"
      "module M : Small = struct type t = int let x = 3 let extra = true end;;");
  CHECK(has_item(v, "module M"));
}

TEST_CASE("signature inclusion checks value schemes for generality") {
  CHECK(diag_of("module type S = sig val id : 'a -> 'a end;;"
                "module M : S = struct let id (x : int) = x end;;") == Code::SigMismatch);
}

TEST_CASE("signature inclusion requires all members") {
  CHECK(diag_of("module type S = sig type t val x : t val y : t end;;"
                "module M : S = struct type t = int let x = 1 end;;") == Code::SigMismatch);
}

TEST_CASE("manifest types flow through ascriptions") {
  auto v = items(
      "module M : sig type t = int val x : t end = struct type t = int let x = 3 end;;"
      "let y = M.x + 1;;");
  CHECK(has_item(v, "val y : int"));
}

TEST_CASE("sealing hides the representation") {
  CHECK(diag_of("module M : sig type t val x : t end = struct type t = int let x = 3 end;;"
                "let y = M.x + 1;;") == Code::Type);
}

TEST_CASE("with-constraints refine abstract types") {
  auto v = items(
      "module type S = sig type t val x : t end;;"
      "module M : S with type t = int = struct type t = int let x = 3 end;;"
      "let y = M.x + 1;;");
  CHECK(has_item(v, "val y : int"));
}

TEST_CASE("unbound identifiers and type errors carry their codes") {
  CHECK(diag_of("let x = nope;;") == Code::Unbound);
  CHECK(diag_of("let x = 1 + true;;") == Code::Type);
  CHECK(diag_of("let x = M.y;;") == Code::Unbound);
}

TEST_CASE("functor application normalizes member types") {
  auto v = items(
      "module type S = sig type t val x : t end;;"
      "module F {A : S} = struct type t = A.t list let x = [A.x] end;;"
      "module I = struct type t = int let x = 1 end;;"
      "module M = F(I);;"
      "let y = M.x;;");
  CHECK(has_item(v, "val y : I.t list"));
}
