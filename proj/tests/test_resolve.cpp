#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "implicitml/diagnostics.hpp"
#include "implicitml/pipeline.hpp"

using namespace implicitml;

namespace {

struct Attempt {
  bool ok = false;
  Code code = Code::Type;          // when !ok
  nlohmann::json payload;          // when !ok
  std::vector<std::string> trace;  // resolver trace lines
};

Attempt attempt(const std::string& src, int max_depth = 64) {
  Attempt a;
  PipelineOptions opts;
  opts.max_depth = max_depth;
  opts.trace = [&](const std::string& line) { a.trace.push_back(line); };
  try {
    check_source(src, opts);
    a.ok = true;
  } catch (const CompileError& e) {
    a.code = e.diag().code;
    a.payload = e.diag().payload;
  }
  return a;
}

std::vector<std::string> solutions_of(const Attempt& a) {
  std::vector<std::string> out;
  for (auto& line : a.trace)
    if (line.rfind("SOLUTION ", 0) == 0) out.push_back(line.substr(9));
  return out;
}

std::set<std::string> candidate_set(const Attempt& a) {
  std::set<std::string> out;
  if (a.payload.contains("candidates"))
    for (auto& c : a.payload["candidates"])
      out.insert(c["normal_form"].get<std::string>());
  return out;
}

const char* kShowPrelude =
    "module type Show = sig type t val show : t -> string end;;\n"
    "let show {S : Show} x = S.show x;;\n"
    "implicit module Show_int = struct type t = int let show x = string_of_int x end;;\n"
    "implicit module Show_list {S : Show} = struct\n"
    "  type t = S.t list\n"
    "  let show l = \"[\" ^ String.concat \", \" (List.map S.show l) ^ \"]\"\n"
    "end;;\n";

}  // namespace

TEST_CASE("leaf candidate resolves uniquely") {
  auto a = attempt(std::string(kShowPrelude) + "let s = show 5;;");
  CHECK(a.ok);
  auto sols = solutions_of(a);
  REQUIRE(sols.size() == 1);
  CHECK(sols[0] == "Show_int");
}

TEST_CASE("functor chain resolves through backtracking") {
  auto a = attempt(std::string(kShowPrelude) + "let s = show [[1; 2]];;");
  CHECK(a.ok);
  auto sols = solutions_of(a);
  REQUIRE(sols.size() == 1);
  CHECK(sols[0] == "Show_list(Show_list(Show_int))");
}

TEST_CASE("no candidate gives E-NO-SOLUTION") {
  auto a = attempt(std::string(kShowPrelude) + "let s = show 1.5;;");
  REQUIRE_FALSE(a.ok);
  CHECK(a.code == Code::NoSolution);
}

TEST_CASE("overlapping leaves give E-AMBIGUOUS with both candidates") {
  auto a = attempt(
      std::string(kShowPrelude) +
      "implicit module Show_int2 = struct type t = int let show x = \"i\" end;;\n"
      "let s = show 5;;");
  REQUIRE_FALSE(a.ok);
  CHECK(a.code == Code::Ambiguous);
  CHECK(candidate_set(a) == std::set<std::string>{"Show_int", "Show_int2"});
}

TEST_CASE("duplicate module under a new name flips unique to ambiguous") {
  auto base = std::string(kShowPrelude) + "let s = show [1];;";
  CHECK(attempt(base).ok);
  auto a = attempt(
      std::string(kShowPrelude) +
      "implicit module Show_list2 {S : Show} = struct\n"
      "  type t = S.t list let show l = \"l\"\n"
      "end;;\n"
      "let s = show [1];;");
  REQUIRE_FALSE(a.ok);
  CHECK(a.code == Code::Ambiguous);
  CHECK(candidate_set(a) ==
        std::set<std::string>{"Show_list(Show_int)", "Show_list2(Show_int)"});
}

TEST_CASE("identity functor trips the termination ledger with equal snapshots") {
  auto a = attempt(
      "module type Show = sig type t val show : t -> string end;;\n"
      "let show {S : Show} x = S.show x;;\n"
      "implicit module Show_it {S : Show} = struct type t = S.t let show = S.show end;;\n"
      "let s = show 5;;");
  REQUIRE_FALSE(a.ok);
  CHECK(a.code == Code::Termination);
  REQUIRE(a.payload.contains("previous_snapshot"));
  REQUIRE(a.payload.contains("incoming_snapshot"));
  CHECK(a.payload["previous_snapshot"] == a.payload["incoming_snapshot"]);
}

TEST_CASE("ledger compares only frames of the same functor") {
  // Show_this / Show_that alternate, so consecutive frames of one functor
  // are separated by the other; sizes still strictly decrease per functor.
  auto a = attempt(
      "module type Show = sig type t val show : t -> string end;;\n"
      "let show {S : Show} x = S.show x;;\n"
      "implicit module Show_int = struct type t = int let show x = string_of_int x end;;\n"
      "implicit module Show_this {S : Show} = struct\n"
      "  type t = S.t option\n"
      "  let show v = match v with None -> \"N\" | Some x -> S.show x\n"
      "end;;\n"
      "implicit module Show_that {S : Show} = struct\n"
      "  type t = S.t list\n"
      "  let show l = String.concat \",\" (List.map S.show l)\n"
      "end;;\n"
      "let s = show (Some [Some [1]]);;");
  CHECK(a.ok);
  auto sols = solutions_of(a);
  REQUIRE(sols.size() == 1);
  CHECK(sols[0] == "Show_this(Show_that(Show_this(Show_that(Show_int))))");
}

TEST_CASE("depth cap fires below the chain length and not above it") {
  auto deep = std::string(kShowPrelude) + "let s = show [[[[[1]]]]];;";
  CHECK(attempt(deep, 64).ok);
  CHECK(attempt(deep, 6).ok);
  auto a = attempt(deep, 3);
  REQUIRE_FALSE(a.ok);
  CHECK(a.code == Code::DepthCap);
  CHECK(a.payload["max_depth"] == 3);
}

TEST_CASE("aliases collapse a diamond to one normal form") {
  auto a = attempt(
      "module type Eq = sig type t val equal : t -> t -> bool end;;\n"
      "let equal {E : Eq} (l : E.t) (r : E.t) = E.equal l r;;\n"
      "implicit module Eq_int = struct type t = int let equal l r = l = r end;;\n"
      "implicit module Eq_list {E : Eq} = struct\n"
      "  type t = E.t list\n"
      "  let equal l r = List.length l = List.length r\n"
      "end;;\n"
      "module type Ord = sig\n"
      "  type t\n"
      "  module Eq : Eq with type t = t\n"
      "  val compare : t -> t -> int\n"
      "end;;\n"
      "implicit module Eq_ord {O : Ord} = O.Eq;;\n"
      "implicit module Ord_int = struct\n"
      "  type t = int\n"
      "  module Eq = Eq_int\n"
      "  let compare l r = compare l r\n"
      "end;;\n"
      "implicit module Ord_list {O : Ord} = struct\n"
      "  type t = O.t list\n"
      "  module Eq = Eq_list(O.Eq)\n"
      "  let compare l r = 0\n"
      "end;;\n"
      "let b = equal [1] [2];;");
  CHECK(a.ok);
  auto sols = solutions_of(a);
  REQUIRE(sols.size() >= 1);
  for (auto& s : sols) CHECK(s == "Eq_list(Eq_int)");
}

// ---------------------------------------------------------------------------
// Randomized cross-check against a brute-force enumerator. Universes contain
// leaf instances over ground types and single-parameter functors that wrap
// with list or option; the oracle enumerates every candidate term whose type
// matches the goal and predicts unique / none / ambiguous.

namespace {

struct Universe {
  std::vector<std::string> leaf_types;    // ground type per leaf L<i>
  std::vector<std::string> fun_wrappers;  // "list" or "option" per functor F<j>
  std::string target;                     // goal type, e.g. "int list option"
};

const char* kGrounds[] = {"int", "float", "string", "bool"};

Universe random_universe(std::mt19937& rng) {
  Universe u;
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  int nleaves = 1 + pick(4);
  for (int i = 0; i < nleaves; ++i) u.leaf_types.push_back(kGrounds[pick(4)]);
  int nfuns = pick(3);
  for (int j = 0; j < nfuns; ++j) u.fun_wrappers.push_back(pick(2) ? "option" : "list");
  u.target = kGrounds[pick(4)];
  int wraps = pick(4);
  for (int k = 0; k < wraps; ++k) u.target += pick(2) ? " option" : " list";
  return u;
}

std::string universe_source(const Universe& u, unsigned perm_seed = 0,
                            bool add_noise = false) {
  std::vector<std::string> decls;
  for (size_t i = 0; i < u.leaf_types.size(); ++i)
    decls.push_back("implicit module L" + std::to_string(i) + " = struct type t = " +
                    u.leaf_types[i] + " let f x = x end;;\n");
  for (size_t j = 0; j < u.fun_wrappers.size(); ++j)
    decls.push_back("implicit module F" + std::to_string(j) +
                    " {M : S} = struct type t = M.t " + u.fun_wrappers[j] +
                    " let f x = x end;;\n");
  if (add_noise)
    decls.push_back(
        "module type T = sig type u val g : u -> u end;;\n"
        "implicit module Noise = struct type u = int let g x = x end;;\n");
  if (perm_seed) {
    std::mt19937 rng(perm_seed);
    std::shuffle(decls.begin(), decls.end(), rng);
  }
  std::string src = "module type S = sig type t val f : t -> t end;;\n";
  for (auto& d : decls) src += d;
  src += "let use {M : S} (x : M.t) = M.f x;;\n";
  src += "let goal (y : " + u.target + ") = use y;;\n";
  return src;
}

// Every term F(..F(L)..) whose type equals the target, by brute force.
std::set<std::string> oracle(const Universe& u) {
  std::set<std::string> found;
  std::vector<std::pair<std::string, std::string>> frontier;  // term, type
  for (size_t i = 0; i < u.leaf_types.size(); ++i)
    frontier.push_back({"L" + std::to_string(i), u.leaf_types[i]});
  for (int depth = 0; depth <= 4; ++depth) {
    std::vector<std::pair<std::string, std::string>> next;
    for (auto& [term, type] : frontier) {
      if (type == u.target) found.insert(term);
      for (size_t j = 0; j < u.fun_wrappers.size(); ++j)
        next.push_back({"F" + std::to_string(j) + "(" + term + ")",
                        type + " " + u.fun_wrappers[j]});
    }
    frontier = std::move(next);
  }
  return found;
}

void check_universe(const Universe& u, unsigned perm_seed, bool add_noise) {
  auto expected = oracle(u);
  auto a = attempt(universe_source(u, perm_seed, add_noise));
  INFO("source:\n" << universe_source(u, perm_seed, add_noise));
  if (expected.empty()) {
    REQUIRE_FALSE(a.ok);
    CHECK(a.code == Code::NoSolution);
  } else if (expected.size() == 1) {
    REQUIRE(a.ok);
    auto sols = solutions_of(a);
    REQUIRE(sols.size() == 1);
    CHECK(sols[0] == *expected.begin());
  } else {
    REQUIRE_FALSE(a.ok);
    CHECK(a.code == Code::Ambiguous);
    CHECK(candidate_set(a) == expected);
  }
}

}  // namespace

TEST_CASE("resolution agrees with a brute-force oracle on random universes") {
  std::mt19937 rng(20240817);
  for (int i = 0; i < 500; ++i) {
    auto u = random_universe(rng);
    check_universe(u, 0, false);
  }
}

TEST_CASE("outcomes are invariant under scope permutation and irrelevant entries") {
  std::mt19937 rng(71);
  for (int i = 0; i < 250; ++i) {
    auto u = random_universe(rng);
    for (unsigned s = 1; s <= 4; ++s) check_universe(u, s, s % 2 == 0);
  }
}
