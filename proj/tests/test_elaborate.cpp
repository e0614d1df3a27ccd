#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "implicitml/corecheck.hpp"
#include "implicitml/elaborate.hpp"
#include "implicitml/diagnostics.hpp"
#include "implicitml/eval.hpp"
#include "implicitml/pipeline.hpp"

using namespace implicitml;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(CORPUS_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Elaborates, checks the result is implicit-free and well-typed in the core,
// evaluates it and returns the program output.
std::string elaborate_and_run(const std::string& name) {
  auto src = slurp(name);
  auto checked = check_source(src);
  auto prog = elaborate_program(checked.ast, checked.infer);
  INFO("file: " << name);
  CHECK(core::implicit_free(prog));
  check_core(prog, *checked.infer.store);
  return eval_to_string(prog);
}

}  // namespace

TEST_CASE("runnable corpus elaborates, re-checks and runs") {
  // file -> expected output
  const std::map<std::string, std::string> expected = {
      {"fig1_show.iml",
       "Show an int: 5\nShow a float: 1.5\nShow a list of ints: [1, 2, 3]\n"},
      {"fig2_monad.iml", "[2, 4, 6]\n[1, 2, 3]\n2\n"},
      {"show_pair.iml", "(1,2)\n((1,2),3)\n"},
      {"diamond_alias.iml", "false\n"},
      {"widen.iml", "Some 3.\n"},
      {"complex_ok.iml", "1.5+2.5i\n"},
      {"sort_both_ways.iml", "[(1,2); (2,1)]\n[(2,1); (1,2)]\n"},
      {"num_sum_dot.iml", "11\nab\n4.\n"},
      {"sqrt_double.iml", "4.\n"},
      {"double_sqrt_fix_ascribe.iml", "4.\n"},
      {"double_sqrt_fix_split.iml", "4.\n"},
      {"show_this_that.iml", "Some ([Some ([1])])\n"},
      {"show_three_ok.iml", "3\n"},
      {"depth_cap.iml", "[[[[[1]]]]]\n"},
  };
  for (auto& [file, out] : expected) {
    INFO("file: " << file);
    CHECK(elaborate_and_run(file) == out);
  }
}

TEST_CASE("explicit-argument variants produce identical output") {
  const char* files[] = {
      "fig1_show.iml",      "fig2_monad.iml",
      "show_pair.iml",      "diamond_alias.iml",
      "widen.iml",          "complex_ok.iml",
      "sort_both_ways.iml", "num_sum_dot.iml",
      "sqrt_double.iml",    "double_sqrt_fix_ascribe.iml",
      "double_sqrt_fix_split.iml", "show_this_that.iml",
  };
  for (auto* f : files) {
    std::string name = f;
    auto ex = name.substr(0, name.size() - 4) + "_explicit.iml";
    INFO("pair: " << name << " / " << ex);
    CHECK(elaborate_and_run(name) == elaborate_and_run(ex));
  }
}

TEST_CASE("error corpus fails with the expected diagnostic") {
  const std::map<std::string, Code> expected = {
      {"fig2_monad_ambiguous.iml", Code::Ambiguous},
      {"diamond_bad.iml", Code::Ambiguous},
      {"complex_ambiguous.iml", Code::Ambiguous},
      {"double_sqrt.iml", Code::Ambiguous},
      {"show_int_twice.iml", Code::Ambiguous},
      {"show_three.iml", Code::MissingAnnot},
      {"impure_functor.iml", Code::ImpureFunctor},
      {"show_it_loop.iml", Code::Termination},
  };
  for (auto& [file, code] : expected) {
    INFO("file: " << file);
    try {
      check_source(slurp(file));
      FAIL_CHECK("expected a diagnostic for " << file);
    } catch (const CompileError& e) {
      CHECK(e.diag().code == code);
    }
  }
}

TEST_CASE("elaborated text is stable and free of implicit syntax") {
  auto checked = check_source(slurp("fig1_show.iml"));
  auto prog = elaborate_program(checked.ast, checked.infer);
  auto text = core::print_core(prog);
  // Implicit parameters become packed functors; eliminations unpack and
  // apply. No implicit-argument braces survive in the output.
  CHECK(text.find("functor (") != std::string::npos);
  CHECK(text.find("(val ") != std::string::npos);
  CHECK(text.find("let module ") != std::string::npos);
  CHECK(text.find("implicit") == std::string::npos);
  // Printing is deterministic.
  auto checked2 = check_source(slurp("fig1_show.iml"));
  auto prog2 = elaborate_program(checked2.ast, checked2.infer);
  CHECK(core::print_core(prog2) == text);
}

TEST_CASE("generated module names do not capture user bindings") {
  // F and R are bound at every scope the elaborator touches; the fresh
  // names it introduces for unpack chains must not collide with them.
  auto src =
      "module type Show = sig type t val show : t -> string end;;\n"
      "module type Other = sig type u end;;\n"
      "module F = struct type t = int let show x = string_of_int x end;;\n"
      "module R = struct type u = int end;;\n"
      "implicit module Show_int = struct type t = int let show x = string_of_int x end;;\n"
      "let show {S : Show} x = S.show x;;\n"
      "let s = let implicit module F = R in show 7;;\n"
      "let () = print_string s;;\n";
  auto checked = check_source(src);
  auto prog = elaborate_program(checked.ast, checked.infer);
  CHECK(core::implicit_free(prog));
  check_core(prog, *checked.infer.store);
  CHECK(eval_to_string(prog) == "7");
}
