#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <unistd.h>

#include <CLI11.hpp>

#include "implicitml/corecheck.hpp"
#include "implicitml/diagnostics.hpp"
#include "implicitml/elaborate.hpp"
#include "implicitml/eval.hpp"
#include "implicitml/pipeline.hpp"

namespace {

struct Config {
  std::string command;
  std::string input;
  bool trace_resolution = false;
  bool json = false;
  bool no_color = false;
  int max_depth = 64;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open '" << path << "'\n";
    std::exit(2);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void report(const implicitml::Diagnostic& d, const Config& cfg) {
  using implicitml::RenderMode;
  auto text = implicitml::render(d, cfg.json ? RenderMode::Json : RenderMode::Human);
  if (!cfg.json && !cfg.no_color && isatty(2)) {
    // Highlight the leading E-code when writing to a terminal.
    auto sp = text.find(' ');
    if (sp != std::string::npos)
      text = "\033[31m" + text.substr(0, sp) + "\033[0m" + text.substr(sp);
  }
  std::cerr << text << "\n";
}

int dispatch(const Config& cfg) {
  using namespace implicitml;
  auto source = read_input(cfg.input);
  PipelineOptions opts;
  opts.max_depth = cfg.max_depth;
  bool trace = cfg.trace_resolution || cfg.command == "trace";
  if (trace) opts.trace = [](const std::string& line) { std::cerr << line << "\n"; };
  try {
    if (cfg.command == "check" || cfg.command == "trace") {
      auto checked = check_source(source, opts);
      for (auto& item : checked.infer.top_items) std::cout << item.text << "\n";
      return 0;
    }
    if (cfg.command == "elaborate") {
      auto checked = check_source(source, opts);
      auto cp = elaborate_program(checked.ast, checked.infer);
      check_core(cp, *checked.infer.store);
      std::cout << core::print_core(cp);
      return 0;
    }
    // run
    auto checked = check_source(source, opts);
    auto cp = elaborate_program(checked.ast, checked.infer);
    check_core(cp, *checked.infer.store);
    eval_program(cp, std::cout);
    return 0;
  } catch (const CompileError& e) {
    report(e.diag(), cfg);
    return 1;
  } catch (const RuntimeError& e) {
    if (cfg.json) {
      nlohmann::json j;
      j["code"] = "runtime";
      j["message"] = e.what();
      j["span"] = {{"line", e.span.line},
                   {"col", e.span.col},
                   {"end_line", e.span.end_line},
                   {"end_col", e.span.end_col}};
      std::cerr << j.dump() << "\n";
    } else {
      std::cerr << "runtime error";
      if (e.span.valid()) std::cerr << " at " << e.span.str();
      std::cerr << ": " << e.what() << "\n";
    }
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"implicitml: a small ML dialect with implicit module parameters"};
  app.require_subcommand(1);

  Config cfg;
  const char* envd = std::getenv("IMPLICITML_MAX_DEPTH");
  if (envd && *envd) cfg.max_depth = std::atoi(envd);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("input", cfg.input, "source file (.iml), or - for standard input")
        ->required();
    sub->add_flag("--trace-resolution", cfg.trace_resolution,
                  "print the resolution search trace to standard error");
    sub->add_flag("--json", cfg.json, "render diagnostics as JSON");
    sub->add_option("--max-depth", cfg.max_depth,
                    "maximum implicit resolution search depth")
        ->check(CLI::Range(1, 1 << 20));
    sub->add_flag("--no-color", cfg.no_color, "disable color in diagnostics");
  };
  add_common(app.add_subcommand("check", "parse and type-check, printing top-level items"));
  add_common(app.add_subcommand("elaborate", "print the implicit-free core program"));
  add_common(app.add_subcommand("run", "type-check, elaborate and evaluate"));
  add_common(app.add_subcommand("trace", "check with the resolution trace on standard error"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  return dispatch(cfg);
}
