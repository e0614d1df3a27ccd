#ifndef IMPLICITML_INFER_HPP
#define IMPLICITML_INFER_HPP

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "implicitml/ast.hpp"
#include "implicitml/env.hpp"
#include "implicitml/types.hpp"

namespace implicitml {

// An implicit module parameter introduced by a lambda, let, functor or local
// module binding; keyed by the owning node so elaboration can rebuild it.
struct ImplicitParamInfo {
  std::string name;      // source-level name
  std::string internal;  // unique name the inferred types refer to
  types::SigPtr sig;
  ast::ModTypePtr sig_ast;
};

// How one argument position of a surface application was consumed. Steps are
// in elimination order: implicit parameters peeled before a value argument
// appear ahead of it.
struct ArgStep {
  enum Kind { Implicit, ExplicitMod, Value };
  Kind kind = Value;
  int ob_id = 0;                  // Implicit: obligation to look up in resolutions
  types::ModPathPtr mod_path;     // ExplicitMod: the written module, normalized access
  size_t surface_index = 0;       // ExplicitMod / Value: index into the App's args
};

struct AppPlan {
  std::vector<ArgStep> steps;
};

struct InferOptions {
  int max_depth = 64;
  std::function<void(const std::string&)> trace;  // resolution trace sink
};

struct TopItem {
  std::string text;  // one `check` output line, e.g. "val show : ..."
};

// Whole-program inference result: the final environment plus the side tables
// elaboration needs (per-application plans and per-obligation resolutions).
struct InferResult {
  std::shared_ptr<types::TypeStore> store;
  env::Env top;
  std::map<int, AppPlan> app_plans;                      // App node id
  std::map<int, types::ModPathPtr> resolutions;          // obligation id -> module expr
  std::map<int, std::vector<ImplicitParamInfo>> params;  // owner node id
  std::map<int, env::ModuleInfoPtr> mod_infos;           // module binding node id
  std::vector<TopItem> top_items;
};

InferResult infer_program(const ast::Program& p, const InferOptions& opts = {});

}  // namespace implicitml

#endif
