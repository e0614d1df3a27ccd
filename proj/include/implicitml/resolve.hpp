#ifndef IMPLICITML_RESOLVE_HPP
#define IMPLICITML_RESOLVE_HPP

#include <functional>
#include <string>
#include <vector>

#include "implicitml/env.hpp"
#include "implicitml/obligations.hpp"
#include "implicitml/types.hpp"

namespace implicitml {

// One way of discharging an obligation.
struct Solution {
  types::ModPathPtr nf;    // alias-expanded normal form (identity)
  types::ModPathPtr expr;  // module expression over scope names (elaboration)
  std::vector<std::pair<int, types::TypePtr>> bindings;  // store delta to replay
};

enum class Outcome { Unique, None, Ambiguous, Termination, DepthCap };

const char* outcome_name(Outcome o);

struct ResolveResult {
  Outcome outcome = Outcome::None;
  std::vector<Solution> solutions;  // deduplicated by normal form
  nlohmann::json payload;           // diagnostics extras
};

struct ResolverOptions {
  int max_depth = 64;
  std::function<void(const std::string&)> trace;  // optional
};

// Enumerates every candidate in the implicit scope of `e` that discharges
// `ob`, with full backtracking over functor arguments, termination checking
// and alias-aware deduplication. All speculative store bindings are undone;
// the winner's bindings are returned for the caller to replay.
ResolveResult resolve(const env::Env& e, types::TypeStore& store, ObligationSet& obs,
                      const PendingObligationPtr& ob, const ResolverOptions& opts);

// Node-count size of a type (the termination metric).
int constraint_size(const types::TypePtr& t, const types::TypeStore& store);

}  // namespace implicitml

#endif
