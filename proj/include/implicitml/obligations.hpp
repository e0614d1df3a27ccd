#ifndef IMPLICITML_OBLIGATIONS_HPP
#define IMPLICITML_OBLIGATIONS_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "implicitml/types.hpp"

namespace implicitml {

// One equation `args rel.member = var` on the module variable an obligation
// stands for. `rel` is a path rooted at the obligation's internal parameter
// name (usually just that name; deeper for submodule members).
struct MemberConstraint {
  types::ModPathPtr rel;
  std::string member;
  std::vector<types::TypePtr> args;
  int var;
};

// An implicit argument awaiting resolution. Constraints grow lazily: the
// unifier records one whenever an abstract member rooted at `internal` must
// equal something.
struct PendingObligation {
  int id = 0;                 // ordinal, creation order
  std::string internal;       // unique module-variable name in types
  std::string display;        // source-level parameter name
  types::SigPtr sig;          // target signature
  Span span;                  // application site
  int node_id = 0;            // surface App node
  int arg_index = 0;          // which implicit parameter of that node
  std::vector<MemberConstraint> constraints;
};
using PendingObligationPtr = std::shared_ptr<PendingObligation>;

// Registry of live module variables, plus an undo trail for constraints added
// during speculative matching.
struct ObligationSet {
  std::map<std::string, PendingObligationPtr> by_internal;
  std::vector<PendingObligationPtr> ctrail;
  int next_id = 1;

  void add(const PendingObligationPtr& ob) { by_internal[ob->internal] = ob; }

  PendingObligationPtr find(const std::string& internal) const {
    auto it = by_internal.find(internal);
    return it == by_internal.end() ? nullptr : it->second;
  }

  int record(const PendingObligationPtr& ob, types::ModPathPtr rel, std::string member,
             std::vector<types::TypePtr> args, int var) {
    ob->constraints.push_back({std::move(rel), std::move(member), std::move(args), var});
    ctrail.push_back(ob);
    return var;
  }

  size_t checkpoint() const { return ctrail.size(); }
  void undo(size_t mark) {
    while (ctrail.size() > mark) {
      ctrail.back()->constraints.pop_back();
      ctrail.pop_back();
    }
  }
};

// Root name of a path (leftmost Name node).
inline const std::string& path_root(const types::ModPath& p) {
  const types::ModPath* cur = &p;
  while (cur->base) cur = cur->base.get();
  return cur->name;
}

}  // namespace implicitml

#endif
