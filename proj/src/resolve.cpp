#include "implicitml/resolve.hpp"

#include <algorithm>

#include "implicitml/inclusion.hpp"
#include "implicitml/unify.hpp"

namespace implicitml {

using namespace types;

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Unique: return "Unique";
    case Outcome::None: return "NoSolution";
    case Outcome::Ambiguous: return "Ambiguous";
    case Outcome::Termination: return "TerminationError";
    case Outcome::DepthCap: return "DepthCap";
  }
  return "?";
}

int constraint_size(const TypePtr& t0, const TypeStore& store) {
  TypePtr t = store.shorten(t0);
  if (!t) return 0;
  int n = 1;
  for (auto& a : t->args) n += constraint_size(a, store);
  if (t->a) n += constraint_size(t->a, store);
  if (t->b) n += constraint_size(t->b, store);
  return n;
}

namespace {

struct Snapshot {
  // member name -> (size, rendered type); max size wins if a member is
  // constrained more than once.
  std::map<std::string, std::pair<int, std::string>> members;

  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (auto& [k, v] : members) j[k] = {{"size", v.first}, {"type", v.second}};
    return j;
  }
};

struct Frame {
  const env::ModuleInfo* functor_id;
  std::string functor_name;
  Snapshot snapshot;
};

struct TermViolation {
  std::string functor;
  Snapshot previous, incoming;
};
struct DepthHit {};

class Resolver {
 public:
  Resolver(const env::Env& e, TypeStore& store, ObligationSet& obs, const ResolverOptions& opts)
      : env_(e), store_(store), obs_(obs), opts_(opts) {}

  ResolveResult run(const PendingObligationPtr& ob) {
    ResolveResult res;
    size_t mark0 = store_.checkpoint();
    size_t cmark0 = obs_.checkpoint();
    try {
      std::vector<Frame> ledger;
      solve(ob, env_, ledger, [&](ModPathPtr nf, ModPathPtr expr) {
        add_solution(res, nf, expr, mark0);
      });
    } catch (const TermViolation& v) {
      store_.undo(mark0);
      obs_.undo(cmark0);
      res.outcome = Outcome::Termination;
      res.payload["functor"] = v.functor;
      res.payload["previous_snapshot"] = v.previous.to_json();
      res.payload["incoming_snapshot"] = v.incoming.to_json();
      attach_partial(res);
      trace("OUTCOME " + std::string(outcome_name(res.outcome)));
      return res;
    } catch (const DepthHit&) {
      store_.undo(mark0);
      obs_.undo(cmark0);
      res.outcome = Outcome::DepthCap;
      res.payload["max_depth"] = opts_.max_depth;
      attach_partial(res);
      trace("OUTCOME " + std::string(outcome_name(res.outcome)));
      return res;
    }
    store_.undo(mark0);
    obs_.undo(cmark0);
    if (res.solutions.empty()) {
      res.outcome = Outcome::None;
      res.payload["explored"] = tried_;
    } else if (res.solutions.size() == 1) {
      res.outcome = Outcome::Unique;
      res.payload["candidate"] = path_str(*res.solutions[0].nf);
    } else {
      res.outcome = Outcome::Ambiguous;
      attach_partial(res);
    }
    trace("OUTCOME " + std::string(outcome_name(res.outcome)));
    return res;
  }

 private:
  const env::Env& env_;
  TypeStore& store_;
  ObligationSet& obs_;
  const ResolverOptions& opts_;
  int tried_ = 0;
  std::vector<Solution> found_;  // mirrors res.solutions for payload helpers

  void trace(const std::string& line) {
    if (opts_.trace) opts_.trace(line);
  }

  void add_solution(ResolveResult& res, const ModPathPtr& nf, const ModPathPtr& expr,
                    size_t mark0) {
    for (auto& s : res.solutions)
      if (path_equal(*s.nf, *nf)) return;  // alias of an existing solution
    Solution s;
    s.nf = nf;
    s.expr = expr;
    s.bindings = store_.delta(mark0);
    res.solutions.push_back(s);
    found_.push_back(s);
    trace("SOLUTION " + path_str(*nf));
  }

  void attach_partial(ResolveResult& res) {
    auto cands = nlohmann::json::array();
    std::vector<std::pair<std::string, std::string>> rows;
    for (auto& s : found_) rows.push_back({path_str(*s.nf), path_str(*s.expr)});
    std::sort(rows.begin(), rows.end());
    for (auto& [nf, expr] : rows)
      cands.push_back({{"normal_form", nf}, {"expression", expr}});
    res.payload["candidates"] = cands;
  }

  Snapshot snapshot(const PendingObligationPtr& ob) {
    Snapshot snap;
    for (auto& c : ob->constraints) {
      auto t = store_.resolve(mk_var(c.var));
      int size = constraint_size(t, store_);
      auto& slot = snap.members[c.member];
      if (slot.first < size) slot = {size, user_str(t, store_)};
    }
    return snap;
  }

  bool match_candidate(const env::ModuleInfoPtr& info, const PendingObligationPtr& ob,
                       const env::Env& e, std::string* why) {
    if (!signature_includes(e, store_, &obs_, info, *ob->sig, why)) return false;
    Unifier u(store_, e, &obs_);
    for (size_t i = 0; i < ob->constraints.size(); ++i) {
      auto c = ob->constraints[i];  // copy: the vector may grow under us
      auto abs = path_subst(c.rel, ob->internal, info->nf);
      auto lhs = mk_member(abs, c.member, c.args);
      if (!u.unify(lhs, mk_var(c.var))) {
        if (why)
          *why = "constraint on member '" + c.member + "' failed: " +
                 user_str(store_.resolve(mk_var(c.var)), store_);
        return false;
      }
    }
    return true;
  }

  void solve(const PendingObligationPtr& ob, const env::Env& e, std::vector<Frame>& ledger,
             const std::function<void(ModPathPtr, ModPathPtr)>& yield) {
    auto scope = e.implicit_scope();
    for (auto& [name, info] : scope) {
      if (!info->is_functor)
        try_leaf(name, info, ob, e, yield);
      else
        try_functor(name, info, ob, e, ledger, yield);
    }
  }

  void try_leaf(const std::string& name, const env::ModuleInfoPtr& info,
                const PendingObligationPtr& ob, const env::Env& e,
                const std::function<void(ModPathPtr, ModPathPtr)>& yield) {
    ++tried_;
    trace("TRY " + name + " FOR " + std::to_string(ob->id));
    size_t mark = store_.checkpoint();
    size_t cmark = obs_.checkpoint();
    std::string why;
    if (match_candidate(info, ob, e, &why)) {
      yield(info->nf, info->access ? info->access : ModPath::mk_name(name));
    } else {
      trace("PRUNE " + why);
    }
    store_.undo(mark);
    obs_.undo(cmark);
  }

  void try_functor(const std::string& name, const env::ModuleInfoPtr& info,
                   const PendingObligationPtr& ob, const env::Env& e,
                   std::vector<Frame>& ledger,
                   const std::function<void(ModPathPtr, ModPathPtr)>& yield) {
    ++tried_;
    trace("TRY " + name + " FOR " + std::to_string(ob->id));

    Snapshot incoming = snapshot(ob);
    if (static_cast<int>(ledger.size()) + 1 > opts_.max_depth) throw DepthHit{};

    size_t mark = store_.checkpoint();
    size_t cmark = obs_.checkpoint();

    // Fresh module variables for the functor's parameters.
    env::Env overlay = e;
    // Application normal forms use the functor's canonical name; make sure it
    // resolves even when the functor entered the scope via `open implicit`.
    if (!info->display.empty()) overlay.modules[info->display] = info;
    std::vector<PendingObligationPtr> subs;
    std::vector<ModPathPtr> pi_paths;
    for (auto& [pname, psig] : info->params) {
      auto sub = std::make_shared<PendingObligation>();
      sub->id = obs_.next_id++;
      sub->internal = "?" + std::to_string(sub->id);
      sub->display = pname;
      sub->sig = psig;
      sub->span = ob->span;
      subs.push_back(sub);
      obs_.add(sub);
      auto pinfo = std::make_shared<env::ModuleInfo>();
      pinfo->sig = psig;
      pinfo->nf = ModPath::mk_name(sub->internal);
      pinfo->display = pname;
      overlay.modules[sub->internal] = pinfo;
      pi_paths.push_back(pinfo->nf);
      trace("SUBGOAL " + std::to_string(sub->id) + " FOR " + std::to_string(ob->id));
    }

    bool matched = false;
    std::string why;
    try {
      env::ModuleInfoPtr app_info;
      try {
        app_info = env::apply_functor(overlay, info, pi_paths, ob->span);
      } catch (const CompileError& err) {
        why = err.diag().message;
        app_info = nullptr;
      }
      if (app_info && match_candidate(app_info, ob, overlay, &why)) {
        matched = true;
        // Termination: compare against the most recent in-progress
        // application of the same functor, point-wise per member. Only
        // applications that actually match the target count; checked after
        // matching but before any sub-search, so the search cannot loop.
        for (auto it = ledger.rbegin(); it != ledger.rend(); ++it) {
          if (it->functor_id != info.get()) continue;
          bool strictly = false;
          bool ok = true;
          for (auto& [member, now] : incoming.members) {
            auto prev = it->snapshot.members.find(member);
            if (prev == it->snapshot.members.end()) continue;
            if (now.first > prev->second.first) ok = false;
            if (now.first < prev->second.first) strictly = true;
          }
          if (!ok || !strictly) throw TermViolation{name, it->snapshot, incoming};
          break;
        }
        ledger.push_back({info.get(), name, incoming});
        solve_args(name, info, ob, subs, 0, {}, overlay, ledger, yield);
        ledger.pop_back();
      }
    } catch (...) {
      for (auto& sub : subs) obs_.by_internal.erase(sub->internal);
      throw;
    }
    if (!matched) trace("PRUNE " + why);
    for (auto& sub : subs) obs_.by_internal.erase(sub->internal);
    store_.undo(mark);
    obs_.undo(cmark);
  }

  void solve_args(const std::string& name, const env::ModuleInfoPtr& info,
                  const PendingObligationPtr& ob, const std::vector<PendingObligationPtr>& subs,
                  size_t i, std::vector<std::pair<ModPathPtr, ModPathPtr>> chosen,
                  const env::Env& overlay, std::vector<Frame>& ledger,
                  const std::function<void(ModPathPtr, ModPathPtr)>& yield) {
    if (i == subs.size()) {
      // All arguments fixed: compute the application's normal form through
      // any alias template, and the surface expression for elaboration.
      std::vector<ModPathPtr> arg_nfs, arg_exprs;
      for (auto& [nf, expr] : chosen) {
        arg_nfs.push_back(nf);
        arg_exprs.push_back(expr);
      }
      ModPathPtr nf;
      try {
        nf = env::apply_functor(overlay, info, arg_nfs, ob->span)->nf;
      } catch (const CompileError&) {
        nf = ModPath::mk_app(ModPath::mk_name(info->display.empty() ? name : info->display),
                             arg_nfs);
      }
      yield(nf, ModPath::mk_app(info->access ? info->access : ModPath::mk_name(name),
                                arg_exprs));
      return;
    }
    solve(subs[i], overlay, ledger, [&](ModPathPtr nf, ModPathPtr expr) {
      // Keep this argument's bindings while searching the next one.
      auto next = chosen;
      next.push_back({nf, expr});
      // The chosen argument's member equations must hold for the remaining
      // search; they are already bound in the store at yield time.
      solve_args(name, info, ob, subs, i + 1, std::move(next), overlay, ledger, yield);
    });
  }
};

}  // namespace

ResolveResult resolve(const env::Env& e, TypeStore& store, ObligationSet& obs,
                      const PendingObligationPtr& ob, const ResolverOptions& opts) {
  Resolver r(e, store, obs, opts);
  return r.run(ob);
}

}  // namespace implicitml
